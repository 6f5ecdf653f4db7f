//! Fixtures shared by the benchmarks.

use rabi_core::{
    build_asym_qrm, EigenSolution, HamiltonianMatrix, ModelParams, Result, TruncatedSpace,
};

/// The hardest point of the usual sweeps: deep-strong coupling with a drive.
pub fn deep_strong() -> ModelParams {
    ModelParams::new(1.0, 3.0, 0.5)
}

pub fn hamiltonian(params: ModelParams, n_trunc: usize) -> Result<HamiltonianMatrix> {
    build_asym_qrm(params, TruncatedSpace::new(n_trunc)?)
}

pub fn solved(params: ModelParams, n_trunc: usize, n_levels: usize) -> Result<EigenSolution> {
    rabi_core::diagonalize(&hamiltonian(params, n_trunc)?, n_levels)
}
