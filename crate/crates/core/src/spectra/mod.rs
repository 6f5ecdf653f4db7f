//! Diagonalization, truncation control, parameter sweeps, avoided-crossing
//! detection and coupling-regime classification.
//!
//! Levels are numbered from 1 (the ground state), matching `E_1`, `E_2`, …;
//! a level keeps its sorted index across a sweep rather than following state
//! continuity, so crossings show up as gap minima instead of label swaps.

mod convergence;
mod crossings;
mod regimes;
mod sweep;
pub mod tridiag;

pub use convergence::{converged_truncation, converged_truncation_capped, DEFAULT_TRUNCATION_CAP};
pub use crossings::{
    detect_avoided_crossings, detect_avoided_crossings_with, detect_in_family, CrossingEvent,
    CrossingKind, DetectOptions, ModelFamily, Refinement, SpectralFamily,
};
pub use regimes::{classify_regimes, RegimeBoundaries, RegimeOptions};
pub use sweep::{
    linspace, sweep, sweep_2d, sweep_with, Axis, SweepAxis, SweepOptions, SweepPoint, SweepResult,
    Truncation,
};

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::fock::OperatorMatrix;
use crate::models::{EnergyConvention, HamiltonianMatrix, ModelKind, ModelParams};

/// Lowest eigenpairs of a symmetric matrix, ascending.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector of `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

fn to_faer(m: &OperatorMatrix) -> Result<Mat<f64>> {
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::EigenNonConvergence {
            fingerprint: m.fingerprint(),
            dim: m.dim(),
        });
    }
    Ok(Mat::from_fn(m.dim(), m.dim(), |i, j| m[(i, j)]))
}

fn check_levels(requested: usize, available: usize) -> Result<()> {
    if requested == 0 || requested > available {
        return Err(Error::TooManyLevels {
            requested,
            available,
        });
    }
    Ok(())
}

/// Full symmetric eigendecomposition, keeping the lowest `n_levels` pairs.
///
/// Each eigenvector is signed so that its largest-magnitude component (the
/// first one, on ties) is positive.
pub fn eigh(m: &OperatorMatrix, n_levels: usize) -> Result<Eigenpairs> {
    check_levels(n_levels, m.dim())?;
    let nonconv = || Error::EigenNonConvergence {
        fingerprint: m.fingerprint(),
        dim: m.dim(),
    };
    let evd = to_faer(m)?
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| nonconv())?;
    let s = evd.S();
    let u = evd.U();
    let dim = m.dim();

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));

    let mut values = Vec::with_capacity(n_levels);
    let mut vectors = Vec::with_capacity(n_levels);
    for &k in order.iter().take(n_levels) {
        if !s[k].is_finite() {
            return Err(nonconv());
        }
        values.push(s[k]);
        let mut v: Vec<f64> = (0..dim).map(|i| u[(i, k)]).collect();
        fix_sign(&mut v);
        vectors.push(v);
    }
    Ok(Eigenpairs { values, vectors })
}

/// Lowest `n_levels` eigenvalues only, ascending.
pub fn eigenvalues(m: &OperatorMatrix, n_levels: usize) -> Result<Vec<f64>> {
    check_levels(n_levels, m.dim())?;
    let mut ev = to_faer(m)?
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::EigenNonConvergence {
            fingerprint: m.fingerprint(),
            dim: m.dim(),
        })?;
    if ev.iter().any(|x| !x.is_finite()) {
        return Err(Error::EigenNonConvergence {
            fingerprint: m.fingerprint(),
            dim: m.dim(),
        });
    }
    ev.sort_by(f64::total_cmp);
    ev.truncate(n_levels);
    Ok(ev)
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Lowest eigenpairs of a model Hamiltonian, with the coefficients
/// `c⁽ⁿ⁾_{m,s}` stored in the product-basis order of
/// [`crate::fock::TruncatedSpace`].
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub params: ModelParams,
    pub kind: ModelKind,
    pub convention: EnergyConvention,
    pub n_trunc: usize,
    pub energies: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl EigenSolution {
    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }

    /// `E_level`, with `level` counted from 1.
    pub fn energy(&self, level: usize) -> f64 {
        self.energies[level - 1]
    }

    pub fn state(&self, level: usize) -> &[f64] {
        &self.states[level - 1]
    }

    /// `E_n − E_1` for every stored level.
    pub fn relative_energies(&self) -> Vec<f64> {
        let e1 = self.energies[0];
        self.energies.iter().map(|e| e - e1).collect()
    }

    /// `max |SᵀS − I|` over the stored columns.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate().skip(i) {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }

    /// `‖H v − E v‖` for one level.
    pub fn residual(&self, h: &HamiltonianMatrix, level: usize) -> Result<f64> {
        let v = self.state(level);
        let hv = h.matrix.apply(v)?;
        let e = self.energy(level);
        Ok(hv
            .iter()
            .zip(v)
            .map(|(a, b)| (a - e * b).powi(2))
            .sum::<f64>()
            .sqrt())
    }
}

/// Diagonalizes `h` and keeps the lowest `n_levels` eigenpairs.
pub fn diagonalize(h: &HamiltonianMatrix, n_levels: usize) -> Result<EigenSolution> {
    let pairs = eigh(&h.matrix, n_levels)?;
    Ok(EigenSolution {
        params: h.params,
        kind: h.kind,
        convention: h.convention,
        n_trunc: h.space.n_trunc(),
        energies: pairs.values,
        states: pairs.vectors,
    })
}
