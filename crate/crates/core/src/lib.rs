//! Exact diagonalization of the (asymmetric) quantum Rabi and
//! Jaynes–Cummings models on a truncated Fock space, with atom–field
//! entanglement entropy, avoided-crossing detection, coupling-regime
//! classification and two analytic cross-checks.
//!
//! ```no_run
//! use rabi_core::{build_asym_qrm, diagonalize, entropy_of_eigenstate, ModelParams, TruncatedSpace};
//!
//! let h = build_asym_qrm(ModelParams::new(1.0, 3.0, 0.5), TruncatedSpace::new(400)?)?;
//! let sol = diagonalize(&h, 8)?;
//! println!("E2 - E1 = {}", sol.energy(2) - sol.energy(1));
//! println!("S2 = {}", entropy_of_eigenstate(&sol, 2)?);
//! # Ok::<(), rabi_core::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
pub mod error;
mod extrema;
pub mod fock;
pub mod jc_analytic;
pub mod models;
pub mod optimize;
pub mod polaron;
pub mod spectra;

pub use entanglement::{
    count_resonance_extrema, entropy_of_eigenstate, entropy_of_eigenstate_checked, field_entropy,
    reduced_density_atom, reduced_density_field, von_neumann_entropy, EntropyCurve, Extrema,
    Extremum, ReducedDensity, Subsystem,
};
pub use error::{Error, Result};
pub use fock::{Atom, OperatorMatrix, Pauli, TruncatedSpace};
pub use jc_analytic::{
    degenerate_perturbation, find_degenerate_coupling, jc_spectrum, perturbed_entropy, Branch,
    DegeneratePerturbation, JcLevel,
};
pub use models::{
    build, build_asym_qjc, build_asym_qrm, build_h0_h1_split, build_polaron_frame,
    EnergyConvention, HamiltonianMatrix, ModelKind, ModelParams,
};
pub use polaron::{
    crossing_partners, polaron_energies, predicted_preservation_points, PolaronLadder,
};
pub use spectra::{
    classify_regimes, converged_truncation, detect_avoided_crossings, diagonalize, eigh, linspace,
    sweep, sweep_2d, Axis, CrossingEvent, CrossingKind, DetectOptions, EigenSolution,
    RegimeBoundaries, RegimeOptions, SweepAxis, SweepOptions, SweepResult, Truncation,
};
