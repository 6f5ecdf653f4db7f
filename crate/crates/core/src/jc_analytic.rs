//! Closed-form Jaynes–Cummings spectrum and first-order degenerate
//! perturbation theory of the driven (asymmetric) Jaynes–Cummings model.
//!
//! Energies follow the `(ω₀/2) σ_z` convention: the ground state `|0,g⟩`
//! sits at `−ω₀/2` and sector `n` holds `|n,±⟩` built from `|n,e⟩` and
//! `|n+1,g⟩`:
//!
//! ```text
//! E_{n,±} = (n + 1/2) ω ± Ω_n / 2,   Ω_n = √(Δ² + 4g²(n+1)),   Δ = ω₀ − ω
//! |n,+⟩ = C_n |n,e⟩ + D_n |n+1,g⟩
//! |n,−⟩ = D_n |n,e⟩ − C_n |n+1,g⟩
//! ```
//!
//! with `C_n = cos(α_n/2)`, `D_n = sin(α_n/2)` and `α_n = atan2(2g√(n+1), Δ)`.
//! Using `atan2` puts `α_n` in `[0, π]`, continuous through resonance, so
//! `D_n ≥ 0` always and `C_n ≥ 0` for `Δ ≥ 0`.
//!
//! Perturbative results are in units of `ω = 1`.

use serde::Serialize;

use crate::entanglement::{von_neumann_entropy, ReducedDensity, Subsystem};
use crate::error::{Error, Result};
use crate::fock::{Atom, TruncatedSpace};
use crate::models::{build_asym_qjc, ModelParams};
use crate::optimize::bisect;
use crate::spectra::diagonalize;

/// `ε / g*` at or above which [`degenerate_perturbation`] refuses.
pub const MAX_PERTURBATION_RATIO: f64 = 0.2;
/// `ε / g*` at or above which the result is flagged as marginal.
pub const WARN_PERTURBATION_RATIO: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// One dressed level `|n,±⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JcLevel {
    pub n: usize,
    pub branch: Branch,
    pub energy: f64,
    pub c: f64,
    pub d: f64,
    pub alpha: f64,
}

/// `Ω_n = √(Δ² + 4g²(n+1))`.
pub fn rabi_frequency(n: usize, delta: f64, g: f64) -> f64 {
    delta.hypot(2.0 * g * ((n + 1) as f64).sqrt())
}

/// `E_{0g} = −ω₀/2`.
pub fn ground_energy(params: &ModelParams) -> f64 {
    -params.omega0 / 2.0
}

/// The dressed level `|n, branch⟩` of the undriven model.
pub fn jc_spectrum(params: &ModelParams, n: usize, branch: Branch) -> Result<JcLevel> {
    params.validate()?;
    if params.epsilon != 0.0 {
        return Err(Error::param("epsilon", "the closed form needs epsilon = 0"));
    }
    let delta = params.omega0 - params.omega;
    let root = 2.0 * params.g * ((n + 1) as f64).sqrt();
    let alpha = root.atan2(delta);
    let omega_n = delta.hypot(root);
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    Ok(JcLevel {
        n,
        branch,
        energy: (n as f64 + 0.5) * params.omega + sign * omega_n / 2.0,
        c: (alpha / 2.0).cos(),
        d: (alpha / 2.0).sin(),
        alpha,
    })
}

/// Coefficient vector of `|n, branch⟩` in the product basis of `space`.
pub fn jc_state(level: &JcLevel, space: TruncatedSpace) -> Result<Vec<f64>> {
    if level.n + 1 > space.n_trunc() {
        return Err(Error::param(
            "n",
            format!(
                "sector {} does not fit in n_trunc = {}",
                level.n,
                space.n_trunc()
            ),
        ));
    }
    let mut v = vec![0.0; space.total_dim()];
    let (e, g) = match level.branch {
        Branch::Plus => (level.c, level.d),
        Branch::Minus => (level.d, -level.c),
    };
    v[space.index(level.n, Atom::Excited)] = e;
    v[space.index(level.n + 1, Atom::Ground)] = g;
    Ok(v)
}

fn sector_amplitudes(n: usize, delta: f64, g: f64) -> (f64, f64) {
    let alpha = (2.0 * g * ((n + 1) as f64).sqrt()).atan2(delta);
    ((alpha / 2.0).cos(), (alpha / 2.0).sin())
}

/// Coupling `g*` at which `E_{n,+} = E_{n+1,−}`, i.e.
/// `Ω_n(g) + Ω_{n+1}(g) = 2ω`, bisected on `(0, 1]`.
///
/// Only detunings `0 < Δ < ω` have a positive root; `Δ ≥ ω` yields
/// [`Error::NoDegeneracy`].
pub fn find_degenerate_coupling(n: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::param(
            "delta",
            format!("must be positive (got {delta})"),
        ));
    }
    let f = |g: f64| rabi_frequency(n, delta, g) + rabi_frequency(n + 1, delta, g) - 2.0;
    // The left end is g → 0⁺, where f = 2(Δ − 1).
    if !(f(0.0) < 0.0 && f(1.0) > 0.0) {
        return Err(Error::NoDegeneracy { n, delta });
    }
    bisect(|g| Ok(f(g)), 0.0, 1.0, 0.0)
}

/// First-order treatment of `ε σ_x` in the degenerate doublet
/// `φ₁ = |n,+⟩`, `φ₂ = |n+1,−⟩` at `g = g*`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneratePerturbation {
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub g_star: f64,
    /// Doublet energy `E_{n,+}(g*)`.
    pub e0: f64,
    pub e1_plus: f64,
    pub e1_minus: f64,
    /// `⟨φᵢ|ε σ_x|φⱼ⟩`.
    pub h_prime: [[f64; 2]; 2],
    /// Entropy of `(φ₁ + φ₂)/√2`.
    pub entropy: f64,
    /// Entropy of `(φ₁ − φ₂)/√2`.
    pub entropy_minus: f64,
    /// `ε / g*` is large enough that second-order terms may be visible.
    pub marginal: bool,
}

impl DegeneratePerturbation {
    pub fn splitting(&self) -> f64 {
        self.e1_plus - self.e1_minus
    }

    pub fn energies(&self) -> (f64, f64) {
        (self.e0 + self.e1_minus, self.e0 + self.e1_plus)
    }
}

/// Perturbs the doublet of sector `n` at detuning `delta` by a drive `epsilon`.
pub fn degenerate_perturbation(
    n: usize,
    delta: f64,
    epsilon: f64,
) -> Result<DegeneratePerturbation> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::param(
            "epsilon",
            format!("must be non-negative (got {epsilon})"),
        ));
    }
    let g_star = find_degenerate_coupling(n, delta)?;
    let ratio = epsilon / g_star;
    if ratio >= MAX_PERTURBATION_RATIO {
        return Err(Error::PerturbationTooStrong {
            ratio,
            limit: MAX_PERTURBATION_RATIO,
        });
    }
    let (_, d_n) = sector_amplitudes(n, delta, g_star);
    let (_, d_m) = sector_amplitudes(n + 1, delta, g_star);

    // σ_x only links equal photon numbers. φ₁ has |n,e⟩ (C_n) and |n+1,g⟩
    // (D_n); φ₂ has |n+1,e⟩ (D_{n+1}) and |n+2,g⟩ (−C_{n+1}). The only
    // shared photon number is n+1, and neither state pairs g with e inside
    // itself.
    let off = epsilon * d_n * d_m;
    let h_prime = [[0.0, off], [off, 0.0]];

    let params = ModelParams::new(1.0 + delta, g_star, 0.0);
    let e0 = jc_spectrum(&params, n, Branch::Plus)?.energy;
    let (entropy, entropy_minus) = doublet_entropies(n, delta, g_star)?;
    Ok(DegeneratePerturbation {
        n,
        delta,
        epsilon,
        g_star,
        e0,
        e1_plus: off,
        e1_minus: -off,
        h_prime,
        entropy,
        entropy_minus,
        marginal: ratio >= WARN_PERTURBATION_RATIO,
    })
}

/// Reduced atomic density matrix, in the order `(|g⟩, |e⟩)`, of
/// `(φ₁ + sign·φ₂)/√2` with `φ₁ = |n,+⟩`, `φ₂ = |n+1,−⟩` at coupling `g`.
pub fn doublet_reduced_density(n: usize, delta: f64, g: f64, sign: f64) -> ReducedDensity {
    let (c_n, d_n) = sector_amplitudes(n, delta, g);
    let (c_m, d_m) = sector_amplitudes(n + 1, delta, g);
    let gg = 0.5 * (d_n * d_n + c_m * c_m);
    let ee = 0.5 * (c_n * c_n + d_m * d_m);
    let ge = 0.5 * sign * d_n * d_m;
    ReducedDensity {
        subsystem: Subsystem::Atom,
        dim: 2,
        data: vec![gg, ge, ge, ee],
    }
}

fn doublet_entropies(n: usize, delta: f64, g: f64) -> Result<(f64, f64)> {
    Ok((
        von_neumann_entropy(&doublet_reduced_density(n, delta, g, 1.0))?,
        von_neumann_entropy(&doublet_reduced_density(n, delta, g, -1.0))?,
    ))
}

/// Entropy of the zeroth-order state `(φ₁ + φ₂)/√2` at the degenerate
/// coupling. At resonance the amplitudes are `1/√2` for every coupling, so
/// `Δ = 0` is evaluated directly.
pub fn perturbed_entropy(n: usize, delta: f64) -> Result<f64> {
    let g = if delta == 0.0 {
        1.0
    } else {
        find_degenerate_coupling(n, delta)?
    };
    Ok(doublet_entropies(n, delta, g)?.0)
}

/// Numerically diagonalized driven model at `g*`, restricted to the two
/// eigenstates with the largest weight on the unperturbed doublet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericDoublet {
    pub g_star: f64,
    pub n_trunc: usize,
    /// 1-based levels, ascending in energy.
    pub levels: (usize, usize),
    pub energies: (f64, f64),
    pub entropies: (f64, f64),
    /// Weight of each state on `span{φ₁, φ₂}`.
    pub weights: (f64, f64),
}

impl NumericDoublet {
    pub fn gap(&self) -> f64 {
        self.energies.1 - self.energies.0
    }
}

/// Diagonalizes the driven model at `(ω₀ = 1 + Δ, g*, ε)` and picks out the
/// perturbed doublet of sector `n`.
pub fn numeric_doublet(
    n: usize,
    delta: f64,
    epsilon: f64,
    n_trunc: usize,
) -> Result<NumericDoublet> {
    let g_star = find_degenerate_coupling(n, delta)?;
    let space = TruncatedSpace::new(n_trunc)?;
    let params = ModelParams::new(1.0 + delta, g_star, epsilon);
    let phi1 = jc_state(
        &jc_spectrum(&params.with_epsilon(0.0), n, Branch::Plus)?,
        space,
    )?;
    let phi2 = jc_state(
        &jc_spectrum(&params.with_epsilon(0.0), n + 1, Branch::Minus)?,
        space,
    )?;

    let h = build_asym_qjc(params, space)?;
    let n_levels = (2 * n + 8).min(space.total_dim());
    let sol = diagonalize(&h, n_levels)?;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut weighted: Vec<(f64, usize)> = (1..=n_levels)
        .map(|level| {
            let v = sol.state(level);
            (dot(v, &phi1).powi(2) + dot(v, &phi2).powi(2), level)
        })
        .collect();
    weighted.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let (mut a, mut b) = (weighted[0], weighted[1]);
    if a.1 > b.1 {
        std::mem::swap(&mut a, &mut b);
    }
    let entropy = |level: usize| crate::entanglement::entropy_of_eigenstate(&sol, level);
    Ok(NumericDoublet {
        g_star,
        n_trunc,
        levels: (a.1, b.1),
        energies: (sol.energy(a.1), sol.energy(b.1)),
        entropies: (entropy(a.1)?, entropy(b.1)?),
        weights: (a.0, b.0),
    })
}
