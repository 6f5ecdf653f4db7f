//! Leading-order displaced-oscillator picture of the asymmetric Rabi model
//! at deep-strong coupling.
//!
//! In the rotated frame the field sees two displaced wells
//! `V_± = (ω²/2)(x̂ ± x₀)² ± ε`, `x₀ = √(2ω) g/ω²`, whose ladders
//! `E⁽⁰⁾_{n,±} = nω ± ε` sit on the common constant
//! `ε₀ = (ω₀ − ω)/2 − g²/ω`. Levels of opposite wells meet when
//! `ε = mω/2`, which is where the tunnelling term `(ω₀/2)σ_x` reopens an
//! avoided crossing and entanglement survives.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jc_analytic::Branch;
use crate::models::ModelParams;

/// `ε₀ = (ω₀ − ω)/2 − g²/ω`.
pub fn polaron_constant(params: &ModelParams) -> f64 {
    (params.omega0 - params.omega) / 2.0 - params.g * params.g / params.omega
}

/// Well displacement `x_s = √(2ω) s g/ω²` for `s = ±1`.
pub fn displacement(params: &ModelParams, s: f64) -> f64 {
    (2.0 * params.omega).sqrt() * s * params.g / (params.omega * params.omega)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolaronLadder {
    pub params: ModelParams,
    pub e0_const: f64,
    /// `(x₊, x₋)`.
    pub displacements: (f64, f64),
    /// `E⁽⁰⁾_{n,+}` for `n = 0..=n_max`.
    pub plus: Vec<f64>,
    /// `E⁽⁰⁾_{n,−}` for `n = 0..=n_max`.
    pub minus: Vec<f64>,
}

impl PolaronLadder {
    pub fn energy(&self, n: usize, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.plus[n],
            Branch::Minus => self.minus[n],
        }
    }

    /// Lowest `count` ladder energies of both wells merged, relative to the
    /// lowest one.
    pub fn relative_levels(&self, count: usize) -> Vec<f64> {
        let mut all: Vec<f64> = self.plus.iter().chain(&self.minus).copied().collect();
        all.sort_by(f64::total_cmp);
        all.truncate(count);
        let base = all.first().copied().unwrap_or(0.0);
        all.iter().map(|e| e - base).collect()
    }
}

/// Both ladders up to `n_max`, without the constant `ε₀` (reported
/// separately), since only differences are compared.
pub fn polaron_energies(params: &ModelParams, n_max: usize) -> Result<PolaronLadder> {
    params.validate()?;
    if n_max < 1 {
        return Err(Error::param("n_max", "must be at least 1"));
    }
    let ladder = |sign: f64| -> Vec<f64> {
        (0..=n_max)
            .map(|n| n as f64 * params.omega + sign * params.epsilon)
            .collect()
    };
    Ok(PolaronLadder {
        params: *params,
        e0_const: polaron_constant(params),
        displacements: (displacement(params, 1.0), displacement(params, -1.0)),
        plus: ladder(1.0),
        minus: ladder(-1.0),
    })
}

/// Drives `ε = mω/2`, `m = 0..n−1`, at which level `n` keeps its
/// entanglement (in units of `ω`).
pub fn predicted_preservation_points(n: usize) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::param("n", "level index starts at 1"));
    }
    Ok((0..n).map(|m| m as f64 / 2.0).collect())
}

/// One rung `|n_branch⟩` of a well ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rung {
    pub n: usize,
    pub branch: Branch,
}

/// The two rungs that are degenerate at `ε = mω/2` and involve `|n₋⟩`:
/// `nω − ε = n′ω + ε` gives `n′ = n − m`. Returns `(|n′₊⟩, |n₋⟩)`.
pub fn crossing_partners(n: usize, m: usize) -> Result<(Rung, Rung)> {
    if n < 1 || m >= n {
        return Err(Error::param(
            "m",
            format!("must satisfy 0 <= m <= n - 1 (got n = {n}, m = {m})"),
        ));
    }
    Ok((
        Rung {
            n: n - m,
            branch: Branch::Plus,
        },
        Rung {
            n,
            branch: Branch::Minus,
        },
    ))
}
