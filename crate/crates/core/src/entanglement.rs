//! Reduced density matrices and base-2 von Neumann entropy of pure
//! atom ⊗ field states, plus resonance counting on entropy curves.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extrema::local_minima;
use crate::fock::TruncatedSpace;
use crate::spectra::EigenSolution;

/// Accepted deviation of `‖ψ‖` from one.
pub const NORM_TOL: f64 = 1e-10;
/// Accepted deviation of `Tr ρ` from one.
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalues of `ρ` below this are dropped before taking the log.
pub const EIGEN_CLIP: f64 = 1e-14;
/// Accepted `|S(ρ_a) − S(ρ_f)|`.
pub const SCHMIDT_TOL: f64 = 1e-9;
/// Default prominence (bits) for resonance counting.
pub const DEFAULT_PROMINENCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    Atom,
    Field,
}

/// Real symmetric reduced density matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    pub subsystem: Subsystem,
    pub dim: usize,
    pub data: Vec<f64>,
}

impl ReducedDensity {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.dim == 2 {
            let (lo, hi) = sym2_eigenvalues(self.get(0, 0), self.get(0, 1), self.get(1, 1));
            return Ok(vec![lo, hi]);
        }
        let m = crate::fock::OperatorMatrix::from_fn(self.dim, |i, j| self.get(i, j));
        crate::spectra::eigenvalues(&m, self.dim)
    }
}

fn sym2_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let r = (0.5 * (a - d)).hypot(b);
    let hi = mean + r;
    // The small root from the determinant keeps its relative accuracy.
    let lo = if hi != 0.0 {
        (a * d - b * b) / hi
    } else {
        mean - r
    };
    (lo.min(hi), hi.max(lo))
}

fn check_state(state: &[f64], space: TruncatedSpace) -> Result<()> {
    if state.len() != space.total_dim() {
        return Err(Error::ShapeMismatch {
            expected: space.total_dim(),
            actual: state.len(),
        });
    }
    let norm = state.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= NORM_TOL) {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

/// `ρ_a = Tr_f |ψ⟩⟨ψ|`, i.e. `ρ_{ss'} = Σ_m c_{m,s} c_{m,s'}`, in the order
/// `(|g⟩, |e⟩)`.
pub fn reduced_density_atom(state: &[f64], space: TruncatedSpace) -> Result<ReducedDensity> {
    check_state(state, space)?;
    let (mut gg, mut ge, mut ee) = (0.0, 0.0, 0.0);
    for pair in state.chunks_exact(2) {
        gg += pair[0] * pair[0];
        ge += pair[0] * pair[1];
        ee += pair[1] * pair[1];
    }
    Ok(ReducedDensity {
        subsystem: Subsystem::Atom,
        dim: 2,
        data: vec![gg, ge, ge, ee],
    })
}

/// `ρ_f = Tr_a |ψ⟩⟨ψ|`, of dimension `n_trunc + 1`.
pub fn reduced_density_field(state: &[f64], space: TruncatedSpace) -> Result<ReducedDensity> {
    check_state(state, space)?;
    let n = space.field_dim();
    let mut data = vec![0.0; n * n];
    for m in 0..n {
        for k in 0..n {
            data[m * n + k] = state[2 * m] * state[2 * k] + state[2 * m + 1] * state[2 * k + 1];
        }
    }
    Ok(ReducedDensity {
        subsystem: Subsystem::Field,
        dim: n,
        data,
    })
}

fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > EIGEN_CLIP)
        .map(|&l| -l * l.log2())
        .sum()
}

/// `S = −Σ λ log₂ λ` over the eigenvalues of `rho`.
pub fn von_neumann_entropy(rho: &ReducedDensity) -> Result<f64> {
    let tr = rho.trace();
    if !((tr - 1.0).abs() <= TRACE_TOL) {
        return Err(Error::TraceDeviation(tr));
    }
    Ok(entropy_of_spectrum(&rho.eigenvalues()?))
}

/// Entropy of the field marginal, from the squared singular values of the
/// `(n_trunc + 1) × 2` coefficient matrix `M_{m,s} = c_{m,s}`.
///
/// The singular values come from a thin QR factorization followed by the
/// closed-form SVD of the triangular factor; `MᵀM` is never formed, so this
/// shares no arithmetic with [`reduced_density_atom`].
pub fn field_entropy(state: &[f64], space: TruncatedSpace) -> Result<f64> {
    check_state(state, space)?;
    let u: Vec<f64> = state.iter().step_by(2).copied().collect();
    let mut w: Vec<f64> = state.iter().skip(1).step_by(2).copied().collect();
    let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();

    let r11 = norm(&u);
    let (r12, r22) = if r11 == 0.0 {
        (0.0, norm(&w))
    } else {
        let q: Vec<f64> = u.iter().map(|x| x / r11).collect();
        let mut r12 = 0.0;
        // Two Gram–Schmidt passes keep w orthogonal to q.
        for _ in 0..2 {
            let c = dot(&q, &w);
            w.iter_mut().zip(&q).for_each(|(x, qi)| *x -= c * qi);
            r12 += c;
        }
        (r12, norm(&w))
    };
    let s_hi = 0.5 * ((r11 + r22).hypot(r12) + (r11 - r22).hypot(r12));
    let s_lo = if s_hi > 0.0 {
        (r11 * r22).abs() / s_hi
    } else {
        0.0
    };
    let lambdas = [s_hi * s_hi, s_lo * s_lo];
    let tr = lambdas[0] + lambdas[1];
    if !((tr - 1.0).abs() <= TRACE_TOL) {
        return Err(Error::TraceDeviation(tr));
    }
    Ok(entropy_of_spectrum(&lambdas))
}

/// Atom-side entropy of eigenstate `level` (counted from 1).
pub fn entropy_of_eigenstate(sol: &EigenSolution, level: usize) -> Result<f64> {
    let space = TruncatedSpace::new(sol.n_trunc)?;
    let state = state_of(sol, level)?;
    von_neumann_entropy(&reduced_density_atom(state, space)?)
}

/// As [`entropy_of_eigenstate`], additionally requiring the field-side
/// entropy to agree within [`SCHMIDT_TOL`].
pub fn entropy_of_eigenstate_checked(sol: &EigenSolution, level: usize) -> Result<f64> {
    let space = TruncatedSpace::new(sol.n_trunc)?;
    let state = state_of(sol, level)?;
    let atom = von_neumann_entropy(&reduced_density_atom(state, space)?)?;
    let field = field_entropy(state, space)?;
    if !((atom - field).abs() <= SCHMIDT_TOL) {
        return Err(Error::SchmidtMismatch { atom, field });
    }
    Ok(atom)
}

fn state_of(sol: &EigenSolution, level: usize) -> Result<&[f64]> {
    if level == 0 || level > sol.n_levels() {
        return Err(Error::TooManyLevels {
            requested: level,
            available: sol.n_levels(),
        });
    }
    Ok(sol.state(level))
}

/// Entropy of one level along a 1D parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// The curve is even about `grid[0]` (an `ε` sweep starting at 0), so
    /// the first sample can be an extremum.
    pub reflect_at_start: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Valley,
    Peak,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrema {
    pub indices: Vec<usize>,
    pub loci: Vec<f64>,
    pub prominences: Vec<f64>,
}

impl Extrema {
    pub fn count(&self) -> usize {
        self.loci.len()
    }
}

/// Strict local extrema of `curve` whose topographic prominence exceeds
/// `prominence`, restricted to loci inside `window` (inclusive). Prominence
/// is measured on the whole curve, not just the window.
pub fn count_resonance_extrema(
    curve: &EntropyCurve,
    kind: Extremum,
    prominence: f64,
    window: Option<(f64, f64)>,
) -> Result<Extrema> {
    if !(prominence > 0.0) {
        return Err(Error::param(
            "prominence",
            format!("must be positive (got {prominence})"),
        ));
    }
    if curve.grid.len() != curve.values.len() || curve.grid.is_empty() {
        return Err(Error::InvalidGrid(
            "curve grid and values differ in length".into(),
        ));
    }
    let (grid_lo, grid_hi) = (curve.grid[0], curve.grid[curve.grid.len() - 1]);
    let (lo, hi) = window.unwrap_or((grid_lo, grid_hi));
    if !(lo <= hi && lo >= grid_lo && hi <= grid_hi) {
        return Err(Error::WindowOutsideGrid {
            lo,
            hi,
            grid_lo,
            grid_hi,
        });
    }
    let signed: Vec<f64> = match kind {
        Extremum::Valley => curve.values.clone(),
        Extremum::Peak => curve.values.iter().map(|v| -v).collect(),
    };
    let mut out = Extrema {
        indices: Vec::new(),
        loci: Vec::new(),
        prominences: Vec::new(),
    };
    for m in local_minima(&signed, curve.reflect_at_start) {
        let x = curve.grid[m.index];
        if m.prominence > prominence && x >= lo && x <= hi {
            out.indices.push(m.index);
            out.loci.push(x);
            out.prominences.push(m.prominence);
        }
    }
    Ok(out)
}
