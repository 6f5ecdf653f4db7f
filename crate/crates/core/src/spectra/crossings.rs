use serde::Serialize;

use crate::error::{Error, Result};
use crate::extrema::local_minima;
use crate::fock::TruncatedSpace;
use crate::models::{build, ModelKind, ModelParams};
use crate::optimize::golden_section;

use super::sweep::reflects_at_start;
use super::{eigenvalues, SweepAxis, SweepResult};

/// A one-parameter family of spectra that can be re-evaluated anywhere.
pub trait SpectralFamily: Sync {
    /// Lowest `n` levels at parameter value `x`, ascending.
    fn levels(&self, x: f64, n: usize) -> Result<Vec<f64>>;
}

impl<F> SpectralFamily for F
where
    F: Fn(f64, usize) -> Result<Vec<f64>> + Sync,
{
    fn levels(&self, x: f64, n: usize) -> Result<Vec<f64>> {
        self(x, n)
    }
}

/// A model Hamiltonian with one parameter varied along `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelFamily {
    pub kind: ModelKind,
    pub base: ModelParams,
    pub axis: SweepAxis,
    pub n_trunc: usize,
}

impl SpectralFamily for ModelFamily {
    fn levels(&self, x: f64, n: usize) -> Result<Vec<f64>> {
        let params = self.axis.apply(self.base, x);
        let kind = match self.kind {
            ModelKind::Qrm if params.epsilon != 0.0 => ModelKind::AsymQrm,
            ModelKind::Qjc if params.epsilon != 0.0 => ModelKind::AsymQjc,
            k => k,
        };
        let h = build(kind, params, TruncatedSpace::new(self.n_trunc)?)?;
        eigenvalues(&h.matrix, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingKind {
    /// Refined gap below the exact-crossing tolerance: a crossing within
    /// numerical resolution.
    Exact,
    Avoided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "reason")]
pub enum Refinement {
    Converged,
    /// The bracket was not unimodal; the grid minimum is reported instead.
    Fallback(String),
}

/// A local minimum of `E_{level_high} − E_{level_low}`, with
/// `level_high = level_low + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingEvent {
    pub level_low: usize,
    pub level_high: usize,
    pub locus: f64,
    pub min_gap: f64,
    pub bracket: (f64, f64),
    pub kind: CrossingKind,
    pub refinement: Refinement,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectOptions {
    /// Only gap minima below this are reported.
    pub threshold: f64,
    /// Also scan the gap to the level below.
    pub two_sided: bool,
    /// Golden-section stopping width, relative to `max(|x|, bracket width)`.
    pub rel_width: f64,
    /// Refined gaps below this are classified [`CrossingKind::Exact`].
    pub exact_tol: f64,
    /// Refined gaps below this are searched on down to floating-point
    /// resolution, so true crossings resolve to near-zero gaps.
    pub polish_below: f64,
    /// A minimum must rise by at least `min_rise · gap` on both sides
    /// before dipping lower; rejects ripple between quasi-degenerate levels.
    pub min_rise: f64,
    /// Treat the grid as even about its first point. `None` decides from
    /// the sweep (an `ε` axis starting at 0).
    pub reflect_at_start: Option<bool>,
}

impl DetectOptions {
    pub fn new(threshold: f64) -> Self {
        DetectOptions {
            threshold,
            two_sided: true,
            rel_width: 1e-6,
            exact_tol: 1e-8,
            polish_below: 1e-5,
            min_rise: 1.0,
            reflect_at_start: None,
        }
    }

    pub fn one_sided(self) -> Self {
        DetectOptions {
            two_sided: false,
            ..self
        }
    }
}

/// [`detect_avoided_crossings_with`] using [`DetectOptions::new`].
pub fn detect_avoided_crossings(
    sweep: &SweepResult,
    level: usize,
    threshold: f64,
) -> Result<Vec<CrossingEvent>> {
    detect_avoided_crossings_with(sweep, level, &DetectOptions::new(threshold))
}

/// Gap minima of `level` against `level + 1` (and `level − 1` when two-sided)
/// along a 1D sweep, each refined by golden-section search on freshly
/// diagonalized spectra. Events are sorted by locus.
pub fn detect_avoided_crossings_with(
    sweep: &SweepResult,
    level: usize,
    opts: &DetectOptions,
) -> Result<Vec<CrossingEvent>> {
    check_threshold(opts.threshold)?;
    let axis = sweep
        .axes
        .first()
        .filter(|_| sweep.is_1d())
        .ok_or_else(|| Error::InvalidGrid("crossing detection needs a 1D sweep".into()))?;
    let family = ModelFamily {
        kind: sweep.kind,
        base: sweep.base,
        axis: axis.param,
        n_trunc: sweep.max_n_trunc(),
    };
    let reflect = opts
        .reflect_at_start
        .unwrap_or_else(|| reflects_at_start(axis));
    let mut events = Vec::new();
    for low in pairs(level, opts.two_sided) {
        let gaps = sweep.gaps(low)?;
        events.extend(detect_pair(&family, &axis.grid, &gaps, low, reflect, opts)?);
    }
    events.sort_by(|a, b| a.locus.total_cmp(&b.locus));
    Ok(events)
}

/// As [`detect_avoided_crossings_with`] for an arbitrary family sampled on
/// `grid`.
pub fn detect_in_family<F: SpectralFamily + ?Sized>(
    family: &F,
    grid: &[f64],
    level: usize,
    opts: &DetectOptions,
) -> Result<Vec<CrossingEvent>> {
    check_threshold(opts.threshold)?;
    if level == 0 {
        return Err(Error::TooManyLevels {
            requested: 0,
            available: 0,
        });
    }
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "grid must be non-empty and strictly increasing".into(),
        ));
    }
    let spectra = grid
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            family
                .levels(x, level + 1)
                .map_err(|e| Error::at_grid_point(i, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let reflect = opts.reflect_at_start.unwrap_or(false);
    let mut events = Vec::new();
    for low in pairs(level, opts.two_sided) {
        let gaps: Vec<f64> = spectra.iter().map(|e| e[low] - e[low - 1]).collect();
        events.extend(detect_pair(family, grid, &gaps, low, reflect, opts)?);
    }
    events.sort_by(|a, b| a.locus.total_cmp(&b.locus));
    Ok(events)
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(Error::InvalidThreshold(threshold));
    }
    Ok(())
}

/// Lower levels of the pairs to scan.
fn pairs(level: usize, two_sided: bool) -> Vec<usize> {
    if two_sided && level >= 2 {
        vec![level - 1, level]
    } else {
        vec![level]
    }
}

fn detect_pair<F: SpectralFamily + ?Sized>(
    family: &F,
    grid: &[f64],
    gaps: &[f64],
    low: usize,
    reflect: bool,
    opts: &DetectOptions,
) -> Result<Vec<CrossingEvent>> {
    let high = low + 1;
    let gap_at = |x: f64| -> Result<f64> {
        let e = family.levels(x, high)?;
        Ok(e[high - 1] - e[low - 1])
    };
    let mut events = Vec::new();
    for m in local_minima(gaps, reflect) {
        if m.value >= opts.threshold || m.prominence < opts.min_rise * m.value {
            continue;
        }
        let i = m.index;
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[i + 1];
        let tol = opts.rel_width * grid[i].abs().max(hi - lo);
        let mut best = golden_section(gap_at, lo, hi, tol)?;
        if best.value < opts.polish_below {
            let fine_tol = 1e-15 * best.x.abs().max(1.0);
            let fine = golden_section(gap_at, best.lo, best.hi, fine_tol)?;
            if fine.value <= best.value {
                best = fine;
            }
        }
        // Golden-section never samples the grid point itself, so a minimum
        // sitting exactly on it comes back marginally higher. Only an excess
        // that is significant against the depth of the bracket means the gap
        // was not unimodal there.
        // At a reflected start the left neighbour is the mirror of the right.
        let left = if i == 0 { gaps[1] } else { gaps[i - 1] };
        let depth = (left.min(gaps[i + 1]) - m.value).max(0.0);
        let (locus, min_gap, refinement) = if best.value <= m.value {
            (best.x, best.value.max(0.0), Refinement::Converged)
        } else if best.value - m.value <= 1e-3 * depth {
            (grid[i], m.value, Refinement::Converged)
        } else {
            (
                grid[i],
                m.value,
                Refinement::Fallback(format!(
                    "refined gap {:e} exceeds the grid minimum {:e}",
                    best.value, m.value
                )),
            )
        };
        events.push(CrossingEvent {
            level_low: low,
            level_high: high,
            locus,
            min_gap,
            bracket: (lo, hi),
            kind: if min_gap < opts.exact_tol {
                CrossingKind::Exact
            } else {
                CrossingKind::Avoided
            },
            refinement,
        });
    }
    Ok(events)
}
