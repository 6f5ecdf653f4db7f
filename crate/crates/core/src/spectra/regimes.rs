use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::TruncatedSpace;
use crate::models::{qrm_parity_chain, ModelParams, Parity};
use crate::optimize::bisect;

use super::linspace;
use super::tridiag::lowest_eigenvalues;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeOptions {
    pub n_trunc: usize,
    /// Coupling grid on `[0, g_max]` used to bracket both boundaries.
    pub grid_points: usize,
    /// Gap below which a tracked doublet counts as coalesced.
    pub quasi_degeneracy_tol: f64,
    pub bisection_tol: f64,
}

impl Default for RegimeOptions {
    fn default() -> Self {
        RegimeOptions {
            n_trunc: 400,
            grid_points: 301,
            quasi_degeneracy_tol: 1e-3,
            bisection_tol: 1e-10,
        }
    }
}

/// Coupling-regime boundaries of the symmetric Rabi model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeBoundaries {
    pub omega0: f64,
    pub n_levels: usize,
    /// First coupling at which two of the lowest `n_levels` levels cross.
    pub g_cross1: f64,
    /// The two levels (counted from 1) that cross at `g_cross1`.
    pub first_crossing: (usize, usize),
    /// Coupling beyond which every tracked doublet `(2k−1, 2k)` stays
    /// within `quasi_degeneracy_tol` for the rest of the scan.
    pub g_coalesce: f64,
    pub quasi_degeneracy_tol: f64,
}

/// Lowest levels of both parity sectors at coupling `g`.
struct Sectors {
    even: Vec<f64>,
    odd: Vec<f64>,
}

struct Chains {
    base: ModelParams,
    space: TruncatedSpace,
    depth: usize,
}

impl Chains {
    fn at(&self, g: f64) -> Result<Sectors> {
        let p = self.base.with_g(g);
        let (de, oe) = qrm_parity_chain(p, self.space, Parity::Even)?;
        let (dodd, oodd) = qrm_parity_chain(p, self.space, Parity::Odd)?;
        Ok(Sectors {
            even: lowest_eigenvalues(&de, &oe, self.depth),
            odd: lowest_eigenvalues(&dodd, &oodd, self.depth),
        })
    }

    fn even_k(&self, g: f64, k: usize) -> Result<f64> {
        Ok(self.at(g)?.even[k])
    }

    fn odd_k(&self, g: f64, k: usize) -> Result<f64> {
        Ok(self.at(g)?.odd[k])
    }
}

impl Sectors {
    /// Merged ascending spectrum, each entry tagged with its sector and
    /// index within the sector.
    fn merged(&self, n: usize) -> Vec<(f64, Parity, usize)> {
        let mut all: Vec<(f64, Parity, usize)> = self
            .even
            .iter()
            .enumerate()
            .map(|(k, &e)| (e, Parity::Even, k))
            .chain(
                self.odd
                    .iter()
                    .enumerate()
                    .map(|(k, &e)| (e, Parity::Odd, k)),
            )
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        all.truncate(n);
        all
    }

    fn tracked_max_gap(&self, n_levels: usize) -> f64 {
        let levels: Vec<f64> = self.merged(n_levels).iter().map(|x| x.0).collect();
        levels
            .chunks_exact(2)
            .map(|pair| pair[1] - pair[0])
            .fold(0.0, f64::max)
    }
}

/// Classifies the coupling regimes of the Rabi model at `ε = 0`.
///
/// Each parity sector `(−1)^(m+s)` is a tridiagonal chain, so levels of
/// the same sector never cross and every crossing of the merged spectrum is
/// an even level meeting an odd one. `g_cross1` is the smallest such
/// crossing among the lowest `n_levels` levels, located by bisection on the
/// difference of the two sector eigenvalues. `g_coalesce` is where the
/// widest tracked doublet gap `max_k (E_{2k} − E_{2k−1})` drops below the
/// tolerance for the last time on the scan, also bisected.
pub fn classify_regimes(
    base: ModelParams,
    g_max: f64,
    n_levels: usize,
    opts: &RegimeOptions,
) -> Result<RegimeBoundaries> {
    base.validate()?;
    if base.epsilon != 0.0 {
        return Err(Error::param(
            "epsilon",
            "regimes are defined at epsilon = 0",
        ));
    }
    if !(g_max > 0.0) || !g_max.is_finite() {
        return Err(Error::param(
            "g_max",
            format!("must be positive (got {g_max})"),
        ));
    }
    if n_levels < 2 {
        return Err(Error::param("n_levels", "at least two levels are needed"));
    }
    if opts.grid_points < 3 {
        return Err(Error::param(
            "grid_points",
            "at least three points are needed",
        ));
    }
    if !(opts.quasi_degeneracy_tol > 0.0) {
        return Err(Error::InvalidThreshold(opts.quasi_degeneracy_tol));
    }
    let space = TruncatedSpace::new(opts.n_trunc)?;
    if n_levels > space.total_dim() {
        return Err(Error::TooManyLevels {
            requested: n_levels,
            available: space.total_dim(),
        });
    }
    let chains = Chains {
        base,
        space,
        depth: n_levels.min(space.field_dim()),
    };

    // Opposite-parity levels degenerate at g = 0 make the crossing
    // structure start at the origin.
    let bare = chains.at(0.0)?;
    let scale = base.omega.max(base.omega0);
    let merged = bare.merged(n_levels + 1);
    for w in merged.windows(2) {
        if w[0].1 != w[1].1 && (w[1].0 - w[0].0).abs() <= 1e-12 * scale {
            return Err(Error::DegenerateInput(format!(
                "levels of opposite parity are degenerate at g = 0 (omega0 = {})",
                base.omega0
            )));
        }
    }

    let grid = linspace(0.0, g_max, opts.grid_points);
    let samples = grid
        .iter()
        .map(|&g| chains.at(g))
        .collect::<Result<Vec<_>>>()?;

    // First crossing: the first grid interval across which the parity
    // pattern of the lowest levels changes, refined per flipping pair.
    let order = |s: &Sectors| -> Vec<(Parity, usize)> {
        s.merged(n_levels).iter().map(|x| (x.1, x.2)).collect()
    };
    let mut first = None;
    for i in 1..samples.len() - 1 {
        let before = order(&samples[i]);
        let after = order(&samples[i + 1]);
        if before == after {
            continue;
        }
        let (lo, hi) = (grid[i], grid[i + 1]);
        let mut best: Option<(f64, (usize, usize))> = None;
        let max_k = chains.depth;
        for ke in 0..max_k {
            for ko in 0..max_k {
                let d = |s: &Sectors| s.even[ke] - s.odd[ko];
                let (d_lo, d_hi) = (d(&samples[i]), d(&samples[i + 1]));
                if d_lo.signum() == d_hi.signum() {
                    continue;
                }
                // Only pairs that sit among the lowest levels at the flip.
                let in_window = |s: &Sectors| {
                    let top = s
                        .merged(n_levels)
                        .last()
                        .map(|x| x.0)
                        .unwrap_or(f64::INFINITY);
                    s.even[ke] <= top && s.odd[ko] <= top
                };
                if !(in_window(&samples[i]) || in_window(&samples[i + 1])) {
                    continue;
                }
                let g = bisect(
                    |g| Ok(chains.even_k(g, ke)? - chains.odd_k(g, ko)?),
                    lo,
                    hi,
                    opts.bisection_tol,
                )?;
                let s = chains.at(g)?;
                let merged = s.merged(n_levels + 1);
                let pos = |p: Parity, k: usize| merged.iter().position(|x| x.1 == p && x.2 == k);
                let (Some(a), Some(b)) = (pos(Parity::Even, ke), pos(Parity::Odd, ko)) else {
                    continue;
                };
                let pair = (a.min(b) + 1, a.max(b) + 1);
                if pair.1 > n_levels {
                    continue;
                }
                if best.map_or(true, |(gb, _)| g < gb) {
                    best = Some((g, pair));
                }
            }
        }
        if let Some(found) = best {
            first = Some(found);
            break;
        }
    }
    let (g_cross1, first_crossing) = first.ok_or(Error::BoundaryNotFound {
        what: "first level crossing",
        g_max,
    })?;

    // Coalescence: the last grid point where some doublet is still open.
    let tol = opts.quasi_degeneracy_tol;
    let open: Vec<bool> = samples
        .iter()
        .map(|s| s.tracked_max_gap(n_levels) >= tol)
        .collect();
    let last_open = open.iter().rposition(|&o| o);
    let g_coalesce = match last_open {
        None => 0.0,
        Some(i) if i + 1 == grid.len() => {
            return Err(Error::BoundaryNotFound {
                what: "level coalescence",
                g_max,
            })
        }
        Some(i) => bisect(
            |g| Ok(chains.at(g)?.tracked_max_gap(n_levels) - tol),
            grid[i],
            grid[i + 1],
            opts.bisection_tol,
        )?,
    };

    Ok(RegimeBoundaries {
        omega0: base.omega0,
        n_levels,
        g_cross1,
        first_crossing,
        g_coalesce,
        quasi_degeneracy_tol: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> RegimeOptions {
        RegimeOptions {
            n_trunc: 120,
            grid_points: 161,
            ..RegimeOptions::default()
        }
    }

    #[test]
    fn resonant_boundaries_are_ordered() {
        let r = classify_regimes(ModelParams::new(1.0, 0.0, 0.0), 4.0, 8, &quick()).unwrap();
        assert!(0.0 < r.g_cross1 && r.g_cross1 < r.g_coalesce, "{r:?}");
        assert_eq!(r.first_crossing.1, r.first_crossing.0 + 1);
        assert_eq!(r.quasi_degeneracy_tol, 1e-3);
    }

    #[test]
    fn zero_atom_frequency_is_rejected() {
        let r = classify_regimes(ModelParams::new(0.0, 0.0, 0.0), 4.0, 8, &quick());
        assert!(matches!(r, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn requires_zero_drive() {
        assert!(classify_regimes(ModelParams::new(1.0, 0.0, 0.1), 4.0, 8, &quick()).is_err());
    }

    #[test]
    fn short_scan_reports_missing_boundary() {
        let r = classify_regimes(ModelParams::new(1.0, 0.0, 0.0), 0.05, 8, &quick());
        assert!(matches!(r, Err(Error::BoundaryNotFound { .. })));
        let r = classify_regimes(ModelParams::new(1.0, 0.0, 0.0), 1.0, 8, &quick());
        assert!(matches!(
            r,
            Err(Error::BoundaryNotFound {
                what: "level coalescence",
                ..
            })
        ));
    }
}
