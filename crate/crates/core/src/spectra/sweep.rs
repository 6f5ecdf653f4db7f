use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{entropy_of_eigenstate, entropy_of_eigenstate_checked, EntropyCurve};
use crate::error::{Error, Result};
use crate::fock::TruncatedSpace;
use crate::models::{build, build_polaron_frame, ModelKind, ModelParams};

use super::{converged_truncation_capped, diagonalize, eigenvalues, DEFAULT_TRUNCATION_CAP};

/// Relative tolerance of the lab/polaron spectral comparison.
const FRAME_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    G,
    Epsilon,
    Omega0,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::G => "g",
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::Omega0 => "omega0",
        }
    }

    pub fn apply(self, params: ModelParams, value: f64) -> ModelParams {
        match self {
            SweepAxis::G => params.with_g(value),
            SweepAxis::Epsilon => params.with_epsilon(value),
            SweepAxis::Omega0 => params.with_omega0(value),
        }
    }
}

/// `count` evenly spaced points from `lo` to `hi` inclusive. Each point is
/// computed as `lo + (hi − lo)·i/(count − 1)`, so simple fractions of the
/// range land exactly.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// One swept parameter and its grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub param: SweepAxis,
    pub grid: Vec<f64>,
}

impl Axis {
    /// Requires a non-empty, finite, strictly increasing grid.
    pub fn new(param: SweepAxis, grid: Vec<f64>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::InvalidGrid(format!(
                "{} grid is empty",
                param.name()
            )));
        }
        if grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "{} grid has non-finite values",
                param.name()
            )));
        }
        if let Some(i) = grid.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "{} grid is not strictly increasing at index {}",
                param.name(),
                i + 1
            )));
        }
        Ok(Axis { param, grid })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Truncation {
    Fixed(usize),
    /// Per-point [`super::converged_truncation_capped`].
    Auto {
        rel_tol: f64,
        n_start: usize,
        cap: usize,
    },
}

impl Truncation {
    pub fn auto(rel_tol: f64) -> Self {
        Truncation::Auto {
            rel_tol,
            n_start: 25,
            cap: DEFAULT_TRUNCATION_CAP,
        }
    }

    fn resolve(self, kind: ModelKind, params: ModelParams, n_levels: usize) -> Result<usize> {
        match self {
            Truncation::Fixed(n) => Ok(n),
            Truncation::Auto {
                rel_tol,
                n_start,
                cap,
            } => converged_truncation_capped(kind, params, n_levels, rel_tol, n_start, cap),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    /// Compare every lab-frame spectrum with the rotated-frame one.
    pub check_frames: bool,
    /// Compute every entropy from both marginals and compare.
    pub check_schmidt: bool,
}

/// Energies and entropies of the lowest levels at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    /// Axis values, one per swept axis.
    pub coords: Vec<f64>,
    pub params: ModelParams,
    pub n_trunc: usize,
    pub energies: Vec<f64>,
    pub entropies: Vec<f64>,
}

impl SweepPoint {
    pub fn relative_energies(&self) -> Vec<f64> {
        self.energies.iter().map(|e| e - self.energies[0]).collect()
    }
}

/// Result of a 1D or 2D sweep. Points are stored in lexicographic grid order
/// (the first axis varies slowest).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub kind: ModelKind,
    pub base: ModelParams,
    pub axes: Vec<Axis>,
    pub n_levels: usize,
    pub truncation: Truncation,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn is_1d(&self) -> bool {
        self.axes.len() == 1
    }

    fn require_1d(&self) -> Result<&Axis> {
        if !self.is_1d() {
            return Err(Error::InvalidGrid("operation needs a 1D sweep".into()));
        }
        Ok(&self.axes[0])
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.n_levels {
            return Err(Error::TooManyLevels {
                requested: level,
                available: self.n_levels,
            });
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<&[f64]> {
        Ok(&self.require_1d()?.grid)
    }

    /// `E_level` along a 1D sweep.
    pub fn energies(&self, level: usize) -> Result<Vec<f64>> {
        self.require_1d()?;
        self.check_level(level)?;
        Ok(self.points.iter().map(|p| p.energies[level - 1]).collect())
    }

    /// `E_{level+1} − E_level` along a 1D sweep.
    pub fn gaps(&self, level: usize) -> Result<Vec<f64>> {
        self.require_1d()?;
        self.check_level(level + 1)?;
        self.check_level(level)?;
        Ok(self
            .points
            .iter()
            .map(|p| p.energies[level] - p.energies[level - 1])
            .collect())
    }

    /// `S_level` along a 1D sweep. An `ε` axis starting at exactly 0 is
    /// marked as reflectable, since the spectrum is even in `ε`.
    pub fn entropy_curve(&self, level: usize) -> Result<EntropyCurve> {
        let axis = self.require_1d()?;
        self.check_level(level)?;
        Ok(EntropyCurve {
            grid: axis.grid.clone(),
            values: self.points.iter().map(|p| p.entropies[level - 1]).collect(),
            reflect_at_start: reflects_at_start(axis),
        })
    }

    /// Largest truncation used anywhere in the sweep.
    pub fn max_n_trunc(&self) -> usize {
        self.points.iter().map(|p| p.n_trunc).max().unwrap_or(0)
    }
}

pub(crate) fn reflects_at_start(axis: &Axis) -> bool {
    axis.param == SweepAxis::Epsilon && axis.grid[0] == 0.0
}

fn evaluate(
    kind: ModelKind,
    params: ModelParams,
    coords: Vec<f64>,
    n_levels: usize,
    truncation: Truncation,
    opts: &SweepOptions,
) -> Result<SweepPoint> {
    let n_trunc = truncation.resolve(kind, params, n_levels)?;
    let space = TruncatedSpace::new(n_trunc)?;
    // Sweeps over ε pass through 0, where the symmetric tag would reject a
    // nonzero drive elsewhere; build the asymmetric family throughout.
    let kind = match kind {
        ModelKind::Qrm if params.epsilon != 0.0 => ModelKind::AsymQrm,
        ModelKind::Qjc if params.epsilon != 0.0 => ModelKind::AsymQjc,
        k => k,
    };
    let h = build(kind, params, space)?;
    let sol = diagonalize(&h, n_levels)?;

    if opts.check_frames && matches!(kind, ModelKind::Qrm | ModelKind::AsymQrm) {
        let rot = eigenvalues(&build_polaron_frame(params, space)?.matrix, n_levels)?;
        let deviation = sol
            .energies
            .iter()
            .zip(&rot)
            .map(|(a, b)| (a - b).abs() / a.abs().max(params.omega))
            .fold(0.0, f64::max);
        if !(deviation <= FRAME_TOL) {
            return Err(Error::FrameMismatch { deviation });
        }
    }

    let entropies = (1..=n_levels)
        .map(|level| {
            if opts.check_schmidt {
                entropy_of_eigenstate_checked(&sol, level)
            } else {
                entropy_of_eigenstate(&sol, level)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepPoint {
        coords,
        params,
        n_trunc,
        energies: sol.energies,
        entropies,
    })
}

fn run(
    kind: ModelKind,
    base: ModelParams,
    axes: Vec<Axis>,
    n_levels: usize,
    truncation: Truncation,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    base.validate()?;
    if let Truncation::Auto { rel_tol, .. } = truncation {
        if !(rel_tol > 0.0) {
            return Err(Error::param(
                "rel_tol",
                format!("must be positive (got {rel_tol})"),
            ));
        }
    }
    let tasks: Vec<(Vec<f64>, ModelParams)> = match axes.as_slice() {
        [a] => a
            .grid
            .iter()
            .map(|&x| (vec![x], a.param.apply(base, x)))
            .collect(),
        [a, b] => a
            .grid
            .iter()
            .flat_map(|&x| {
                b.grid
                    .iter()
                    .map(move |&y| (vec![x, y], b.param.apply(a.param.apply(base, x), y)))
            })
            .collect(),
        _ => return Err(Error::InvalidGrid("sweeps take one or two axes".into())),
    };

    let work = || -> Vec<Result<SweepPoint>> {
        tasks
            .par_iter()
            .map(|(coords, p)| evaluate(kind, *p, coords.clone(), n_levels, truncation, opts))
            .collect()
    };
    let outcomes = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::param("jobs", e.to_string()))?
            .install(work),
        None => work(),
    };

    // Report the first failure in grid order, whatever order workers ran in.
    let mut points = Vec::with_capacity(outcomes.len());
    for (index, outcome) in outcomes.into_iter().enumerate() {
        points.push(outcome.map_err(|e| Error::at_grid_point(index, e))?);
    }
    Ok(SweepResult {
        kind,
        base,
        axes,
        n_levels,
        truncation,
        points,
    })
}

/// [`sweep_with`] using default options.
pub fn sweep(
    kind: ModelKind,
    base: ModelParams,
    axis: Axis,
    n_levels: usize,
    truncation: Truncation,
) -> Result<SweepResult> {
    sweep_with(
        kind,
        base,
        axis,
        n_levels,
        truncation,
        &SweepOptions::default(),
    )
}

/// Diagonalizes at every grid point and records the lowest `n_levels`
/// energies and atom–field entropies.
pub fn sweep_with(
    kind: ModelKind,
    base: ModelParams,
    axis: Axis,
    n_levels: usize,
    truncation: Truncation,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    run(kind, base, vec![axis], n_levels, truncation, opts)
}

/// Two-axis sweep; `outer` varies slowest.
pub fn sweep_2d(
    kind: ModelKind,
    base: ModelParams,
    outer: Axis,
    inner: Axis,
    n_levels: usize,
    truncation: Truncation,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    if outer.param == inner.param {
        return Err(Error::InvalidGrid(
            "both axes sweep the same parameter".into(),
        ));
    }
    run(kind, base, vec![outer, inner], n_levels, truncation, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::entropy_of_eigenstate;
    use crate::models::build_asym_qrm;

    #[test]
    fn linspace_hits_halves_exactly() {
        let g = linspace(0.0, 4.0, 201);
        for m in 0..=8 {
            assert_eq!(g[25 * m], m as f64 / 2.0);
        }
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
        assert!(linspace(1.0, 2.0, 0).is_empty());
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(SweepAxis::G, vec![]).is_err());
        assert!(Axis::new(SweepAxis::G, vec![0.0, 0.0]).is_err());
        assert!(Axis::new(SweepAxis::G, vec![1.0, 0.5]).is_err());
        assert!(Axis::new(SweepAxis::G, vec![0.0, f64::NAN]).is_err());
        assert!(Axis::new(SweepAxis::G, vec![0.3]).is_ok());
    }

    #[test]
    fn single_point_matches_direct_computation() {
        let base = ModelParams::new(1.0, 0.0, 0.1);
        let axis = Axis::new(SweepAxis::G, vec![0.7]).unwrap();
        let r = sweep(ModelKind::AsymQrm, base, axis, 4, Truncation::Fixed(30)).unwrap();
        assert_eq!(r.points.len(), 1);
        let h = build_asym_qrm(base.with_g(0.7), TruncatedSpace::new(30).unwrap()).unwrap();
        let sol = diagonalize(&h, 4).unwrap();
        assert_eq!(r.points[0].energies, sol.energies);
        for level in 1..=4 {
            assert_eq!(
                r.points[0].entropies[level - 1],
                entropy_of_eigenstate(&sol, level).unwrap()
            );
        }
    }

    #[test]
    fn one_by_one_grid() {
        let r = sweep_2d(
            ModelKind::AsymQrm,
            ModelParams::new(1.0, 0.0, 0.0),
            Axis::new(SweepAxis::Epsilon, vec![0.2]).unwrap(),
            Axis::new(SweepAxis::G, vec![0.5]).unwrap(),
            2,
            Truncation::Fixed(10),
            &SweepOptions::default(),
        )
        .unwrap();
        assert_eq!(r.points.len(), 1);
        assert_eq!(r.points[0].coords, vec![0.2, 0.5]);
        assert_eq!(r.points[0].params.g, 0.5);
        assert_eq!(r.points[0].params.epsilon, 0.2);
    }

    #[test]
    fn order_is_lexicographic_and_thread_independent() {
        let outer = Axis::new(SweepAxis::Omega0, linspace(0.5, 1.5, 3)).unwrap();
        let inner = Axis::new(SweepAxis::G, linspace(0.0, 1.0, 4)).unwrap();
        let base = ModelParams::new(1.0, 0.0, 0.05);
        let run = |jobs| {
            let opts = SweepOptions {
                jobs: Some(jobs),
                check_frames: true,
                check_schmidt: true,
            };
            sweep_2d(
                ModelKind::AsymQrm,
                base,
                outer.clone(),
                inner.clone(),
                3,
                Truncation::Fixed(20),
                &opts,
            )
            .unwrap()
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(a, b);
        let coords: Vec<Vec<f64>> = a.points.iter().map(|p| p.coords.clone()).collect();
        assert_eq!(coords[0], vec![0.5, 0.0]);
        assert_eq!(coords[1], vec![0.5, 1.0 / 3.0]);
        assert_eq!(coords[4], vec![1.0, 0.0]);
    }

    #[test]
    fn errors_carry_grid_index() {
        let axis = Axis::new(SweepAxis::G, vec![0.1, 0.2]).unwrap();
        let r = sweep(
            ModelKind::AsymQrm,
            ModelParams::default(),
            axis,
            50,
            Truncation::Fixed(5),
        );
        assert!(matches!(r, Err(Error::AtGridPoint { index: 0, .. })));
    }

    #[test]
    fn epsilon_sweep_of_symmetric_tag_uses_driven_model() {
        let axis = Axis::new(SweepAxis::Epsilon, vec![0.0, 0.5]).unwrap();
        let r = sweep(
            ModelKind::Qrm,
            ModelParams::new(1.0, 0.5, 0.0),
            axis,
            2,
            Truncation::Fixed(20),
        )
        .unwrap();
        assert!(r.entropy_curve(1).unwrap().reflect_at_start);
        assert_ne!(r.points[0].energies, r.points[1].energies);
    }

    #[test]
    fn gaps_are_nonnegative() {
        let axis = Axis::new(SweepAxis::G, linspace(0.0, 2.0, 21)).unwrap();
        let r = sweep(
            ModelKind::AsymQrm,
            ModelParams::new(1.0, 0.0, 0.01),
            axis,
            6,
            Truncation::Fixed(40),
        )
        .unwrap();
        for level in 1..6 {
            assert!(r.gaps(level).unwrap().iter().all(|&g| g >= 0.0));
        }
        assert!(r.gaps(6).is_err());
    }
}
