use crate::error::{Error, Result};
use crate::fock::TruncatedSpace;
use crate::models::{build, ModelKind, ModelParams};

use super::eigenvalues;

/// Largest truncation the doubling loop will try.
pub const DEFAULT_TRUNCATION_CAP: usize = 800;

/// [`converged_truncation_capped`] with [`DEFAULT_TRUNCATION_CAP`].
pub fn converged_truncation(
    kind: ModelKind,
    params: ModelParams,
    n_levels: usize,
    rel_tol: f64,
    n_start: usize,
) -> Result<usize> {
    converged_truncation_capped(
        kind,
        params,
        n_levels,
        rel_tol,
        n_start,
        DEFAULT_TRUNCATION_CAP,
    )
}

/// Smallest `n_trunc` in `n_start, 2·n_start, 4·n_start, …` whose lowest
/// `n_levels` energies move by less than `rel_tol · max(|E|, ω)` when the
/// truncation is doubled. Fails with [`Error::TruncationCapReached`] when the
/// doubled truncation would exceed `cap`.
pub fn converged_truncation_capped(
    kind: ModelKind,
    params: ModelParams,
    n_levels: usize,
    rel_tol: f64,
    n_start: usize,
    cap: usize,
) -> Result<usize> {
    if !(rel_tol > 0.0) {
        return Err(Error::param(
            "rel_tol",
            format!("must be positive (got {rel_tol})"),
        ));
    }
    let levels_at = |n: usize| -> Result<Vec<f64>> {
        let h = build(kind, params, TruncatedSpace::new(n)?)?;
        eigenvalues(&h.matrix, n_levels)
    };
    let mut n = n_start.max(1);
    let mut current = levels_at(n)?;
    let mut previous = Vec::new();
    loop {
        let next_n = 2 * n;
        if next_n > cap {
            return Err(Error::TruncationCapReached {
                cap,
                previous,
                last: current,
            });
        }
        let next = levels_at(next_n)?;
        let converged = current
            .iter()
            .zip(&next)
            .all(|(a, b)| (a - b).abs() < rel_tol * a.abs().max(params.omega));
        if converged {
            return Ok(n);
        }
        n = next_n;
        previous = std::mem::replace(&mut current, next);
    }
}
