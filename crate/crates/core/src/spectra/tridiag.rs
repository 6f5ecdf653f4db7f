//! Eigenvalues of symmetric tridiagonal matrices by Sturm-sequence bisection.
//!
//! Used on the parity chains of the symmetric Rabi model, where a single
//! eigenvalue is needed to near machine precision at many couplings.

/// Number of eigenvalues strictly below `x`.
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    debug_assert_eq!(off.len() + 1, diag.len());
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let prev = if q == 0.0 {
            f64::EPSILON * (off[i - 1].abs() + 1.0)
        } else {
            q
        };
        q = diag[i] - x - off[i - 1] * off[i - 1] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

/// The `k`-th smallest eigenvalue (0-based), bisected until the bracket stops
/// shrinking in floating point.
pub fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    assert!(k < diag.len(), "eigenvalue index out of range");
    let (mut lo, mut hi) = gershgorin(diag, off);
    let pad = 1e-12 * (lo.abs().max(hi.abs()) + 1.0);
    lo -= pad;
    hi += pad;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if count_below(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// The lowest `k` eigenvalues, ascending.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    (0..k.min(diag.len()))
        .map(|i| kth_eigenvalue(diag, off, i))
        .collect()
}
