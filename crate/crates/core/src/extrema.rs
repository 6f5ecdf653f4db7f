//! Strict local minima of sampled curves and their topographic prominence.
//!
//! With `reflect` set the curve is treated as even about its first sample,
//! so the first point is a candidate and the walk to the left continues into
//! the mirror image. This is the right model for sweeps over `ε ≥ 0`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LocalMin {
    pub index: usize,
    pub value: f64,
    pub prominence: f64,
}

fn at(values: &[f64], k: isize) -> f64 {
    values[k.unsigned_abs()]
}

/// Every strict local minimum with its prominence: the smaller of the two
/// rises needed to reach a lower sample (or the end of the curve) on either
/// side.
pub(crate) fn local_minima(values: &[f64], reflect: bool) -> Vec<LocalMin> {
    let n = values.len();
    if n < 2 {
        return Vec::new();
    }
    let last = n as isize - 1;
    let first = if reflect { -last } else { 0 };
    let mut out = Vec::new();
    for i in 0..n {
        let v = values[i];
        let ii = i as isize;
        let left_ok = if i == 0 { reflect } else { v < values[i - 1] };
        let right_ok = i + 1 < n && v < values[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let mut left_max = v;
        let mut k = ii - 1;
        while k >= first {
            let x = at(values, k);
            if x < v {
                break;
            }
            left_max = left_max.max(x);
            k -= 1;
        }
        let mut right_max = v;
        let mut k = ii + 1;
        while k <= last {
            let x = values[k as usize];
            if x < v {
                break;
            }
            right_max = right_max.max(x);
            k += 1;
        }
        out.push(LocalMin {
            index: i,
            value: v,
            prominence: left_max.min(right_max) - v,
        });
    }
    out
}
