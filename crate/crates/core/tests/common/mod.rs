//! Reference implementations that share no code with the library.

#![allow(dead_code)]

/// All eigenvalues of a dense symmetric matrix (row-major), ascending.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `⟨m′,s′|H|m,s⟩` of `ω₀σ₊σ₋ + ωa†a + [g(a+a†) + ε]σ_x`, basis index `2m + s`.
/// Any sign of `ε` is accepted.
pub fn direct_asym_qrm(omega0: f64, g: f64, eps: f64, n_trunc: usize) -> Vec<f64> {
    let dim = 2 * (n_trunc + 1);
    let mut h = vec![0.0; dim * dim];
    for i in 0..dim {
        let (m, s) = (i / 2, i % 2);
        for j in 0..dim {
            let (mp, sp) = (j / 2, j % 2);
            let mut v = 0.0;
            if i == j {
                v += m as f64 + omega0 * s as f64;
            }
            if s != sp {
                if m == mp {
                    v += eps;
                }
                if mp + 1 == m {
                    v += g * (m as f64).sqrt();
                }
                if m + 1 == mp {
                    v += g * (mp as f64).sqrt();
                }
            }
            h[i * dim + j] = v;
        }
    }
    h
}
