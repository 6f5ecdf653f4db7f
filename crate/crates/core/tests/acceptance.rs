//! End-to-end acceptance checks at the stated tolerances.
//!
//! Each test writes one `PASS`/`FAIL` line straight to stderr (bypassing
//! the test harness capture) before asserting, so a plain `cargo test` run
//! shows the full scorecard.

use std::fmt::Display;
use std::io::Write;
use std::time::{Duration, Instant};

use rabi_core::entanglement::field_entropy;
use rabi_core::jc_analytic::numeric_doublet;
use rabi_core::spectra::{detect_avoided_crossings_with, eigenvalues};
use rabi_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool, detail: impl Display) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "acceptance {id} [{verdict}] {name}: {detail}");
}

fn space(n: usize) -> TruncatedSpace {
    TruncatedSpace::new(n).unwrap()
}

#[test]
fn c1_jc_degenerate_coupling() {
    let g = find_degenerate_coupling(1, 0.5).unwrap();
    let runs = 1000;
    let start = Instant::now();
    for _ in 0..runs {
        std::hint::black_box(find_degenerate_coupling(std::hint::black_box(1), 0.5).unwrap());
    }
    let per_call = start.elapsed() / runs;
    let pass = (g - 0.2749).abs() <= 5e-5 && per_call < Duration::from_millis(1);
    report(
        1,
        "JC degenerate coupling",
        pass,
        format!("g* = {g:.6} (target 0.2749 +/- 5e-5), {per_call:?} per call"),
    );
    assert!(pass);
}

#[test]
fn c2_degenerate_perturbation_vs_numerics() {
    let start = Instant::now();
    let pert = degenerate_perturbation(1, 0.5, 0.05).unwrap();
    let num = numeric_doublet(1, 0.5, 0.05, 60).unwrap();
    let elapsed = start.elapsed();

    let gap_err = (num.gap() - pert.splitting()).abs();
    let s_err = (num.entropies.0 - pert.entropy)
        .abs()
        .max((num.entropies.1 - pert.entropy).abs());
    let pass = gap_err <= 1e-3 && s_err <= 0.02 && elapsed < Duration::from_secs(1);
    report(
        2,
        "degenerate perturbation vs driven JC numerics",
        pass,
        format!(
            "gap {:.6} vs 2eD1D2 {:.6} (|diff| {gap_err:.2e} <= 1e-3); S {:.4}/{:.4} vs {:.4} \
             (max |diff| {s_err:.4} <= 0.02); levels {:?}; {elapsed:?}",
            num.gap(),
            pert.splitting(),
            num.entropies.0,
            num.entropies.1,
            pert.entropy,
            num.levels
        ),
    );
    assert!(pass);
}

/// Minimum prominence (bits) of a resonance valley in the weak-drive
/// coupling sweep. Sharp resonances rise by 0.29 bits or more; the broad
/// undulations that are also present without the drive by 0.11 or less.
const VALLEY_PROMINENCE: f64 = 0.2;

#[test]
fn c3_valley_count_law() {
    let start = Instant::now();
    let regimes = classify_regimes(
        ModelParams::new(1.0, 0.0, 0.0),
        4.0,
        8,
        &RegimeOptions::default(),
    )
    .unwrap();
    let step = 0.005;
    let grid = linspace(0.25, 2.8, 511);
    assert!((grid[1] - grid[0] - step).abs() < 1e-12);
    let window = (regimes.g_cross1 - 2.0 * step, regimes.g_coalesce);

    let base = ModelParams::new(1.0, 0.0, 0.01);
    let axis = Axis::new(SweepAxis::G, grid).unwrap();
    let result = sweep(ModelKind::AsymQrm, base, axis, 9, Truncation::Fixed(400)).unwrap();

    // Gap minima of every adjacent pair (low, low+1), low = 2..=8.
    let mut loci_by_pair = vec![Vec::new(); 9];
    for (low, loci) in loci_by_pair.iter_mut().enumerate().skip(2) {
        let opts = DetectOptions::new(0.05).one_sided();
        for e in detect_avoided_crossings_with(&result, low, &opts).unwrap() {
            loci.push(e.locus);
        }
    }

    let mut pass = true;
    let mut lines = Vec::new();
    for n in 3..=8usize {
        let curve = result.entropy_curve(n).unwrap();
        let valleys =
            count_resonance_extrema(&curve, Extremum::Valley, VALLEY_PROMINENCE, Some(window))
                .unwrap();
        let expected = (n - 1) / 2;
        let crossings: Vec<f64> = loci_by_pair[n - 1]
            .iter()
            .chain(&loci_by_pair[n])
            .copied()
            .collect();
        let matched = valleys
            .loci
            .iter()
            .all(|v| crossings.iter().any(|c| (c - v).abs() <= step + 1e-12));
        let ok = valleys.count() == expected && matched;
        pass &= ok;
        lines.push(format!(
            "n={n}: {} valleys (want {expected}) at {:?}, near crossing: {matched}",
            valleys.count(),
            valleys
                .loci
                .iter()
                .map(|x| format!("{x:.3}"))
                .collect::<Vec<_>>()
        ));
    }
    report(
        3,
        "valley count law",
        pass,
        format!(
            "window [{:.4}, {:.4}]; {}; {:?}",
            window.0,
            window.1,
            lines.join("; "),
            start.elapsed()
        ),
    );
    assert!(pass);
}

fn entropies(params: ModelParams, n_trunc: usize, n_levels: usize) -> Vec<f64> {
    let sol = diagonalize(&build_asym_qrm(params, space(n_trunc)).unwrap(), n_levels).unwrap();
    (1..=n_levels)
        .map(|n| entropy_of_eigenstate(&sol, n).unwrap())
        .collect()
}

#[test]
fn c4_deep_strong_collapse_and_preservation() {
    let base = ModelParams::new(1.0, 3.0, 0.0);
    let n_trunc = 400;

    let qrm = entropies(base, n_trunc, 8);
    let a = qrm.iter().all(|&s| s > 0.99);
    let driven = entropies(base.with_epsilon(0.25), n_trunc, 8);
    let b = driven.iter().all(|&s| s < 0.05);

    let delta = 1e-3;
    let mut c = true;
    let mut worst_peak = f64::INFINITY;
    for m in 0..8usize {
        let eps = m as f64 / 2.0;
        let at = entropies(base.with_epsilon(eps), n_trunc, 8);
        let right = entropies(base.with_epsilon(eps + delta), n_trunc, 8);
        // The entropy is even in ε, so at m = 0 the right side suffices.
        let left = if m == 0 {
            right.clone()
        } else {
            entropies(base.with_epsilon(eps - delta), n_trunc, 8)
        };
        for n in (m + 1)..=8 {
            let s = at[n - 1];
            worst_peak = worst_peak.min(s);
            c &= s > 0.5 && s > left[n - 1] && s > right[n - 1];
        }
    }
    let pass = a && b && c;
    report(
        4,
        "deep-strong collapse and preservation",
        pass,
        format!(
            "(a) min S at eps=0: {:.4} > 0.99: {a}; (b) max S at eps=0.25: {:.4} < 0.05: {b}; \
             (c) min S at eps=m/2, n>m: {worst_peak:.4} > 0.5 and local peak: {c}",
            qrm.iter().cloned().fold(f64::INFINITY, f64::min),
            driven.iter().cloned().fold(0.0, f64::max),
        ),
    );
    assert!(pass);
}

#[test]
fn c5_eight_avoided_crossings_at_half_integers() {
    let start = Instant::now();
    let base = ModelParams::new(1.0, 3.0, 0.0);
    let axis = Axis::new(SweepAxis::Epsilon, linspace(0.0, 4.0, 201)).unwrap();
    let result = sweep(ModelKind::AsymQrm, base, axis, 9, Truncation::Fixed(400)).unwrap();
    let events = detect_avoided_crossings_with(&result, 8, &DetectOptions::new(1e-2)).unwrap();
    let loci: Vec<f64> = events.iter().map(|e| e.locus).collect();
    let pass = loci.len() == 8
        && loci
            .iter()
            .enumerate()
            .all(|(m, x)| (x - m as f64 / 2.0).abs() <= 5e-3);
    report(
        5,
        "level-8 avoided crossings in epsilon",
        pass,
        format!(
            "{} events at {:?} (gaps {:?}); {:?}",
            loci.len(),
            loci.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>(),
            events
                .iter()
                .map(|e| format!("{:.2e}", e.min_gap))
                .collect::<Vec<_>>(),
            start.elapsed()
        ),
    );
    assert!(pass);
}

#[test]
fn c6_lab_and_rotated_frames_agree() {
    let start = Instant::now();
    let s = space(60);
    let mut worst = 0.0_f64;
    for &w0 in &linspace(0.0, 2.0, 5) {
        for &g in &linspace(0.0, 3.0, 5) {
            for &eps in &linspace(0.0, 2.0, 5) {
                let p = ModelParams::new(w0, g, eps);
                let lab =
                    eigenvalues(&build_asym_qrm(p, s).unwrap().matrix, s.total_dim()).unwrap();
                let rot =
                    eigenvalues(&build_polaron_frame(p, s).unwrap().matrix, s.total_dim()).unwrap();
                for (a, b) in lab.iter().zip(&rot) {
                    worst = worst.max((a - b).abs() / a.abs().max(1.0));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-9 && elapsed < Duration::from_secs(60);
    report(
        6,
        "lab/rotated frame spectral equivalence",
        pass,
        format!("max relative deviation {worst:.2e} <= 1e-9 over 125 points; {elapsed:?}"),
    );
    assert!(pass);
}

#[test]
fn c7_entropy_symmetry_and_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut worst_sym = 0.0_f64;
    let mut in_bounds = true;
    for _ in 0..1000 {
        let n_trunc = rng.random_range(20..=60);
        let p = ModelParams::new(
            rng.random_range(0.0..3.0),
            rng.random_range(0.0..3.0),
            rng.random_range(0.0..2.0),
        );
        let h = if rng.random_bool(0.5) {
            build_asym_qrm(p, space(n_trunc)).unwrap()
        } else {
            build_asym_qjc(p, space(n_trunc)).unwrap()
        };
        let level = rng.random_range(1..=8);
        let sol = diagonalize(&h, level).unwrap();
        let state = sol.state(level);
        let atom =
            von_neumann_entropy(&reduced_density_atom(state, space(n_trunc)).unwrap()).unwrap();
        let field_full =
            von_neumann_entropy(&reduced_density_field(state, space(n_trunc)).unwrap()).unwrap();
        let field_qr = field_entropy(state, space(n_trunc)).unwrap();
        worst_sym = worst_sym
            .max((atom - field_full).abs())
            .max((atom - field_qr).abs());
        in_bounds &= (0.0..=1.0 + 1e-9).contains(&atom);
    }
    let pass = worst_sym <= 1e-9 && in_bounds;
    report(
        7,
        "entropy symmetry and bounds",
        pass,
        format!("1000 eigenstates: max |S_atom - S_field| = {worst_sym:.2e} <= 1e-9; 0 <= S <= 1: {in_bounds}"),
    );
    assert!(pass);
}

#[test]
fn c8_truncation_converged_at_400() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for &eps in &linspace(0.0, 4.0, 9) {
        let p = ModelParams::new(1.0, 3.0, eps);
        let e400 = eigenvalues(&build_asym_qrm(p, space(400)).unwrap().matrix, 8).unwrap();
        let e800 = eigenvalues(&build_asym_qrm(p, space(800)).unwrap().matrix, 8).unwrap();
        for (a, b) in e400.iter().zip(&e800) {
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
    }
    let pass = worst < 1e-8;
    report(
        8,
        "truncation convergence 400 vs 800",
        pass,
        format!(
            "max relative change {worst:.2e} < 1e-8 over eps in [0, 4]; {:?}",
            start.elapsed()
        ),
    );
    assert!(pass);
}
