use proptest::prelude::*;
use rabi_core::jc_analytic::jc_spectrum;
use rabi_core::spectra::eigenvalues;
use rabi_core::*;

mod common;

fn space(n: usize) -> TruncatedSpace {
    TruncatedSpace::new(n).unwrap()
}

fn normalized(v: Vec<f64>) -> Option<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 1e-3).then(|| v.iter().map(|x| x / norm).collect())
}

fn atom_entropy(state: &[f64], n_trunc: usize) -> f64 {
    von_neumann_entropy(&reduced_density_atom(state, space(n_trunc)).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_is_bounded_and_sign_blind(
        n_trunc in 1usize..12,
        raw in prop::collection::vec(-1.0f64..1.0, 26),
    ) {
        let dim = 2 * (n_trunc + 1);
        let Some(v) = normalized(raw[..dim].to_vec()) else { return Ok(()) };
        let s = atom_entropy(&v, n_trunc);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
        let flipped: Vec<f64> = v.iter().map(|x| -x).collect();
        prop_assert_eq!(s, atom_entropy(&flipped, n_trunc));
        let field = field_entropy(&v, space(n_trunc)).unwrap();
        prop_assert!((s - field).abs() < 1e-9);
    }

    #[test]
    fn product_states_have_zero_entropy(
        n_trunc in 1usize..12,
        field in prop::collection::vec(-1.0f64..1.0, 13),
        theta in 0.0f64..std::f64::consts::PI,
    ) {
        let Some(f) = normalized(field[..=n_trunc].to_vec()) else { return Ok(()) };
        let (cg, ce) = (theta.cos(), theta.sin());
        let v: Vec<f64> = f.iter().flat_map(|&x| [x * cg, x * ce]).collect();
        prop_assert!(atom_entropy(&v, n_trunc) < 1e-9);
    }

    #[test]
    fn reduced_density_is_a_state(
        n_trunc in 1usize..12,
        raw in prop::collection::vec(-1.0f64..1.0, 26),
    ) {
        let dim = 2 * (n_trunc + 1);
        let Some(v) = normalized(raw[..dim].to_vec()) else { return Ok(()) };
        let rho = reduced_density_atom(&v, space(n_trunc)).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        prop_assert!(rho.eigenvalues().unwrap().iter().all(|&l| l > -1e-12));
        prop_assert_eq!(rho.get(0, 1), rho.get(1, 0));
    }

    #[test]
    fn spectrum_is_even_in_drive(
        w0 in 0.0f64..2.0,
        g in 0.0f64..2.0,
        eps in 0.0f64..2.0,
    ) {
        let n = 10;
        let dim = 2 * (n + 1);
        let minus = common::direct_asym_qrm(w0, g, -eps, n);
        let flipped = eigenvalues(&OperatorMatrix::from_fn(dim, |i, j| minus[i * dim + j]), dim).unwrap();
        let lib = eigenvalues(&build_asym_qrm(ModelParams::new(w0, g, eps), space(n)).unwrap().matrix, dim).unwrap();
        for (a, b) in lib.iter().zip(&flipped) {
            prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
        }
    }

    #[test]
    fn frames_are_isospectral(
        w0 in 0.0f64..2.0,
        g in 0.0f64..3.0,
        eps in 0.0f64..2.0,
    ) {
        let s = space(30);
        let p = ModelParams::new(w0, g, eps);
        let lab = eigenvalues(&build_asym_qrm(p, s).unwrap().matrix, s.total_dim()).unwrap();
        let rot = eigenvalues(&build_polaron_frame(p, s).unwrap().matrix, s.total_dim()).unwrap();
        for (a, b) in lab.iter().zip(&rot) {
            prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn sweep_gaps_are_non_negative_and_entropies_bounded(
        g_lo in 0.0f64..2.0,
        width in 0.01f64..1.0,
        eps in 0.0f64..1.0,
    ) {
        let axis = Axis::new(SweepAxis::G, linspace(g_lo, g_lo + width, 7)).unwrap();
        let r = sweep(ModelKind::AsymQrm, ModelParams::new(1.0, 0.0, eps), axis, 5, Truncation::Fixed(40)).unwrap();
        for level in 1..5 {
            prop_assert!(r.gaps(level).unwrap().iter().all(|&d| d >= 0.0));
        }
        for p in &r.points {
            prop_assert!(p.entropies.iter().all(|&s| (0.0..=1.0 + 1e-12).contains(&s)));
        }
    }

    #[test]
    fn degenerate_coupling_equates_the_doublet(n in 0usize..6, delta in 0.01f64..0.99) {
        let g = find_degenerate_coupling(n, delta).unwrap();
        prop_assert!(g > 0.0 && g <= 1.0);
        let p = ModelParams::new(1.0 + delta, g, 0.0);
        let upper = jc_spectrum(&p, n, Branch::Plus).unwrap().energy;
        let lower = jc_spectrum(&p, n + 1, Branch::Minus).unwrap().energy;
        prop_assert!((upper - lower).abs() < 1e-9);
    }

    #[test]
    fn splitting_is_linear_in_drive(eps in 0.0f64..0.01, scale in 0.1f64..1.0) {
        let a = degenerate_perturbation(1, 0.5, eps).unwrap().splitting();
        let b = degenerate_perturbation(1, 0.5, eps * scale).unwrap().splitting();
        prop_assert!(a >= 0.0);
        prop_assert!((b - a * scale).abs() < 1e-12);
    }
}
