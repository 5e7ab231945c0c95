use proptest::prelude::*;
use sphere_extremal::functionals::{
    angular_momentum, energy_offset, enstrophies, kinetic_energy, pseudo_energy, shifted_energy, ModelParams,
};
use sphere_extremal::spharm::{
    analyze, apply_green, apply_laplacian, build_basis, inner_product, mode_count, synthesize, SpectralField,
};

fn field(l_max: usize) -> impl Strategy<Value = SpectralField<f64>> {
    prop::collection::vec(-2.0f64..2.0, mode_count(l_max))
        .prop_map(move |c| SpectralField::from_coeffs(l_max, c).unwrap())
}

fn sized_field(max_l: usize) -> impl Strategy<Value = SpectralField<f64>> {
    (1..=max_l).prop_flat_map(field)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trip(w in sized_field(31)) {
        let t = build_basis::<f64>(w.truncation()).unwrap();
        let back = analyze(&synthesize(&w, &t).unwrap(), &t).unwrap();
        let scale = w.norm().max(1.0);
        for (a, b) in w.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((a - b).abs() < 1e-10 * scale);
        }
    }

    #[test]
    fn parseval(w in sized_field(24)) {
        let t = build_basis::<f64>(w.truncation()).unwrap();
        let g = synthesize(&w, &t).unwrap();
        let q = inner_product(&g, &g, &t).unwrap();
        prop_assert!((q - w.norm_sq()).abs() < 1e-10 * w.norm_sq().max(1.0));
    }

    #[test]
    fn green_is_self_adjoint_inverse_laplacian(u in field(12), v in field(12)) {
        let lhs = u.dot(&apply_green(&v)).unwrap();
        let rhs = apply_green(&u).dot(&v).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-13 * (1.0 + lhs.abs()));
        let id = apply_laplacian(&apply_green(&u));
        prop_assert!((&id - &u).norm() < 1e-13 * u.norm().max(1.0));
        prop_assert!(u.dot(&apply_green(&u)).unwrap() <= 0.0);
    }

    #[test]
    fn functional_identities(w in field(10), omega in 0.0f64..3.0) {
        let p = ModelParams::new(omega, 1.0).unwrap();
        let h = pseudo_energy(&w, &p);
        prop_assert!((h - kinetic_energy(&w) - omega * angular_momentum(&w, &p)).abs() < 1e-12 * (1.0 + h.abs()));
        let shifted = shifted_energy(&w, &p);
        prop_assert!(shifted >= 0.0);
        prop_assert!((shifted - (h - energy_offset(&p))).abs() < 1e-12 * (1.0 + shifted));
    }

    #[test]
    fn spectral_and_grid_functionals_agree(w in field(14), omega in 0.0f64..2.0) {
        let t = build_basis::<f64>(14).unwrap();
        let p = ModelParams::new(omega, 1.0).unwrap();
        let wg = synthesize(&w, &t).unwrap();
        let psi = synthesize(&apply_green(&w), &t).unwrap();
        let e_grid = -0.5 * inner_product(&psi, &wg, &t).unwrap();
        let e = kinetic_energy(&w);
        prop_assert!((e - e_grid).abs() < 1e-10 * e.max(1.0));

        let q = t.grid_from_fn(|mu, _| 2.0 * omega * mu);
        let total: Vec<f64> = wg.values().iter().zip(q.values()).map(|(a, b)| a + b).collect();
        let total = sphere_extremal::spharm::GridField::from_values(t.n_lat(), t.n_lon(), total).unwrap();
        let g_grid = inner_product(&total, &total, &t).unwrap();
        let (_, g) = enstrophies(&w, &p);
        prop_assert!((g - g_grid).abs() < 1e-10 * g.max(1.0));

        let mu = t.grid_from_fn(|mu, _| mu);
        let lam_grid = 0.5 * inner_product(&wg, &mu, &t).unwrap();
        prop_assert!((angular_momentum(&w, &p) - lam_grid).abs() < 1e-10);
    }

    #[test]
    fn lower_truncation_analyzes_identically(w in field(10)) {
        let t = build_basis::<f64>(21).unwrap();
        let up = w.resized(21);
        let back = analyze(&synthesize(&up, &t).unwrap(), &t).unwrap();
        prop_assert!((&back - &up).norm() < 1e-10 * w.norm().max(1.0));
    }
}

#[test]
fn single_precision_round_trip() {
    let t = build_basis::<f32>(10).unwrap();
    let w = SpectralField::<f32>::random(10, 5, 1.0);
    let back = analyze(&synthesize(&w, &t).unwrap(), &t).unwrap();
    assert!((&back - &w).norm() < 1e-4 * w.norm());
}
