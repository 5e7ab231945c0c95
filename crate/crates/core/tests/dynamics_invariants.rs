use proptest::prelude::*;
use sphere_extremal::bve::{integrate, jacobian, Integrator};
use sphere_extremal::functionals::ModelParams;
use sphere_extremal::spharm::{build_basis, mode_count, SpectralField};

fn field(l_max: usize, amp: f64) -> impl Strategy<Value = SpectralField<f64>> {
    prop::collection::vec(-amp..amp, mode_count(l_max)).prop_map(move |c| SpectralField::from_coeffs(l_max, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn jacobian_is_antisymmetric(a in field(8, 1.0), b in field(8, 1.0)) {
        let t = build_basis::<f64>(8).unwrap();
        let ab = jacobian(&a, &b, &t).unwrap();
        let ba = jacobian(&b, &a, &t).unwrap();
        prop_assert!((&ab + &ba).norm() < 1e-12 * (1.0 + ab.norm()));
        prop_assert!(jacobian(&a, &a, &t).unwrap().norm() < 1e-12 * (1.0 + a.norm_sq()));
    }

    #[test]
    fn conservation_over_short_runs(w0 in field(10, 0.5), omega in 0.0f64..2.0) {
        let t = build_basis::<f64>(10).unwrap();
        let p = ModelParams::new(omega, 1.0).unwrap();
        let log = integrate(&w0, &p, &t, 2e-3, 0.5, 50, None).unwrap();
        prop_assert!(log.max_relative_drift(|m| m.h) < 1e-9);
        prop_assert!(log.max_relative_drift(|m| m.total_enstrophy) < 1e-9);
        let a0 = log.monitors[0].ang_mom;
        prop_assert!(log.monitors.iter().all(|m| (m.ang_mom - a0).abs() < 1e-12 * (1.0 + a0.abs())));
    }

    #[test]
    fn time_reversal(w0 in field(8, 0.5), omega in 0.0f64..2.0) {
        let t = build_basis::<f64>(8).unwrap();
        let p = ModelParams::new(omega, 1.0).unwrap();
        let it = Integrator::new(p, &t);
        let mut w = w0.clone();
        for _ in 0..200 {
            w = it.step(&w, 2.5e-3).unwrap();
        }
        for _ in 0..200 {
            w = it.step(&w, -2.5e-3).unwrap();
        }
        prop_assert!((&w - &w0).norm() < 1e-6);
    }

    #[test]
    fn zonal_states_stay_zonal(c in prop::collection::vec(-1.0f64..1.0, 10), omega in 0.0f64..2.0) {
        let entries: Vec<_> = c.iter().enumerate().map(|(i, &a)| (i + 1, 0i64, a)).collect();
        let w0 = SpectralField::from_modes(10, &entries).unwrap();
        let t = build_basis::<f64>(10).unwrap();
        let p = ModelParams::new(omega, 1.0).unwrap();
        let log = integrate(&w0, &p, &t, 1e-2, 0.3, 30, None).unwrap();
        let w = log.final_state().unwrap();
        prop_assert!(w.is_zonal());
        prop_assert!((w - &w0).norm() < 1e-12);
    }

    #[test]
    fn rossby_haurwitz_single_modes(l in 1usize..7, m_raw in 1i64..7, amp in 0.05f64..1.0, omega in 0.1f64..2.0) {
        let m = m_raw.min(l as i64);
        let t = build_basis::<f64>(8).unwrap();
        let p = ModelParams::new(omega, 1.0).unwrap();
        let w0 = SpectralField::from_modes(8, &[(l, m, amp)]).unwrap();
        let log = integrate(&w0, &p, &t, 2e-3, 1.0, 500, None).unwrap();
        let c = -2.0 * omega / (l * (l + 1)) as f64;
        let w = log.final_state().unwrap();
        let ph = m as f64 * c * 1.0;
        prop_assert!((w.get(l, m) - amp * ph.cos()).abs() < 1e-6);
        prop_assert!((w.get(l, -m) - amp * ph.sin()).abs() < 1e-6);
    }
}
