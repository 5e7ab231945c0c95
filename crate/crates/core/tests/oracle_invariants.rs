use proptest::prelude::*;
use sphere_extremal::extremal::{euler_lagrange_residual, extremal_states, solve_euler_lagrange, ElSolution};
use sphere_extremal::functionals::{check_momentum_bound, ModelParams};
use sphere_extremal::oracle::{extremize_on_sphere, project_to_sphere, random_sphere_point, Direction};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projection_is_idempotent(seed in 0u64..10_000, q in 0.1f64..20.0) {
        let w = random_sphere_point::<f64>(9, q, seed).unwrap();
        prop_assert!((w.norm_sq() - q).abs() < 1e-12 * q);
        let again = project_to_sphere(&w, q).unwrap();
        prop_assert!((&again - &w).norm() < 1e-14 * q.sqrt().max(1.0));
    }

    #[test]
    fn iterates_respect_constraint_and_energy_bound(seed in 0u64..10_000, omega in 0.0f64..2.0, q in 0.2f64..15.0) {
        let p = ModelParams::new(omega, q).unwrap();
        let (mx, _) = extremal_states(&p, 7).unwrap();
        let init = random_sphere_point(7, q, seed).unwrap();
        let r = extremize_on_sphere(&p, Direction::Ascend, &init, 1.0, 1e-10, 5_000).unwrap();
        prop_assert!(r.max_constraint_violation < 1e-10);
        prop_assert!(r.max_energy <= mx.energy_original + 1e-9);
    }

    #[test]
    fn momentum_bound_holds(seed in 0u64..10_000, omega in 0.0f64..2.0, q in 0.2f64..15.0) {
        let p = ModelParams::new(omega, q).unwrap();
        let w = random_sphere_point(8, q, seed).unwrap();
        let b = check_momentum_bound(&w, &p).unwrap();
        prop_assert!(b.moment.abs() <= b.bound + 1e-12);
        prop_assert!(!b.saturated);
    }

    #[test]
    fn unique_solutions_solve_the_equation(lambda in -3.0f64..3.0, omega in 0.0f64..2.0) {
        let p = ModelParams::new(omega, 1.0).unwrap();
        if let ElSolution::Unique { state, .. } = solve_euler_lagrange(lambda, &p, 6).unwrap() {
            prop_assert!(euler_lagrange_residual(&state, lambda, &p) < 1e-12 * (1.0 + state.norm()));
        }
    }
}
