use std::f64::consts::PI;

use proptest::prelude::*;

use aqrm::ansatz;
use aqrm::optimize::{fixed_weight_solve, minimize_energy, stationarity_residual, OptimizerConfig};
use aqrm::oracle::{converged_ground_state, ground_state, rayleigh_quotient, vector_moments, FockTruncation};
use aqrm::symmetry::canonicalize;
use aqrm::verify::expand_with_growth;
use aqrm::{ModelParams, VariationalParams};

fn params(alpha_max: f64, gamma_max: f64) -> impl Strategy<Value = VariationalParams> {
    (0.0..=alpha_max, 0.0..=PI, 0.0..=1.0f64, -gamma_max..=gamma_max)
        .prop_map(|(alpha, theta, p, gamma)| VariationalParams { alpha, theta, p, gamma })
        .prop_filter("non-degenerate", |v| ansatz::normalization(v).is_ok())
}

fn models() -> impl Strategy<Value = ModelParams> {
    (0.0..=3.0f64, 0.5..=2.0f64, -2.0..=2.0f64, -3.0..=3.0f64)
        .prop_map(|(delta, omega, g, epsilon)| ModelParams { delta, omega, g, epsilon })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn observables_stay_in_range(v in params(5.0, 1.0)) {
        let t = ansatz::terms(&v).unwrap();
        prop_assert!(t.norm > 0.0 && t.norm <= 2.0);
        prop_assert!(t.photon_number >= -1e-12);
        prop_assert!(t.sz.abs() <= 1.0 + 1e-12);
        prop_assert!(t.sx.abs() <= 1.0 + 1e-12);
        prop_assert!(t.correlation <= 0.0);
    }

    #[test]
    fn regularized_population_matches_literal(v in params(3.0, 0.0)) {
        let (s, c) = v.theta.sin_cos();
        prop_assume!(c.abs() > 1e-6);
        let n = ansatz::normalization(&v).unwrap();
        let reg = ansatz::atomic_population(&v).unwrap();
        let lit = ansatz::atomic_population_unregularized(&v).unwrap();
        let tol = 1e-12 * reg.abs() + 4.0 * f64::EPSILON * (n + s * s) / (n * c).abs();
        prop_assert!((reg - lit).abs() <= tol, "{reg} vs {lit}, tol {tol}");
    }

    #[test]
    fn weight_swap_symmetry_without_bias(v in params(3.0, 0.5), m in models()) {
        let m = ModelParams { epsilon: 0.0, ..m };
        let swapped = VariationalParams { p: v.q(), ..v };
        prop_assume!(ansatz::normalization(&swapped).is_ok());
        let a = ansatz::energy(&m, &v).unwrap();
        let b = ansatz::energy(&m, &swapped).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn canonical_form_preserves_observables(v in params(3.0, 0.5), m in models()) {
        let (c, flags) = canonicalize(&m);
        prop_assert!(c.g >= 0.0 && c.epsilon >= 0.0);
        let restored = flags.restore(&ansatz::observables(&c, &v).unwrap());
        let energy = aqrm::ObservableSet::energy_from_parts(
            &m, restored.photon_number, restored.sz, restored.sx, restored.correlation,
        );
        prop_assert!((energy - restored.energy).abs() <= 1e-12 * (1.0 + energy.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_forms_match_expanded_vector(v in params(3.0, 0.5), m in models()) {
        let psi = expand_with_growth(&v).unwrap();
        let mo = vector_moments(&psi);
        let t = ansatz::terms(&v).unwrap();
        for (a, b) in [
            (t.norm, mo.norm),
            (t.photon_number, mo.photon_number),
            (t.sz, mo.sz),
            (t.sx, mo.sx),
            (t.correlation, mo.correlation),
            (t.energy(&m), rayleigh_quotient(&m, &psi).unwrap()),
        ] {
            prop_assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn trial_energy_bounds_ground_energy(v in params(3.0, 0.5), m in models()) {
        let exact = converged_ground_state(&m, 1e-10).unwrap().energy;
        prop_assert!(ansatz::energy(&m, &v).unwrap() >= exact - 1e-9);
    }

    #[test]
    fn spectrum_invariant_under_sign_flips(m in models()) {
        let t = FockTruncation::initial_for(&m);
        let e = |x: ModelParams| ground_state(&x, t).unwrap().energy;
        let base = e(m);
        let flipped_g = e(ModelParams { g: -m.g, ..m });
        let flipped_eps = e(ModelParams { epsilon: -m.epsilon, ..m });
        prop_assert!((base - flipped_g).abs() <= 1e-10 * m.omega);
        prop_assert!((base - flipped_eps).abs() <= 1e-10 * m.omega);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimum_is_bounded_stationary_and_below_fixed_weight(m in models()) {
        let (c, _) = canonicalize(&m);
        let cfg = OptimizerConfig::default();
        let free = minimize_energy(&c, &cfg).unwrap();
        let exact = converged_ground_state(&c, 1e-10).unwrap().energy;
        prop_assert!(free.e_var >= exact - 1e-9);
        prop_assert!(stationarity_residual(&c, &free.v_opt).residual <= 1e-5 * c.omega);
        let fixed = fixed_weight_solve(&c, &cfg).unwrap();
        prop_assert!(fixed.e_var >= free.e_var - 1e-10);
    }

    #[test]
    fn optimizer_is_deterministic(m in models()) {
        let (c, _) = canonicalize(&m);
        let cfg = OptimizerConfig::default();
        let a = minimize_energy(&c, &cfg).unwrap();
        let b = minimize_energy(&c, &cfg).unwrap();
        prop_assert_eq!(a.v_opt, b.v_opt);
        prop_assert_eq!(a.e_var.to_bits(), b.e_var.to_bits());
    }
}
