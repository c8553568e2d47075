use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use besselpoly::bigcomplex::scaled_to_rug;
use besselpoly::uniform_airy::{d_closed, d_stirling, theta_airy, theta_reference};
use besselpoly::{BigComplex, Problem, ProblemParams};

type C = Complex64;

fn shared() -> &'static Problem {
    static P: OnceLock<Problem> = OnceLock::new();
    P.get_or_init(|| Problem::new(&ProblemParams::new(20, 1.2).unwrap()).unwrap())
}

fn near_cut(p: &Problem, z: C, tol: f64) -> bool {
    p.mapping.cut().windows(2).any(|e| {
        let d = e[1] - e[0];
        let t = (((z - e[0]) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
        (z - (e[0] + d * t)).norm() < tol
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_xi_matches_quadrature(r in 0.05f64..30.0, t in 0.0f64..std::f64::consts::PI) {
        let p = shared();
        let z = C::from_polar(r, t);
        prop_assume!((z - p.z1()).norm() > 0.1 && !near_cut(p, z, 1e-3));
        let m = &p.mapping;
        let d = (m.xi_closed(z).unwrap() - m.xi_quadrature(z).unwrap()).norm();
        prop_assert!(d < 1e-9, "z = {z}: {d:e}");
    }

    #[test]
    fn xi_is_conjugate_symmetric(x in -20.0f64..20.0, y in 0.01f64..20.0) {
        let p = shared();
        let z = C::new(x, y);
        prop_assume!((z - p.z1()).norm() > 1e-3);
        let up = p.point(z).unwrap();
        let down = p.point(z.conj()).unwrap();
        prop_assert!((up.xi - down.xi.conj()).norm() <= 1e-12 * up.xi.norm());
    }

    #[test]
    fn theta_airy_matches_direct_sum(r in 0.2f64..9.0, t in 0.0f64..std::f64::consts::PI) {
        let p = shared();
        let z = C::from_polar(r, t);
        prop_assume!((z - p.z1()).norm() > 0.5);
        let exact = theta_reference(p, z);
        let approx = BigComplex::from_rug(scaled_to_rug(&theta_airy(p, z, 6).unwrap(), exact.precision_bits()));
        prop_assert!(approx.rel_diff(&exact) < 1e-6, "z = {z}");
    }

    #[test]
    fn d_closed_forms_match_bernoulli_form(alpha in -0.9f64..10.0, k in 0usize..4) {
        let (a, b) = (d_closed(alpha, k), d_stirling(alpha, k));
        prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300), "{a:e} {b:e}");
    }
}
