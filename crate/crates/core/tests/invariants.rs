//! Property tests for identities that hold for every domain, symbol and point.

use blochkit::bloch::{omega_lower_bound, omega_upper_bound, q_value, q_value_oracle};
use blochkit::constants::bloch_constant;
use blochkit::domain::{bergman_metric, rho_from_origin, sample_interior, Domain, PathOptions, Point};
use blochkit::operator::spectrum_cloud;
use blochkit::random::{complex_in_disk, random_polynomial, seeded_rng};
use blochkit::symbols::SymbolExpr;
use num_complex::Complex64;
use proptest::prelude::*;

/// Domains with an implemented metric.
fn domains() -> Vec<Domain> {
    ["disk", "ball:2", "ball:3", "polydisk:2", "polydisk:3", "product(ball:2,disk)", "product(polydisk:2,ball:3)"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn domain() -> impl Strategy<Value = Domain> {
    prop::sample::select(domains())
}

fn point(d: &Domain, seed: u64) -> Point {
    sample_interior(d, 1, seed).unwrap().remove(0)
}

fn poly(d: &Domain, seed: u64) -> SymbolExpr {
    random_polynomial(&mut seeded_rng(seed), d.ambient_dim(), 3, 0.5)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_ignores_constants_and_scales_with_modulus(d in domain(), s in any::<u64>(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let z = point(&d, s);
        let f = poly(&d, s ^ 1);
        let lambda = Complex64::new(re, im);
        let shifted = f.scale(lambda).add(&SymbolExpr::constant(Complex64::new(0.3, -0.7), d.ambient_dim())).unwrap();
        let q = q_value(&d, &f, &z).unwrap();
        prop_assert!(close(q_value(&d, &shifted, &z).unwrap(), lambda.norm() * q, 1e-10));
    }

    #[test]
    fn q_is_subadditive_and_obeys_the_product_rule(d in domain(), s in any::<u64>()) {
        let z = point(&d, s);
        let (f, g) = (poly(&d, s ^ 2), poly(&d, s ^ 3));
        let (qf, qg) = (q_value(&d, &f, &z).unwrap(), q_value(&d, &g, &z).unwrap());
        let sum = q_value(&d, &f.add(&g).unwrap(), &z).unwrap();
        prop_assert!(sum <= (qf + qg) * (1.0 + 1e-12) + 1e-300);
        let prod = q_value(&d, &f.mul(&g).unwrap(), &z).unwrap();
        let fz = f.evaluate(&z).unwrap().norm();
        let gz = g.evaluate(&z).unwrap().norm();
        prop_assert!(prod <= (fz * qg + gz * qf) * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn oracle_is_a_lower_bound(d in domain(), s in any::<u64>()) {
        let z = point(&d, s);
        let f = poly(&d, s ^ 4);
        let q = q_value(&d, &f, &z).unwrap();
        let o = q_value_oracle(&d, &f, &z, 16).unwrap();
        prop_assert!(o <= q);
        // the analytic direction is always tried, so the gap is rounding only
        prop_assert!(close(o, q, 1e-9));
    }

    #[test]
    fn q_is_invariant_under_circle_rotation(d in domain(), s in any::<u64>(), theta in 0.0..std::f64::consts::TAU) {
        // f linear, so f(e^{it} z) = e^{it} f(z) and the metric is circular
        let n = d.ambient_dim();
        let mut rng = seeded_rng(s ^ 5);
        let a: Vec<String> = (0..n).map(|k| {
            let c = complex_in_disk(&mut rng, 1.0);
            format!("({}{:+}i)*z{}", c.re, c.im, k + 1)
        }).collect();
        let f = SymbolExpr::parse(&a.join(" + "), n).unwrap();
        let z = point(&d, s);
        let rotated = Point(z.coords().iter().map(|c| c * Complex64::from_polar(1.0, theta)).collect());
        prop_assert!(close(q_value(&d, &f, &z).unwrap(), q_value(&d, &f, &rotated).unwrap(), 1e-9));
    }

    #[test]
    fn bergman_metric_is_hermitian_positive(d in domain(), s in any::<u64>()) {
        let h = bergman_metric(&d, &point(&d, s)).unwrap();
        prop_assert!(h.hermitian_defect() < 1e-9);
        prop_assert!(h.is_positive_definite());
    }

    #[test]
    fn omega_and_rho_brackets_are_ordered(d in domain(), s in any::<u64>()) {
        let z = point(&d, s);
        let lo = omega_lower_bound(&d, z.coords());
        let hi = omega_upper_bound(&d, z.coords());
        prop_assert!(lo >= 0.0 && lo <= hi * (1.0 + 1e-12));
        let rho = rho_from_origin(&d, &z, PathOptions::default()).unwrap();
        prop_assert!(rho.is_well_formed());
        prop_assert!(lo <= rho.upper_or_inf() * (1.0 + 1e-9));
    }

    #[test]
    fn spectrum_stays_under_the_sup_majorant(d in domain(), s in any::<u64>()) {
        let f = poly(&d, s ^ 6);
        let cloud = spectrum_cloud(&d, &f, 50, s).unwrap();
        let m = f.sup_majorant().unwrap();
        prop_assert!(cloud.points.iter().all(|w| w.norm() <= m * (1.0 + 1e-12)));
    }
}

#[test]
fn ball_constants_follow_the_dimension_formula() {
    for n in 1..=8 {
        let c = bloch_constant(&Domain::ball(n).unwrap()).unwrap();
        let expected = if n == 1 { 1.0 } else { (2.0 / (n as f64 + 1.0)).sqrt() };
        assert!((c - expected).abs() < 1e-12, "n = {n}: {c}");
    }
}
