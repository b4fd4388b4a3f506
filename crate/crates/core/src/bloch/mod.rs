//! Q_f, Bloch seminorms and norms, the extremal functions and the
//! little-Bloch decay diagnostic.

mod decay;
mod omega;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::domain::{
    bergman_metric_scaled, metric_inverse_form, rho_between_upper, sample_interior, Domain,
    MetricScale, Point,
};
use crate::error::{BlochError, Result};
use crate::estimate::EstimateInterval;
use crate::random::seeded_rng;
use crate::search::{maximize, SamplingConfig};
use crate::symbols::SymbolExpr;

pub use decay::{
    decay_profile_with, little_star_membership_diagnostic, DecayProfile, DecayReport, DecayVerdict,
    DECAY_RATIO,
};
pub use omega::{
    dual_norm, omega_empirical_lower, omega_exact_ball, omega_lower_bound, omega_polydisk_bounds,
    omega_upper_bound, OmegaConfig, OmegaKind, OmegaWitness,
};

/// Seed of the fixed direction set used by [`q_value_oracle`].
const ORACLE_SEED: u64 = 0x0b10c4;

pub(crate) fn check_arity(d: &Domain, f: &SymbolExpr) -> Result<()> {
    if f.arity() == d.ambient_dim() {
        Ok(())
    } else {
        Err(BlochError::ArityMismatch(d.ambient_dim(), f.arity()))
    }
}

/// `Q_f(z)` without membership checks.
pub(crate) fn q_unchecked(d: &Domain, f: &SymbolExpr, z: &[Complex64], scale: MetricScale) -> Result<f64> {
    let (_, g) = f.value_and_gradient(z)?;
    Ok(metric_inverse_form(d, z, &g, scale).sqrt())
}

/// `Q_f(z) = sup_u |grad f(z) u| / H_z(u, conj u)^{1/2}`, in closed form as
/// `(g^T H_z^{-1} conj g)^{1/2}`.
pub fn q_value(d: &Domain, f: &SymbolExpr, z: &Point) -> Result<f64> {
    q_value_scaled(d, f, z, MetricScale::Distance)
}

pub fn q_value_scaled(d: &Domain, f: &SymbolExpr, z: &Point, scale: MetricScale) -> Result<f64> {
    d.require_metric()?;
    check_arity(d, f)?;
    d.require_interior(z)?;
    q_unchecked(d, f, z.coords(), scale)
}

/// Brute-force `Q_f(z)`: the largest ratio `|g . u| / (u* H u)^{1/2}` over
/// `ndirs` fixed pseudo-random directions and the direction `H^{-1} conj g`,
/// using the assembled metric matrix.
///
/// The result is rounded down by the error bound `gamma_k`, `k = 8 (n + 1)^2`,
/// of the ratio and of the closed form, so it stays a lower bound for
/// [`q_value`] in floating point too.
pub fn q_value_oracle(d: &Domain, f: &SymbolExpr, z: &Point, ndirs: usize) -> Result<f64> {
    d.require_metric()?;
    check_arity(d, f)?;
    let h = bergman_metric_scaled(d, z, MetricScale::Distance)?;
    let g = f.gradient(z)?;
    let ratio = |u: &[Complex64]| {
        let num: Complex64 = g.iter().zip(u).map(|(a, b)| a * b).sum();
        let den = h.quadratic_form(u);
        if den > 0.0 {
            num.norm() / den.sqrt()
        } else {
            0.0
        }
    };
    let conj_g: Vec<Complex64> = g.iter().map(|c| c.conj()).collect();
    let mut best = if conj_g.iter().all(|c| c.norm_sqr() == 0.0) {
        0.0
    } else {
        ratio(&h.solve(&conj_g)?)
    };
    let mut rng = seeded_rng(ORACLE_SEED);
    let n = z.dim();
    for _ in 0..ndirs.saturating_sub(1) {
        let u: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        best = f64::max(best, ratio(&u));
    }
    let k = 8.0 * ((n + 1) * (n + 1)) as f64;
    let gamma = k * f64::EPSILON / (1.0 - k * f64::EPSILON);
    Ok(best * (1.0 - gamma))
}

/// Sampled lower bound for `beta_f = sup Q_f`; the upper end is left
/// unbounded (see [`beta_upper_bound`] for a certified one).
pub fn beta_estimate(d: &Domain, f: &SymbolExpr, cfg: &SamplingConfig) -> Result<EstimateInterval> {
    beta_estimate_scaled(d, f, cfg, MetricScale::Distance)
}

pub fn beta_estimate_scaled(
    d: &Domain,
    f: &SymbolExpr,
    cfg: &SamplingConfig,
    scale: MetricScale,
) -> Result<EstimateInterval> {
    d.require_metric()?;
    check_arity(d, f)?;
    if f.constant_value()?.is_some() {
        return Ok(EstimateInterval::exact(0.0));
    }
    let (v, p) = maximize(d, |z| q_unchecked(d, f, z, scale), cfg)?;
    Ok(EstimateInterval::sampled(v, cfg.samples, cfg.seed).with_argmax(Some(p)))
}

/// Certified upper bound for `beta_f` from coefficient majorants of the
/// partial derivatives: on every ball and polydisk factor `Q_f^2` is at most
/// the sum of `|d_j f|^2` over the factor, divided by the ball scale.
pub fn beta_upper_bound(d: &Domain, f: &SymbolExpr, scale: MetricScale) -> Option<f64> {
    if !d.has_metric() || f.arity() != d.ambient_dim() {
        return None;
    }
    let m = f.gradient_majorants()?;
    let mut total = 0.0;
    for (factor, off) in d.factor_slices() {
        let k = factor.ambient_dim();
        let s: f64 = m[off..off + k].iter().map(|x| x * x).sum();
        total += match (factor, scale) {
            (Domain::Ball(n), MetricScale::BlochConstant) => s * 2.0 / (*n as f64 + 1.0),
            _ => s,
        };
    }
    Some(total.sqrt())
}

/// `||f||_B = |f(0)| + beta_f` with the sampled `beta` estimate.
pub fn bloch_norm_estimate(d: &Domain, f: &SymbolExpr, cfg: &SamplingConfig) -> Result<EstimateInterval> {
    bloch_norm_estimate_scaled(d, f, cfg, MetricScale::Distance)
}

pub fn bloch_norm_estimate_scaled(
    d: &Domain,
    f: &SymbolExpr,
    cfg: &SamplingConfig,
    scale: MetricScale,
) -> Result<EstimateInterval> {
    let beta = beta_estimate_scaled(d, f, cfg, scale)?;
    let at_zero = f.evaluate(&Point::origin(d.ambient_dim()))?.norm();
    Ok(beta.shift(at_zero))
}

/// [`bloch_norm_estimate_scaled`] with the majorant upper end attached.
pub fn bloch_norm_certified(
    d: &Domain,
    f: &SymbolExpr,
    cfg: &SamplingConfig,
    scale: MetricScale,
) -> Result<EstimateInterval> {
    let est = bloch_norm_estimate_scaled(d, f, cfg, scale)?;
    if est.upper.is_some() {
        return Ok(est);
    }
    let at_zero = f.evaluate(&Point::origin(d.ambient_dim()))?.norm();
    Ok(est.with_upper(beta_upper_bound(d, f, scale).map(|b| at_zero + b)))
}

/// Lower bound for `beta_f` from difference quotients `|f(z) - f(w)| / rho(z, w)`
/// with an upper bound for the distance.
///
/// Half of the pairs are independent samples; the other half pair each
/// sample with a nearby point, where the quotient approaches `Q_f`.
pub fn lipschitz_beta_estimate(d: &Domain, f: &SymbolExpr, npairs: usize, seed: u64) -> Result<f64> {
    d.require_metric()?;
    check_arity(d, f)?;
    let pts = sample_interior(d, 2 * npairs.max(1), seed)?;
    let mut rng = seeded_rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut best: f64 = 0.0;
    for i in 0..npairs {
        let z = &pts[2 * i];
        let w = if i % 2 == 0 {
            pts[2 * i + 1].clone()
        } else {
            let step = 1e-3 * (1.0 - z.max_modulus());
            let w = Point(
                z.0.iter()
                    .map(|c| c + Complex64::new(rng.gen_range(-step..step), rng.gen_range(-step..step)))
                    .collect(),
            );
            if !d.contains(&w)? {
                continue;
            }
            w
        };
        let rho = rho_between_upper(d, z, &w)?;
        if rho > 0.0 {
            let diff = (f.evaluate(z)? - f.evaluate(&w)?).norm();
            best = best.max(diff / rho);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sym(t: &str, n: usize) -> SymbolExpr {
        SymbolExpr::parse(t, n).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disk_identity_at_origin() {
        assert_eq!(q_value(&Domain::Disk, &sym("z1", 1), &Point::origin(1)).unwrap(), 1.0);
    }

    #[test]
    fn polydisk_product_example() {
        let d = Domain::Polydisk(2);
        let f = sym("z1*z2", 2);
        let z = Point::from_real(&[0.5, 0.0]);
        assert_relative_eq!(q_value(&d, &f, &z).unwrap(), 0.5, epsilon = 1e-15);
        // direction-sampling oracle without the analytic direction
        let mut best: f64 = 0.0;
        for k in 0..4096 {
            let th = std::f64::consts::TAU * k as f64 / 4096.0;
            let u = [c(th.cos(), 0.0), c(th.sin(), 0.0)];
            let num = 0.0 * u[0] + 0.5 * u[1];
            let den = (u[0].norm_sqr() * 16.0 / 9.0 + u[1].norm_sqr()).sqrt();
            best = best.max(num.norm() / den);
        }
        assert_relative_eq!(best, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn h_form_at_its_parameter_is_one() {
        let w = c(0.4, -0.3);
        let f = SymbolExpr::h_form(1, w, 2).unwrap();
        let z = Point(vec![c(0.2, 0.1), w]);
        let q = q_value(&Domain::Polydisk(2), &f, &z).unwrap();
        // (1 - |w|^2) |w|^2 / ||w|^2 - w^2 conj(w)^2|
        let printed = (1.0 - w.norm_sqr()) * w.norm_sqr() / (w.norm_sqr() - w * w * w.conj() * w.conj()).norm();
        assert_relative_eq!(q, printed, epsilon = 1e-12);
        assert_relative_eq!(q, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn oracle_never_exceeds_closed_form() {
        let d = Domain::Ball(3);
        let f = sym("z1^2*z3 - (0.3+0.2i)*z2 + z1*z2*z3", 3);
        let z = Point(vec![c(0.2, 0.3), c(-0.4, 0.1), c(0.1, -0.5)]);
        let q = q_value(&d, &f, &z).unwrap();
        let o = q_value_oracle(&d, &f, &z, 4096).unwrap();
        assert!(o <= q);
        assert!((q - o) / q <= 1e-3);
        let disk = q_value_oracle(&Domain::Disk, &sym("z1^3", 1), &Point::from_real(&[0.4]), 1).unwrap();
        assert_relative_eq!(disk, (1.0 - 0.16) * 3.0 * 0.16, epsilon = 1e-14);
    }

    #[test]
    fn q_invariances() {
        let d = Domain::Polydisk(2);
        let f = sym("z1*z2^2 + fw(1, 0.4i)", 2);
        let z = Point(vec![c(0.3, 0.5), c(-0.6, 0.2)]);
        let q = q_value(&d, &f, &z).unwrap();
        let shifted = f.add(&SymbolExpr::constant(c(3.0, 1.0), 2)).unwrap();
        assert_relative_eq!(q_value(&d, &shifted, &z).unwrap(), q, epsilon = 1e-14);
        let scaled = f.scale(c(0.0, -2.0));
        assert_relative_eq!(q_value(&d, &scaled, &z).unwrap(), 2.0 * q, epsilon = 1e-14);
    }

    #[test]
    fn q_rejects_bad_inputs() {
        let f = sym("z1", 2);
        assert!(matches!(
            q_value(&Domain::CartanIV(5), &sym("z1", 5), &Point::origin(5)),
            Err(BlochError::UnsupportedMetric(_))
        ));
        assert_eq!(
            q_value(&Domain::Ball(2), &f, &Point::from_real(&[0.9, 0.9])).unwrap_err(),
            BlochError::OutsideDomain
        );
    }

    #[test]
    fn beta_examples() {
        let cfg = SamplingConfig::default().with_samples(2000);
        let b = beta_estimate(&Domain::Ball(2), &sym("3 - 2i", 2), &cfg).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, Some(0.0)));
        let b = beta_estimate(&Domain::Disk, &sym("z1", 1), &cfg).unwrap();
        assert_relative_eq!(b.lower, 1.0, epsilon = 1e-9);
        assert_eq!(b.upper, None);
        // brute-force grid confirms the maximum of 1 - r^2 sits at the origin
        let grid_max = (0..1000).map(|k| 1.0 - (k as f64 / 1000.0).powi(2)).fold(0.0, f64::max);
        assert_eq!(grid_max, 1.0);
        let w = c(0.3, 0.6);
        let fw = SymbolExpr::f_form(0, w, 2).unwrap();
        let b = beta_estimate(&Domain::Polydisk(2), &fw, &cfg).unwrap();
        assert!(b.lower <= w.norm() + 1e-12);
        assert!(b.lower > 0.9 * w.norm());
    }

    #[test]
    fn bloch_norm_examples() {
        let cfg = SamplingConfig::default().with_samples(1000);
        let n = bloch_norm_estimate(&Domain::Ball(2), &sym("(0.6+0.8i)", 2), &cfg).unwrap();
        assert_eq!((n.lower, n.upper), (1.0, Some(1.0)));
        let n = bloch_norm_estimate(&Domain::Disk, &sym("z1", 1), &cfg).unwrap();
        assert_relative_eq!(n.lower, 1.0, epsilon = 1e-9);
        let f = sym("z1*z2 - z2^2", 2);
        let g = f.add(&SymbolExpr::constant(c(0.5, 0.0), 2)).unwrap();
        let bf = beta_estimate(&Domain::Ball(2), &f, &cfg).unwrap();
        let bg = beta_estimate(&Domain::Ball(2), &g, &cfg).unwrap();
        assert_eq!(bf.lower, bg.lower);
        let certified = bloch_norm_certified(&Domain::Ball(2), &g, &cfg, MetricScale::Distance).unwrap();
        assert!(certified.upper.unwrap() >= certified.lower);
    }

    #[test]
    fn majorant_dominates_samples() {
        let cfg = SamplingConfig::default().with_samples(3000);
        for (d, t) in [
            (Domain::Ball(2), "z1^2 + 0.3*z1*z2 - z2"),
            (Domain::Polydisk(3), "z1*z2*z3 + fw(2, 0.5)"),
            (Domain::Product(vec![Domain::Ball(2), Domain::Disk]), "z1*z3 + z2^3"),
        ] {
            let f = sym(t, d.ambient_dim());
            for scale in [MetricScale::Distance, MetricScale::BlochConstant] {
                let lo = beta_estimate_scaled(&d, &f, &cfg, scale).unwrap().lower;
                let hi = beta_upper_bound(&d, &f, scale).unwrap();
                assert!(lo <= hi + 1e-12, "{d} {t}: {lo} > {hi}");
            }
        }
    }

    #[test]
    fn lipschitz_examples() {
        assert_eq!(lipschitz_beta_estimate(&Domain::Disk, &sym("2", 1), 100, 1).unwrap(), 0.0);
        let l = lipschitz_beta_estimate(&Domain::Disk, &sym("z1", 1), 2000, 1).unwrap();
        assert!(l <= 1.0 + 1e-9);
        assert!(l > 0.95, "{l}");
        // brute force on a grid: quotient near the origin tends to 1
        let r: f64 = 1e-4;
        assert_relative_eq!(r / r.atanh(), 1.0, epsilon = 1e-8);
        let cfg = SamplingConfig::default().with_samples(2000);
        let f = sym("z1*z2 + 0.5*z2^2", 2);
        let l = lipschitz_beta_estimate(&Domain::Ball(2), &f, 2000, 3).unwrap();
        let b = beta_estimate(&Domain::Ball(2), &f, &cfg).unwrap();
        assert!(l <= beta_upper_bound(&Domain::Ball(2), &f, MetricScale::Distance).unwrap());
        assert!(l <= b.lower * 1.05, "{l} vs {}", b.lower);
    }
}
