use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::decay::{decay_profile_with, DecayVerdict};
use crate::domain::{metric_inverse_form, rho_from_origin, Domain, MetricScale, PathOptions, Point};
use crate::error::{BlochError, Result};
use crate::estimate::EstimateInterval;
use crate::random::seeded_rng;
use crate::search::SamplingConfig;

/// `(1/2) log((1 + |z|) / (1 - |z|))`, the extremal function of the ball.
pub fn omega_exact_ball(z: &Point) -> Result<f64> {
    let r = z.norm();
    if r >= 1.0 {
        return Err(BlochError::OutsideDomain);
    }
    Ok(r.atanh())
}

fn factor_norm(f: &Domain, s: &[Complex64]) -> f64 {
    match f {
        Domain::Ball(_) => s.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        _ => s.iter().map(|c| c.norm()).fold(0.0, f64::max),
    }
}

/// Certified lower bound for `omega(z)`: the largest factor value
/// `artanh ||z_f||` (Euclidean norm on ball factors, largest modulus on
/// disk and polydisk factors). Exact on the disk and the ball.
pub fn omega_lower_bound(d: &Domain, z: &[Complex64]) -> f64 {
    d.factor_slices()
        .into_iter()
        .map(|(f, off)| factor_norm(f, &z[off..off + f.ambient_dim()]).atanh())
        .fold(0.0, f64::max)
}

/// Certified upper bound for `omega(z) <= rho(0, z)`: the sum of factor
/// distances, with each polydisk factor bounded by `sum_k artanh |z_k|`.
pub fn omega_upper_bound(d: &Domain, z: &[Complex64]) -> f64 {
    d.factor_slices()
        .into_iter()
        .map(|(f, off)| {
            let s = &z[off..off + f.ambient_dim()];
            match f {
                Domain::Ball(_) => factor_norm(f, s).atanh(),
                _ => s.iter().map(|c| c.norm().atanh()).sum(),
            }
        })
        .sum()
}

/// `[max_k artanh |z_k|, straight-segment distance]` on the polydisk.
pub fn omega_polydisk_bounds(z: &Point) -> Result<EstimateInterval> {
    let d = Domain::Polydisk(z.dim().max(1));
    d.require_interior(z)?;
    if z.norm_sqr() == 0.0 {
        return Ok(EstimateInterval::exact(0.0));
    }
    let lower = omega_lower_bound(&d, z.coords());
    let rho = rho_from_origin(&d, z, PathOptions::default())?;
    Ok(EstimateInterval::bounds(lower, rho.upper_or_inf()))
}

/// `sup |sum_j c_j z_j|` over the domain: `||c_f||_2` on ball factors and
/// `||c_f||_1` on disk and polydisk factors, summed over factors.
pub fn dual_norm(d: &Domain, c: &[Complex64]) -> f64 {
    d.factor_slices()
        .into_iter()
        .map(|(f, off)| {
            let s = &c[off..off + f.ambient_dim()];
            match f {
                Domain::Ball(_) => s.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt(),
                _ => s.iter().map(|x| x.norm()).sum(),
            }
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaKind {
    Omega,
    OmegaZero,
}

/// Test-function family of [`omega_empirical_lower`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaConfig {
    /// Random directions added to the structured candidates.
    pub directions: usize,
    pub seed: u64,
    /// Dilations `t < 1` tried for the little-Bloch extremal problem.
    pub dilations: Vec<f64>,
    /// Settings of the admission decay diagnostic.
    pub sampling: SamplingConfig,
}

impl Default for OmegaConfig {
    fn default() -> Self {
        OmegaConfig {
            directions: 32,
            seed: 42,
            dilations: vec![0.5, 0.9, 0.95, 0.99, 0.995, 0.999],
            sampling: SamplingConfig::default(),
        }
    }
}

/// The best admissible test function found: `F(z) = artanh(t <z, c>) / t`
/// with `c` of unit dual norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaWitness {
    pub value: f64,
    pub direction: Vec<Complex64>,
    pub dilation: f64,
}

fn candidates(d: &Domain, z: &[Complex64], cfg: &OmegaConfig) -> Vec<Vec<Complex64>> {
    let n = z.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::new();
    for k in 0..n {
        let mut c = vec![zero; n];
        c[k] = Complex64::new(1.0, 0.0);
        out.push(c);
    }
    for (f, off) in d.factor_slices() {
        if let Domain::Ball(_) = f {
            let mut c = vec![zero; n];
            for j in off..off + f.ambient_dim() {
                c[j] = z[j].conj();
            }
            out.push(c);
        }
    }
    out.push(z.iter().map(|c| c.conj()).collect());
    let mut rng = seeded_rng(cfg.seed);
    for _ in 0..cfg.directions {
        out.push(
            (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect(),
        );
    }
    // normalize to unit dual norm and rotate so that <z, c> >= 0
    out.into_iter()
        .filter_map(|c| {
            let nd = dual_norm(d, &c);
            if nd == 0.0 {
                return None;
            }
            let lam: Complex64 = z.iter().zip(&c).map(|(a, b)| a * b).sum();
            let phase = if lam.norm() > 0.0 { lam.conj() / lam.norm() } else { Complex64::new(1.0, 0.0) };
            Some(c.into_iter().map(|x| x * phase / nd).collect())
        })
        .collect()
}

fn pairing(z: &[Complex64], c: &[Complex64]) -> Complex64 {
    z.iter().zip(c).map(|(a, b)| a * b).sum()
}

/// Admission of `artanh(t <z, c>)` to the little-Bloch family by the decay diagnostic.
fn admitted(d: &Domain, c: &[Complex64], t: f64, sampling: &SamplingConfig) -> Result<bool> {
    let q = |z: &[Complex64]| {
        let x = t * pairing(z, c);
        let w = t / (Complex64::new(1.0, 0.0) - x * x);
        let g: Vec<Complex64> = c.iter().map(|cj| w * cj).collect();
        Ok(metric_inverse_form(d, z, &g, MetricScale::Distance).sqrt())
    };
    let profile = decay_profile_with(d, q, &sampling.eps_ladder, sampling)?;
    Ok(profile.verdict() == DecayVerdict::ConsistentWithMembership)
}

/// Certified lower bound for `omega(z)` (or `omega_0(z)`) from explicit test functions.
///
/// The family is `F = artanh(t <., c>) / t` with `<w, c> = sum_j c_j w_j` of
/// unit dual norm. Such a linear functional maps the domain into the unit
/// disk, so by the contraction property of the invariant metric `beta_F <= 1`
/// for `t = 1` (the h-forms are the coordinate directions) and `beta_F <= 1`
/// after dividing by `t` (the f-forms are `t = |w|`); `F(0) = 0`. For `omega`
/// only `t = 1` is used. For `omega_0` only dilations `t < 1` whose decay
/// diagnostic is consistent with little-Bloch membership are admitted.
pub fn omega_empirical_lower(d: &Domain, z: &Point, kind: OmegaKind, cfg: &OmegaConfig) -> Result<OmegaWitness> {
    d.require_metric()?;
    d.require_interior(z)?;
    let n = z.dim();
    let none = OmegaWitness { value: 0.0, direction: vec![Complex64::new(0.0, 0.0); n], dilation: 1.0 };
    if z.norm_sqr() == 0.0 {
        return Ok(none);
    }
    let cands = candidates(d, z.coords(), cfg);
    let lams: Vec<f64> = cands.iter().map(|c| pairing(z.coords(), c).norm().min(1.0 - 1e-16)).collect();
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by(|&a, &b| lams[b].partial_cmp(&lams[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    match kind {
        OmegaKind::Omega => {
            let i = order[0];
            Ok(OmegaWitness { value: lams[i].atanh(), direction: cands[i].clone(), dilation: 1.0 })
        }
        OmegaKind::OmegaZero => {
            let mut best = none;
            let mut dil = cfg.dilations.clone();
            dil.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
            for t in dil.into_iter().filter(|&t| t > 0.0 && t < 1.0) {
                for &i in &order {
                    let v = (t * lams[i]).atanh() / t;
                    if v <= best.value {
                        break;
                    }
                    if admitted(d, &cands[i], t, &cfg.sampling)? {
                        best = OmegaWitness { value: v, direction: cands[i].clone(), dilation: t };
                        break;
                    }
                }
            }
            Ok(best)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ball_formula_values() {
        assert_eq!(omega_exact_ball(&Point::origin(2)).unwrap(), 0.0);
        assert_relative_eq!(omega_exact_ball(&Point::from_real(&[0.3, 0.4])).unwrap(), 0.549_306_1, epsilon = 1e-7);
        assert_relative_eq!(omega_exact_ball(&Point::from_real(&[0.9])).unwrap(), 1.472_219_5, epsilon = 1e-7);
        assert!(omega_exact_ball(&Point::from_real(&[0.6, 0.8])).is_err());
    }

    #[test]
    fn polydisk_bound_examples() {
        let b = omega_polydisk_bounds(&Point::origin(2)).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, Some(0.0)));
        let b = omega_polydisk_bounds(&Point::from_real(&[0.5, 0.0])).unwrap();
        assert_relative_eq!(b.lower, 0.549_306_1, epsilon = 1e-7);
        assert_relative_eq!(b.upper.unwrap(), 0.549_306_1, epsilon = 1e-7);
        let b = omega_polydisk_bounds(&Point::from_real(&[0.5, 0.5])).unwrap();
        assert_relative_eq!(b.lower, 0.549_306_1, epsilon = 1e-7);
        assert!(b.upper.unwrap() <= 1.098_612_3);
    }

    #[test]
    fn empirical_is_zero_at_origin() {
        let w = omega_empirical_lower(&Domain::Ball(2), &Point::origin(2), OmegaKind::Omega, &OmegaConfig::default()).unwrap();
        assert_eq!(w.value, 0.0);
    }

    #[test]
    fn polydisk_h_form_witness() {
        let z = Point(vec![c(0.1, 0.2), c(0.0, -0.5)]);
        let w = omega_empirical_lower(&Domain::Polydisk(2), &z, OmegaKind::Omega, &OmegaConfig::default()).unwrap();
        assert!(w.value >= 0.5f64.atanh() - 1e-12);
    }

    #[test]
    fn ball_empirical_close_to_exact() {
        let z = Point(vec![c(0.3, -0.1), c(0.2, 0.3307)]);
        let exact = omega_exact_ball(&z).unwrap();
        let w = omega_empirical_lower(&Domain::Ball(2), &z, OmegaKind::Omega, &OmegaConfig::default()).unwrap();
        assert!(w.value <= exact + 1e-12);
        assert!(w.value >= 0.95 * exact);
    }

    #[test]
    fn omega_zero_below_omega_on_ball() {
        let z = Point::from_real(&[0.6, 0.3]);
        let cfg = OmegaConfig::default();
        let w = omega_empirical_lower(&Domain::Ball(2), &z, OmegaKind::Omega, &cfg).unwrap();
        let w0 = omega_empirical_lower(&Domain::Ball(2), &z, OmegaKind::OmegaZero, &cfg).unwrap();
        assert!(w0.value <= w.value + 1e-12);
        assert!(w0.dilation < 1.0);
        assert!(w0.value >= 0.95 * w.value, "{} vs {}", w0.value, w.value);
    }

    #[test]
    fn bounds_bracket_witnesses() {
        let d = Domain::Product(vec![Domain::Ball(2), Domain::Polydisk(2)]);
        let z = Point(vec![c(0.3, 0.2), c(-0.1, 0.4), c(0.7, 0.0), c(0.0, 0.2)]);
        let w = omega_empirical_lower(&d, &z, OmegaKind::Omega, &OmegaConfig::default()).unwrap();
        let lo = omega_lower_bound(&d, z.coords());
        let hi = omega_upper_bound(&d, z.coords());
        assert!(lo <= w.value + 1e-12);
        assert!(w.value <= hi);
        assert_relative_eq!(dual_norm(&d, &w.direction), 1.0, epsilon = 1e-12);
    }
}
