//! The multiplication operator `M_psi f = psi f` on the Bloch space: the
//! quantities `sigma_psi`, boundedness evidence, the operator-norm sandwich,
//! the spectrum, compactness and isometries.

mod spectrum;
mod verdicts;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{
    bloch_norm_certified, bloch_norm_estimate, check_arity, little_star_membership_diagnostic,
    omega_lower_bound, omega_upper_bound, q_unchecked, DecayReport, DecayVerdict,
};
use crate::domain::{sample_shell, Domain, MetricScale, Point};
use crate::error::Result;
use crate::estimate::{EstimateInterval, Mode};
use crate::numeric::golden_section_max;
use crate::random::{random_polynomial, seeded_rng};
use crate::search::{maximize, par_map, SamplingConfig};
use crate::symbols::SymbolExpr;

pub use spectrum::{spectrum_cloud, SpectrumCloud, SpectrumSummary};
pub use verdicts::{
    compactness_verdict, isometry_verdict, CompactnessReport, CompactnessVerdict, CompactnessWitness,
    IsometryReport, IsometryVerdict, ISOMETRY_TOL,
};

/// Shell maxima count as a plateau when the last is at most this factor of the one before.
pub const PLATEAU_FACTOR: f64 = 1.05;
/// Shell maxima count as growing when every consecutive ratio exceeds this.
pub const GROWTH_FACTOR: f64 = 1.2;
/// Cap on points per boundedness shell.
const SHELL_SAMPLES: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaKind {
    /// `sigma_psi = sup omega Q_psi`
    Sigma,
    /// `sigma_{0,psi} = sup omega_0 Q_psi`
    Sigma0,
}

/// Domains on which `omega` is known in closed form.
fn has_exact_omega(d: &Domain) -> bool {
    matches!(d, Domain::Disk | Domain::Ball(_) | Domain::Polydisk(1))
}

fn radial_sup(p: f64) -> f64 {
    let (_, v) = golden_section_max(|r| r.atanh() * (1.0 - r * r).powf(p), 0.0, 1.0 - 1e-12, 200);
    v + 1e-12
}

/// `sup_r artanh(r) (1 - r^2)^p` for `p = 1` (disk) and `p = 1/2` (balls of dimension at least two).
fn radial_constant(d: &Domain) -> f64 {
    match d {
        Domain::Ball(n) if *n >= 2 => radial_sup(0.5),
        _ => radial_sup(1.0),
    }
}

/// Estimate of `sigma_psi` or `sigma_{0,psi}`.
///
/// On the disk and the ball `omega(z) = omega_0(z) = artanh |z|`, the lower
/// end is the sampled supremum of `artanh|z| Q_psi(z)` and the upper end
/// bounds `Q_psi(z) <= (1 - |z|^2)^{1/2} |grad psi|` (or `(1 - |z|^2)` on the
/// disk) by the coefficient majorants. Elsewhere the lower end uses the
/// certified lower bound for `omega`; the upper end is left unbounded because
/// `sigma_psi` is infinite for every nonconstant symbol on a domain with two
/// or more factors (letting another factor approach its boundary sends
/// `omega` to infinity while `Q_psi` stays away from zero).
pub fn sigma_estimate(d: &Domain, psi: &SymbolExpr, cfg: &SamplingConfig, which: SigmaKind) -> Result<EstimateInterval> {
    d.require_metric()?;
    check_arity(d, psi)?;
    let _ = which;
    if psi.constant_value()?.is_some() {
        return Ok(EstimateInterval::exact(0.0));
    }
    let q = |z: &[Complex64]| q_unchecked(d, psi, z, MetricScale::Distance);
    if has_exact_omega(d) {
        let (v, p) = maximize(d, |z| Ok(omega_lower_bound(d, z) * q(z)?), cfg)?;
        let upper = psi
            .gradient_majorants()
            .map(|m| radial_constant(d) * m.iter().map(|x| x * x).sum::<f64>().sqrt());
        Ok(EstimateInterval::sampled(v, cfg.samples, cfg.seed).with_argmax(Some(p)).with_upper(upper))
    } else {
        let (v, p) = maximize(d, |z| Ok(omega_lower_bound(d, z) * q(z)?), cfg)?;
        Ok(EstimateInterval::sampled(v, cfg.samples, cfg.seed).with_argmax(Some(p)))
    }
}

/// Sampled supremum of `omega_upper(z) Q_psi(z)`, where `omega_upper` is the
/// certified upper bound for `omega`. Reported next to [`sigma_estimate`] on
/// polydisks and products; it is a sampled value, not a bound for `sigma`.
pub fn sigma_upper_profile(d: &Domain, psi: &SymbolExpr, cfg: &SamplingConfig) -> Result<f64> {
    d.require_metric()?;
    check_arity(d, psi)?;
    if psi.constant_value()?.is_some() {
        return Ok(0.0);
    }
    let (v, _) = maximize(d, |z| Ok(omega_upper_bound(d, z) * q_unchecked(d, psi, z, MetricScale::Distance)?), cfg)?;
    Ok(v)
}

/// `||psi||_inf`: sampled supremum, with the coefficient majorant as upper end.
pub fn sup_norm_estimate(d: &Domain, psi: &SymbolExpr, cfg: &SamplingConfig) -> Result<EstimateInterval> {
    check_arity(d, psi)?;
    if let Some(c) = psi.constant_value()? {
        return Ok(EstimateInterval::exact(c.norm()));
    }
    let (v, p) = maximize(d, |z| Ok(psi.evaluate_at(z)?.norm()), cfg)?;
    Ok(EstimateInterval::sampled(v, cfg.samples, cfg.seed).with_argmax(Some(p)).with_upper(psi.sup_majorant()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundednessVerdict {
    BoundedEvidence,
    UnboundedEvidence,
    Inconclusive,
}

impl BoundednessVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundednessVerdict::BoundedEvidence => "bounded-evidence",
            BoundednessVerdict::UnboundedEvidence => "unbounded-evidence",
            BoundednessVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Verdict on a list of shell maxima ordered towards the boundary.
pub fn classify_profile(values: &[f64]) -> BoundednessVerdict {
    if values.iter().all(|&v| v == 0.0) {
        return BoundednessVerdict::BoundedEvidence;
    }
    if values.len() < 2 {
        return BoundednessVerdict::Inconclusive;
    }
    if values.windows(2).all(|w| w[1] > GROWTH_FACTOR * w[0]) {
        return BoundednessVerdict::UnboundedEvidence;
    }
    let n = values.len();
    if values[n - 1] <= PLATEAU_FACTOR * values[n - 2] {
        BoundednessVerdict::BoundedEvidence
    } else {
        BoundednessVerdict::Inconclusive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    /// `(r, max |psi|)` per shell.
    pub sup_profile: Vec<(f64, f64)>,
    /// `(r, max weight(z) Q_psi(z))` per shell, the weight being the sum of
    /// `log((1 + t)/(1 - t))` over ball-factor norms and polydisk moduli.
    pub criterion_profile: Vec<(f64, f64)>,
    /// Certified `sup |psi|` when the majorant is finite.
    pub sup_majorant: Option<f64>,
    pub sup_verdict: BoundednessVerdict,
    pub criterion_verdict: BoundednessVerdict,
    pub verdict: BoundednessVerdict,
    /// Decay diagnostic of `psi`, for the little-Bloch variant.
    pub decay: Option<DecayReport>,
    pub star_verdict: Option<BoundednessVerdict>,
}

fn combine(a: BoundednessVerdict, b: BoundednessVerdict) -> BoundednessVerdict {
    use BoundednessVerdict::*;
    match (a, b) {
        (UnboundedEvidence, _) | (_, UnboundedEvidence) => UnboundedEvidence,
        (BoundedEvidence, BoundedEvidence) => BoundedEvidence,
        _ => Inconclusive,
    }
}

/// Evidence on whether `M_psi` is bounded: `psi` must be bounded and
/// `sup weight(z) Q_psi(z)` finite. Both are tracked on the shells of
/// `cfg.shells`; a finite majorant certifies boundedness of `psi` outright.
/// With `star`, the little-Bloch variant also needs the decay diagnostic of
/// `psi` to be consistent with membership.
pub fn boundedness_verdict(d: &Domain, psi: &SymbolExpr, cfg: &SamplingConfig, star: bool) -> Result<BoundednessReport> {
    d.require_metric()?;
    check_arity(d, psi)?;
    let constant = psi.constant_value()?.is_some();
    let count = cfg.samples.clamp(1, SHELL_SAMPLES);
    let mut sup_profile = Vec::new();
    let mut criterion_profile = Vec::new();
    for (i, &r) in cfg.shells.iter().enumerate() {
        let pts = sample_shell(d, r, count, cfg.seed.wrapping_add(i as u64))?;
        let vals = par_map(&pts, |p: &Point| -> Result<(f64, f64)> {
            let v = psi.evaluate_at(p.coords())?.norm();
            let c = if constant {
                0.0
            } else {
                2.0 * omega_upper_bound(d, p.coords()) * q_unchecked(d, psi, p.coords(), MetricScale::Distance)?
            };
            Ok((v, c))
        });
        let vals = vals.into_iter().collect::<Result<Vec<_>>>()?;
        sup_profile.push((r, vals.iter().map(|x| x.0).fold(0.0, f64::max)));
        criterion_profile.push((r, vals.iter().map(|x| x.1).fold(0.0, f64::max)));
    }
    let sup_majorant = psi.sup_majorant();
    let sup_verdict = if sup_majorant.is_some() {
        BoundednessVerdict::BoundedEvidence
    } else {
        classify_profile(&sup_profile.iter().map(|x| x.1).collect::<Vec<_>>())
    };
    let criterion_verdict = classify_profile(&criterion_profile.iter().map(|x| x.1).collect::<Vec<_>>());
    let verdict = combine(sup_verdict, criterion_verdict);
    let (decay, star_verdict) = if star {
        let report = little_star_membership_diagnostic(d, psi, &cfg.eps_ladder, cfg)?;
        let v = match report.verdict {
            DecayVerdict::EvidenceAgainst => BoundednessVerdict::UnboundedEvidence,
            DecayVerdict::ConsistentWithMembership => verdict,
        };
        (Some(report), Some(v))
    } else {
        (None, None)
    };
    Ok(BoundednessReport {
        sup_profile,
        criterion_profile,
        sup_majorant,
        sup_verdict,
        criterion_verdict,
        verdict,
        decay,
        star_verdict,
    })
}

fn interval_max(a: &EstimateInterval, b: &EstimateInterval) -> EstimateInterval {
    let upper = match (a.upper, b.upper) {
        (Some(x), Some(y)) => Some(x.max(y)),
        _ => None,
    };
    join(a, b, a.lower.max(b.lower), upper)
}

fn interval_add(a: &EstimateInterval, b: &EstimateInterval) -> EstimateInterval {
    let upper = match (a.upper, b.upper) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    join(a, b, a.lower + b.lower, upper)
}

fn join(a: &EstimateInterval, b: &EstimateInterval, lower: f64, upper: Option<f64>) -> EstimateInterval {
    let mode = match (a.mode, b.mode, upper) {
        (Mode::Exact, Mode::Exact, _) => Mode::Exact,
        (_, _, Some(_)) => Mode::AnalyticBounds,
        _ => Mode::SampledLower,
    };
    EstimateInterval {
        lower,
        upper: upper.map(|u| u.max(lower)),
        mode,
        samples: a.samples.max(b.samples),
        seed: if a.samples >= b.samples { a.seed } else { b.seed },
        argmax: None,
    }
}

/// Both sides of `max{||psi||_B, ||psi||_inf} <= ||M_psi|| <= max{||psi||_B, ||psi||_inf + sigma}`,
/// each as an interval, plus the little-Bloch variant with `sigma_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    pub sup_norm: EstimateInterval,
    pub bloch_norm: EstimateInterval,
    pub sigma: EstimateInterval,
    pub sigma0: EstimateInterval,
    /// `max{||psi||_B, ||psi||_inf}`
    pub lower: EstimateInterval,
    /// `max{||psi||_B, ||psi||_inf + sigma_psi}`
    pub upper: EstimateInterval,
    /// `max{||psi||_B, ||psi||_inf + sigma_{0,psi}}`
    pub upper0: EstimateInterval,
}

pub fn norm_bounds(d: &Domain, psi: &SymbolExpr, cfg: &SamplingConfig) -> Result<NormBounds> {
    let sup_norm = sup_norm_estimate(d, psi, cfg)?;
    let bloch_norm = bloch_norm_certified(d, psi, cfg, MetricScale::Distance)?;
    let sigma = sigma_estimate(d, psi, cfg, SigmaKind::Sigma)?;
    let sigma0 = sigma_estimate(d, psi, cfg, SigmaKind::Sigma0)?;
    let lower = interval_max(&bloch_norm, &sup_norm);
    let upper = interval_max(&bloch_norm, &interval_add(&sup_norm, &sigma));
    let upper0 = interval_max(&bloch_norm, &interval_add(&sup_norm, &sigma0));
    Ok(NormBounds { sup_norm, bloch_norm, sigma, sigma0, lower, upper, upper0 })
}

/// Test functions `f` used to bound `||M_psi||` from below by `||psi f|| / ||f||`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryConfig {
    /// Powers `psi^j` for `2 <= j <= max_power`.
    pub max_power: u32,
    pub random_members: usize,
    pub random_degree: u32,
    pub seed: u64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig { max_power: 3, random_members: 3, random_degree: 3, seed: 42 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpnormLower {
    pub value: f64,
    /// Best ratio `||psi f||_B-lower / ||f||_B-upper` over the battery.
    pub battery_max: f64,
    /// Sampled `sup |psi|`; the spectrum is the closure of the range, so the
    /// spectral radius of `M_psi` is `||psi||_inf <= ||M_psi||`.
    pub spectral_radius: f64,
    pub members: Vec<(String, f64)>,
}

/// Lower bound for `||M_psi||` from a battery of test functions and the spectral radius.
pub fn empirical_opnorm_lower(
    d: &Domain,
    psi: &SymbolExpr,
    battery: &BatteryConfig,
    cfg: &SamplingConfig,
) -> Result<OpnormLower> {
    check_arity(d, psi)?;
    let n = d.ambient_dim();
    let mut fs: Vec<SymbolExpr> = (0..n).map(|j| SymbolExpr::coordinate(j, n)).collect::<Result<_>>()?;
    fs.extend((2..=battery.max_power).map(|k| psi.pow(k)));
    let mut rng = seeded_rng(battery.seed);
    fs.extend((0..battery.random_members).map(|_| random_polynomial(&mut rng, n, battery.random_degree, 0.9)));

    // f = 1 has norm exactly one
    let mut members = vec![("1".to_string(), bloch_norm_estimate(d, psi, cfg)?.lower)];
    for f in fs {
        let Some(den) = bloch_norm_certified(d, &f, cfg, MetricScale::Distance)?.upper else {
            continue;
        };
        if den <= 0.0 {
            continue;
        }
        let num = bloch_norm_estimate(d, &psi.mul(&f)?, cfg)?.lower;
        members.push((f.to_string(), num / den));
    }
    let battery_max = members.iter().map(|m| m.1).fold(0.0, f64::max);
    let spectral_radius = sup_norm_estimate(d, psi, cfg)?.lower;
    Ok(OpnormLower { value: battery_max.max(spectral_radius), battery_max, spectral_radius, members })
}

/// Everything known about `M_psi` for one symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub symbol: String,
    pub domain: Domain,
    pub sup_norm: EstimateInterval,
    pub bloch_norm: EstimateInterval,
    pub sigma: EstimateInterval,
    pub sigma0: EstimateInterval,
    pub verdicts: BTreeMap<String, String>,
}

pub fn operator_report(d: &Domain, psi: &SymbolExpr, cfg: &SamplingConfig) -> Result<OperatorReport> {
    let nb = norm_bounds(d, psi, cfg)?;
    let b = boundedness_verdict(d, psi, cfg, true)?;
    let c = compactness_verdict(d, psi, cfg)?;
    let mut verdicts = BTreeMap::new();
    verdicts.insert("boundedness".into(), b.verdict.as_str().into());
    if let Some(s) = b.star_verdict {
        verdicts.insert("boundedness-little".into(), s.as_str().into());
    }
    verdicts.insert("compactness".into(), c.verdict.as_str().into());
    if let Ok(i) = isometry_verdict(d, psi, 16, cfg) {
        verdicts.insert("isometry".into(), i.verdict.as_str().into());
    }
    Ok(OperatorReport {
        symbol: psi.to_string(),
        domain: d.clone(),
        sup_norm: nb.sup_norm,
        bloch_norm: nb.bloch_norm,
        sigma: nb.sigma,
        sigma0: nb.sigma0,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sym(t: &str, n: usize) -> SymbolExpr {
        SymbolExpr::parse(t, n).unwrap()
    }

    fn cfg() -> SamplingConfig {
        SamplingConfig::default().with_samples(4000)
    }

    #[test]
    fn radial_constants_match_grid() {
        let grid = |p: f64| {
            (1..1_000_000)
                .map(|i| {
                    let r = i as f64 / 1e6;
                    r.atanh() * (1.0 - r * r).powf(p)
                })
                .fold(0.0, f64::max)
        };
        assert!(radial_sup(1.0) >= grid(1.0));
        assert!(radial_sup(1.0) - grid(1.0) < 1e-9);
        assert!(radial_sup(0.5) >= grid(0.5));
        assert!(radial_sup(0.5) - grid(0.5) < 1e-9);
    }

    #[test]
    fn sigma_of_constant_is_zero() {
        let s = sigma_estimate(&Domain::Ball(2), &sym("3 - i", 2), &cfg(), SigmaKind::Sigma).unwrap();
        assert_eq!((s.lower, s.upper), (0.0, Some(0.0)));
    }

    #[test]
    fn sigma_disk_identity_matches_grid() {
        let oracle = (1..100_000)
            .map(|i| {
                let r = i as f64 / 1e5;
                r.atanh() * (1.0 - r * r)
            })
            .fold(0.0, f64::max);
        let s = sigma_estimate(&Domain::Disk, &sym("z1", 1), &cfg(), SigmaKind::Sigma).unwrap();
        assert_relative_eq!(s.lower, oracle, epsilon = 1e-6);
        assert!(s.upper.unwrap() >= s.lower);
        assert!(s.upper.unwrap() - oracle < 1e-6);
    }

    #[test]
    fn sigma_ball_coordinate_near_radial_oracle() {
        let oracle = (1..100_000)
            .map(|i| {
                let r = i as f64 / 1e5;
                r.atanh() * (1.0 - r * r).sqrt()
            })
            .fold(0.0, f64::max);
        let s = sigma_estimate(&Domain::Ball(2), &sym("z1", 2), &cfg(), SigmaKind::Sigma).unwrap();
        assert!(s.lower >= 0.98 * oracle && s.lower <= oracle + 1e-9, "{} vs {oracle}", s.lower);
        assert!(s.upper.unwrap() >= oracle);
    }

    #[test]
    fn sigma_polydisk_has_no_upper() {
        let s = sigma_estimate(&Domain::Polydisk(2), &sym("z1", 2), &cfg(), SigmaKind::Sigma0).unwrap();
        assert!(s.upper.is_none());
        assert!(s.lower > 1.0);
        let p = sigma_upper_profile(&Domain::Polydisk(2), &sym("z1", 2), &cfg()).unwrap();
        assert!(p >= s.lower);
    }

    #[test]
    fn profile_classification() {
        use BoundednessVerdict::*;
        assert_eq!(classify_profile(&[0.0, 0.0]), BoundedEvidence);
        assert_eq!(classify_profile(&[1.0, 1.5, 2.0, 2.5]), UnboundedEvidence);
        assert_eq!(classify_profile(&[1.0, 0.9, 0.8, 0.81]), BoundedEvidence);
        assert_eq!(classify_profile(&[1.0, 1.0, 1.0, 1.1]), Inconclusive);
    }

    #[test]
    fn boundedness_examples() {
        use BoundednessVerdict::*;
        let c = cfg();
        assert_eq!(boundedness_verdict(&Domain::Ball(2), &sym("2", 2), &c, false).unwrap().verdict, BoundedEvidence);
        assert_eq!(boundedness_verdict(&Domain::Ball(2), &sym("z1", 2), &c, false).unwrap().verdict, BoundedEvidence);
        let r = boundedness_verdict(&Domain::Disk, &sym("fw(1, 0.999)", 1), &c, true).unwrap();
        assert_eq!(r.verdict, BoundedEvidence);
        assert!(r.sup_majorant.is_some());
        // at |w| = 0.999 the decay only starts below the default ladder
        let r = boundedness_verdict(&Domain::Disk, &sym("fw(1, 0.5)", 1), &c, true).unwrap();
        assert_eq!(r.star_verdict, Some(BoundedEvidence));
        let r = boundedness_verdict(&Domain::Polydisk(2), &sym("z1", 2), &c, false).unwrap();
        assert_eq!(r.verdict, UnboundedEvidence, "{r:?}");
        let r = boundedness_verdict(&Domain::Disk, &sym("h(1, 1)", 1), &c, false).unwrap();
        assert_eq!(r.sup_verdict, UnboundedEvidence, "{r:?}");
    }

    #[test]
    fn norm_bounds_of_constants() {
        for (t, v) in [("1", 1.0), ("3+4i", 5.0)] {
            let nb = norm_bounds(&Domain::Ball(2), &sym(t, 2), &cfg()).unwrap();
            assert_relative_eq!(nb.lower.lower, v, epsilon = 1e-15);
            assert_eq!(nb.lower.upper, Some(nb.lower.lower));
            assert_eq!(nb.upper.upper, Some(nb.lower.lower));
        }
    }

    #[test]
    fn norm_bounds_disk_identity() {
        let nb = norm_bounds(&Domain::Disk, &sym("z1", 1), &cfg()).unwrap();
        assert_relative_eq!(nb.lower.lower, 1.0, epsilon = 1e-6);
        assert!(nb.lower.lower <= nb.upper.upper_or_inf());
        assert_relative_eq!(nb.upper.lower, 1.0 + nb.sigma.lower, epsilon = 1e-6);
    }

    #[test]
    fn opnorm_lower_examples() {
        let b = BatteryConfig::default();
        let o = empirical_opnorm_lower(&Domain::Ball(2), &sym("1", 2), &b, &cfg()).unwrap();
        assert_relative_eq!(o.value, 1.0, epsilon = 1e-12);
        let o = empirical_opnorm_lower(&Domain::Ball(2), &sym("-2i", 2), &b, &cfg()).unwrap();
        assert_relative_eq!(o.value, 2.0, epsilon = 1e-12);
        let psi = sym("0.3 + z1*z2 - 0.5*z2^2", 2);
        let o = empirical_opnorm_lower(&Domain::Ball(2), &psi, &b, &cfg()).unwrap();
        let nb = norm_bounds(&Domain::Ball(2), &psi, &cfg()).unwrap();
        assert!(o.value <= nb.upper.upper_or_inf());
        assert!(nb.lower.lower <= o.value + 1e-9);
    }

    #[test]
    fn report_intervals_well_formed() {
        let r = operator_report(&Domain::Ball(2), &sym("z1^2 + 0.5", 2), &cfg()).unwrap();
        for e in [&r.sup_norm, &r.bloch_norm, &r.sigma, &r.sigma0] {
            assert!(e.is_well_formed(), "{e:?}");
        }
        assert!(r.sigma0.lower <= r.sigma.upper_or_inf());
        assert_eq!(r.verdicts["compactness"], "not-compact");
        assert_eq!(r.verdicts["isometry"], "not-isometry");
    }
}
