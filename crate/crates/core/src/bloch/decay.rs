use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_arity, q_unchecked};
use crate::domain::{sample_near_distinguished_boundary, Domain, MetricScale};
use crate::error::{BlochError, Result};
use crate::numeric::golden_section_max;
use crate::search::{par_map, SamplingConfig};
use crate::symbols::SymbolExpr;

/// A profile counts as decaying when its last value is below this fraction
/// of its first.
///
/// On the ball every function holomorphic across the sphere has `Q` of order
/// `(2 eps)^{1/2}`, so over the default ladder the ratio is about 0.103; on
/// the polydisk torus it is of order `eps`. Functions outside the little
/// Bloch space keep a ratio near one.
pub const DECAY_RATIO: f64 = 0.25;

/// `(eps, max Q over points at distance eps from the distinguished boundary)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub ladder: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayVerdict {
    ConsistentWithMembership,
    EvidenceAgainst,
}

impl DecayVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            DecayVerdict::ConsistentWithMembership => "consistent-with-membership",
            DecayVerdict::EvidenceAgainst => "evidence-against",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub profile: DecayProfile,
    pub verdict: DecayVerdict,
}

impl DecayProfile {
    pub fn verdict(&self) -> DecayVerdict {
        let v: Vec<f64> = self.ladder.iter().map(|x| x.1).collect();
        if v.iter().all(|&x| x == 0.0) {
            return DecayVerdict::ConsistentWithMembership;
        }
        let decreasing = v.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
        let first = v[0];
        let last = *v.last().unwrap();
        if decreasing && last < DECAY_RATIO * first {
            DecayVerdict::ConsistentWithMembership
        } else {
            DecayVerdict::EvidenceAgainst
        }
    }
}

fn check_ladder(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(BlochError::InvalidArgument("empty eps ladder".into()));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(BlochError::InvalidArgument("eps ladder must be strictly decreasing".into()));
    }
    Ok(())
}

/// Moves every factor of `z` back onto the set the boundary sampler draws
/// from: norm `r` on ball factors, modulus `r` per coordinate elsewhere.
fn project(d: &Domain, z: &mut [Complex64], r: f64) {
    for (f, off) in d.factor_slices() {
        let s = &mut z[off..off + f.ambient_dim()];
        match f {
            Domain::Ball(_) => {
                let n = s.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                if n > 0.0 {
                    s.iter_mut().for_each(|c| *c *= r / n);
                }
            }
            _ => s.iter_mut().for_each(|c| {
                *c = if c.norm() > 0.0 { *c * (r / c.norm()) } else { Complex64::new(r, 0.0) }
            }),
        }
    }
}

/// Coordinatewise golden-section ascent constrained to the sampled boundary set.
fn refine_on_shell<F>(d: &Domain, q: &F, start: &[Complex64], r: f64, cfg: &SamplingConfig) -> f64
where
    F: Fn(&[Complex64]) -> Result<f64>,
{
    let score = |z: &[Complex64]| q(z).unwrap_or(f64::NEG_INFINITY);
    let mut z = start.to_vec();
    let mut best = score(&z);
    let mut trial = z.clone();
    for _ in 0..cfg.sweeps {
        for j in 0..z.len() {
            for step in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let (t, v) = golden_section_max(
                    |t| {
                        trial.copy_from_slice(&z);
                        trial[j] += step * t;
                        project(d, &mut trial, r);
                        score(&trial)
                    },
                    -r,
                    r,
                    cfg.refine_iters,
                );
                if v > best {
                    best = v;
                    z[j] += step * t;
                    project(d, &mut z, r);
                }
            }
        }
    }
    best
}

/// Decay profile of an arbitrary `Q`-function on a disk/ball/polydisk domain:
/// per rung, the sampled maximum refined by local search along the rung.
pub fn decay_profile_with<F>(d: &Domain, q: F, eps_ladder: &[f64], cfg: &SamplingConfig) -> Result<DecayProfile>
where
    F: Fn(&[Complex64]) -> Result<f64> + Sync + Send,
{
    check_ladder(eps_ladder)?;
    let mut ladder = Vec::with_capacity(eps_ladder.len());
    for (i, &eps) in eps_ladder.iter().enumerate() {
        let pts = sample_near_distinguished_boundary(d, cfg.boundary_samples.max(1), eps, cfg.seed.wrapping_add(i as u64))?;
        let vals = par_map(&pts, |p| q(p.coords()));
        let vals = vals.into_iter().collect::<Result<Vec<f64>>>()?;
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
        let starts: Vec<usize> = order.iter().take(cfg.restarts).copied().collect();
        let refined = par_map(&starts, |&k| refine_on_shell(d, &q, &pts[k].0, 1.0 - eps, cfg));
        let best = refined.into_iter().fold(vals[order[0]], f64::max);
        ladder.push((eps, best));
    }
    Ok(DecayProfile { ladder })
}

/// Samples `Q_f` ever closer to the distinguished boundary and reports
/// whether the profile looks like it tends to zero. Never a proof.
pub fn little_star_membership_diagnostic(
    d: &Domain,
    f: &SymbolExpr,
    eps_ladder: &[f64],
    cfg: &SamplingConfig,
) -> Result<DecayReport> {
    d.require_metric()?;
    check_arity(d, f)?;
    let profile = if f.constant_value()?.is_some() {
        check_ladder(eps_ladder)?;
        DecayProfile { ladder: eps_ladder.iter().map(|&e| (e, 0.0)).collect() }
    } else {
        decay_profile_with(d, |z| q_unchecked(d, f, z, MetricScale::Distance), eps_ladder, cfg)?
    };
    let verdict = profile.verdict();
    Ok(DecayReport { profile, verdict })
}
