//! Sampling configuration and the sampled-supremum search shared by the
//! estimators.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{sample_interior, Domain, Point};
use crate::error::Result;
use crate::numeric::golden_section_max;

/// Default boundary shells for the boundedness verdicts.
pub const DEFAULT_SHELLS: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];
/// Default distances to the distinguished boundary for decay diagnostics.
pub const DEFAULT_EPS_LADDER: [f64; 3] = [0.1, 0.01, 0.001];

/// How suprema over the domain are sampled and refined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub samples: usize,
    pub seed: u64,
    /// Golden-section steps per coordinate line search.
    pub refine_iters: usize,
    /// Number of best samples used as local-search starts.
    pub restarts: usize,
    /// Coordinate sweeps per start.
    pub sweeps: usize,
    /// Radii of the boundedness shells.
    pub shells: Vec<f64>,
    pub eps_ladder: Vec<f64>,
    /// Points per rung of a decay diagnostic.
    pub boundary_samples: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            samples: 20_000,
            seed: 42,
            refine_iters: 50,
            restarts: 5,
            sweeps: 3,
            shells: DEFAULT_SHELLS.to_vec(),
            eps_ladder: DEFAULT_EPS_LADDER.to_vec(),
            boundary_samples: 256,
        }
    }
}

impl SamplingConfig {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Order-preserving map, parallel when the `parallel` feature is on.
pub(crate) fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Squared radius that line searches stay within.
const LINE_RADIUS_SQR: f64 = 1.0 - 1e-10;

/// Parameters `t` for which `z + t e_j` (with `e = 1` or `i`) stays in the
/// domain, for disk, ball and polydisk factors.
pub(crate) fn line_interval(d: &Domain, z: &[Complex64], j: usize, imaginary: bool) -> Option<(f64, f64)> {
    let (f, off) = d
        .factor_slices()
        .into_iter()
        .find(|(f, off)| j >= *off && j < off + f.ambient_dim())?;
    let r = match f {
        Domain::Disk | Domain::Polydisk(_) => LINE_RADIUS_SQR,
        Domain::Ball(_) => {
            let rest: f64 = (off..off + f.ambient_dim())
                .filter(|&i| i != j)
                .map(|i| z[i].norm_sqr())
                .sum();
            LINE_RADIUS_SQR - rest
        }
        _ => return None,
    };
    let c = z[j];
    let b = if imaginary { c.im } else { c.re };
    let disc = b * b - (c.norm_sqr() - r);
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some((-b - s, -b + s))
}

/// Coordinatewise golden-section ascent from `start`.
pub(crate) fn refine<F>(d: &Domain, objective: &F, start: &[Complex64], cfg: &SamplingConfig) -> (f64, Vec<Complex64>)
where
    F: Fn(&[Complex64]) -> Result<f64>,
{
    let score = |z: &[Complex64]| objective(z).unwrap_or(f64::NEG_INFINITY);
    let mut z = start.to_vec();
    let mut best = score(&z);
    for _ in 0..cfg.sweeps {
        for j in 0..z.len() {
            for imaginary in [false, true] {
                let Some((lo, hi)) = line_interval(d, &z, j, imaginary) else {
                    continue;
                };
                let step = if imaginary { Complex64::new(0.0, 1.0) } else { Complex64::new(1.0, 0.0) };
                let base = z[j];
                let mut trial = z.clone();
                let (t, v) = golden_section_max(
                    |t| {
                        trial[j] = base + step * t;
                        score(&trial)
                    },
                    lo,
                    hi,
                    cfg.refine_iters,
                );
                if v > best {
                    best = v;
                    z[j] = base + step * t;
                }
            }
        }
    }
    (best, z)
}

/// Sampled supremum of `objective` over the domain, refined by local search
/// from the best samples. Returns the value and where it was attained.
pub(crate) fn maximize<F>(d: &Domain, objective: F, cfg: &SamplingConfig) -> Result<(f64, Point)>
where
    F: Fn(&[Complex64]) -> Result<f64> + Sync + Send,
{
    let points = sample_interior(d, cfg.samples.max(1), cfg.seed)?;
    let values = par_map(&points, |p| objective(p.coords()));
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut best = (values[order[0]], points[order[0]].0.clone());
    if d.has_metric() {
        let starts: Vec<usize> = order.iter().take(cfg.restarts).copied().collect();
        let refined = par_map(&starts, |&i| refine(d, &objective, &points[i].0, cfg));
        for (v, z) in refined {
            if v > best.0 {
                best = (v, z);
            }
        }
    }
    Ok((best.0, Point(best.1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn line_interval_in_ball() {
        let z = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.0)];
        let (lo, hi) = line_interval(&Domain::Ball(2), &z, 0, false).unwrap();
        assert_relative_eq!(lo, -1.6, epsilon = 1e-9);
        assert_relative_eq!(hi, 0.4, epsilon = 1e-9);
        let (lo, hi) = line_interval(&Domain::Ball(2), &z, 1, true).unwrap();
        assert_relative_eq!(lo, -0.8, epsilon = 1e-9);
        assert_relative_eq!(hi, 0.8, epsilon = 1e-9);
        assert!(line_interval(&Domain::CartanIV(3), &z, 0, false).is_none());
    }

    #[test]
    fn maximize_finds_disk_peak() {
        // max of 1 - |z - 0.3|^2 over the disk is 1 at z = 0.3
        let cfg = SamplingConfig::default().with_samples(200);
        let (v, p) = maximize(
            &Domain::Disk,
            |z| Ok(1.0 - (z[0] - Complex64::new(0.3, 0.0)).norm_sqr()),
            &cfg,
        )
        .unwrap();
        assert_relative_eq!(v, 1.0, epsilon = 1e-9);
        assert_relative_eq!(p.0[0].re, 0.3, epsilon = 1e-4);
    }
}
