use num_complex::Complex64;

use super::metric::{metric_form, MetricScale};
use super::{Domain, Point};
use crate::error::{BlochError, Result};
use crate::estimate::EstimateInterval;
use crate::numeric::{adaptive_simpson, nelder_mead};

/// Absolute tolerance of the per-segment length quadrature.
pub const PATH_TOL: f64 = 1e-8;

/// A polygonal path through interior points.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePath {
    nodes: Vec<Point>,
}

impl PiecewisePath {
    pub fn new(nodes: Vec<Point>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(BlochError::InvalidArgument(
                "a path needs at least two nodes".into(),
            ));
        }
        Ok(PiecewisePath { nodes })
    }

    pub fn segment(a: Point, b: Point) -> Self {
        PiecewisePath { nodes: vec![a, b] }
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    /// Concatenation; the last node of `self` should equal the first of `other`.
    pub fn concat(&self, other: &PiecewisePath) -> PiecewisePath {
        let mut nodes = self.nodes.clone();
        nodes.extend(other.nodes.iter().skip(1).cloned());
        PiecewisePath { nodes }
    }
}

/// Bergman length of a polygonal path.
///
/// All supported domains are convex, so every segment between interior nodes
/// stays interior; only the nodes are checked.
pub fn path_length(d: &Domain, p: &PiecewisePath) -> Result<f64> {
    d.require_metric()?;
    for node in &p.nodes {
        d.require_interior(node)?;
    }
    Ok(p.nodes
        .windows(2)
        .map(|w| segment_length(d, &w[0], &w[1]))
        .sum())
}

fn segment_length(d: &Domain, a: &Point, b: &Point) -> f64 {
    let u: Vec<Complex64> = a.0.iter().zip(&b.0).map(|(x, y)| y - x).collect();
    if u.iter().all(|c| c.norm_sqr() == 0.0) {
        return 0.0;
    }
    let integrand = |t: f64| {
        // γ(t) = a + t u
        let zt: Vec<Complex64> = a.0.iter().zip(&u).map(|(x, du)| x + du * t).collect();
        metric_form(d, &zt, &u, MetricScale::Distance).sqrt()
    };
    adaptive_simpson(&integrand, 0.0, 1.0, PATH_TOL)
}

/// Options for the polydisk/product distance upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOptions {
    /// Run a downhill simplex over intermediate nodes to shorten the straight segment.
    pub tighten: bool,
    pub nodes: usize,
    pub iterations: usize,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            tighten: false,
            nodes: 8,
            iterations: 200,
        }
    }
}

/// Bergman distance from the origin: exact on the disk and ball, bounded
/// elsewhere.
///
/// On polydisks and products the lower end is the largest factor distance
/// (each factor projection shortens paths) and the upper end is the length
/// of the straight segment, optionally shortened by path optimization.
pub fn rho_from_origin(d: &Domain, z: &Point, opts: PathOptions) -> Result<EstimateInterval> {
    d.require_metric()?;
    d.require_interior(z)?;
    if z.norm_sqr() == 0.0 {
        return Ok(EstimateInterval::exact(0.0));
    }
    match d {
        Domain::Disk | Domain::Ball(_) => Ok(EstimateInterval::exact(z.norm().atanh())),
        _ => {
            let lower = factor_lower(d, z);
            let origin = Point::origin(z.dim());
            let straight = path_length(d, &PiecewisePath::segment(origin, z.clone()))?;
            let upper = if opts.tighten {
                straight.min(optimized_length(d, z, opts))
            } else {
                straight
            };
            Ok(EstimateInterval::bounds(lower, upper))
        }
    }
}

fn factor_lower(d: &Domain, z: &Point) -> f64 {
    let c = z.coords();
    d.factor_slices()
        .into_iter()
        .map(|(f, off)| {
            let zs = &c[off..off + f.ambient_dim()];
            match f {
                Domain::Ball(_) => zs.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt().atanh(),
                _ => zs.iter().map(|x| x.norm()).fold(0.0, f64::max).atanh(),
            }
        })
        .fold(0.0, f64::max)
}

fn optimized_length(d: &Domain, z: &Point, opts: PathOptions) -> f64 {
    let dim = z.dim();
    let k = opts.nodes;
    // start from equally spaced nodes on the straight segment
    let mut start = Vec::with_capacity(2 * dim * k);
    for i in 1..=k {
        let t = i as f64 / (k + 1) as f64;
        for c in &z.0 {
            start.push(c.re * t);
            start.push(c.im * t);
        }
    }
    let origin = Point::origin(dim);
    let objective = |x: &[f64]| {
        let mut nodes = vec![origin.clone()];
        for i in 0..k {
            let coords = (0..dim)
                .map(|j| Complex64::new(x[2 * (i * dim + j)], x[2 * (i * dim + j) + 1]))
                .collect();
            nodes.push(Point(coords));
        }
        nodes.push(z.clone());
        path_length(d, &PiecewisePath { nodes }).unwrap_or(f64::INFINITY)
    };
    let step = 0.05 * (1.0 - z.max_modulus()).max(1e-3);
    nelder_mead(objective, &start, step, opts.iterations).1
}

/// Upper bound for the distance between two interior points: exact Möbius
/// formulas on the disk and ball, straight-segment length elsewhere.
pub fn rho_between_upper(d: &Domain, z: &Point, w: &Point) -> Result<f64> {
    d.require_metric()?;
    d.require_interior(z)?;
    d.require_interior(w)?;
    match d {
        Domain::Disk | Domain::Ball(_) => {
            let zz = z.norm_sqr();
            let ww = w.norm_sqr();
            let zw: Complex64 = z.0.iter().zip(&w.0).map(|(a, b)| a * b.conj()).sum();
            let denom = (Complex64::new(1.0, 0.0) - zw).norm_sqr();
            // 1 - |phi_w(z)|^2 = (1 - |z|^2)(1 - |w|^2) / |1 - <z,w>|^2
            let s = (1.0 - (1.0 - zz) * (1.0 - ww) / denom).max(0.0);
            Ok(s.sqrt().min(1.0 - 1e-16).atanh())
        }
        _ => path_length(d, &PiecewisePath::segment(z.clone(), w.clone())),
    }
}
