use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::check_arity;
use crate::domain::{sample_interior, Domain};
use crate::error::Result;
use crate::search::par_map;
use crate::symbols::SymbolExpr;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub count: usize,
    /// `[re_min, re_max, im_min, im_max]`
    pub bbox: [f64; 4],
    pub max_modulus: f64,
    /// Area of the convex hull of the cloud.
    pub hull_area: f64,
    /// Hull vertices in counter-clockwise order.
    pub hull: Vec<Complex64>,
}

/// Sampled range of `psi`, whose closure is the spectrum of `M_psi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCloud {
    pub points: Vec<Complex64>,
    pub summary: SpectrumSummary,
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Andrew's monotone chain.
fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn polygon_area(h: &[Complex64]) -> f64 {
    let n = h.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n).map(|i| h[i].re * h[(i + 1) % n].im - h[(i + 1) % n].re * h[i].im).sum::<f64>().abs()
}

impl SpectrumSummary {
    fn of(points: &[Complex64]) -> SpectrumSummary {
        let mut bbox = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for p in points {
            bbox[0] = bbox[0].min(p.re);
            bbox[1] = bbox[1].max(p.re);
            bbox[2] = bbox[2].min(p.im);
            bbox[3] = bbox[3].max(p.im);
        }
        let hull = convex_hull(points);
        SpectrumSummary {
            count: points.len(),
            bbox,
            max_modulus: points.iter().map(|p| p.norm()).fold(0.0, f64::max),
            hull_area: polygon_area(&hull),
            hull,
        }
    }

    /// Whether `w` lies in the bounding box and the hull (up to `tol`).
    pub fn contains(&self, w: Complex64, tol: f64) -> bool {
        let [a, b, c, d] = self.bbox;
        if w.re < a - tol || w.re > b + tol || w.im < c - tol || w.im > d + tol {
            return false;
        }
        let h = &self.hull;
        if h.len() < 3 {
            return h.iter().any(|p| (p - w).norm() <= tol) || h.len() == 2 && segment_distance(h[0], h[1], w) <= tol;
        }
        (0..h.len()).all(|i| {
            let (p, q) = (h[i], h[(i + 1) % h.len()]);
            cross(p, q, w) >= -tol * (q - p).norm()
        })
    }
}

fn segment_distance(a: Complex64, b: Complex64, w: Complex64) -> f64 {
    let ab = b - a;
    let t = (((w - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0);
    (a + ab * t - w).norm()
}

impl SpectrumCloud {
    /// Distance from `lambda` to the nearest cloud point.
    pub fn nearest_distance(&self, lambda: Complex64) -> f64 {
        self.points.iter().map(|p| (p - lambda).norm()).fold(f64::INFINITY, f64::min)
    }

    /// The scale `sigma / alpha^2` bounding `sigma` of the resolvent symbol
    /// `1 / (psi - lambda)` when `lambda` is at distance `alpha > 0` from the range.
    pub fn resolvent_scale(&self, lambda: Complex64, sigma: f64) -> Option<f64> {
        let alpha = self.nearest_distance(lambda);
        (alpha > 0.0).then(|| sigma / (alpha * alpha))
    }

    /// Cells of a `grid x grid` partition of `[-radius, radius]^2` lying
    /// entirely inside the disk of that radius, and how many of them contain
    /// no cloud point.
    pub fn empty_cells_in_disk(&self, radius: f64, grid: usize) -> (usize, usize) {
        let h = 2.0 * radius / grid as f64;
        let mut hits = vec![false; grid * grid];
        for p in &self.points {
            let i = ((p.re + radius) / h).floor();
            let j = ((p.im + radius) / h).floor();
            if i >= 0.0 && j >= 0.0 && (i as usize) < grid && (j as usize) < grid {
                hits[i as usize * grid + j as usize] = true;
            }
        }
        let mut inside = 0;
        let mut empty = 0;
        for i in 0..grid {
            for j in 0..grid {
                let xs = [-radius + i as f64 * h, -radius + (i + 1) as f64 * h];
                let ys = [-radius + j as f64 * h, -radius + (j + 1) as f64 * h];
                let fully = xs.iter().all(|x| ys.iter().all(|y| x * x + y * y <= radius * radius));
                if fully {
                    inside += 1;
                    if !hits[i * grid + j] {
                        empty += 1;
                    }
                }
            }
        }
        (inside, empty)
    }
}

/// `psi` evaluated at `nsamples` stratified interior points; a constant
/// symbol gives its single value.
pub fn spectrum_cloud(d: &Domain, psi: &SymbolExpr, nsamples: usize, seed: u64) -> Result<SpectrumCloud> {
    check_arity(d, psi)?;
    let points = if let Some(c) = psi.constant_value()? {
        vec![c]
    } else {
        let pts = sample_interior(d, nsamples.max(1), seed)?;
        par_map(&pts, |p| psi.evaluate(p)).into_iter().collect::<Result<Vec<_>>>()?
    };
    let summary = SpectrumSummary::of(&points);
    Ok(SpectrumCloud { points, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::sample_interior;

    #[test]
    fn hull_of_square() {
        let pts: Vec<Complex64> = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)]
            .iter()
            .map(|&(a, b)| Complex64::new(a, b))
            .collect();
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!((polygon_area(&h) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_cloud_is_single_value() {
        let psi = SymbolExpr::parse("5", 2).unwrap();
        let c = spectrum_cloud(&Domain::Ball(2), &psi, 1000, 1).unwrap();
        assert_eq!(c.points, vec![Complex64::new(5.0, 0.0)]);
        assert_eq!(c.summary.hull_area, 0.0);
        assert!(c.summary.contains(Complex64::new(5.0, 0.0), 1e-12));
    }

    #[test]
    fn coordinate_cloud_in_unit_disk() {
        let psi = SymbolExpr::parse("z1", 2).unwrap();
        let c = spectrum_cloud(&Domain::Ball(2), &psi, 20_000, 3).unwrap();
        assert!(c.summary.max_modulus < 1.0);
        let (inside, empty) = c.empty_cells_in_disk(0.95, 20);
        assert!(inside > 200);
        assert_eq!(empty, 0);
        assert!(c.resolvent_scale(Complex64::new(2.0, 0.0), 1.0).unwrap() <= 1.0);
    }

    #[test]
    fn square_fills_disk() {
        // the range of z^2 on the disk is the disk; brute-force scan of a polar grid
        let psi = SymbolExpr::parse("z1^2", 1).unwrap();
        let c = spectrum_cloud(&Domain::Disk, &psi, 50_000, 5).unwrap();
        assert!(c.summary.max_modulus < 1.0);
        assert_eq!(c.empty_cells_in_disk(0.9, 10).1, 0);
        for k in 0..64 {
            let w = Complex64::from_polar(0.8, k as f64 * std::f64::consts::TAU / 64.0);
            assert!(c.nearest_distance(w) < 0.05);
        }
    }

    #[test]
    fn cloud_points_inside_summary() {
        let psi = SymbolExpr::parse("z1 + 2*z2^2 - i", 2).unwrap();
        let c = spectrum_cloud(&Domain::Polydisk(2), &psi, 2000, 9).unwrap();
        for p in sample_interior(&Domain::Polydisk(2), 2000, 9).unwrap() {
            assert!(c.summary.contains(psi.evaluate(&p).unwrap(), 1e-9));
        }
    }
}
