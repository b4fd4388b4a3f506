use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{Domain, Point};
use crate::error::{BlochError, Result};

/// Normalization of the ball factor metric.
///
/// `Distance` is the normalization in which the distance from the origin on
/// the ball is `artanh |z|`; the disk metric is `|u|^2 / (1 - |z|^2)^2` in
/// both. `BlochConstant` multiplies each `n`-ball factor by `(n + 1) / 2`,
/// which is the normalization the tabulated Bloch constants `c_D` refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MetricScale {
    #[default]
    Distance,
    BlochConstant,
}

impl MetricScale {
    fn ball_factor(self, n: usize) -> f64 {
        match self {
            MetricScale::Distance => 1.0,
            MetricScale::BlochConstant => (n as f64 + 1.0) / 2.0,
        }
    }
}

/// The Bergman metric matrix `H_z` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMetric {
    pub matrix: DMatrix<Complex64>,
    pub point: Point,
}

impl HermitianMetric {
    /// `H_z(u, conj u) = u* H u`.
    pub fn quadratic_form(&self, u: &[Complex64]) -> f64 {
        let v = DVector::from_column_slice(u);
        (v.adjoint() * &self.matrix * &v)[(0, 0)].re
    }

    pub fn hermitian_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        nalgebra::SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.hermitian_defect() <= 1e-12 && self.eigenvalues().iter().all(|&l| l > 0.0)
    }

    /// Solves `H x = b` by Cholesky factorization.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let chol = self.matrix.clone().cholesky().ok_or_else(|| {
            BlochError::NumericalDomain("metric is not positive definite".into())
        })?;
        Ok(chol
            .solve(&DVector::from_column_slice(b))
            .iter()
            .copied()
            .collect())
    }
}

/// Bergman metric on the disk, ball, polydisk and their products.
pub fn bergman_metric(d: &Domain, z: &Point) -> Result<HermitianMetric> {
    bergman_metric_scaled(d, z, MetricScale::Distance)
}

pub fn bergman_metric_scaled(d: &Domain, z: &Point, scale: MetricScale) -> Result<HermitianMetric> {
    d.require_metric()?;
    d.require_interior(z)?;
    let dim = d.ambient_dim();
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    let c = z.coords();
    for (f, off) in d.factor_slices() {
        let k = f.ambient_dim();
        let zs = &c[off..off + k];
        match f {
            Domain::Disk | Domain::Polydisk(_) => {
                for (i, zi) in zs.iter().enumerate() {
                    let w = 1.0 - zi.norm_sqr();
                    h[(off + i, off + i)] = Complex64::new(1.0 / (w * w), 0.0);
                }
            }
            Domain::Ball(n) => {
                let w = 1.0 - zs.iter().map(|x| x.norm_sqr()).sum::<f64>();
                let s = scale.ball_factor(*n) / (w * w);
                for i in 0..k {
                    for j in 0..k {
                        let delta = if i == j { w } else { 0.0 };
                        h[(off + i, off + j)] = (zs[i] * zs[j].conj() + delta) * s;
                    }
                }
            }
            _ => unreachable!("require_metric admits only disk, ball, polydisk"),
        }
    }
    Ok(HermitianMetric {
        matrix: h,
        point: z.clone(),
    })
}

/// `H_z(u, conj u)` in closed form per factor (no membership check).
pub fn metric_form(d: &Domain, z: &[Complex64], u: &[Complex64], scale: MetricScale) -> f64 {
    let mut total = 0.0;
    for (f, off) in d.factor_slices() {
        let k = f.ambient_dim();
        let zs = &z[off..off + k];
        let us = &u[off..off + k];
        match f {
            Domain::Disk | Domain::Polydisk(_) => {
                for (zi, ui) in zs.iter().zip(us) {
                    let w = 1.0 - zi.norm_sqr();
                    total += ui.norm_sqr() / (w * w);
                }
            }
            Domain::Ball(n) => {
                let w = 1.0 - zs.iter().map(|x| x.norm_sqr()).sum::<f64>();
                let uu: f64 = us.iter().map(|x| x.norm_sqr()).sum();
                let uz: Complex64 = us.iter().zip(zs).map(|(a, b)| a * b.conj()).sum();
                total += scale.ball_factor(*n) * (w * uu + uz.norm_sqr()) / (w * w);
            }
            _ => unreachable!("metric_form on unsupported factor"),
        }
    }
    total
}

/// `g^T H_z^{-1} conj(g)` for a gradient row `g`, in closed form per factor.
///
/// This is the square of `sup_u |g . u| / H_z(u, conj u)^{1/2}`. The caller
/// is responsible for the domain and membership checks.
pub fn metric_inverse_form(d: &Domain, z: &[Complex64], g: &[Complex64], scale: MetricScale) -> f64 {
    let mut total = 0.0;
    let mut off = 0;
    let mut add_factor = |f: &Domain, off: usize| {
        let k = f.ambient_dim();
        let zs = &z[off..off + k];
        let gs = &g[off..off + k];
        match f {
            Domain::Disk | Domain::Polydisk(_) => {
                for (zi, gi) in zs.iter().zip(gs) {
                    let w = 1.0 - zi.norm_sqr();
                    total += w * w * gi.norm_sqr();
                }
            }
            Domain::Ball(n) => {
                let w = 1.0 - zs.iter().map(|x| x.norm_sqr()).sum::<f64>();
                let gg: f64 = gs.iter().map(|x| x.norm_sqr()).sum();
                let gz: Complex64 = gs.iter().zip(zs).map(|(a, b)| a * b).sum();
                total += (w * (gg - gz.norm_sqr())).max(0.0) / scale.ball_factor(*n);
            }
            _ => unreachable!("metric_inverse_form on unsupported factor"),
        }
    };
    match d {
        Domain::Product(fs) => {
            for f in fs {
                add_factor(f, off);
                off += f.ambient_dim();
            }
        }
        other => add_factor(other, 0),
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn disk_at_origin_is_one() {
        let h = bergman_metric(&Domain::Disk, &Point::origin(1)).unwrap();
        assert_relative_eq!(h.matrix[(0, 0)].re, 1.0);
    }

    #[test]
    fn polydisk_diagonal_entries() {
        let h = bergman_metric(&Domain::Polydisk(2), &Point::from_real(&[0.5, 0.0])).unwrap();
        assert_relative_eq!(h.matrix[(0, 0)].re, 16.0 / 9.0, epsilon = 1e-14);
        assert_relative_eq!(h.matrix[(1, 1)].re, 1.0);
        assert_eq!(h.matrix[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn ball_origin_identity() {
        let h = bergman_metric(&Domain::Ball(2), &Point::origin(2)).unwrap();
        assert_eq!(h.matrix, DMatrix::identity(2, 2));
    }

    #[test]
    fn ball_reduces_to_disk_in_one_dimension() {
        let z = Point(vec![Complex64::new(0.3, -0.4)]);
        let hb = bergman_metric(&Domain::Ball(1), &z).unwrap();
        let hd = bergman_metric(&Domain::Disk, &z).unwrap();
        assert_relative_eq!(hb.matrix[(0, 0)].re, hd.matrix[(0, 0)].re, epsilon = 1e-12);
    }

    #[test]
    fn unsupported_kinds() {
        let err = bergman_metric(&Domain::CartanIV(5), &Point::origin(5)).unwrap_err();
        assert!(matches!(err, BlochError::UnsupportedMetric(_)));
    }

    #[test]
    fn outside_point_rejected() {
        let err = bergman_metric(&Domain::Ball(2), &Point::from_real(&[0.8, 0.8])).unwrap_err();
        assert_eq!(err, BlochError::OutsideDomain);
    }

    #[test]
    fn closed_form_inverse_matches_cholesky() {
        let d = Domain::Product(vec![Domain::Ball(3), Domain::Polydisk(2)]);
        let z = Point(vec![
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.1, 0.5),
            Complex64::new(0.2, -0.3),
            Complex64::new(0.9, 0.0),
            Complex64::new(0.0, -0.7),
        ]);
        let g: Vec<Complex64> = (0..5)
            .map(|k| Complex64::new(1.0 + k as f64, 0.5 - k as f64))
            .collect();
        for scale in [MetricScale::Distance, MetricScale::BlochConstant] {
            let h = bergman_metric_scaled(&d, &z, scale).unwrap();
            let conj_g: Vec<Complex64> = g.iter().map(|c| c.conj()).collect();
            let x = h.solve(&conj_g).unwrap();
            let via_solve: Complex64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
            let closed = metric_inverse_form(&d, z.coords(), &g, scale);
            assert_relative_eq!(via_solve.re, closed, max_relative = 1e-12);
            assert!(via_solve.im.abs() < 1e-9);
        }
    }
}
