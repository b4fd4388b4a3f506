//! Bounded symmetric domains: descriptors, membership, metric, paths and samplers.
//!
//! Points on matrix domains (`cartan1`..`cartan3`) are flattened row-major, so
//! a point of `cartan1:m,n` has `m * n` coordinates and `Z[i][j]` sits at index
//! `i * n + j`.

mod metric;
mod parse;
mod path;
mod sample;

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{BlochError, Result};

pub use metric::{
    bergman_metric, bergman_metric_scaled, metric_form, metric_inverse_form, HermitianMetric,
    MetricScale,
};
pub use parse::parse_point;
pub use path::{path_length, rho_between_upper, rho_from_origin, PathOptions, PiecewisePath};
pub use sample::{sample_interior, sample_near_distinguished_boundary, sample_shell, SHELLS};

/// Eigenvalue threshold for matrix-domain membership.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Ambient dimensions of the two exceptional domains.
pub const EXCEPTIONAL1_DIM: usize = 16;
pub const EXCEPTIONAL2_DIM: usize = 27;

/// A point of a domain, as a complex coordinate vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point(pub Vec<Complex64>);

impl Point {
    pub fn new(coords: Vec<Complex64>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Complex64::new(0.0, 0.0); dim])
    }

    pub fn from_real(coords: &[f64]) -> Self {
        Point(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_modulus(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, t: f64) -> Point {
        Point(self.0.iter().map(|c| c * t).collect())
    }

    /// Linear interpolation `(1 - t) a + t b`.
    pub fn lerp(a: &Point, b: &Point, t: f64) -> Point {
        Point(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x * (1.0 - t) + y * t)
                .collect(),
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| format_complex(*c)).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Formats a complex number in the literal syntax accepted by the parsers.
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("({}-{}i)", c.re, -c.im)
    } else {
        format!("({}+{}i)", c.re, c.im)
    }
}

/// Which bounded symmetric domain, with its dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    Disk,
    Ball(usize),
    Polydisk(usize),
    /// `m x n` matrices with `I - Z Z* > 0`, `m >= n >= 1`.
    CartanI { m: usize, n: usize },
    /// Symmetric `n x n` matrices with `I - Z Z* > 0`.
    CartanII(usize),
    /// Antisymmetric `n x n` matrices with `I - Z Z* > 0`, `n >= 2`.
    CartanIII(usize),
    /// The Lie ball in `C^n`, `n != 2`.
    CartanIV(usize),
    Exceptional1,
    Exceptional2,
    Product(Vec<Domain>),
}

impl Domain {
    pub fn ball(n: usize) -> Result<Domain> {
        let d = Domain::Ball(n);
        d.validate()?;
        Ok(d)
    }

    pub fn polydisk(n: usize) -> Result<Domain> {
        let d = Domain::Polydisk(n);
        d.validate()?;
        Ok(d)
    }

    pub fn cartan1(m: usize, n: usize) -> Result<Domain> {
        let d = Domain::CartanI { m, n };
        d.validate()?;
        Ok(d)
    }

    pub fn product(factors: Vec<Domain>) -> Result<Domain> {
        let d = Domain::Product(factors);
        d.validate()?;
        Ok(d)
    }

    /// Checks the definitional dimension ranges and the product standard form.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(BlochError::InvalidDomain(msg));
        match self {
            Domain::Disk | Domain::Exceptional1 | Domain::Exceptional2 => Ok(()),
            Domain::Ball(n) | Domain::Polydisk(n) if *n == 0 => bad(format!("{self:?}: n >= 1")),
            Domain::Ball(_) | Domain::Polydisk(_) => Ok(()),
            Domain::CartanI { m, n } => {
                if *n >= 1 && m >= n {
                    Ok(())
                } else {
                    bad(format!("cartan1 requires m >= n >= 1, got m={m}, n={n}"))
                }
            }
            Domain::CartanII(n) => {
                if *n >= 1 {
                    Ok(())
                } else {
                    bad("cartan2 requires n >= 1".into())
                }
            }
            Domain::CartanIII(n) => {
                if *n >= 2 {
                    Ok(())
                } else {
                    bad(format!("cartan3 requires n >= 2, got {n}"))
                }
            }
            Domain::CartanIV(n) => {
                if *n >= 1 && *n != 2 {
                    Ok(())
                } else {
                    bad(format!("cartan4 requires n >= 1 and n != 2, got {n}"))
                }
            }
            Domain::Product(factors) => {
                if factors.len() < 2 {
                    return bad("product needs at least two factors".into());
                }
                for f in factors {
                    if matches!(f, Domain::Product(_)) {
                        return bad("nested products are not in standard form".into());
                    }
                    f.validate()?;
                }
                Ok(())
            }
        }
    }

    /// True when the dimensions also satisfy the restrictions that make the
    /// Cartan classes pairwise disjoint (`n >= 2` for class II, `n >= 5` for
    /// classes III and IV).
    pub fn is_canonical(&self) -> bool {
        match self {
            Domain::CartanII(n) => *n >= 2,
            Domain::CartanIII(n) | Domain::CartanIV(n) => *n >= 5,
            Domain::Product(fs) => fs.iter().all(Domain::is_canonical),
            _ => true,
        }
    }

    /// Complex dimension of the ambient coordinate vector.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Domain::Disk => 1,
            Domain::Ball(n) | Domain::Polydisk(n) | Domain::CartanIV(n) => *n,
            Domain::CartanI { m, n } => m * n,
            Domain::CartanII(n) | Domain::CartanIII(n) => n * n,
            Domain::Exceptional1 => EXCEPTIONAL1_DIM,
            Domain::Exceptional2 => EXCEPTIONAL2_DIM,
            Domain::Product(fs) => fs.iter().map(Domain::ambient_dim).sum(),
        }
    }

    /// Factors paired with their coordinate offsets; a non-product is its own factor.
    pub fn factor_slices(&self) -> Vec<(&Domain, usize)> {
        match self {
            Domain::Product(fs) => {
                let mut off = 0;
                fs.iter()
                    .map(|f| {
                        let here = off;
                        off += f.ambient_dim();
                        (f, here)
                    })
                    .collect()
            }
            other => vec![(other, 0)],
        }
    }

    /// Whether the Bergman metric is implemented (disk, ball, polydisk and their products).
    pub fn has_metric(&self) -> bool {
        match self {
            Domain::Disk | Domain::Ball(_) | Domain::Polydisk(_) => true,
            Domain::Product(fs) => fs.iter().all(Domain::has_metric),
            _ => false,
        }
    }

    pub fn require_metric(&self) -> Result<()> {
        if self.has_metric() {
            Ok(())
        } else {
            Err(BlochError::UnsupportedMetric(self.to_string()))
        }
    }

    fn check_dim(&self, z: &Point) -> Result<()> {
        let expected = self.ambient_dim();
        if z.dim() == expected {
            Ok(())
        } else {
            Err(BlochError::DimensionMismatch {
                expected,
                got: z.dim(),
            })
        }
    }

    /// Open-domain membership test.
    pub fn contains(&self, z: &Point) -> Result<bool> {
        self.check_dim(z)?;
        self.contains_slice(z.coords())
    }

    fn contains_slice(&self, c: &[Complex64]) -> Result<bool> {
        Ok(match self {
            Domain::Disk => c[0].norm_sqr() < 1.0,
            Domain::Ball(_) => c.iter().map(|x| x.norm_sqr()).sum::<f64>() < 1.0,
            Domain::Polydisk(_) => c.iter().all(|x| x.norm_sqr() < 1.0),
            Domain::CartanI { m, n } => matrix_contraction(c, *m, *n),
            Domain::CartanII(n) => {
                is_symmetric(c, *n, 1.0) && matrix_contraction(c, *n, *n)
            }
            Domain::CartanIII(n) => {
                is_symmetric(c, *n, -1.0) && matrix_contraction(c, *n, *n)
            }
            Domain::CartanIV(_) => {
                let norm_sqr: f64 = c.iter().map(|x| x.norm_sqr()).sum();
                let sq: Complex64 = c.iter().map(|x| x * x).sum();
                let a = sq.norm_sqr() + 1.0 - 2.0 * norm_sqr;
                a > MEMBERSHIP_TOL && norm_sqr < 1.0
            }
            Domain::Exceptional1 | Domain::Exceptional2 => {
                return Err(BlochError::Unsupported(format!(
                    "membership test for {self}"
                )))
            }
            Domain::Product(_) => {
                for (f, off) in self.factor_slices() {
                    if !f.contains_slice(&c[off..off + f.ambient_dim()])? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }

    /// Fails unless `z` has the right dimension and lies in the domain.
    pub fn require_interior(&self, z: &Point) -> Result<()> {
        if self.contains(z)? {
            Ok(())
        } else {
            Err(BlochError::OutsideDomain)
        }
    }
}

fn is_symmetric(c: &[Complex64], n: usize, sign: f64) -> bool {
    for i in 0..n {
        for j in 0..n {
            if (c[i * n + j] - c[j * n + i] * sign).norm() > MEMBERSHIP_TOL {
                return false;
            }
        }
    }
    true
}

/// `I_m - Z Z* > 0` for a row-major `m x n` matrix `Z`.
fn matrix_contraction(c: &[Complex64], m: usize, n: usize) -> bool {
    let z = DMatrix::from_row_slice(m, n, c);
    let gram = DMatrix::<Complex64>::identity(m, m) - &z * z.adjoint();
    let eig = nalgebra::SymmetricEigen::new(gram);
    eig.eigenvalues.iter().all(|&l| l > MEMBERSHIP_TOL)
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Disk => write!(f, "disk"),
            Domain::Ball(n) => write!(f, "ball:{n}"),
            Domain::Polydisk(n) => write!(f, "polydisk:{n}"),
            Domain::CartanI { m, n } => write!(f, "cartan1:{m},{n}"),
            Domain::CartanII(n) => write!(f, "cartan2:{n}"),
            Domain::CartanIII(n) => write!(f, "cartan3:{n}"),
            Domain::CartanIV(n) => write!(f, "cartan4:{n}"),
            Domain::Exceptional1 => write!(f, "exc1"),
            Domain::Exceptional2 => write!(f, "exc2"),
            Domain::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(ToString::to_string).collect();
                write!(f, "product({})", parts.join(","))
            }
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = BlochError;

    fn from_str(s: &str) -> Result<Domain> {
        parse::parse_domain(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ball_center_is_inside() {
        let d = Domain::Ball(2);
        assert!(d.contains(&Point::origin(2)).unwrap());
    }

    #[test]
    fn polydisk_boundary_excluded() {
        let d = Domain::Polydisk(2);
        assert!(!d.contains(&Point::from_real(&[1.0, 0.0])).unwrap());
    }

    #[test]
    fn lie_ball_point_near_boundary() {
        // A = 0.81^2 + 1 - 1.62 = 0.0361
        let d = Domain::CartanIV(5);
        let z = Point::from_real(&[0.9, 0.0, 0.0, 0.0, 0.0]);
        assert!(d.contains(&z).unwrap());
        // brute-force scan of A and the norm along the first axis
        for k in 0..1000 {
            let x = k as f64 / 1000.0;
            let a = x.powi(4) + 1.0 - 2.0 * x * x;
            let inside = a > MEMBERSHIP_TOL && x * x < 1.0;
            assert_eq!(
                d.contains(&Point::from_real(&[x, 0.0, 0.0, 0.0, 0.0])).unwrap(),
                inside
            );
        }
        // (0.6, 0.6i) has sum of squares 0, norm^2 0.72: A = 1 - 1.44 < 0
        let w = Point(vec![c(0.6, 0.0), c(0.0, 0.6), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(!d.contains(&w).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = Domain::Ball(3).contains(&Point::origin(2)).unwrap_err();
        assert_eq!(err, BlochError::DimensionMismatch { expected: 3, got: 2 });
    }

    #[test]
    fn matrix_membership_row_major() {
        let d = Domain::CartanI { m: 2, n: 2 };
        // diag(0.5, 0.99)
        let z = Point::from_real(&[0.5, 0.0, 0.0, 0.99]);
        assert!(d.contains(&z).unwrap());
        let z = Point::from_real(&[0.5, 0.0, 0.0, 1.0]);
        assert!(!d.contains(&z).unwrap());
        // operator norm of [[0.6, 0.6], [0, 0]] is 0.6 * sqrt 2 < 1
        let z = Point::from_real(&[0.6, 0.6, 0.0, 0.0]);
        assert!(d.contains(&z).unwrap());
        let z = Point::from_real(&[0.8, 0.8, 0.0, 0.0]);
        assert!(!d.contains(&z).unwrap());
    }

    #[test]
    fn cartan_ii_requires_symmetry() {
        let d = Domain::CartanII(2);
        assert!(d.contains(&Point::from_real(&[0.1, 0.2, 0.2, 0.1])).unwrap());
        assert!(!d.contains(&Point::from_real(&[0.1, 0.2, 0.0, 0.1])).unwrap());
        let d3 = Domain::CartanIII(2);
        assert!(d3.contains(&Point::from_real(&[0.0, 0.5, -0.5, 0.0])).unwrap());
        assert!(!d3.contains(&Point::from_real(&[0.0, 0.5, 0.5, 0.0])).unwrap());
    }

    #[test]
    fn product_membership_uses_slices() {
        let d = Domain::product(vec![Domain::Ball(2), Domain::Polydisk(1)]).unwrap();
        assert_eq!(d.ambient_dim(), 3);
        assert!(d.contains(&Point::from_real(&[0.6, 0.7, 0.99])).unwrap());
        assert!(!d.contains(&Point::from_real(&[0.8, 0.7, 0.0])).unwrap());
    }

    #[test]
    fn dimension_restrictions() {
        assert!(Domain::cartan1(1, 2).is_err());
        assert!(Domain::CartanIII(1).validate().is_err());
        assert!(Domain::CartanIV(2).validate().is_err());
        assert!(Domain::CartanIV(3).validate().is_ok());
        assert!(!Domain::CartanIV(3).is_canonical());
        assert!(Domain::CartanIV(5).is_canonical());
        assert!(!Domain::CartanII(1).is_canonical());
        assert!(Domain::product(vec![Domain::Disk]).is_err());
        assert!(Domain::product(vec![
            Domain::Disk,
            Domain::Product(vec![Domain::Disk, Domain::Disk])
        ])
        .is_err());
    }

    #[test]
    fn exceptional_membership_is_unsupported() {
        let d = Domain::Exceptional1;
        assert!(matches!(
            d.contains(&Point::origin(16)),
            Err(BlochError::Unsupported(_))
        ));
    }
}
