use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Domain, Point};
use crate::error::{BlochError, Result};
use crate::random::seeded_rng as rng_for;

/// Lower edges of the boundary-proximity bands used by [`sample_interior`].
pub const SHELLS: [f64; 5] = [0.0, 0.5, 0.9, 0.99, 0.999];

/// Outer edge of the last band; keeps samples a representable distance from the boundary.
const OUTER: f64 = 1.0 - 1e-6;

fn gaussian_c(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn unit_phase(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn unit_sphere(rng: &mut ChaCha8Rng, k: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..k).map(|_| gaussian_c(rng)).collect();
        let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

fn spectral_norm(c: &[Complex64], m: usize, n: usize) -> f64 {
    let z = DMatrix::from_row_slice(m, n, c);
    let eig = nalgebra::SymmetricEigen::new(&z * z.adjoint());
    eig.eigenvalues.iter().copied().fold(0.0, f64::max).max(0.0).sqrt()
}

/// Scale-invariant "radius" of a factor point: 1 on the boundary.
fn factor_radius(f: &Domain, c: &[Complex64]) -> f64 {
    match f {
        Domain::Disk | Domain::Ball(_) => c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt(),
        Domain::Polydisk(_) => c.iter().map(|x| x.norm()).fold(0.0, f64::max),
        Domain::CartanI { m, n } => spectral_norm(c, *m, *n),
        Domain::CartanII(n) | Domain::CartanIII(n) => spectral_norm(c, *n, *n),
        Domain::CartanIV(_) => {
            let nn: f64 = c.iter().map(|x| x.norm_sqr()).sum();
            let sq: Complex64 = c.iter().map(|x| x * x).sum();
            (nn + (nn * nn - sq.norm_sqr()).max(0.0).sqrt()).sqrt()
        }
        _ => unreachable!(),
    }
}

/// A random factor point whose radius is exactly `r`.
fn factor_point(f: &Domain, r: f64, rng: &mut ChaCha8Rng) -> Result<Vec<Complex64>> {
    let k = f.ambient_dim();
    let raw: Vec<Complex64> = match f {
        Domain::Disk | Domain::Ball(_) => unit_sphere(rng, k),
        Domain::Polydisk(_) => {
            let mut v: Vec<Complex64> = (0..k)
                .map(|_| unit_phase(rng) * rng.gen::<f64>().sqrt())
                .collect();
            let j = rng.gen_range(0..k);
            v[j] = unit_phase(rng);
            v
        }
        Domain::CartanI { .. } | Domain::CartanIV(_) => (0..k).map(|_| gaussian_c(rng)).collect(),
        Domain::CartanII(n) | Domain::CartanIII(n) => {
            let sign = if matches!(f, Domain::CartanII(_)) { 1.0 } else { -1.0 };
            let n = *n;
            let mut v = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                for j in i..n {
                    if i == j && sign < 0.0 {
                        continue;
                    }
                    let g = gaussian_c(rng);
                    v[i * n + j] = g;
                    v[j * n + i] = g * sign;
                }
            }
            v
        }
        Domain::Exceptional1 | Domain::Exceptional2 | Domain::Product(_) => {
            return Err(BlochError::Unsupported(format!("sampling on {f}")))
        }
    };
    let rad = factor_radius(f, &raw);
    if rad <= 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); k]);
    }
    Ok(raw.into_iter().map(|c| c * (r / rad)).collect())
}

fn point_at_radius(d: &Domain, rng: &mut ChaCha8Rng, mut radius: impl FnMut(&mut ChaCha8Rng) -> f64) -> Result<Point> {
    let mut coords = Vec::with_capacity(d.ambient_dim());
    for (f, _) in d.factor_slices() {
        let r = radius(rng);
        coords.extend(factor_point(f, r, rng)?);
    }
    Ok(Point(coords))
}

/// Reproducible interior samples stratified by boundary proximity.
///
/// Sample `i` falls in band `i mod 5`, whose factor radii are uniform between
/// consecutive entries of [`SHELLS`] (the last band reaching to `1 - 1e-6`).
/// Radius means Euclidean norm on balls, largest modulus on polydisks,
/// largest singular value on matrix domains and the spectral norm on the Lie
/// ball.
pub fn sample_interior(d: &Domain, count: usize, seed: u64) -> Result<Vec<Point>> {
    d.validate()?;
    let mut rng = rng_for(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let band = i % SHELLS.len();
        let lo = SHELLS[band];
        let hi = SHELLS.get(band + 1).copied().unwrap_or(OUTER);
        loop {
            let p = point_at_radius(d, &mut rng, |rng| lo + (hi - lo) * rng.gen::<f64>())?;
            if d.contains(&p)? {
                out.push(p);
                break;
            }
        }
    }
    Ok(out)
}

/// Points whose factor radii all equal `r`.
///
/// On polydisk factors every other sample lies on the torus `|z_k| = r`; the
/// rest have one coordinate of modulus `r` and the others uniform in the
/// disk of radius `r`.
pub fn sample_shell(d: &Domain, r: f64, count: usize, seed: u64) -> Result<Vec<Point>> {
    if !(0.0..1.0).contains(&r) {
        return Err(BlochError::InvalidArgument(format!("shell radius {r} not in [0, 1)")));
    }
    let mut rng = rng_for(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut coords = Vec::with_capacity(d.ambient_dim());
        for (f, _) in d.factor_slices() {
            if matches!(f, Domain::Polydisk(_)) && i % 2 == 1 {
                coords.extend((0..f.ambient_dim()).map(|_| unit_phase(&mut rng) * r));
            } else {
                coords.extend(factor_point(f, r, &mut rng)?);
            }
        }
        out.push(Point(coords));
    }
    Ok(out)
}

/// Points approaching the distinguished boundary: norm `1 - eps` on ball
/// factors, every coordinate of modulus `1 - eps` on disk and polydisk factors.
pub fn sample_near_distinguished_boundary(
    d: &Domain,
    count: usize,
    eps: f64,
    seed: u64,
) -> Result<Vec<Point>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(BlochError::InvalidArgument(format!("eps {eps} not in (0, 1)")));
    }
    d.require_metric()
        .map_err(|_| BlochError::Unsupported(format!("distinguished-boundary sampling on {d}")))?;
    let r = 1.0 - eps;
    let mut rng = rng_for(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut coords = Vec::with_capacity(d.ambient_dim());
        for (f, _) in d.factor_slices() {
            match f {
                Domain::Ball(k) => coords.extend(unit_sphere(&mut rng, *k).into_iter().map(|c| c * r)),
                _ => coords.extend((0..f.ambient_dim()).map(|_| unit_phase(&mut rng) * r)),
            }
        }
        out.push(Point(coords));
    }
    Ok(out)
}
