//! Browser bindings for a few blochkit computations. The `*_inner`
//! functions are plain Rust so they can be tested natively; the exported
//! wrappers only convert errors.

use blochkit::bloch::q_value;
use blochkit::constants::{bloch_constant, in_class_d};
use blochkit::domain::{Domain, Point};
use blochkit::operator::spectrum_cloud;
use blochkit::symbols::SymbolExpr;
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

fn parse(domain: &str, symbol: Option<&str>) -> Result<(Domain, Option<SymbolExpr>), String> {
    let d: Domain = domain.parse().map_err(|e| format!("{e}"))?;
    d.validate().map_err(|e| format!("{e}"))?;
    let f = match symbol {
        Some(s) => Some(SymbolExpr::parse(s, d.ambient_dim()).map_err(|e| format!("{e}"))?),
        None => None,
    };
    Ok((d, f))
}

/// Point of the plotted slice for the grid coordinates `(x, y)` in `[-1, 1]^2`.
/// One-dimensional domains use the complex plane, two-dimensional ones the
/// real slice `(x, y)`.
fn slice_point(dim: usize, x: f64, y: f64) -> Option<Point> {
    match dim {
        1 => Some(Point(vec![Complex64::new(x, y)])),
        2 => Some(Point(vec![Complex64::new(x, 0.0), Complex64::new(y, 0.0)])),
        _ => None,
    }
}

/// `res * res` values of Q_f, row-major with y decreasing; NaN off the domain.
pub fn q_heatmap_inner(domain: &str, symbol: &str, res: usize) -> Result<Vec<f64>, String> {
    let (d, f) = parse(domain, Some(symbol))?;
    let f = f.unwrap();
    let dim = d.ambient_dim();
    if slice_point(dim, 0.0, 0.0).is_none() {
        return Err(format!("heatmaps need a domain of dimension 1 or 2, {d} has {dim}"));
    }
    if !(2..=400).contains(&res) {
        return Err("resolution must be between 2 and 400".into());
    }
    let step = 2.0 / (res - 1) as f64;
    let mut out = Vec::with_capacity(res * res);
    for row in 0..res {
        let y = 1.0 - row as f64 * step;
        for col in 0..res {
            let z = slice_point(dim, -1.0 + col as f64 * step, y).unwrap();
            let v = match d.contains(&z) {
                Ok(true) => q_value(&d, &f, &z).unwrap_or(f64::NAN),
                _ => f64::NAN,
            };
            out.push(v);
        }
    }
    Ok(out)
}

/// Sampled spectrum of the multiplication operator, interleaved `re, im`.
pub fn spectrum_inner(domain: &str, symbol: &str, samples: usize, seed: u64) -> Result<Vec<f64>, String> {
    let (d, f) = parse(domain, Some(symbol))?;
    let cloud = spectrum_cloud(&d, &f.unwrap(), samples.clamp(1, 50_000), seed).map_err(|e| format!("{e}"))?;
    Ok(cloud.points.iter().flat_map(|p| [p.re, p.im]).collect())
}

/// `[c_D, 1 if D is in the class of domains without disk factors else 0]`.
pub fn constant_inner(domain: &str) -> Result<Vec<f64>, String> {
    let (d, _) = parse(domain, None)?;
    let c = bloch_constant(&d).map_err(|e| format!("{e}"))?;
    let class = in_class_d(&d).map_err(|e| format!("{e}"))?;
    Ok(vec![c, if class { 1.0 } else { 0.0 }])
}

#[wasm_bindgen]
pub fn q_heatmap(domain: &str, symbol: &str, res: usize) -> Result<Vec<f64>, JsError> {
    q_heatmap_inner(domain, symbol, res).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn spectrum(domain: &str, symbol: &str, samples: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    spectrum_inner(domain, symbol, samples, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bloch_constant_of(domain: &str) -> Result<Vec<f64>, JsError> {
    constant_inner(domain).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heatmap_of_z_on_the_disk() {
        let res = 5;
        let h = q_heatmap_inner("disk", "z1", res).unwrap();
        assert_eq!(h.len(), res * res);
        // centre of the grid is the origin, where Q_z = 1
        assert!((h[2 * res + 2] - 1.0).abs() < 1e-12);
        // corners are outside the disk
        assert!(h[0].is_nan() && h[res * res - 1].is_nan());
        assert!(h.iter().filter(|v| v.is_finite()).all(|&v| v > 0.0 && v <= 1.0 + 1e-12));
    }

    #[test]
    fn heatmap_rejects_higher_dimensions() {
        assert!(q_heatmap_inner("ball:3", "z1", 10).is_err());
        assert!(q_heatmap_inner("disk", "z1", 1).is_err());
        assert!(q_heatmap_inner("disk", "z1 +", 10).is_err());
    }

    #[test]
    fn spectrum_points_lie_in_the_closed_disk() {
        let pts = spectrum_inner("ball:2", "z1*z2", 200, 7).unwrap();
        assert_eq!(pts.len(), 400);
        assert!(pts.chunks(2).all(|p| p[0].hypot(p[1]) <= 0.5 + 1e-12));
        assert_eq!(pts, spectrum_inner("ball:2", "z1*z2", 200, 7).unwrap());
    }

    #[test]
    fn constants_match_the_registry() {
        let v = constant_inner("ball:2").unwrap();
        assert!((v[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(v[1], 1.0);
        assert_eq!(constant_inner("disk").unwrap()[1], 0.0);
        assert!(constant_inner("nowhere").is_err());
    }
}
