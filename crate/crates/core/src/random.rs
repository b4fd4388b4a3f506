//! Seeded generators of random test symbols.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::symbols::{Expr, SymbolExpr};

/// The generator behind every seeded computation.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the disk of radius `r`.
pub fn complex_in_disk(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    let rho = r * rng.gen::<f64>().sqrt();
    Complex64::from_polar(rho, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// A random polynomial of total degree at most `max_degree` with between one
/// and five non-constant terms, coefficients of modulus below one, and a
/// constant term of modulus at most `max_constant`.
///
/// At least one term is non-constant, so the result is never a constant.
pub fn random_polynomial(
    rng: &mut ChaCha8Rng,
    arity: usize,
    max_degree: u32,
    max_constant: f64,
) -> SymbolExpr {
    let nterms = rng.gen_range(1..=5);
    let mut parts = vec![Expr::Const(complex_in_disk(rng, max_constant))];
    for _ in 0..nterms {
        let degree = rng.gen_range(1..=max_degree.max(1));
        let mut factors = vec![Expr::Const(complex_in_disk(rng, 1.0))];
        for _ in 0..degree {
            factors.push(Expr::Var(rng.gen_range(0..arity)));
        }
        parts.push(Expr::product(factors));
    }
    let e = Expr::sum(parts);
    let s = SymbolExpr::new(e, arity).expect("indices below arity");
    match s.constant_value() {
        Ok(None) => s,
        _ => random_polynomial(rng, arity, max_degree, max_constant),
    }
}
