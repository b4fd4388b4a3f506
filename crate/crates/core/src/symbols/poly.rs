use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Expr, LogFrac};

/// Largest number of terms an expansion may produce.
pub const NORMAL_FORM_LIMIT: usize = 200_000;

/// An atom of the normal form: a coordinate or a sign-normalized logarithm
/// `(1/2) Log((1 + a z_k) / (1 - a z_k))`, keyed by the bits of `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Z(usize),
    L { k: usize, re: u64, im: u64 },
}

impl Var {
    fn log(k: usize, a: Complex64) -> Var {
        // -0.0 and 0.0 must share a key
        let clean = |x: f64| if x == 0.0 { 0.0f64 } else { x };
        Var::L { k, re: clean(a.re).to_bits(), im: clean(a.im).to_bits() }
    }

    pub fn coordinate(&self) -> usize {
        match self {
            Var::Z(j) | Var::L { k: j, .. } => *j,
        }
    }

    fn log_coefficient(&self) -> Option<Complex64> {
        match self {
            Var::Z(_) => None,
            Var::L { re, im, .. } => Some(Complex64::new(f64::from_bits(*re), f64::from_bits(*im))),
        }
    }

    /// `sup |v|` on the closed unit disk.
    fn sup(&self) -> f64 {
        match self.log_coefficient() {
            None => 1.0,
            Some(a) if a.norm() < 1.0 => a.norm().atanh(),
            Some(_) => f64::INFINITY,
        }
    }

    /// `sup |dv/dz_k|` on the closed unit disk.
    fn derivative_sup(&self) -> f64 {
        match self.log_coefficient() {
            None => 1.0,
            Some(a) if a.norm() < 1.0 => a.norm() / (1.0 - a.norm_sqr()),
            Some(_) => f64::INFINITY,
        }
    }
}

/// Sorted `(atom, exponent)` pairs with positive exponents.
pub type Monomial = Vec<(Var, u32)>;

/// Sparse expanded polynomial in the atoms of [`Var`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    pub terms: BTreeMap<Monomial, Complex64>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Polynomial {
    pub fn constant(c: Complex64) -> Polynomial {
        let mut terms = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            terms.insert(Vec::new(), c);
        }
        Polynomial { terms }
    }

    fn atom(v: Var, c: Complex64) -> Polynomial {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(v, 1)], c);
        Polynomial { terms }
    }

    fn from_log(l: &LogFrac) -> Polynomial {
        let a = l.a();
        if a == Complex64::new(0.0, 0.0) {
            return Polynomial::default();
        }
        // L_{-a} = -L_a
        if a.re < 0.0 || (a.re == 0.0 && a.im < 0.0) {
            Polynomial::atom(Var::log(l.k, -a), Complex64::new(-1.0, 0.0))
        } else {
            Polynomial::atom(Var::log(l.k, a), Complex64::new(1.0, 0.0))
        }
    }

    /// Expands an expression tree, giving up past [`NORMAL_FORM_LIMIT`] terms.
    pub fn from_expr(e: &Expr) -> Option<Polynomial> {
        match e {
            Expr::Const(c) => Some(Polynomial::constant(*c)),
            Expr::Var(j) => Some(Polynomial::atom(Var::Z(*j), Complex64::new(1.0, 0.0))),
            Expr::Log(l) => Some(Polynomial::from_log(l)),
            Expr::Sum(ps) => {
                let mut acc = Polynomial::default();
                for p in ps {
                    acc.add_assign(&Polynomial::from_expr(p)?);
                    if acc.len() > NORMAL_FORM_LIMIT {
                        return None;
                    }
                }
                Some(acc)
            }
            Expr::Product(ps) => {
                let mut acc = Polynomial::constant(Complex64::new(1.0, 0.0));
                for p in ps {
                    acc = acc.mul(&Polynomial::from_expr(p)?)?;
                }
                Some(acc)
            }
            Expr::Power(b, k) => Polynomial::from_expr(b)?.pow(*k),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            let entry = self.terms.entry(m.clone()).or_insert(Complex64::new(0.0, 0.0));
            *entry += c;
            if *entry == Complex64::new(0.0, 0.0) {
                self.terms.remove(m);
            }
        }
    }

    fn mul(&self, other: &Polynomial) -> Option<Polynomial> {
        if self.len().saturating_mul(other.len()) > NORMAL_FORM_LIMIT.saturating_mul(16) {
            return None;
        }
        let mut out = Polynomial::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = mono_mul(ma, mb);
                *out.terms.entry(m).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
        out.terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        (out.len() <= NORMAL_FORM_LIMIT).then_some(out)
    }

    fn pow(&self, k: u32) -> Option<Polynomial> {
        let mut result = Polynomial::constant(Complex64::new(1.0, 0.0));
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Some(result)
    }

    pub fn as_constant(&self) -> Option<Complex64> {
        match self.terms.len() {
            0 => Some(Complex64::new(0.0, 0.0)),
            1 => self.terms.get(&Vec::new()).copied(),
            _ => None,
        }
    }

    /// Coefficient of the pure coordinate monomial with the given exponents.
    pub fn coefficient(&self, exponents: &[u32]) -> Complex64 {
        let m: Monomial = exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| (Var::Z(j), e))
            .collect();
        self.terms.get(&m).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn sup_majorant(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.norm() * m.iter().map(|(v, e)| v.sup().powi(*e as i32)).product::<f64>())
            .sum()
    }

    /// Majorant of `sup |d/dz_j|` on the closed unit polydisk.
    pub fn derivative_majorant(&self, j: usize) -> f64 {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            for (i, (v, e)) in m.iter().enumerate() {
                if v.coordinate() != j {
                    continue;
                }
                let rest: f64 = m
                    .iter()
                    .enumerate()
                    .filter(|(l, _)| *l != i)
                    .map(|(_, (u, f))| u.sup().powi(*f as i32))
                    .product();
                let own = f64::from(*e) * v.sup().powi(*e as i32 - 1) * v.derivative_sup();
                total += c.norm() * own * rest;
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::SymbolExpr;

    #[test]
    fn parse_gives_sparse_coefficients() {
        let p = SymbolExpr::parse("z1^2 + 0.5*z2", 2).unwrap().normal_form().unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coefficient(&[2, 0]), Complex64::new(1.0, 0.0));
        assert_eq!(p.coefficient(&[0, 1]), Complex64::new(0.5, 0.0));
        assert_eq!(p.coefficient(&[1, 1]), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn binomial_expansion() {
        let p = SymbolExpr::parse("(z1 + z2)^4", 2).unwrap().normal_form().unwrap();
        let expected = [1.0, 4.0, 6.0, 4.0, 1.0];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(p.coefficient(&[i as u32, 4 - i as u32]).re, *e);
        }
    }

    #[test]
    fn expansion_limit() {
        let big = SymbolExpr::parse("(z1+z2+z3+z4+z5+z6+z7+z8+1)^30", 8).unwrap();
        assert!(big.normal_form().is_none());
        assert_eq!(big.constant_value().unwrap(), None);
    }
}
