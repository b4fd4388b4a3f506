//! Holomorphic symbols: polynomials in the coordinates and the logarithmic
//! test functions, with exact evaluation and gradients.

mod parse;
mod poly;

use std::fmt;

use num_complex::Complex64;

use crate::domain::{format_complex, Point};
use crate::error::{BlochError, Result};

pub use parse::parse_symbol;
pub use poly::{Monomial, Polynomial, Var, NORMAL_FORM_LIMIT};

/// Largest total degree accepted from text.
pub const DEGREE_CAP: u32 = 64;

/// Distance from the negative real axis below which a logarithm is refused.
pub const BRANCH_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which of the two logarithmic test functions a [`LogFrac`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogForm {
    /// `fw(k, w)`: `(1/2) Log((1 + conj(w) z_k) / (1 - conj(w) z_k))`, `|w| < 1`.
    F,
    /// `h(k, p)`: `(1/2) Log((|p| + conj(p) z_k) / (|p| - conj(p) z_k))`, `p != 0`.
    H,
}

/// A logarithmic test function of one coordinate.
///
/// Both forms equal `(1/2) Log((1 + a z_k) / (1 - a z_k))` with `a = conj(w)`
/// for the f-form and `a = conj(p) / |p|` for the h-form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogFrac {
    /// 0-based coordinate index.
    pub k: usize,
    /// The parameter as written (`w` or `p`).
    pub param: Complex64,
    pub form: LogForm,
}

impl LogFrac {
    pub fn f_form(k: usize, w: Complex64) -> Result<LogFrac> {
        if !(w.norm() < 1.0) {
            return Err(BlochError::InvalidArgument(format!(
                "fw parameter must satisfy |w| < 1, got {}",
                format_complex(w)
            )));
        }
        Ok(LogFrac { k, param: w, form: LogForm::F })
    }

    pub fn h_form(k: usize, p: Complex64) -> Result<LogFrac> {
        if p.norm() == 0.0 || !p.norm().is_finite() {
            return Err(BlochError::InvalidArgument(
                "h parameter must be a nonzero finite number".into(),
            ));
        }
        Ok(LogFrac { k, param: p, form: LogForm::H })
    }

    /// The coefficient `a` in `(1/2) Log((1 + a z_k) / (1 - a z_k))`.
    pub fn a(&self) -> Complex64 {
        match self.form {
            LogForm::F => self.param.conj(),
            LogForm::H => self.param.conj() / self.param.norm(),
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        log_frac(self.a(), z[self.k])
    }

    /// Derivative with respect to `z_k`: `a / (1 - a^2 z_k^2)`.
    pub fn derivative(&self, z: &[Complex64]) -> Complex64 {
        let a = self.a();
        let x = a * z[self.k];
        a / (ONE - x * x)
    }
}

/// `(1/2) Log((1 + a x) / (1 - a x))` on the principal branch.
pub(crate) fn log_frac(a: Complex64, x: Complex64) -> Result<Complex64> {
    let t = a * x;
    let den = ONE - t;
    if den.norm() == 0.0 {
        return Err(BlochError::NumericalDomain("logarithm pole".into()));
    }
    let q = (ONE + t) / den;
    if q.re <= 0.0 && q.im.abs() <= BRANCH_TOL {
        return Err(BlochError::NumericalDomain(
            "logarithm argument on the branch cut".into(),
        ));
    }
    Ok(0.5 * q.ln())
}

/// Expression tree of a symbol. Constants are folded by the constructors.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    /// 0-based coordinate.
    Var(usize),
    Log(LogFrac),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Box<Expr>, u32),
}

impl Expr {
    pub fn sum(parts: Vec<Expr>) -> Expr {
        let mut c = ZERO;
        let mut rest = Vec::new();
        for p in parts {
            match p {
                Expr::Const(v) => c += v,
                Expr::Sum(inner) => {
                    for q in inner {
                        match q {
                            Expr::Const(v) => c += v,
                            other => rest.push(other),
                        }
                    }
                }
                other => rest.push(other),
            }
        }
        if c != ZERO {
            rest.push(Expr::Const(c));
        }
        match rest.len() {
            0 => Expr::Const(ZERO),
            1 => rest.pop().unwrap(),
            _ => Expr::Sum(rest),
        }
    }

    pub fn product(parts: Vec<Expr>) -> Expr {
        let mut c = ONE;
        let mut rest = Vec::new();
        for p in parts {
            match p {
                Expr::Const(v) => c *= v,
                Expr::Product(inner) => {
                    for q in inner {
                        match q {
                            Expr::Const(v) => c *= v,
                            other => rest.push(other),
                        }
                    }
                }
                other => rest.push(other),
            }
        }
        if c == ZERO || rest.is_empty() {
            return Expr::Const(c);
        }
        if c != ONE {
            rest.insert(0, Expr::Const(c));
        }
        if rest.len() == 1 {
            rest.pop().unwrap()
        } else {
            Expr::Product(rest)
        }
    }

    pub fn power(base: Expr, k: u32) -> Expr {
        match (base, k) {
            (_, 0) => Expr::Const(ONE),
            (b, 1) => b,
            (Expr::Const(c), k) => Expr::Const(c.powu(k)),
            (Expr::Power(b, j), k) => Expr::Power(b, j.saturating_mul(k)),
            (b, k) => Expr::Power(Box::new(b), k),
        }
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::product(vec![Expr::Const(-ONE), e])
    }

    /// Upper bound on the total degree, counting each logarithm as degree one.
    pub fn degree(&self) -> u64 {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(_) | Expr::Log(_) => 1,
            Expr::Sum(ps) => ps.iter().map(Expr::degree).max().unwrap_or(0),
            Expr::Product(ps) => ps.iter().map(Expr::degree).sum(),
            Expr::Power(b, k) => b.degree() * u64::from(*k),
        }
    }

    fn max_index(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(j) => Some(*j),
            Expr::Log(l) => Some(l.k),
            Expr::Sum(ps) | Expr::Product(ps) => ps.iter().filter_map(Expr::max_index).max(),
            Expr::Power(b, _) => b.max_index(),
        }
    }

    fn has_log(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Log(_) => true,
            Expr::Sum(ps) | Expr::Product(ps) => ps.iter().any(Expr::has_log),
            Expr::Power(b, _) => b.has_log(),
        }
    }

    fn value(&self, z: &[Complex64]) -> Result<Complex64> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(j) => z[*j],
            Expr::Log(l) => l.eval(z)?,
            Expr::Sum(ps) => {
                let mut s = ZERO;
                for p in ps {
                    s += p.value(z)?;
                }
                s
            }
            Expr::Product(ps) => {
                let mut s = ONE;
                for p in ps {
                    s *= p.value(z)?;
                }
                s
            }
            Expr::Power(b, k) => b.value(z)?.powu(*k),
        })
    }

    /// Value and gradient; `grad` must be zeroed on entry and is accumulated into
    /// with weight `w`.
    fn value_grad(&self, z: &[Complex64], w: Complex64, grad: &mut [Complex64]) -> Result<Complex64> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var(j) => {
                grad[*j] += w;
                Ok(z[*j])
            }
            Expr::Log(l) => {
                let v = l.eval(z)?;
                grad[l.k] += w * l.derivative(z);
                Ok(v)
            }
            Expr::Sum(ps) => {
                let mut s = ZERO;
                for p in ps {
                    s += p.value_grad(z, w, grad)?;
                }
                Ok(s)
            }
            Expr::Product(ps) => {
                let vals = ps.iter().map(|p| p.value(z)).collect::<Result<Vec<_>>>()?;
                for (i, p) in ps.iter().enumerate() {
                    let others: Complex64 = vals
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, v)| *v)
                        .product();
                    if others != ZERO {
                        p.value_grad(z, w * others, grad)?;
                    }
                }
                Ok(vals.iter().product())
            }
            Expr::Power(b, k) => {
                let v = b.value(z)?;
                let outer = Complex64::new(f64::from(*k), 0.0) * v.powu(k - 1);
                if outer != ZERO {
                    b.value_grad(z, w * outer, grad)?;
                }
                Ok(v * outer / f64::from(*k))
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, wrap_sum: bool) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{}", format_complex(*c)),
            Expr::Var(j) => write!(f, "z{}", j + 1),
            Expr::Log(l) => match l.form {
                LogForm::F => write!(f, "fw({}, {})", l.k + 1, format_complex(l.param)),
                LogForm::H => write!(f, "h({}, {})", l.k + 1, format_complex(l.param)),
            },
            Expr::Sum(ps) => {
                if wrap_sum {
                    write!(f, "(")?;
                }
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    p.write(f, false)?;
                }
                if wrap_sum {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Expr::Product(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    p.write(f, true)?;
                }
                Ok(())
            }
            Expr::Power(b, k) => {
                let simple = matches!(**b, Expr::Var(_) | Expr::Log(_));
                if simple {
                    b.write(f, true)?;
                } else {
                    write!(f, "(")?;
                    b.write(f, false)?;
                    write!(f, ")")?;
                }
                write!(f, "^{k}")
            }
        }
    }
}

/// A holomorphic function of `arity` complex variables.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolExpr {
    arity: usize,
    expr: Expr,
}

impl SymbolExpr {
    /// Wraps a tree, checking that every coordinate index is below `arity`.
    pub fn new(expr: Expr, arity: usize) -> Result<SymbolExpr> {
        if let Some(j) = expr.max_index() {
            if j >= arity {
                return Err(BlochError::InvalidArgument(format!(
                    "variable z{} exceeds arity {arity}",
                    j + 1
                )));
            }
        }
        Ok(SymbolExpr { arity, expr })
    }

    pub fn parse(text: &str, arity: usize) -> Result<SymbolExpr> {
        parse_symbol(text, arity)
    }

    pub fn constant(c: Complex64, arity: usize) -> SymbolExpr {
        SymbolExpr { arity, expr: Expr::Const(c) }
    }

    /// The coordinate function `z_{j+1}` (0-based `j`).
    pub fn coordinate(j: usize, arity: usize) -> Result<SymbolExpr> {
        SymbolExpr::new(Expr::Var(j), arity)
    }

    pub fn f_form(k: usize, w: Complex64, arity: usize) -> Result<SymbolExpr> {
        SymbolExpr::new(Expr::Log(LogFrac::f_form(k, w)?), arity)
    }

    pub fn h_form(k: usize, p: Complex64, arity: usize) -> Result<SymbolExpr> {
        SymbolExpr::new(Expr::Log(LogFrac::h_form(k, p)?), arity)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn degree(&self) -> u64 {
        self.expr.degree()
    }

    /// True when no logarithmic atom occurs.
    pub fn is_polynomial(&self) -> bool {
        !self.expr.has_log()
    }

    fn check(&self, z: &[Complex64]) -> Result<()> {
        if z.len() == self.arity {
            Ok(())
        } else {
            Err(BlochError::DimensionMismatch { expected: self.arity, got: z.len() })
        }
    }

    pub fn evaluate(&self, z: &Point) -> Result<Complex64> {
        self.evaluate_at(z.coords())
    }

    pub fn evaluate_at(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check(z)?;
        self.expr.value(z)
    }

    pub fn gradient(&self, z: &Point) -> Result<Vec<Complex64>> {
        Ok(self.value_and_gradient(z.coords())?.1)
    }

    pub fn value_and_gradient(&self, z: &[Complex64]) -> Result<(Complex64, Vec<Complex64>)> {
        self.check(z)?;
        let mut g = vec![ZERO; self.arity];
        let v = self.expr.value_grad(z, ONE, &mut g)?;
        Ok((v, g))
    }

    fn same_arity(&self, other: &SymbolExpr) -> Result<()> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(BlochError::ArityMismatch(self.arity, other.arity))
        }
    }

    pub fn add(&self, other: &SymbolExpr) -> Result<SymbolExpr> {
        self.same_arity(other)?;
        Ok(SymbolExpr {
            arity: self.arity,
            expr: Expr::sum(vec![self.expr.clone(), other.expr.clone()]),
        })
    }

    pub fn mul(&self, other: &SymbolExpr) -> Result<SymbolExpr> {
        self.same_arity(other)?;
        Ok(SymbolExpr {
            arity: self.arity,
            expr: Expr::product(vec![self.expr.clone(), other.expr.clone()]),
        })
    }

    pub fn pow(&self, k: u32) -> SymbolExpr {
        SymbolExpr { arity: self.arity, expr: Expr::power(self.expr.clone(), k) }
    }

    pub fn scale(&self, c: Complex64) -> SymbolExpr {
        SymbolExpr {
            arity: self.arity,
            expr: Expr::product(vec![Expr::Const(c), self.expr.clone()]),
        }
    }

    pub fn neg(&self) -> SymbolExpr {
        self.scale(-ONE)
    }

    /// Expanded normal form, or `None` when it would exceed [`NORMAL_FORM_LIMIT`] terms.
    pub fn normal_form(&self) -> Option<Polynomial> {
        Polynomial::from_expr(&self.expr)
    }

    /// `Some(c)` when the symbol is the constant `c`, decided on the normal form.
    ///
    /// Products and powers are reduced structurally first (the atoms generate
    /// an integral domain whose units are the nonzero constants), so large
    /// powers of small expressions never need expanding.
    pub fn constant_value(&self) -> Result<Option<Complex64>> {
        constant_of(&self.expr)
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.constant_value()? == Some(ZERO))
    }

    /// Upper bound for `sup |f|` over the closed unit polydisk, which contains
    /// every supported domain. `None` if unbounded by this majorant or too
    /// large to expand.
    pub fn sup_majorant(&self) -> Option<f64> {
        if let Some(c) = self.constant_value().ok().flatten() {
            return Some(c.norm());
        }
        if let Expr::Power(b, k) = &self.expr {
            let m = SymbolExpr { arity: self.arity, expr: (**b).clone() }.sup_majorant()?;
            return finite(m.powi(*k as i32));
        }
        finite(self.normal_form()?.sup_majorant())
    }

    /// Upper bounds for `sup |df/dz_j|` over the closed unit polydisk.
    pub fn gradient_majorants(&self) -> Option<Vec<f64>> {
        if let Expr::Power(b, k) = &self.expr {
            let base = SymbolExpr { arity: self.arity, expr: (**b).clone() };
            let m = base.sup_majorant()?;
            let g = base.gradient_majorants()?;
            let outer = f64::from(*k) * m.powi(*k as i32 - 1);
            return g.into_iter().map(|x| finite(outer * x)).collect();
        }
        let p = self.normal_form()?;
        (0..self.arity).map(|j| finite(p.derivative_majorant(j))).collect()
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn constant_of(e: &Expr) -> Result<Option<Complex64>> {
    match e {
        Expr::Const(c) => Ok(Some(*c)),
        Expr::Var(_) => Ok(None),
        Expr::Log(l) => Ok((l.a() == ZERO).then_some(ZERO)),
        Expr::Power(b, k) => Ok(constant_of(b)?.map(|c| c.powu(*k))),
        Expr::Product(ps) => {
            let mut acc = ONE;
            let mut nonconstant = false;
            for p in ps {
                match constant_of(p)? {
                    Some(c) if c == ZERO => return Ok(Some(ZERO)),
                    Some(c) => acc *= c,
                    None => nonconstant = true,
                }
            }
            Ok((!nonconstant).then_some(acc))
        }
        Expr::Sum(_) => {
            let p = Polynomial::from_expr(e).ok_or_else(|| {
                BlochError::Unsupported("expression too large to decide constancy".into())
            })?;
            Ok(p.as_constant())
        }
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.write(f, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(v: &[(f64, f64)]) -> Point {
        Point(v.iter().map(|&(a, b)| c(a, b)).collect())
    }

    #[test]
    fn square_at_half() {
        let f = SymbolExpr::parse("z1^2", 2).unwrap();
        assert_eq!(f.evaluate(&pt(&[(0.5, 0.0), (0.3, 0.1)])).unwrap(), c(0.25, 0.0));
    }

    #[test]
    fn f_form_vanishes_at_origin() {
        let f = SymbolExpr::f_form(1, c(0.3, 0.4), 3).unwrap();
        assert_eq!(f.evaluate(&Point::origin(3)).unwrap(), ZERO);
    }

    #[test]
    fn h_form_at_its_parameter() {
        let p = c(0.3, -0.5);
        let f = SymbolExpr::h_form(0, p, 2).unwrap();
        let v = f.evaluate(&Point(vec![p, c(0.1, 0.0)])).unwrap();
        let r = p.norm();
        assert_relative_eq!(v.re, 0.5 * ((1.0 + r) / (1.0 - r)).ln(), epsilon = 1e-14);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn f_form_rejects_unit_parameter() {
        assert!(SymbolExpr::f_form(0, c(1.0, 0.0), 1).is_err());
        assert!(SymbolExpr::f_form(0, c(0.6, 0.8), 1).is_err());
        assert!(SymbolExpr::h_form(0, ZERO, 1).is_err());
    }

    #[test]
    fn f_form_argument_stays_in_right_half_plane() {
        let a = c(0.6, 0.7);
        for x in [c(0.99, 0.0), c(-0.5, 0.8), c(0.0, -0.999)] {
            let t = a * x;
            let q = (ONE + t) / (ONE - t);
            assert!(q.arg().abs() <= std::f64::consts::FRAC_PI_2);
            assert!(log_frac(a, x).is_ok());
        }
    }

    #[test]
    fn branch_cut_is_refused() {
        // a x = 2 gives the argument -3
        assert!(matches!(
            log_frac(ONE, c(2.0, 0.0)),
            Err(BlochError::NumericalDomain(_))
        ));
        assert!(log_frac(ONE, ONE).is_err());
    }

    #[test]
    fn product_gradient() {
        let f = SymbolExpr::parse("z1*z2", 2).unwrap();
        let g = f.gradient(&pt(&[(0.2, 0.1), (-0.4, 0.3)])).unwrap();
        assert_eq!(g, vec![c(-0.4, 0.3), c(0.2, 0.1)]);
    }

    #[test]
    fn f_form_gradient_at_origin() {
        let f = SymbolExpr::parse("fw(1, 0.5)", 2).unwrap();
        assert_eq!(f.gradient(&Point::origin(2)).unwrap(), vec![c(0.5, 0.0), ZERO]);
    }

    #[test]
    fn constants_do_not_change_gradient() {
        let f = SymbolExpr::parse("z1^3*z2 + fw(2, 0.3i)", 2).unwrap();
        let g = f.add(&SymbolExpr::constant(c(2.0, -1.0), 2)).unwrap();
        let z = pt(&[(0.3, 0.2), (0.1, -0.6)]);
        assert_eq!(f.gradient(&z).unwrap(), g.gradient(&z).unwrap());
    }

    #[test]
    fn combine_power_and_cancellation() {
        let z1 = SymbolExpr::coordinate(0, 1).unwrap();
        assert_eq!(z1.pow(3).evaluate(&Point::from_real(&[0.5])).unwrap(), c(0.125, 0.0));
        let f = SymbolExpr::parse("z1^2 + 3*fw(1, 0.2)", 1).unwrap();
        let zero = f.add(&f.neg()).unwrap();
        assert!(zero.is_zero().unwrap());
        assert_eq!(zero.evaluate(&Point::from_real(&[0.7])).unwrap(), ZERO);
    }

    #[test]
    fn arity_mismatch() {
        let a = SymbolExpr::coordinate(0, 1).unwrap();
        let b = SymbolExpr::coordinate(0, 2).unwrap();
        assert_eq!(a.mul(&b).unwrap_err(), BlochError::ArityMismatch(1, 2));
    }

    #[test]
    fn constancy_is_structural_for_powers() {
        let f = SymbolExpr::parse("(z1 + z2 + z3)^40", 3).unwrap();
        assert_eq!(f.constant_value().unwrap(), None);
        let g = SymbolExpr::parse("(z1 - z1 + 2)^3", 1).unwrap();
        assert_eq!(g.constant_value().unwrap(), Some(c(8.0, 0.0)));
        let h = SymbolExpr::parse("(1 + z1)^2 - z1^2 - 2*z1", 1).unwrap();
        assert_eq!(h.constant_value().unwrap(), Some(ONE));
        // fw and h with opposite coefficients cancel
        let l = SymbolExpr::parse("fw(1, 0.5) + fw(1, -0.5)", 1).unwrap();
        assert!(l.is_zero().unwrap());
    }

    #[test]
    fn majorants() {
        let f = SymbolExpr::parse("0.5*z1*z2 - 0.25i*z2^3", 2).unwrap();
        assert_relative_eq!(f.sup_majorant().unwrap(), 0.75);
        let g = f.gradient_majorants().unwrap();
        assert_relative_eq!(g[0], 0.5);
        assert_relative_eq!(g[1], 0.5 + 0.75);
        let p = SymbolExpr::parse("(0.5*z1)^4", 1).unwrap();
        assert_relative_eq!(p.sup_majorant().unwrap(), 0.0625);
        assert_relative_eq!(p.gradient_majorants().unwrap()[0], 4.0 * 0.125 * 0.5);
        let l = SymbolExpr::parse("fw(1, 0.5)", 1).unwrap();
        assert_relative_eq!(l.sup_majorant().unwrap(), 0.5f64.atanh());
        assert_relative_eq!(l.gradient_majorants().unwrap()[0], 0.5 / 0.75);
        let h = SymbolExpr::parse("h(1, 0.5)", 1).unwrap();
        assert_eq!(h.sup_majorant(), None);
    }

    #[test]
    fn display_roundtrips() {
        for text in [
            "z1^2 + 0.5*z2",
            "-(z1 + (1-2i))^3*fw(2, (0.1+0.2i))",
            "h(1, -0.5i)*z2 - 4",
            "(fw(1, 0.3)*z2)^2",
        ] {
            let f = SymbolExpr::parse(text, 2).unwrap();
            let g = SymbolExpr::parse(&f.to_string(), 2).unwrap();
            assert_eq!(f, g, "{text} -> {f}");
        }
    }
}
