use num_complex::Complex64;

use super::{Expr, LogFrac, SymbolExpr, DEGREE_CAP};
use crate::error::{BlochError, Result};

/// Parses a symbol in the expression grammar
///
/// ```text
/// expr   := term (("+" | "-") term)*
/// term   := factor ("*" factor)*
/// factor := base ("^" uint)?
/// base   := complex | "z" uint | "(" expr ")" | "fw(" uint "," complex ")" | "h(" uint "," complex ")"
/// ```
///
/// with 1-based indices. A leading `-` or `+` is accepted before any factor,
/// and the complex arguments of `fw`/`h` may be any expression that folds to
/// a constant.
pub fn parse_symbol(text: &str, arity: usize) -> Result<SymbolExpr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, arity };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected input"));
    }
    if e.degree() > u64::from(DEGREE_CAP) {
        return Err(BlochError::Parse {
            pos: 0,
            msg: format!("degree {} exceeds the cap {DEGREE_CAP}", e.degree()),
        });
    }
    SymbolExpr::new(e, arity)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    arity: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> BlochError {
        BlochError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).map(|b| b.to_ascii_lowercase())
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut parts = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                parts.push(self.term()?);
            } else if self.eat(b'-') {
                parts.push(Expr::neg(self.term()?));
            } else {
                return Ok(Expr::sum(parts));
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut parts = vec![self.signed()?];
        while self.eat(b'*') {
            parts.push(self.signed()?);
        }
        Ok(Expr::product(parts))
    }

    fn signed(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::neg(self.signed()?))
        } else if self.eat(b'+') {
            self.signed()
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let k = self.uint()?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            if k > DEGREE_CAP {
                return Err(self.error(&format!("exponent exceeds the degree cap {DEGREE_CAP}")));
            }
            Ok(Expr::power(base, k))
        } else {
            Ok(base)
        }
    }

    fn uint(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| BlochError::Parse { pos: start, msg: "integer too large".into() })
    }

    fn index(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        let k = self.uint()?;
        if k == 0 || k > self.arity {
            return Err(BlochError::Parse {
                pos: start,
                msg: format!("index {k} outside 1..={}", self.arity),
            });
        }
        Ok(k - 1)
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let end = self.pos + word.len();
        if end <= self.src.len() && self.src[self.pos..end].eq_ignore_ascii_case(word.as_bytes()) {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn constant_arg(&mut self) -> Result<Complex64> {
        let start = self.pos;
        match self.expr()? {
            Expr::Const(c) => Ok(c),
            _ => Err(BlochError::Parse { pos: start, msg: "parameter must be a constant".into() }),
        }
    }

    fn log_call(&mut self, f_form: bool) -> Result<Expr> {
        self.expect(b'(')?;
        let k = self.index()?;
        self.expect(b',')?;
        let at = self.pos;
        let w = self.constant_arg()?;
        self.expect(b')')?;
        let l = if f_form { LogFrac::f_form(k, w) } else { LogFrac::h_form(k, w) };
        l.map(Expr::Log).map_err(|e| BlochError::Parse { pos: at, msg: e.to_string() })
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(Expr::Var(self.index()?))
            }
            Some(b'f') => {
                if !self.keyword("fw") {
                    return Err(self.error("unknown function"));
                }
                self.log_call(true)
            }
            Some(b'h') => {
                self.pos += 1;
                self.log_call(false)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Expr::Const(Complex64::new(0.0, 1.0)))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let x = self.number()?;
                if self.src.get(self.pos).map(|b| b.to_ascii_lowercase()) == Some(b'i') {
                    self.pos += 1;
                    Ok(Expr::Const(Complex64::new(0.0, x)))
                } else {
                    Ok(Expr::Const(Complex64::new(x, 0.0)))
                }
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            digits(self);
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if exp_start == self.pos {
                self.pos = save;
            }
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| BlochError::Parse { pos: start, msg: "malformed number".into() })
    }
}
