use num_complex::Complex64;

use super::{Domain, Point};
use crate::error::{BlochError, Result};

fn perr(pos: usize, msg: impl Into<String>) -> BlochError {
    BlochError::Parse {
        pos,
        msg: msg.into(),
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.pos < self.s.len() && self.s[self.pos] == c {
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
            Err(perr(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).to_ascii_lowercase()
    }

    fn uint(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(perr(start, "expected an integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| perr(start, "integer out of range"))
    }
}

/// Parses `disk`, `ball:n`, `polydisk:n`, `cartan1:m,n`, `cartan2:n`,
/// `cartan3:n`, `cartan4:n`, `exc1`, `exc2` and `product(a,b,...)`,
/// case-insensitively.
pub(crate) fn parse_domain(text: &str) -> Result<Domain> {
    let mut cur = Cursor {
        s: text.as_bytes(),
        pos: 0,
    };
    let d = domain(&mut cur, true)?;
    cur.skip_ws();
    if cur.pos != cur.s.len() {
        return Err(perr(cur.pos, "trailing input after domain"));
    }
    d.validate()?;
    Ok(d)
}

fn domain(cur: &mut Cursor<'_>, allow_product: bool) -> Result<Domain> {
    let start = cur.pos;
    let name = cur.ident();
    let d = match name.as_str() {
        "disk" => Domain::Disk,
        "exc1" => Domain::Exceptional1,
        "exc2" => Domain::Exceptional2,
        "ball" | "polydisk" | "cartan2" | "cartan3" | "cartan4" => {
            cur.expect(b':')?;
            let n = cur.uint()?;
            match name.as_str() {
                "ball" => Domain::Ball(n),
                "polydisk" => Domain::Polydisk(n),
                "cartan2" => Domain::CartanII(n),
                "cartan3" => Domain::CartanIII(n),
                _ => Domain::CartanIV(n),
            }
        }
        "cartan1" => {
            cur.expect(b':')?;
            let m = cur.uint()?;
            cur.expect(b',')?;
            let n = cur.uint()?;
            Domain::CartanI { m, n }
        }
        "product" if allow_product => {
            cur.expect(b'(')?;
            let mut factors = vec![domain(cur, false)?];
            while cur.eat(b',') {
                factors.push(domain(cur, false)?);
            }
            cur.expect(b')')?;
            Domain::Product(factors)
        }
        "product" => return Err(perr(start, "nested product")),
        "" => return Err(perr(start, "expected a domain name")),
        other => return Err(perr(start, format!("unknown domain '{other}'"))),
    };
    Ok(d)
}

/// Parses a single complex literal: `a`, `bi`, `i`, `(a+bi)`, `(a-bi)`, with
/// an optional leading sign on the real forms.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let t = text.trim();
    let bad = || perr(0, format!("invalid complex literal '{t}'"));
    if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let inner = inner.trim();
        // split at the last sign that is not in leading position or after an exponent
        let bytes = inner.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        return match split {
            Some(i) => {
                let re = parse_real(&inner[..i]).ok_or_else(bad)?;
                let im = parse_imag(&inner[i..]).ok_or_else(bad)?;
                Ok(Complex64::new(re, im))
            }
            None => parse_complex(inner),
        };
    }
    if t.ends_with('i') {
        return parse_imag(t).map(|im| Complex64::new(0.0, im)).ok_or_else(bad);
    }
    parse_real(t).map(|re| Complex64::new(re, 0.0)).ok_or_else(bad)
}

fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_imag(s: &str) -> Option<f64> {
    let s = s.trim().strip_suffix('i')?.trim();
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(s),
    }
}

/// Parses a comma-separated list of complex literals into a point.
pub fn parse_point(text: &str) -> Result<Point> {
    let t = text.trim();
    if t.is_empty() {
        return Err(perr(0, "empty point"));
    }
    let mut coords = Vec::new();
    let mut offset = 0;
    for part in t.split(',') {
        coords.push(parse_complex(part).map_err(|_| {
            perr(offset, format!("invalid complex literal '{}'", part.trim()))
        })?);
        offset += part.len() + 1;
    }
    Ok(Point(coords))
}
