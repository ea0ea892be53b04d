//! Parser for the ring-spec expression language.
//!
//! ```text
//! expr  := term (('x' | '×') term)*
//! term  := 'Z' '/' int
//!        | 'GF' '(' int ')'
//!        | 'M' '(' int ',' expr ')'
//!        | 'T' '(' int ',' expr ')'
//!        | 'PolyQuot' '(' expr ',' coeffs ')'
//!        | 'StructConst' '(' path ')'
//!        | '(' expr ')'
//! coeffs := '[' int (',' int)* ']' | int (',' int)*
//! ```

use std::fmt;

use super::FiniteRing;
use crate::caps::Caps;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Cyclic(usize),
    Field(usize),
    Matrix(usize, Box<RingSpec>),
    Triangular(usize, Box<RingSpec>),
    Product(Box<RingSpec>, Box<RingSpec>),
    PolyQuot(Box<RingSpec>, Vec<usize>),
    StructConst(String),
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Cyclic(n) => write!(f, "Z/{n}"),
            RingSpec::Field(q) => write!(f, "GF({q})"),
            RingSpec::Matrix(n, s) => write!(f, "M({n},{s})"),
            RingSpec::Triangular(n, s) => write!(f, "T({n},{s})"),
            RingSpec::Product(a, b) => {
                if matches!(**b, RingSpec::Product(..)) {
                    write!(f, "{a} x ({b})")
                } else {
                    write!(f, "{a} x {b}")
                }
            }
            RingSpec::PolyQuot(s, c) => {
                let c: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "PolyQuot({s},[{}])", c.join(","))
            }
            RingSpec::StructConst(p) => write!(f, "StructConst({p})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.pos, msg))
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let len = self.rest().chars().take_while(|c| c.is_ascii_alphabetic()).count();
        if len == 0 {
            return None;
        }
        let id = &self.rest()[..len];
        Some(id)
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let len = self.rest().chars().take_while(|c| c.is_ascii_digit()).count();
        if len == 0 {
            return self.err("expected an integer");
        }
        let text = &self.rest()[..len];
        let v = text.parse().or_else(|_| self.err(format!("integer `{text}` out of range")))?;
        self.pos += len;
        Ok(v)
    }

    fn product_op(&mut self) -> bool {
        self.skip_ws();
        if self.rest().starts_with('×') {
            self.pos += '×'.len_utf8();
            return true;
        }
        let mut chars = self.rest().chars();
        if chars.next() == Some('x') && !chars.next().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
            return true;
        }
        false
    }

    fn expr(&mut self) -> Result<RingSpec> {
        let mut lhs = self.term()?;
        while self.product_op() {
            let rhs = self.term()?;
            lhs = RingSpec::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<RingSpec> {
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        let start = self.pos;
        let Some(id) = self.ident() else {
            return self.err("expected a ring expression");
        };
        self.pos += id.len();
        match id {
            "Z" => {
                self.expect("/")?;
                let n = self.int()?;
                if n == 0 {
                    return Err(Error::parse(start, "Z/0 is not a finite ring"));
                }
                Ok(RingSpec::Cyclic(n))
            }
            "GF" => {
                self.expect("(")?;
                let q = self.int()?;
                self.expect(")")?;
                if super::field::prime_power(q).is_none() || q > 256 {
                    return Err(Error::parse(start, format!("GF({q}): order must be a prime power <= 256")));
                }
                Ok(RingSpec::Field(q))
            }
            "M" | "T" => {
                self.expect("(")?;
                let n = self.int()?;
                if n == 0 {
                    return Err(Error::parse(start, "matrix size must be positive"));
                }
                self.expect(",")?;
                let s = Box::new(self.expr()?);
                self.expect(")")?;
                Ok(if id == "M" { RingSpec::Matrix(n, s) } else { RingSpec::Triangular(n, s) })
            }
            "PolyQuot" => {
                self.expect("(")?;
                let s = self.expr()?;
                self.expect(",")?;
                let bracket = self.eat("[");
                let mut coeffs = vec![self.int()?];
                while self.eat(",") {
                    coeffs.push(self.int()?);
                }
                if bracket {
                    self.expect("]")?;
                }
                self.expect(")")?;
                if coeffs.len() < 2 {
                    return Err(Error::parse(start, "PolyQuot needs a polynomial of degree >= 1"));
                }
                Ok(RingSpec::PolyQuot(Box::new(s), coeffs))
            }
            "StructConst" => {
                self.expect("(")?;
                let rest = self.rest();
                let Some(end) = rest.find(')') else {
                    return self.err("unterminated StructConst path");
                };
                let path = rest[..end].trim().to_string();
                if path.is_empty() {
                    return self.err("empty StructConst path");
                }
                self.pos += end + 1;
                Ok(RingSpec::StructConst(path))
            }
            other => Err(Error::parse(start, format!("unknown constructor `{other}`"))),
        }
    }
}

pub fn parse_ring_spec(src: &str) -> Result<RingSpec> {
    let mut p = Parser { src, pos: 0 };
    let spec = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return p.err("unexpected trailing input");
    }
    Ok(spec)
}

impl RingSpec {
    pub fn build(&self, caps: &Caps) -> Result<FiniteRing> {
        match self {
            RingSpec::Cyclic(n) => FiniteRing::cyclic(*n, caps),
            RingSpec::Field(q) => FiniteRing::galois_field(*q, caps),
            RingSpec::Matrix(n, s) => FiniteRing::matrix(*n, &s.build(caps)?, caps),
            RingSpec::Triangular(n, s) => FiniteRing::upper_triangular(*n, &s.build(caps)?, caps),
            RingSpec::Product(a, b) => FiniteRing::product(&a.build(caps)?, &b.build(caps)?, caps),
            RingSpec::PolyQuot(s, c) => FiniteRing::poly_quotient(&s.build(caps)?, c, caps),
            RingSpec::StructConst(p) => FiniteRing::from_struct_const_file(p, caps),
        }
        .map(|r| r.with_label(self.to_string()))
    }
}

/// Parse and build a ring with default caps.
pub fn build_ring(src: &str) -> Result<FiniteRing> {
    build_ring_with(src, &Caps::default())
}

pub fn build_ring_with(src: &str, caps: &Caps) -> Result<FiniteRing> {
    parse_ring_spec(src)?.build(caps)
}
