//! Text grammar for elements of `A`, `F` and `F{tau}`.
//!
//! ```text
//! expr   = term { ("+" | "-") term } ;
//! term   = unary { ("*" | "/") unary } ;
//! unary  = "-" unary | power ;
//! power  = atom [ "^" digits ] ;
//! atom   = digits | "T" | "g" | "t" | "(" expr ")" ;
//! ```
//!
//! `T` is the variable of `A`, `g` the generator of `F_q` (only when `q` is not
//! prime), `t` is `tau`, and integers are read mod `p`. Division is allowed
//! only between `tau`-free operands.

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::finite_field::FqElem;
use crate::function_field::{RatFunc, RatFuncField};
use crate::poly::Poly;
use crate::skew::{SkewPoly, SkewRing};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: SkewRing<RatFuncField>,
}

type Value = SkewPoly<RatFunc>;

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("number too large"))
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.ring.add(&acc, &rhs);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.ring.sub(&acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.ring.mul(&acc, &rhs);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    if acc.degree().unwrap_or(0) > 0 || rhs.degree().unwrap_or(0) > 0 {
                        self.pos = at;
                        return self.err("division is only allowed between tau-free terms");
                    }
                    let k = self.ring.field();
                    let den = self.ring.derivative(&rhs);
                    let Some(q) = k.div(&self.ring.derivative(&acc), &den) else {
                        self.pos = at;
                        return self.err("division by zero");
                    };
                    acc = self.ring.constant(q);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.ring.neg(&v));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.digits()?;
            if e > 1 << 16 {
                return self.err("exponent too large");
            }
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Value> {
        let k = self.ring.field().clone();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'T') => {
                self.pos += 1;
                Ok(self.ring.constant(k.t()))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(self.ring.tau())
            }
            Some(b'g') => {
                if k.fq().depth() == 0 {
                    return self.err("'g' is only defined when q is not prime");
                }
                self.pos += 1;
                Ok(self.ring.constant(k.constant(&k.fq().generator())))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                let p = k.fq().characteristic() as u64;
                Ok(self.ring.constant(k.from_int((n % p) as i64)))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a twisted polynomial over `F_q(T)`.
pub fn parse_skew(field: &RatFuncField, s: &str) -> Result<SkewPoly<RatFunc>> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        ring: SkewRing::new(field.clone()),
    };
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}

pub fn parse_ratfunc(field: &RatFuncField, s: &str) -> Result<RatFunc> {
    let v = parse_skew(field, s)?;
    if v.degree().unwrap_or(0) > 0 {
        return Err(Error::Parse {
            pos: 0,
            msg: "expected an element of F_q(T), found tau".into(),
        });
    }
    Ok(SkewRing::new(field.clone()).derivative(&v))
}

/// Parses an element of `A = F_q[T]`.
pub fn parse_poly_a(field: &RatFuncField, s: &str) -> Result<Poly<FqElem>> {
    let x = parse_ratfunc(field, s)?;
    if !x.is_polynomial() {
        return Err(Error::Parse {
            pos: 0,
            msg: "expected a polynomial in T".into(),
        });
    }
    let lead = x.den().leading().unwrap().clone();
    let inv = field.fq().inv(&lead).unwrap();
    Ok(field.poly_ring().scale(x.num(), &inv))
}

/// Parses an element of `F_q`.
pub fn parse_fq(field: &RatFuncField, s: &str) -> Result<FqElem> {
    let a = parse_poly_a(field, s)?;
    match a.degree() {
        None => Ok(field.fq().zero()),
        Some(0) => Ok(a.coeffs()[0].clone()),
        Some(_) => Err(Error::Parse {
            pos: 0,
            msg: "expected a constant".into(),
        }),
    }
}
