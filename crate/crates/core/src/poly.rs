//! Dense univariate polynomials over any [`CoeffField`].

use crate::error::{Error, Result};
use crate::field::CoeffField;

/// Coefficients low-to-high, with no trailing zeros. The zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> Poly<E> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

/// Polynomial arithmetic over the field `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<K: CoeffField> {
    field: K,
}

impl<K: CoeffField> PolyRing<K> {
    pub fn new(field: K) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<K::Elem>) -> Poly<K::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: K::Elem) -> Poly<K::Elem> {
        self.from_coeffs(vec![c])
    }

    pub fn one(&self) -> Poly<K::Elem> {
        self.constant(self.field.one())
    }

    /// `c * x^n`
    pub fn monomial(&self, c: K::Elem, n: usize) -> Poly<K::Elem> {
        let mut v = vec![self.field.zero(); n];
        v.push(c);
        self.from_coeffs(v)
    }

    pub fn x(&self) -> Poly<K::Elem> {
        self.monomial(self.field.one(), 1)
    }

    pub fn is_one(&self, f: &Poly<K::Elem>) -> bool {
        f.coeffs.len() == 1 && self.field.is_one(&f.coeffs[0])
    }

    pub fn add(&self, f: &Poly<K::Elem>, g: &Poly<K::Elem>) -> Poly<K::Elem> {
        let n = f.coeffs.len().max(g.coeffs.len());
        let z = self.field.zero();
        let v = (0..n)
            .map(|i| {
                let a = f.coeffs.get(i).unwrap_or(&z);
                let b = g.coeffs.get(i).unwrap_or(&z);
                self.field.add(a, b)
            })
            .collect();
        self.from_coeffs(v)
    }

    pub fn neg(&self, f: &Poly<K::Elem>) -> Poly<K::Elem> {
        Poly {
            coeffs: f.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, f: &Poly<K::Elem>, g: &Poly<K::Elem>) -> Poly<K::Elem> {
        self.add(f, &self.neg(g))
    }

    pub fn scale(&self, f: &Poly<K::Elem>, c: &K::Elem) -> Poly<K::Elem> {
        self.from_coeffs(f.coeffs.iter().map(|a| self.field.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Poly<K::Elem>, g: &Poly<K::Elem>) -> Poly<K::Elem> {
        if f.is_zero() || g.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![self.field.zero(); f.coeffs.len() + g.coeffs.len() - 1];
        for (i, a) in f.coeffs.iter().enumerate() {
            if self.field.is_zero(a) {
                continue;
            }
            for (j, b) in g.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(a, b));
            }
        }
        self.from_coeffs(out)
    }

    pub fn pow(&self, f: &Poly<K::Elem>, mut e: u64) -> Poly<K::Elem> {
        let mut acc = self.one();
        let mut base = f.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Euclidean division `f = q*g + r` with `deg r < deg g`.
    pub fn div_rem(
        &self,
        f: &Poly<K::Elem>,
        g: &Poly<K::Elem>,
    ) -> Result<(Poly<K::Elem>, Poly<K::Elem>)> {
        let dg = g.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = self
            .field
            .inv(g.leading().expect("nonzero"))
            .ok_or(Error::DivisionByZero)?;
        let mut rem = f.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Poly::zero(), self.from_coeffs(rem)));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dg];
        for k in (dg..rem.len()).rev() {
            if self.field.is_zero(&rem[k]) {
                continue;
            }
            let c = self.field.mul(&rem[k], &lead_inv);
            for (j, gj) in g.coeffs.iter().enumerate() {
                let idx = k - dg + j;
                rem[idx] = self.field.sub(&rem[idx], &self.field.mul(&c, gj));
            }
            quot[k - dg] = c;
        }
        rem.truncate(dg);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem(&self, f: &Poly<K::Elem>, g: &Poly<K::Elem>) -> Result<Poly<K::Elem>> {
        Ok(self.div_rem(f, g)?.1)
    }

    /// Exact quotient; errors if `g` does not divide `f`.
    pub fn div_exact(&self, f: &Poly<K::Elem>, g: &Poly<K::Elem>) -> Result<Poly<K::Elem>> {
        let (q, r) = self.div_rem(f, g)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self, f: &Poly<K::Elem>) -> Poly<K::Elem> {
        match f.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = self.field.inv(l).expect("leading coefficient is nonzero");
                self.scale(f, &inv)
            }
        }
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, f: &Poly<K::Elem>, g: &Poly<K::Elem>) -> Poly<K::Elem> {
        let mut a = f.clone();
        let mut b = g.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b).expect("b nonzero");
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Returns `(d, s, t)` with `d = s*f + t*g` monic.
    pub fn xgcd(
        &self,
        f: &Poly<K::Elem>,
        g: &Poly<K::Elem>,
    ) -> (Poly<K::Elem>, Poly<K::Elem>, Poly<K::Elem>) {
        let (mut r0, mut r1) = (f.clone(), g.clone());
        let (mut s0, mut s1) = (self.one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.div_rem(&r0, &r1).expect("r1 nonzero");
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = self.field.inv(l).expect("nonzero");
                (
                    self.scale(&r0, &inv),
                    self.scale(&s0, &inv),
                    self.scale(&t0, &inv),
                )
            }
        }
    }

    pub fn mul_mod(
        &self,
        f: &Poly<K::Elem>,
        g: &Poly<K::Elem>,
        m: &Poly<K::Elem>,
    ) -> Poly<K::Elem> {
        self.rem(&self.mul(f, g), m).expect("modulus nonzero")
    }

    pub fn pow_mod(&self, f: &Poly<K::Elem>, mut e: u128, m: &Poly<K::Elem>) -> Poly<K::Elem> {
        let mut acc = self.rem(&self.one(), m).expect("modulus nonzero");
        let mut base = self.rem(f, m).expect("modulus nonzero");
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_mod(&base, &base, m);
            }
        }
        acc
    }

    pub fn eval(&self, f: &Poly<K::Elem>, x: &K::Elem) -> K::Elem {
        let mut acc = self.field.zero();
        for c in f.coeffs.iter().rev() {
            acc = self.field.add(&self.field.mul(&acc, x), c);
        }
        acc
    }

    /// `f(g(x))`
    pub fn compose(&self, f: &Poly<K::Elem>, g: &Poly<K::Elem>) -> Poly<K::Elem> {
        let mut acc = Poly::zero();
        for c in f.coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, g), &self.constant(c.clone()));
        }
        acc
    }

    pub fn derivative(&self, f: &Poly<K::Elem>) -> Poly<K::Elem> {
        let v = f
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.field.mul(c, &self.field.from_int(i as i64)))
            .collect();
        self.from_coeffs(v)
    }

    /// Renders with variable name `var`, highest degree first.
    pub fn display(&self, f: &Poly<K::Elem>, var: &str) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in f.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = self.field.display(c);
            let cs = if cs.contains('+') || cs.contains('/') || cs.contains('-') {
                format!("({cs})")
            } else {
                cs
            };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(if mono.is_empty() {
                cs
            } else if self.field.is_one(c) {
                mono
            } else {
                format!("{cs}*{mono}")
            });
        }
        terms.join(" + ")
    }
}
