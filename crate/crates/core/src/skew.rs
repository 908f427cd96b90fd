//! The twisted polynomial ring `K{tau}` with `tau * a = a^q * tau`.

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::poly::{Poly, PolyRing};

/// `sum a_i tau^i`, coefficients low-to-high with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> SkewPoly<E> {
    pub fn zero() -> Self {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `deg_tau`; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

#[derive(Clone, Debug)]
pub struct SkewRing<K: CoeffField> {
    field: K,
}

impl<K: CoeffField> SkewRing<K> {
    pub fn new(field: K) -> Self {
        SkewRing { field }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<K::Elem>) -> SkewPoly<K::Elem> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn constant(&self, c: K::Elem) -> SkewPoly<K::Elem> {
        self.from_coeffs(vec![c])
    }

    pub fn one(&self) -> SkewPoly<K::Elem> {
        self.constant(self.field.one())
    }

    /// `c * tau^n`
    pub fn monomial(&self, c: K::Elem, n: usize) -> SkewPoly<K::Elem> {
        let mut v = vec![self.field.zero(); n];
        v.push(c);
        self.from_coeffs(v)
    }

    pub fn tau(&self) -> SkewPoly<K::Elem> {
        self.monomial(self.field.one(), 1)
    }

    pub fn equal(&self, f: &SkewPoly<K::Elem>, g: &SkewPoly<K::Elem>) -> bool {
        f.coeffs.len() == g.coeffs.len()
            && f.coeffs
                .iter()
                .zip(&g.coeffs)
                .all(|(a, b)| self.field.equal(a, b))
    }

    pub fn add(&self, f: &SkewPoly<K::Elem>, g: &SkewPoly<K::Elem>) -> SkewPoly<K::Elem> {
        let n = f.coeffs.len().max(g.coeffs.len());
        let z = self.field.zero();
        let v = (0..n)
            .map(|i| {
                self.field
                    .add(f.coeffs.get(i).unwrap_or(&z), g.coeffs.get(i).unwrap_or(&z))
            })
            .collect();
        self.from_coeffs(v)
    }

    pub fn neg(&self, f: &SkewPoly<K::Elem>) -> SkewPoly<K::Elem> {
        SkewPoly {
            coeffs: f.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, f: &SkewPoly<K::Elem>, g: &SkewPoly<K::Elem>) -> SkewPoly<K::Elem> {
        self.add(f, &self.neg(g))
    }

    /// `c * f` (scalar on the left, no twist).
    pub fn scale_left(&self, c: &K::Elem, f: &SkewPoly<K::Elem>) -> SkewPoly<K::Elem> {
        self.from_coeffs(f.coeffs.iter().map(|a| self.field.mul(c, a)).collect())
    }

    pub fn mul(&self, f: &SkewPoly<K::Elem>, g: &SkewPoly<K::Elem>) -> SkewPoly<K::Elem> {
        if f.is_zero() || g.is_zero() {
            return SkewPoly::zero();
        }
        let k = &self.field;
        let mut out = vec![k.zero(); f.coeffs.len() + g.coeffs.len() - 1];
        for (j, b) in g.coeffs.iter().enumerate() {
            // b^(q^i) for i = 0, 1, ...
            let mut twisted = b.clone();
            for (i, a) in f.coeffs.iter().enumerate() {
                if i > 0 {
                    twisted = k.frob(&twisted);
                }
                if !k.is_zero(a) {
                    out[i + j] = k.add(&out[i + j], &k.mul(a, &twisted));
                }
            }
        }
        self.from_coeffs(out)
    }

    pub fn pow(&self, f: &SkewPoly<K::Elem>, mut e: u64) -> SkewPoly<K::Elem> {
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

    /// The constant term `a_0`, a ring homomorphism `K{tau} -> K`.
    pub fn derivative(&self, f: &SkewPoly<K::Elem>) -> K::Elem {
        f.coeffs
            .first()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Lowest and highest `tau`-index with a nonzero coefficient.
    pub fn height_and_degree(&self, f: &SkewPoly<K::Elem>) -> Result<(usize, usize)> {
        let d = f.degree().ok_or(Error::ZeroPolynomial)?;
        let h = f
            .coeffs
            .iter()
            .position(|c| !self.field.is_zero(c))
            .expect("nonzero");
        Ok((h, d))
    }

    /// The additive polynomial `sum a_i x^(q^i)`.
    pub fn to_qlinear(&self, f: &SkewPoly<K::Elem>) -> Poly<K::Elem> {
        let ring = PolyRing::new(self.field.clone());
        let q = self.field.q() as usize;
        let Some(d) = f.degree() else {
            return Poly::zero();
        };
        let mut v = vec![self.field.zero(); q.pow(d as u32) + 1];
        let mut e = 1;
        for c in &f.coeffs {
            v[e] = c.clone();
            e *= q;
        }
        ring.from_coeffs(v)
    }

    /// `f(x) = sum a_i x^(q^i)`.
    pub fn evaluate(&self, f: &SkewPoly<K::Elem>, x: &K::Elem) -> K::Elem {
        let k = &self.field;
        let mut acc = k.zero();
        let mut xp = x.clone();
        for (i, c) in f.coeffs.iter().enumerate() {
            if i > 0 {
                xp = k.frob(&xp);
            }
            if !k.is_zero(c) {
                acc = k.add(&acc, &k.mul(c, &xp));
            }
        }
        acc
    }

    /// Applies `h` to each coefficient, e.g. a reduction map.
    pub fn map_coeffs<L: CoeffField>(
        &self,
        target: &SkewRing<L>,
        f: &SkewPoly<K::Elem>,
        mut h: impl FnMut(&K::Elem) -> Result<L::Elem>,
    ) -> Result<SkewPoly<L::Elem>> {
        let v = f.coeffs.iter().map(&mut h).collect::<Result<Vec<_>>>()?;
        Ok(target.from_coeffs(v))
    }

    /// Renders as `a_0 + a_1*t + a_2*t^2`, with `t` standing for `tau`.
    pub fn display(&self, f: &SkewPoly<K::Elem>) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in f.coeffs.iter().enumerate() {
            if self.field.is_zero(c) {
                continue;
            }
            let cs = self.field.display(c);
            let mono = match i {
                0 => {
                    terms.push(cs);
                    continue;
                }
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            if self.field.is_one(c) {
                terms.push(mono);
            } else if cs.contains(['+', '-', '/']) {
                terms.push(format!("({cs})*{mono}"));
            } else {
                terms.push(format!("{cs}*{mono}"));
            }
        }
        terms.join(" + ")
    }
}
