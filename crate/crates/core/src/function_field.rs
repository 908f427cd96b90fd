//! `A = F_q[T]` and `F = F_q(T)`: primes, valuations, residue fields.

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::finite_field::{is_irreducible, FiniteField, FqElem};
use crate::poly::{Poly, PolyRing};

/// Element of `F_q(T)` in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly<FqElem>,
    den: Poly<FqElem>,
}

impl RatFunc {
    pub fn num(&self) -> &Poly<FqElem> {
        &self.num
    }

    pub fn den(&self) -> &Poly<FqElem> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }
}

/// The rational function field `F = F_q(T)`, with `q`-power map fixing `F_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFuncField {
    fq: FiniteField,
    ring: PolyRing<FiniteField>,
}

impl RatFuncField {
    /// `fq` must be the base field itself (its `q` is its own order).
    pub fn new(fq: FiniteField) -> Self {
        let fq = fq.with_base_depth(fq.depth());
        RatFuncField {
            ring: PolyRing::new(fq.clone()),
            fq,
        }
    }

    pub fn fq(&self) -> &FiniteField {
        &self.fq
    }

    /// Arithmetic in `A`.
    pub fn poly_ring(&self) -> &PolyRing<FiniteField> {
        &self.ring
    }

    pub fn from_poly(&self, a: &Poly<FqElem>) -> RatFunc {
        RatFunc {
            num: a.clone(),
            den: self.ring.one(),
        }
    }

    pub fn t(&self) -> RatFunc {
        self.from_poly(&self.ring.x())
    }

    pub fn constant(&self, c: &FqElem) -> RatFunc {
        self.from_poly(&self.ring.constant(c.clone()))
    }

    pub fn fraction(&self, num: &Poly<FqElem>, den: &Poly<FqElem>) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.normalize(num.clone(), den.clone()))
    }

    fn normalize(&self, num: Poly<FqElem>, den: Poly<FqElem>) -> RatFunc {
        let r = &self.ring;
        if num.is_zero() {
            return RatFunc { num, den: r.one() };
        }
        let g = r.gcd(&num, &den);
        let num = r.div_exact(&num, &g).expect("gcd divides");
        let den = r.div_exact(&den, &g).expect("gcd divides");
        let lead = self.fq.inv(den.leading().unwrap()).unwrap();
        RatFunc {
            num: r.scale(&num, &lead),
            den: r.scale(&den, &lead),
        }
    }

    /// `a(T^q)` for `a` with coefficients in `F_q`, equal to `a^q`.
    fn frob_poly(&self, a: &Poly<FqElem>) -> Poly<FqElem> {
        let q = self.fq.order() as usize;
        let mut v = vec![self.fq.zero(); a.degree().map_or(0, |d| d * q + 1)];
        for (i, c) in a.coeffs().iter().enumerate() {
            v[i * q] = c.clone();
        }
        self.ring.from_coeffs(v)
    }

    /// Monic polynomial from coefficients given as integers mod `p`.
    pub fn poly_from_ints(&self, c: &[i64]) -> Poly<FqElem> {
        self.ring
            .from_coeffs(c.iter().map(|&v| self.fq.from_int(v)).collect())
    }

    pub fn display_poly(&self, a: &Poly<FqElem>) -> String {
        display_poly_compact(&self.fq, a, "T")
    }
}

/// Compact `T^2+T+1` style rendering used in reports and the CLI grammar.
pub fn display_poly_compact(k: &FiniteField, a: &Poly<FqElem>, var: &str) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<String> = Vec::new();
    for (i, c) in a.coeffs().iter().enumerate().rev() {
        if k.is_zero(c) {
            continue;
        }
        let cs = k.display(c);
        let cs = if cs.contains('+') {
            format!("({cs})")
        } else {
            cs
        };
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (mono.is_empty(), k.is_one(c)) {
            (true, _) => cs,
            (false, true) => mono,
            (false, false) => format!("{cs}*{mono}"),
        });
    }
    terms.join("+")
}

impl CoeffField for RatFuncField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        self.from_poly(&Poly::zero())
    }

    fn one(&self) -> RatFunc {
        self.from_poly(&self.ring.one())
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let r = &self.ring;
        if a.den == b.den {
            return self.normalize(r.add(&a.num, &b.num), a.den.clone());
        }
        let num = r.add(&r.mul(&a.num, &b.den), &r.mul(&b.num, &a.den));
        self.normalize(num, r.mul(&a.den, &b.den))
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: self.ring.neg(&a.num),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let r = &self.ring;
        self.normalize(r.mul(&a.num, &b.num), r.mul(&a.den, &b.den))
    }

    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        if a.is_zero() {
            return None;
        }
        Some(self.normalize(a.den.clone(), a.num.clone()))
    }

    fn q(&self) -> u64 {
        self.fq.order() as u64
    }

    fn frob(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: self.frob_poly(&a.num),
            den: self.frob_poly(&a.den),
        }
    }

    fn from_int(&self, n: i64) -> RatFunc {
        self.constant(&self.fq.from_int(n))
    }

    fn equal(&self, a: &RatFunc, b: &RatFunc) -> bool {
        a == b
    }

    fn display(&self, a: &RatFunc) -> String {
        let n = self.display_poly(&a.num);
        if a.is_polynomial() {
            n
        } else {
            let wrap = |s: String| if s.contains('+') { format!("({s})") } else { s };
            format!("{}/{}", wrap(n), wrap(self.display_poly(&a.den)))
        }
    }
}

/// A nonzero prime of `A`, given by its monic irreducible generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    generator: Poly<FqElem>,
}

impl PrimeIdeal {
    pub fn new(fq: &FiniteField, f: &Poly<FqElem>) -> Result<Self> {
        let ring = PolyRing::new(fq.clone());
        let d = f.degree().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Err(Error::ZeroDegree);
        }
        if !fq.is_one(f.leading().unwrap()) {
            return Err(Error::InvalidModule("prime generator must be monic".into()));
        }
        if !is_irreducible(fq, f) {
            return Err(Error::Reducible);
        }
        Ok(PrimeIdeal {
            generator: ring.monic(f),
        })
    }

    pub fn generator(&self) -> &Poly<FqElem> {
        &self.generator
    }

    pub fn degree(&self) -> usize {
        self.generator.degree().unwrap()
    }
}

/// A place of `F`: a finite prime or the infinite place `1/T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(PrimeIdeal),
    Infinity,
}

impl Place {
    pub fn label(&self, fq: &FiniteField) -> String {
        match self {
            Place::Finite(p) => display_poly_compact(fq, p.generator(), "T"),
            Place::Infinity => "infinity".into(),
        }
    }
}

fn ord_poly(ring: &PolyRing<FiniteField>, a: &Poly<FqElem>, prime: &PrimeIdeal) -> i64 {
    let mut n = 0;
    let mut h = a.clone();
    loop {
        let (q, r) = ring.div_rem(&h, prime.generator()).expect("prime nonzero");
        if !r.is_zero() {
            return n;
        }
        n += 1;
        h = q;
    }
}

/// `ord_p(x)`.
pub fn ord_at(field: &RatFuncField, x: &RatFunc, prime: &PrimeIdeal) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    Ok(ord_poly(&field.ring, &x.num, prime) - ord_poly(&field.ring, &x.den, prime))
}

/// `v_inf(x) = deg(den) - deg(num)`, so `v_inf(T) = -1`.
pub fn v_infinity(x: &RatFunc) -> Result<i64> {
    let n = x.num.degree().ok_or(Error::InfiniteValuation)?;
    Ok(x.den.degree().unwrap() as i64 - n as i64)
}

pub fn valuation_at(field: &RatFuncField, x: &RatFunc, place: &Place) -> Result<i64> {
    match place {
        Place::Finite(p) => ord_at(field, x, p),
        Place::Infinity => v_infinity(x),
    }
}

fn mobius(n: usize) -> i64 {
    let mut m = n;
    let mut result = 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if m > 1 {
        result = -result;
    }
    result
}

/// Number of monic irreducibles of degree `n` over `F_q`:
/// `(1/n) * sum_{d | n} mu(n/d) q^d`.
pub fn necklace_count(q: u64, n: usize) -> u64 {
    let s: i128 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mobius(n / d) as i128 * (q as i128).pow(d as u32))
        .sum();
    (s / n as i128) as u64
}

/// All primes of degree `<= max_degree`, ordered by degree and then by the
/// canonical coefficient order. Each degree slice is checked against the
/// necklace count.
pub fn enumerate_primes(fq: &FiniteField, max_degree: usize) -> Result<Vec<PrimeIdeal>> {
    if max_degree == 0 {
        return Err(Error::ZeroDegree);
    }
    let fq = fq.with_base_depth(fq.depth());
    let ring = PolyRing::new(fq.clone());
    let q = fq.order();
    let mut out = Vec::new();
    for n in 1..=max_degree {
        let total = q
            .checked_pow(n as u32)
            .filter(|t| *t <= 1 << 24)
            .ok_or(Error::FieldTooLarge(u128::MAX, 1 << 24))?;
        let mut count = 0;
        for idx in 0..total {
            // c_0 is the most significant digit
            let mut coeffs: Vec<FqElem> = (0..n)
                .map(|j| fq.from_index((idx / q.pow((n - 1 - j) as u32)) % q))
                .collect();
            coeffs.push(fq.one());
            let f = ring.from_coeffs(coeffs);
            if is_irreducible(&fq, &f) {
                out.push(PrimeIdeal { generator: f });
                count += 1;
            }
        }
        let expected = necklace_count(q as u64, n);
        if count != expected {
            return Err(Error::Internal(format!(
                "found {count} primes of degree {n}, necklace count is {expected}"
            )));
        }
    }
    Ok(out)
}

/// `kappa = F_q[T]/(f)` as a tower level named `t` over `F_q`.
pub fn residue_field(fq: &FiniteField, prime: &PrimeIdeal) -> FiniteField {
    let fq = fq.with_base_depth(fq.depth());
    fq.extend(prime.generator(), "t")
        .expect("prime generators are irreducible")
}

/// Image of a polynomial in `kappa = A/(f)`.
pub fn reduce_poly(kappa: &FiniteField, a: &Poly<FqElem>, prime: &PrimeIdeal) -> FqElem {
    let base = kappa.prefix(kappa.depth() - 1);
    let ring = PolyRing::new(base);
    let r = ring.rem(a, prime.generator()).expect("prime nonzero");
    kappa.from_level_coeffs(r.coeffs())
}

/// Reduction `x mod p` into the residue field `kappa`.
pub fn residue_map(
    field: &RatFuncField,
    kappa: &FiniteField,
    x: &RatFunc,
    prime: &PrimeIdeal,
) -> Result<FqElem> {
    if !x.is_zero() && ord_at(field, x, prime)? < 0 {
        return Err(Error::NotIntegral);
    }
    let n = reduce_poly(kappa, &x.num, prime);
    let d = reduce_poly(kappa, &x.den, prime);
    kappa.div(&n, &d).ok_or(Error::NotIntegral)
}

/// Reduction at the infinite place; the residue field is `F_q`.
pub fn residue_at_infinity(field: &RatFuncField, x: &RatFunc) -> Result<FqElem> {
    if x.is_zero() {
        return Ok(field.fq.zero());
    }
    match v_infinity(x)? {
        v if v < 0 => Err(Error::NotIntegral),
        0 => Ok(field
            .fq
            .div(x.num.leading().unwrap(), x.den.leading().unwrap())
            .unwrap()),
        _ => Ok(field.fq.zero()),
    }
}
