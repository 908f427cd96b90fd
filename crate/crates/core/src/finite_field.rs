//! Finite-field towers `F_p ⊆ F_q ⊆ F_{q^s} ⊆ ...` given by explicit defining
//! polynomials, with root finding and factorization of univariate polynomials.
//!
//! An element of a tower of depth `d` is stored flat: a vector of `F_p`
//! coordinates of length `p`-dimension of the field, where the top level is
//! `c_0 + c_1 y + ... + c_{n-1} y^{n-1}` and each `c_j` is itself a flat element
//! of the level below. Every canonical choice (irreducible polynomials, roots,
//! embeddings, output order) uses one total order: lexicographic on the flat
//! coordinate vector, first coordinate most significant.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::poly::{Poly, PolyRing};

/// Largest field that may be enumerated element by element.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

/// Fields at most this large find roots by exhaustive evaluation.
const EXHAUSTIVE_ROOT_THRESHOLD: u128 = 512;
/// Element inversion is `x^(|K| - 2)`, so `|K|` must fit comfortably in a `u128`.
const MAX_FIELD_BITS: f64 = 120.0;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqElem(Vec<u32>);

impl FqElem {
    /// Flat `F_p` coordinates.
    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug)]
struct Level {
    degree: usize,
    /// Low coefficients of the monic defining polynomial, each a flat element of
    /// the level below.
    modulus: Vec<Vec<u32>>,
    name: String,
}

impl PartialEq for Level {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.modulus == other.modulus
    }
}

#[derive(Debug)]
pub struct FieldDesc {
    p: u32,
    levels: Vec<Level>,
    /// `dims[i]` is the `F_p`-dimension of the prefix tower with `i` levels.
    dims: Vec<usize>,
}

impl FieldDesc {
    fn new(p: u32, levels: Vec<Level>) -> Result<Self> {
        let mut dims = vec![1usize];
        for l in &levels {
            dims.push(dims.last().unwrap() * l.degree);
        }
        let n = *dims.last().unwrap();
        if (p as u128).checked_pow(n as u32).is_none() || n > 126 {
            return Err(Error::FieldTooLarge(u128::MAX, u128::MAX));
        }
        Ok(FieldDesc { p, levels, dims })
    }

    fn add_at(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p;
        a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
    }

    fn sub_into(&self, acc: &mut [u32], b: &[u32]) {
        let p = self.p;
        for (x, y) in acc.iter_mut().zip(b) {
            *x = (*x + p - y) % p;
        }
    }

    fn add_into(&self, acc: &mut [u32], b: &[u32]) {
        let p = self.p;
        for (x, y) in acc.iter_mut().zip(b) {
            *x = (*x + y) % p;
        }
    }

    fn mul_at(&self, depth: usize, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        if depth == 0 {
            return vec![((a[0] as u64 * b[0] as u64) % p) as u32];
        }
        let lvl = &self.levels[depth - 1];
        let n = lvl.degree;
        let sub = self.dims[depth - 1];
        if sub == 1 {
            let mut prod = vec![0u64; 2 * n - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
                }
            }
            for k in (n..2 * n - 1).rev() {
                let c = prod[k] % p;
                if c == 0 {
                    continue;
                }
                for j in 0..n {
                    let m = lvl.modulus[j][0] as u64;
                    prod[k - n + j] = (prod[k - n + j] + (p - c) * m) % p;
                }
            }
            return prod[..n].iter().map(|&x| x as u32).collect();
        }
        let chunk = |v: &'_ [u32], i: usize| -> Vec<u32> { v[i * sub..(i + 1) * sub].to_vec() };
        let mut prod = vec![vec![0u32; sub]; 2 * n - 1];
        for i in 0..n {
            let ai = chunk(a, i);
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..n {
                let bj = &b[j * sub..(j + 1) * sub];
                if bj.iter().all(|&x| x == 0) {
                    continue;
                }
                let t = self.mul_at(depth - 1, &ai, bj);
                self.add_into(&mut prod[i + j], &t);
            }
        }
        for k in (n..2 * n - 1).rev() {
            if prod[k].iter().all(|&x| x == 0) {
                continue;
            }
            let c = prod[k].clone();
            for j in 0..n {
                let t = self.mul_at(depth - 1, &c, &lvl.modulus[j]);
                self.sub_into(&mut prod[k - n + j], &t);
            }
        }
        prod.truncate(n);
        prod.concat()
    }

    fn display_at(&self, depth: usize, a: &[u32]) -> String {
        if depth == 0 {
            return a[0].to_string();
        }
        let lvl = &self.levels[depth - 1];
        let sub = self.dims[depth - 1];
        if lvl.degree == 1 {
            return self.display_at(depth - 1, a);
        }
        let mut terms = Vec::new();
        for i in (0..lvl.degree).rev() {
            let c = &a[i * sub..(i + 1) * sub];
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let is_one = c[0] == 1 && c[1..].iter().all(|&x| x == 0);
            let cs = self.display_at(depth - 1, c);
            let cs = if cs.contains('+') {
                format!("({cs})")
            } else {
                cs
            };
            let mono = match i {
                0 => String::new(),
                1 => lvl.name.clone(),
                _ => format!("{}^{}", lvl.name, i),
            };
            terms.push(if mono.is_empty() {
                cs
            } else if is_one {
                mono
            } else {
                format!("{cs}*{mono}")
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Handle to a finite field (a tower over `F_p`) together with the designated
/// base subfield `F_q`, a prefix of the tower, whose cardinality defines the
/// `q`-power map.
#[derive(Clone)]
pub struct FiniteField {
    desc: Arc<FieldDesc>,
    base_depth: usize,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; q={})", self.desc.p, self.degree(), self.q())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.desc.p == other.desc.p
            && self.desc.levels == other.desc.levels
            && self.base_depth == other.base_depth
    }
}

impl FiniteField {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(FiniteField {
            desc: Arc::new(FieldDesc::new(p, Vec::new())?),
            base_depth: 0,
        })
    }

    /// `F_q` for a prime power `q`; for `q = p^e` with `e > 1` it is
    /// `F_p[g]/(m(g))` with `m` the canonical irreducible of degree `e`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let fp = FiniteField::prime(p as u32)?;
        let f = if e == 1 {
            fp
        } else {
            fp.extension(e as usize, "g")?
        };
        Ok(f.with_base_depth(f.depth()))
    }

    /// Adjoins a root of the monic irreducible `modulus`. The base field is kept.
    pub fn extend(&self, modulus: &Poly<FqElem>, name: &str) -> Result<Self> {
        let ring = PolyRing::new(self.clone());
        let m = ring.monic(modulus);
        let deg = m.degree().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Err(Error::ZeroDegree);
        }
        if !is_irreducible(self, &m) {
            return Err(Error::Reducible);
        }
        self.extend_unchecked(&m, name)
    }

    fn extend_unchecked(&self, m: &Poly<FqElem>, name: &str) -> Result<Self> {
        let deg = m.degree().expect("nonzero");
        let mut levels = self.desc.levels.clone();
        levels.push(Level {
            degree: deg,
            modulus: m.coeffs()[..deg].iter().map(|c| c.0.clone()).collect(),
            name: name.to_string(),
        });
        Ok(FiniteField {
            desc: Arc::new(FieldDesc::new(self.desc.p, levels)?),
            base_depth: self.base_depth,
        })
    }

    /// Degree-`s` extension by the canonical irreducible; `s = 1` returns `self`.
    pub fn extension(&self, s: usize, name: &str) -> Result<Self> {
        match s {
            0 => Err(Error::ZeroDegree),
            1 => Ok(self.clone()),
            _ => {
                let bits = (self.degree() * s) as f64 * (self.desc.p as f64).log2();
                if bits > MAX_FIELD_BITS {
                    return Err(Error::OutOfScope(format!(
                        "field of {bits:.0} bits exceeds the {MAX_FIELD_BITS}-bit limit"
                    )));
                }
                let m = irreducible_poly(self, s)?;
                self.extend_unchecked(&m, name)
            }
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.desc.p
    }

    pub fn depth(&self) -> usize {
        self.desc.levels.len()
    }

    /// Dimension over `F_p`.
    pub fn degree(&self) -> usize {
        self.desc.dims[self.depth()]
    }

    pub fn order(&self) -> u128 {
        (self.desc.p as u128).pow(self.degree() as u32)
    }

    pub fn base_depth(&self) -> usize {
        self.base_depth
    }

    /// Degree over the base field `F_q`.
    pub fn degree_over_base(&self) -> usize {
        self.degree() / self.desc.dims[self.base_depth]
    }

    pub fn with_base_depth(&self, d: usize) -> Self {
        assert!(d <= self.depth());
        FiniteField {
            desc: self.desc.clone(),
            base_depth: d,
        }
    }

    /// The subfield given by the first `d` levels of the tower.
    pub fn prefix(&self, d: usize) -> Self {
        assert!(d <= self.depth());
        if d == self.depth() {
            return self.clone();
        }
        let desc = FieldDesc::new(self.desc.p, self.desc.levels[..d].to_vec())
            .expect("prefix of a valid tower");
        FiniteField {
            desc: Arc::new(desc),
            base_depth: self.base_depth.min(d),
        }
    }

    /// The base field `F_q` as a field of its own.
    pub fn base_field(&self) -> Self {
        self.prefix(self.base_depth)
    }

    pub fn is_prefix_of(&self, other: &FiniteField) -> bool {
        self.desc.p == other.desc.p
            && self.depth() <= other.depth()
            && self.desc.levels[..] == other.desc.levels[..self.depth()]
    }

    /// Defining polynomial of the top level, over the field one level down.
    pub fn top_modulus(&self) -> Option<Poly<FqElem>> {
        let lvl = self.desc.levels.last()?;
        let mut v: Vec<FqElem> = lvl.modulus.iter().map(|c| FqElem(c.clone())).collect();
        let below = self.prefix(self.depth() - 1);
        v.push(below.one());
        Some(PolyRing::new(below).from_coeffs(v))
    }

    /// Generator of the top level (`1` for a prime field).
    pub fn generator(&self) -> FqElem {
        match self.desc.levels.last() {
            None => self.one(),
            Some(l) if l.degree == 1 => {
                let m = FqElem(l.modulus[0].clone());
                let below = self.prefix(self.depth() - 1);
                self.lift_from_prefix(&below.neg(&m))
            }
            Some(_) => {
                let sub = self.desc.dims[self.depth() - 1];
                let mut v = vec![0u32; self.degree()];
                v[sub] = 1;
                FqElem(v)
            }
        }
    }

    pub fn from_coords(&self, coords: Vec<u32>) -> FqElem {
        assert_eq!(coords.len(), self.degree(), "coordinate vector length");
        let p = self.desc.p;
        FqElem(coords.into_iter().map(|c| c % p).collect())
    }

    /// Element from its top-level coefficients, each an element of the field
    /// one level down.
    pub fn from_level_coeffs(&self, coeffs: &[FqElem]) -> FqElem {
        let lvl = self.desc.levels.last().expect("not a prime field");
        assert!(coeffs.len() <= lvl.degree);
        let sub = self.desc.dims[self.depth() - 1];
        let mut v = vec![0u32; self.degree()];
        for (i, c) in coeffs.iter().enumerate() {
            v[i * sub..(i + 1) * sub].copy_from_slice(&c.0);
        }
        FqElem(v)
    }

    /// Top-level coefficients of an element.
    pub fn level_coeffs(&self, x: &FqElem) -> Vec<FqElem> {
        let sub = self.desc.dims[self.depth() - 1];
        x.0.chunks(sub).map(|c| FqElem(c.to_vec())).collect()
    }

    /// Natural inclusion of an element of a prefix subfield.
    pub fn lift_from_prefix(&self, x: &FqElem) -> FqElem {
        let mut v = x.0.clone();
        assert!(v.len() <= self.degree());
        v.resize(self.degree(), 0);
        FqElem(v)
    }

    /// Inverse of [`lift_from_prefix`]; `None` if `x` is not in the prefix of `F_p`-dimension `dim`.
    pub fn restrict_to_prefix(&self, x: &FqElem, dim: usize) -> Option<FqElem> {
        if x.0[dim..].iter().any(|&c| c != 0) {
            return None;
        }
        Some(FqElem(x.0[..dim].to_vec()))
    }

    /// The `i`-th element in the canonical order.
    pub fn from_index(&self, mut i: u128) -> FqElem {
        let n = self.degree();
        let p = self.desc.p as u128;
        let mut v = vec![0u32; n];
        for k in 0..n {
            v[n - 1 - k] = (i % p) as u32;
            i /= p;
        }
        FqElem(v)
    }

    pub fn index_of(&self, x: &FqElem) -> u128 {
        let p = self.desc.p as u128;
        x.0.iter().fold(0u128, |acc, &c| acc * p + c as u128)
    }

    /// All elements in canonical order; fails above `cap` elements.
    pub fn elements_capped(&self, cap: u128) -> Result<impl Iterator<Item = FqElem> + '_> {
        let q = self.order();
        if q > cap {
            return Err(Error::FieldTooLarge(q, cap));
        }
        Ok((0..q).map(move |i| self.from_index(i)))
    }

    pub fn elements(&self) -> Result<impl Iterator<Item = FqElem> + '_> {
        self.elements_capped(DEFAULT_ENUMERATION_CAP)
    }

    /// The flat `F_p`-basis (unit coordinate vectors).
    pub fn fp_basis(&self) -> Vec<FqElem> {
        let n = self.degree();
        (0..n)
            .map(|k| {
                let mut v = vec![0u32; n];
                v[k] = 1;
                FqElem(v)
            })
            .collect()
    }

    /// `x^(q^times)`.
    pub fn frobenius(&self, x: &FqElem, times: usize) -> FqElem {
        self.frob_n(x, times)
    }

    /// Smallest `d >= 1` with `x^(q^d) = x`, i.e. the degree of `x` over `F_q`.
    pub fn degree_over_base_of(&self, x: &FqElem) -> usize {
        let mut y = self.frob(x);
        let mut d = 1;
        while &y != x {
            y = self.frob(&y);
            d += 1;
        }
        d
    }

    /// `a^(1/q^k)`, inverse of the `q`-power map.
    pub fn frob_inverse(&self, a: &FqElem, k: usize) -> FqElem {
        let n = self.degree_over_base();
        let k = k % n;
        self.frob_n(a, (n - k) % n)
    }

    /// Maps a polynomial with coefficients in a prefix subfield into this field.
    pub fn lift_poly(&self, f: &Poly<FqElem>) -> Poly<FqElem> {
        PolyRing::new(self.clone()).from_coeffs(
            f.coeffs()
                .iter()
                .map(|c| self.lift_from_prefix(c))
                .collect(),
        )
    }
}

impl CoeffField for FiniteField {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem(vec![0; self.degree()])
    }

    fn one(&self) -> FqElem {
        let mut v = vec![0; self.degree()];
        v[0] = 1;
        FqElem(v)
    }

    fn is_zero(&self, a: &FqElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.desc.add_at(&a.0, &b.0))
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        let p = self.desc.p;
        FqElem(a.0.iter().map(|&c| (p - c) % p).collect())
    }

    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut v = a.0.clone();
        self.desc.sub_into(&mut v, &b.0);
        FqElem(v)
    }

    fn equal(&self, a: &FqElem, b: &FqElem) -> bool {
        a == b
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(self.desc.mul_at(self.depth(), &a.0, &b.0))
    }

    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    fn q(&self) -> u64 {
        (self.desc.p as u64).pow(self.desc.dims[self.base_depth] as u32)
    }

    fn frob(&self, a: &FqElem) -> FqElem {
        if self.base_depth == self.depth() {
            return a.clone();
        }
        self.pow(a, self.q() as u128)
    }

    fn from_int(&self, n: i64) -> FqElem {
        let mut v = vec![0; self.degree()];
        v[0] = n.rem_euclid(self.desc.p as i64) as u32;
        FqElem(v)
    }

    fn display(&self, a: &FqElem) -> String {
        self.desc.display_at(self.depth(), &a.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `q = p^e` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `f` (degree `d`) is irreducible over `k` iff `x^(Q^d) = x mod f`
/// and `gcd(x^(Q^(d/l)) - x, f) = 1` for every prime `l | d`.
pub fn is_irreducible(k: &FiniteField, f: &Poly<FqElem>) -> bool {
    let ring = PolyRing::new(k.clone());
    let d = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(d) => d,
    };
    let q = k.order();
    let x = ring.x();
    // x^(Q^i) mod f for i = 0..=d
    let mut powers = vec![ring.rem(&x, f).unwrap()];
    for _ in 0..d {
        let next = ring.pow_mod(powers.last().unwrap(), q, f);
        powers.push(next);
    }
    if powers[d] != powers[0] {
        return false;
    }
    prime_divisors(d).into_iter().all(|l| {
        let h = ring.sub(&powers[d / l], &x);
        ring.is_one(&ring.gcd(&h, f))
    })
}

/// The monic irreducible polynomial of the given degree over `k` that comes
/// first in ascending lexicographic order of its coefficient tuple
/// `(c_0, c_1, ..., c_{d-1})`.
pub fn irreducible_poly(k: &FiniteField, degree: usize) -> Result<Poly<FqElem>> {
    if degree == 0 {
        return Err(Error::ZeroDegree);
    }
    let ring = PolyRing::new(k.clone());
    let q = k.order();
    // digits[0] is c_0, the most significant position
    let mut digits = vec![0u128; degree];
    if degree >= 2 {
        // a zero constant term means x divides the candidate
        digits[0] = 1;
    }
    loop {
        let mut coeffs: Vec<FqElem> = digits.iter().map(|&i| k.from_index(i)).collect();
        coeffs.push(k.one());
        let f = ring.from_coeffs(coeffs);
        if is_irreducible(k, &f) {
            return Ok(f);
        }
        let mut pos = degree;
        loop {
            if pos == 0 {
                return Err(Error::Internal("no irreducible polynomial found".into()));
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub value: FqElem,
    pub multiplicity: usize,
}

/// All roots of `f` in `k`, sorted in canonical order, with multiplicities.
pub fn poly_roots(k: &FiniteField, f: &Poly<FqElem>) -> Result<Vec<Root>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ring = PolyRing::new(k.clone());
    let mut values = if k.order() <= EXHAUSTIVE_ROOT_THRESHOLD {
        k.elements()?
            .filter(|x| k.is_zero(&ring.eval(f, x)))
            .collect::<Vec<_>>()
    } else {
        let x = ring.x();
        let xq = ring.pow_mod(&x, k.order(), f);
        let g = ring.gcd(&ring.sub(&xq, &x), f);
        let mut out = Vec::new();
        split_linear(k, &g, &mut out)?;
        out
    };
    values.sort();
    let mut roots = Vec::with_capacity(values.len());
    for v in values {
        let lin = ring.from_coeffs(vec![k.neg(&v), k.one()]);
        let mut m = 0;
        let mut h = f.clone();
        loop {
            let (qt, r) = ring.div_rem(&h, &lin)?;
            if !r.is_zero() {
                break;
            }
            m += 1;
            h = qt;
        }
        roots.push(Root {
            value: v,
            multiplicity: m,
        });
    }
    Ok(roots)
}

/// Candidate splitting polynomials in a fixed order: the `i`-th has base-`Q`
/// digits of `i + Q` as coefficients (so never constant).
fn splitting_candidate(k: &FiniteField, ring: &PolyRing<FiniteField>, i: u128) -> Poly<FqElem> {
    let q = k.order();
    let mut n = i + q;
    let mut coeffs = Vec::new();
    while n > 0 {
        coeffs.push(k.from_index(n % q));
        n /= q;
    }
    ring.from_coeffs(coeffs)
}

/// Equal-degree splitting of a squarefree `g` whose irreducible factors all
/// have degree `d`; pushes the monic factors.
fn split_equal_degree(
    k: &FiniteField,
    g: &Poly<FqElem>,
    d: usize,
    out: &mut Vec<Poly<FqElem>>,
) -> Result<()> {
    let ring = PolyRing::new(k.clone());
    let n = g.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(());
    }
    if n == d {
        out.push(ring.monic(g));
        return Ok(());
    }
    let q = k.order();
    let p = k.characteristic();
    // scaled monomials first; in characteristic 2 these always separate two
    // factors for d = 1
    let monomials = (1..n.min(2 * d)).flat_map(|j| k.fp_basis().into_iter().map(move |a| (a, j)));
    let monomials: Vec<Poly<FqElem>> = monomials.map(|(a, j)| ring.monomial(a, j)).collect();
    let indexed = (0..(1u128 << 20))
        .map(|i| splitting_candidate(k, &ring, i))
        .take_while(|h| h.degree().unwrap() < n);
    for h in monomials.into_iter().chain(indexed) {
        let w = if p == 2 {
            // absolute trace from F_{Q^d} down to F_2
            let bits = k.degree() * d;
            let mut acc = Poly::zero();
            let mut t = ring.rem(&h, g)?;
            for _ in 0..bits {
                acc = ring.add(&acc, &t);
                t = ring.mul_mod(&t, &t, g);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - 1) / 2;
            ring.sub(&ring.pow_mod(&h, e, g), &ring.one())
        };
        let c = ring.gcd(&w, g);
        let dc = c.degree().unwrap_or(0);
        if dc > 0 && dc < n {
            let other = ring.div_exact(g, &c)?;
            split_equal_degree(k, &c, d, out)?;
            split_equal_degree(k, &other, d, out)?;
            return Ok(());
        }
    }
    Err(Error::Internal(
        "equal-degree splitting did not terminate".into(),
    ))
}

fn split_linear(k: &FiniteField, g: &Poly<FqElem>, out: &mut Vec<FqElem>) -> Result<()> {
    let mut factors = Vec::new();
    split_equal_degree(k, g, 1, &mut factors)?;
    out.extend(factors.iter().map(|f| k.neg(&f.coeffs()[0])));
    Ok(())
}

/// `f(x) = sum a_{ip} x^{ip}` to `sum a_{ip}^{1/p} x^i`.
fn pth_root(k: &FiniteField, f: &Poly<FqElem>) -> Poly<FqElem> {
    let p = k.characteristic() as usize;
    let n = k.degree() as u128;
    let ring = PolyRing::new(k.clone());
    let root = |a: &FqElem| k.pow(a, (k.characteristic() as u128).pow((n - 1) as u32));
    ring.from_coeffs(f.coeffs().iter().step_by(p).map(root).collect())
}

fn squarefree_decomposition(k: &FiniteField, f: &Poly<FqElem>) -> Vec<(Poly<FqElem>, usize)> {
    let ring = PolyRing::new(k.clone());
    let mut out = Vec::new();
    let f = ring.monic(f);
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = ring.derivative(&f);
    let mut c = ring.gcd(&f, &df);
    let mut w = ring.div_exact(&f, &c).unwrap();
    let mut i = 1;
    while !ring.is_one(&w) {
        let y = ring.gcd(&w, &c);
        let z = ring.div_exact(&w, &y).unwrap();
        if !ring.is_one(&z) {
            out.push((z, i));
        }
        i += 1;
        w = y.clone();
        c = ring.div_exact(&c, &y).unwrap();
    }
    if !ring.is_one(&c) {
        let r = pth_root(k, &c);
        let p = k.characteristic() as usize;
        for (g, j) in squarefree_decomposition(k, &r) {
            out.push((g, j * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(k: &FiniteField, f: &Poly<FqElem>) -> Vec<(Poly<FqElem>, usize)> {
    let ring = PolyRing::new(k.clone());
    let x = ring.x();
    let q = k.order();
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = ring.rem(&x, &g).unwrap();
    let mut i = 1;
    while g.degree().unwrap_or(0) >= 2 * i {
        h = ring.pow_mod(&h, q, &g);
        let d = ring.gcd(&ring.sub(&h, &x), &g);
        if !ring.is_one(&d) {
            g = ring.div_exact(&g, &d).unwrap();
            h = ring.rem(&h, &g).unwrap();
            out.push((d, i));
        }
        i += 1;
    }
    if g.degree().unwrap_or(0) > 0 {
        let d = g.degree().unwrap();
        out.push((g, d));
    }
    out
}

/// Complete factorization into monic irreducibles with multiplicities, sorted by
/// degree then canonical coefficient order.
pub fn factor(k: &FiniteField, f: &Poly<FqElem>) -> Result<Vec<(Poly<FqElem>, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (sq, mult) in squarefree_decomposition(k, f) {
        for (part, d) in distinct_degree(k, &sq) {
            let mut pieces = Vec::new();
            split_equal_degree(k, &part, d, &mut pieces)?;
            out.extend(pieces.into_iter().map(|g| (g, mult)));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    // merge repeated factors coming from different squarefree layers
    let mut merged: Vec<(Poly<FqElem>, usize)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, mh)) if *h == g => *mh += m,
            _ => merged.push((g, m)),
        }
    }
    Ok(merged)
}

/// Smallest `m >= 1` such that a separable `f` splits over the degree-`m`
/// extension of `k`: the lcm of the degrees of its irreducible factors.
pub fn splitting_degree(k: &FiniteField, f: &Poly<FqElem>) -> Result<usize> {
    let ring = PolyRing::new(k.clone());
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    if deg <= 1 {
        return Ok(1);
    }
    let x = ring.x();
    let q = k.order();
    let x = ring.rem(&x, f)?;
    let mut h = x.clone();
    for m in 1..=(1usize << 16) {
        h = ring.pow_mod(&h, q, f);
        if h == x {
            return Ok(m);
        }
    }
    Err(Error::Internal("splitting degree search exhausted".into()))
}

/// Embeds `x` from `source` into `target`.
///
/// When `source` is a prefix of the tower of `target` the natural inclusion is
/// used. Otherwise each level generator is sent to the canonically smallest
/// root of its (already mapped) defining polynomial in `target`.
pub fn embed(x: &FqElem, source: &FiniteField, target: &FiniteField) -> Result<FqElem> {
    let not = || Error::NotEmbeddable {
        source_degree: source.degree(),
        target_degree: target.degree(),
    };
    if source.characteristic() != target.characteristic()
        || !target.degree().is_multiple_of(source.degree())
    {
        return Err(not());
    }
    if source.is_prefix_of(target) {
        return Ok(target.lift_from_prefix(x));
    }
    let images = generator_images(source, target)?.ok_or_else(not)?;
    Ok(map_with_images(
        source,
        target,
        &images,
        source.depth(),
        &x.0,
    ))
}

fn map_with_images(
    source: &FiniteField,
    target: &FiniteField,
    images: &[FqElem],
    depth: usize,
    x: &[u32],
) -> FqElem {
    if depth == 0 {
        return target.from_int(x[0] as i64);
    }
    let sub = source.desc.dims[depth - 1];
    let mut acc = target.zero();
    for c in x.chunks(sub).rev() {
        let m = map_with_images(source, target, images, depth - 1, c);
        acc = target.add(&target.mul(&acc, &images[depth - 1]), &m);
    }
    acc
}

fn generator_images(source: &FiniteField, target: &FiniteField) -> Result<Option<Vec<FqElem>>> {
    let ring = PolyRing::new(target.clone());
    let mut images: Vec<FqElem> = Vec::new();
    for (i, lvl) in source.desc.levels.iter().enumerate() {
        let mut coeffs: Vec<FqElem> = lvl
            .modulus
            .iter()
            .map(|c| map_with_images(source, target, &images, i, c))
            .collect();
        coeffs.push(target.one());
        let m = ring.from_coeffs(coeffs);
        match poly_roots(target, &m)?.into_iter().next() {
            Some(r) => images.push(r.value),
            None => return Ok(None),
        }
    }
    Ok(Some(images))
}
