//! Endomorphisms as solutions of `u phi_T = phi_T u`.

use serde::Serialize;

use crate::drinfeld::{AField, DrinfeldModule, FiniteAField};
use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::finite_field::{FiniteField, FqElem};
use crate::function_field::{RatFunc, RatFuncField};
use crate::linalg::{kernel, Matrix};
use crate::poly::{Poly, PolyRing};
use crate::skew::{SkewPoly, SkewRing};

/// Largest `F_p`-degree of the coefficient field tried while stabilizing.
const MAX_AMBIENT_DEGREE: usize = 96;

/// Solutions of degree at most `m` with coefficients in `F_{Q^s}`.
#[derive(Clone, Debug)]
pub struct EndoSpace {
    pub module: DrinfeldModule<FiniteAField>,
    pub degree_bound: usize,
    pub extension_degree: usize,
    /// `F_p`-basis of the solutions.
    pub basis: Vec<SkewPoly<FqElem>>,
}

impl EndoSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, u: &SkewPoly<FqElem>) -> bool {
        commutes(self.module.ring(), u, self.module.phi_t())
            && u.degree().is_none_or(|d| d <= self.degree_bound)
    }
}

fn commutator<K: CoeffField>(
    ring: &SkewRing<K>,
    u: &SkewPoly<K::Elem>,
    phi: &SkewPoly<K::Elem>,
) -> SkewPoly<K::Elem> {
    ring.sub(&ring.mul(u, phi), &ring.mul(phi, u))
}

fn commutes<K: CoeffField>(
    ring: &SkewRing<K>,
    u: &SkewPoly<K::Elem>,
    phi: &SkewPoly<K::Elem>,
) -> bool {
    commutator(ring, u, phi).is_zero()
}

fn fp_coords(fp: &FiniteField, x: &FqElem) -> Vec<FqElem> {
    x.coords().iter().map(|&c| fp.from_int(c as i64)).collect()
}

/// Solves `u phi_T = phi_T u` for `u = u_0 + ... + u_m tau^m`, `u_i` in the
/// degree-`s` extension of the module's field.
pub fn endomorphism_space(
    module: &DrinfeldModule<FiniteAField>,
    m: usize,
    s: usize,
) -> Result<EndoSpace> {
    if s == 0 {
        return Err(Error::OutOfScope(
            "extension degree must be at least 1".into(),
        ));
    }
    let big = module.base_change(s)?;
    let l = big.field().finite_field().clone();
    let fp = FiniteField::prime(l.characteristic())?;
    let ring = big.ring();
    let phi = big.phi_t();
    let n = l.degree();
    let out_len = m + big.rank() + 1;
    let mut columns = Vec::with_capacity((m + 1) * n);
    let mut unknowns = Vec::with_capacity((m + 1) * n);
    for i in 0..=m {
        for b in l.fp_basis() {
            let u = ring.monomial(b, i);
            let c = commutator(ring, &u, phi);
            let mut col = Vec::with_capacity(out_len * n);
            for k in 0..out_len {
                let x = c.coeff(k).cloned().unwrap_or_else(|| l.zero());
                col.extend(fp_coords(&fp, &x));
            }
            columns.push(col);
            unknowns.push(u);
        }
    }
    let system = Matrix::from_columns(&columns, out_len * n);
    let basis = kernel(&fp, &system)
        .iter()
        .map(|v| {
            let mut acc = SkewPoly::zero();
            for (c, u) in v.iter().zip(&unknowns) {
                let c = l.lift_from_prefix(c);
                acc = ring.add(&acc, &ring.scale_left(&c, u));
            }
            acc
        })
        .collect::<Vec<_>>();
    for u in &basis {
        if !commutes(ring, u, phi) {
            return Err(Error::Internal("kernel vector does not commute".into()));
        }
    }
    Ok(EndoSpace {
        module: big,
        degree_bound: m,
        extension_degree: s,
        basis,
    })
}

/// Doubles `s` from 1 until the dimension is unchanged across two doublings.
pub fn stable_endomorphism_space(
    module: &DrinfeldModule<FiniteAField>,
    m: usize,
) -> Result<EndoSpace> {
    let base = module.field().finite_field().degree();
    let mut s = 1;
    let mut space = endomorphism_space(module, m, s)?;
    let mut unchanged = 0;
    while unchanged < 2 {
        s *= 2;
        if base * s > MAX_AMBIENT_DEGREE {
            return Err(Error::CertificationFailed(format!(
                "endomorphism dimension did not stabilize below degree {MAX_AMBIENT_DEGREE}"
            )));
        }
        let next = endomorphism_space(module, m, s)?;
        if next.dimension() == space.dimension() {
            unchanged += 1;
        } else {
            unchanged = 0;
            space = next;
        }
    }
    Ok(space)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrCertificate {
    pub degree_bound: usize,
    pub extension_degree: usize,
    pub dimension: usize,
    pub expected_dimension: usize,
    /// Every basis element reduced to zero by subtracting `C_{c T^d}`.
    pub all_in_image: bool,
    pub certified: bool,
}

/// Writes `u` as `C_b` by repeatedly subtracting `C_{c T^d}` with `c` the
/// leading coefficient; `None` if some leading coefficient is not in `F_q`.
pub fn preimage_under_str(
    module: &DrinfeldModule<FiniteAField>,
    u: &SkewPoly<FqElem>,
) -> Option<Poly<FqElem>> {
    let ring = module.ring();
    let l = module.field().finite_field();
    let fq = module.field().base_fq();
    let a_ring = PolyRing::new(fq.clone());
    let r = module.rank();
    let mut rest = u.clone();
    let mut b = Poly::zero();
    while let Some(d) = rest.degree() {
        if d % r != 0 {
            return None;
        }
        let e = d / r;
        let unit = ring.pow(module.phi_t(), e as u64);
        let c = l.div(rest.leading()?, unit.leading()?)?;
        let c = l.restrict_to_prefix(&c, fq.degree())?;
        let term = a_ring.monomial(c, e);
        let before = d;
        rest = ring.sub(&rest, &module.phi_a(&term));
        b = a_ring.add(&b, &term);
        if rest.degree().is_some_and(|d| d >= before) {
            return None;
        }
    }
    Some(b)
}

/// For a rank-1 module over `A/l`: the solutions of degree `<= m` are exactly
/// `{C_b : deg b <= m}`.
pub fn verify_str_bijective(
    module: &DrinfeldModule<FiniteAField>,
    m: usize,
    s: Option<usize>,
) -> Result<StrCertificate> {
    if module.rank() != 1 {
        return Err(Error::OutOfScope(
            "str bijectivity is checked for rank 1 only".into(),
        ));
    }
    let space = match s {
        Some(s) => endomorphism_space(module, m, s)?,
        None => stable_endomorphism_space(module, m)?,
    };
    let fq = module.field().base_fq();
    let e = fq.degree();
    let expected = e * (m + 1);
    let all_in_image = space
        .basis
        .iter()
        .all(|u| preimage_under_str(&space.module, u).is_some());
    Ok(StrCertificate {
        degree_bound: m,
        extension_degree: space.extension_degree,
        dimension: space.dimension(),
        expected_dimension: expected,
        all_in_image,
        certified: all_in_image && space.dimension() == expected,
    })
}

/// Solutions `u` with polynomial coefficients over `F_q(T)`.
#[derive(Clone, Debug)]
pub struct RationalEndoSpace {
    pub degree_bound: usize,
    pub coefficient_degree_bound: usize,
    pub basis: Vec<SkewPoly<RatFunc>>,
    /// `F_p`-dimension of `{phi_b}` within the same bounds.
    pub str_dimension: usize,
    /// Every `phi_b` within the bounds is a solution.
    pub contains_str_image: bool,
}

impl RationalEndoSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The space is exactly the image of `A`.
    pub fn consistent_with_a(&self) -> bool {
        self.contains_str_image && self.dimension() == self.str_dimension
    }
}

fn poly_fp_coords(fp: &FiniteField, a: &Poly<FqElem>, len: usize, e: usize) -> Vec<FqElem> {
    let mut out = Vec::with_capacity(len * e);
    for i in 0..len {
        match a.coeff(i) {
            Some(c) => out.extend(fp_coords(fp, c)),
            None => out.extend(std::iter::repeat_n(fp.zero(), e)),
        }
    }
    out
}

/// Coefficients of degree `> bound` in the skew coefficients, flattened.
fn high_part(
    fp: &FiniteField,
    f: &SkewPoly<RatFunc>,
    rows: usize,
    lo: usize,
    hi: usize,
    e: usize,
) -> Vec<FqElem> {
    let mut out = Vec::new();
    for k in 0..rows {
        let a = f
            .coeff(k)
            .map(|c| c.num().clone())
            .unwrap_or_else(Poly::zero);
        for i in lo..hi {
            match a.coeff(i) {
                Some(c) => out.extend(fp_coords(fp, c)),
                None => out.extend(std::iter::repeat_n(fp.zero(), e)),
            }
        }
    }
    out
}

/// Bounded search: `u = sum u_i tau^i`, `u_i in F_q[T]` of degree `<= d`.
pub fn rational_endomorphism_search(
    module: &DrinfeldModule<RatFuncField>,
    m: usize,
    d: usize,
) -> Result<RationalEndoSpace> {
    let field = module.field();
    for (index, c) in module.phi_t().coeffs().iter().enumerate() {
        if !c.is_polynomial() {
            return Err(Error::NeedsIntegralModel { index });
        }
    }
    let fq = field.fq().clone();
    let fp = FiniteField::prime(fq.characteristic())?;
    let e = fq.degree();
    let ring = module.ring();
    let phi = module.phi_t();
    let a_ring = PolyRing::new(fq.clone());
    let mut unknowns = Vec::new();
    let mut images = Vec::new();
    for i in 0..=m {
        for j in 0..=d {
            for g in fq.fp_basis() {
                let u = ring.monomial(field.from_poly(&a_ring.monomial(g.clone(), j)), i);
                images.push(commutator(ring, &u, phi));
                unknowns.push(u);
            }
        }
    }
    let rows = m + module.rank() + 1;
    let len = images
        .iter()
        .flat_map(|c| c.coeffs().iter().map(|x| x.num().coeffs().len()))
        .max()
        .unwrap_or(0);
    let columns: Vec<Vec<FqElem>> = images
        .iter()
        .map(|c| {
            (0..rows)
                .flat_map(|k| {
                    let a = c
                        .coeff(k)
                        .map(|x| x.num().clone())
                        .unwrap_or_else(Poly::zero);
                    poly_fp_coords(&fp, &a, len, e)
                })
                .collect()
        })
        .collect();
    let system = Matrix::from_columns(&columns, rows * len * e);
    let basis: Vec<SkewPoly<RatFunc>> = kernel(&fp, &system)
        .iter()
        .map(|v| combine(ring, &fq, v, &unknowns))
        .collect();
    for u in &basis {
        if !commutes(ring, u, phi) {
            return Err(Error::Internal("kernel vector does not commute".into()));
        }
    }

    // str image inside the bounds: b with deg b <= m / r whose phi_b has
    // coefficient degrees <= d
    let r = module.rank();
    let max_b = m / r;
    let mut b_terms = Vec::new();
    let mut b_images = Vec::new();
    for j in 0..=max_b {
        for g in fq.fp_basis() {
            let b = a_ring.monomial(g.clone(), j);
            b_images.push(module.phi_a(&b));
            b_terms.push(b);
        }
    }
    let hi = b_images
        .iter()
        .flat_map(|c| c.coeffs().iter().map(|x| x.num().coeffs().len()))
        .max()
        .unwrap_or(0)
        .max(d + 1);
    let cols: Vec<Vec<FqElem>> = b_images
        .iter()
        .map(|f| high_part(&fp, f, rows, d + 1, hi, e))
        .collect();
    let str_kernel = kernel(&fp, &Matrix::from_columns(&cols, rows * (hi - d - 1) * e));
    let str_dimension = str_kernel.len();
    let contains_str_image = str_kernel.iter().all(|v| {
        let mut b = Poly::zero();
        for (c, t) in v.iter().zip(&b_terms) {
            let c = fq.lift_from_prefix(c);
            b = a_ring.add(&b, &a_ring.scale(t, &c));
        }
        commutes(ring, &module.phi_a(&b), phi)
            && in_span(&fp, &module.phi_a(&b), &basis, rows, len.max(d + 1), e)
    });
    Ok(RationalEndoSpace {
        degree_bound: m,
        coefficient_degree_bound: d,
        basis,
        str_dimension,
        contains_str_image,
    })
}

fn combine(
    ring: &SkewRing<RatFuncField>,
    fq: &FiniteField,
    v: &[FqElem],
    unknowns: &[SkewPoly<RatFunc>],
) -> SkewPoly<RatFunc> {
    let field = ring.field();
    let mut acc = SkewPoly::zero();
    for (c, u) in v.iter().zip(unknowns) {
        if c.coords()[0] == 0 {
            continue;
        }
        let c = field.constant(&fq.lift_from_prefix(c));
        acc = ring.add(&acc, &ring.scale_left(&c, u));
    }
    acc
}

fn in_span(
    fp: &FiniteField,
    f: &SkewPoly<RatFunc>,
    basis: &[SkewPoly<RatFunc>],
    rows: usize,
    len: usize,
    e: usize,
) -> bool {
    let flat = |g: &SkewPoly<RatFunc>| -> Vec<FqElem> {
        (0..rows)
            .flat_map(|k| {
                let a = g
                    .coeff(k)
                    .map(|x| x.num().clone())
                    .unwrap_or_else(Poly::zero);
                poly_fp_coords(fp, &a, len, e)
            })
            .collect()
    };
    let mut cols: Vec<Vec<FqElem>> = basis.iter().map(flat).collect();
    let before = crate::linalg::rank(fp, &Matrix::from_columns(&cols, rows * len * e));
    cols.push(flat(f));
    let after = crate::linalg::rank(fp, &Matrix::from_columns(&cols, rows * len * e));
    before == after
}
