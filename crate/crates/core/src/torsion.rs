//! Torsion modules `phi[a]` over finite `A`-fields and Frobenius matrices.

use crate::drinfeld::{AField, DrinfeldModule, FiniteAField};
use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::finite_field::{factor, is_irreducible, splitting_degree, FiniteField, FqElem};
use crate::function_field::{reduce_poly, residue_field, PrimeIdeal};
use crate::linalg::{determinant, kernel, rank, solve, LinearSolution, Matrix};
use crate::poly::{Poly, PolyRing};
use crate::skew::SkewRing;

/// Kernel enumeration limit for greedy basis selection.
const ENUMERATION_LIMIT: u128 = 1 << 20;

/// `phi[a]` inside the finite field `F_{q^s}` that contains all of it.
#[derive(Clone, Debug)]
pub struct TorsionModule {
    module: DrinfeldModule<FiniteAField>,
    a: Poly<FqElem>,
    /// Degree of the ambient field over the field of definition.
    extension_degree: usize,
    /// `F_p`-basis of the kernel.
    basis: Vec<FqElem>,
}

impl TorsionModule {
    /// The module over the ambient field.
    pub fn module(&self) -> &DrinfeldModule<FiniteAField> {
        &self.module
    }

    pub fn ambient(&self) -> &FiniteField {
        self.module.field().finite_field()
    }

    pub fn a(&self) -> &Poly<FqElem> {
        &self.a
    }

    pub fn extension_degree(&self) -> usize {
        self.extension_degree
    }

    pub fn fp_basis(&self) -> &[FqElem] {
        &self.basis
    }

    pub fn cardinality(&self) -> u128 {
        (self.ambient().characteristic() as u128).pow(self.basis.len() as u32)
    }

    pub fn contains(&self, x: &FqElem) -> bool {
        let phi_a = self.module.phi_a(&self.a);
        self.ambient()
            .is_zero(&self.module.ring().evaluate(&phi_a, x))
    }

    /// All points, in canonical field order.
    pub fn points(&self) -> Result<Vec<FqElem>> {
        let n = self.cardinality();
        if n > ENUMERATION_LIMIT {
            return Err(Error::FieldTooLarge(n, ENUMERATION_LIMIT));
        }
        let l = self.ambient();
        let p = l.characteristic() as u128;
        let mut out = Vec::with_capacity(n as usize);
        for idx in 0..n {
            let mut x = l.zero();
            let mut i = idx;
            for b in &self.basis {
                let c = l.from_int((i % p) as i64);
                x = l.add(&x, &l.mul(&c, b));
                i /= p;
            }
            out.push(x);
        }
        out.sort();
        Ok(out)
    }
}

/// The `F_p`-linear map `x -> f(x)` on `l`, as columns of coordinates.
fn fp_matrix_of(l: &FiniteField, images: &[FqElem]) -> Matrix<FqElem> {
    let fp = FiniteField::prime(l.characteristic()).unwrap();
    let cols: Vec<Vec<FqElem>> = images
        .iter()
        .map(|y| y.coords().iter().map(|&c| fp.from_int(c as i64)).collect())
        .collect();
    Matrix::from_columns(&cols, l.degree())
}

fn from_fp_vector(l: &FiniteField, v: &[FqElem]) -> FqElem {
    l.from_coords(v.iter().map(|c| c.coords()[0]).collect())
}

/// Computes `phi[a]` for a module over a finite `A`-field `kappa`.
///
/// The ambient field is `kappa` extended by the splitting degree of the
/// separable part `sum c_i^(1/q^h) x^(q^(i-h))` of `phi_a`.
pub fn torsion_points(
    module: &DrinfeldModule<FiniteAField>,
    a: &Poly<FqElem>,
) -> Result<TorsionModule> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let kappa = module.field().finite_field().clone();
    let ring = module.ring();
    let phi_a = module.phi_a(a);
    let (h, _) = ring.height_and_degree(&phi_a)?;
    let sep: Vec<FqElem> = phi_a.coeffs()[h..]
        .iter()
        .map(|c| kappa.frob_inverse(c, h))
        .collect();
    let sep = ring.to_qlinear(&ring.from_coeffs(sep));
    let s = splitting_degree(&kappa, &sep)?;
    let big = module.base_change(s)?;
    let l = big.field().finite_field().clone();
    let phi_big = big.phi_a(a);
    let images: Vec<FqElem> = l
        .fp_basis()
        .iter()
        .map(|b| big.ring().evaluate(&phi_big, b))
        .collect();
    let fp = FiniteField::prime(l.characteristic())?;
    let ker = kernel(&fp, &fp_matrix_of(&l, &images));
    let basis: Vec<FqElem> = ker.iter().map(|v| from_fp_vector(&l, v)).collect();
    let expected = sep.degree().unwrap() as u128;
    let found = (l.characteristic() as u128).pow(basis.len() as u32);
    if found != expected {
        return Err(Error::Internal(format!(
            "kernel has {found} points, separable degree is {expected}"
        )));
    }
    Ok(TorsionModule {
        module: big,
        a: a.clone(),
        extension_degree: s,
        basis,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureCertificate {
    pub cardinality: u128,
    /// `A/(a)`-dimension, for irreducible `a`.
    pub module_rank: Option<usize>,
    /// `A/(a)`-basis chosen greedily in field order, for irreducible `a`.
    pub basis: Vec<FqElem>,
    /// For `a = f^k`, `k >= 2`: `phi_f` maps `phi[f^k]` onto `phi[f^(k-1)]`.
    pub surjective_onto_previous: Option<bool>,
}

/// `F_p`-basis of `A/(f)` as polynomials `g^l T^i`, `l < e`, `i < deg f`.
fn a_mod_f_basis(fq: &FiniteField, f: &Poly<FqElem>) -> Vec<Poly<FqElem>> {
    let ring = PolyRing::new(fq.clone());
    let d = f.degree().unwrap();
    let mut out = Vec::new();
    for i in 0..d {
        for g in fq.fp_basis() {
            out.push(ring.monomial(g, i));
        }
    }
    out
}

/// Greedy `A/(f)`-basis of the points: the first point (in field order) outside
/// the span of earlier picks. Returns the picks and the `F_p`-spanning vectors.
fn greedy_basis(t: &TorsionModule, f: &Poly<FqElem>) -> Result<(Vec<FqElem>, Vec<Vec<FqElem>>)> {
    let m = &t.module;
    let l = t.ambient();
    let fq = m.field().base_fq();
    let fp = FiniteField::prime(l.characteristic())?;
    let actions: Vec<_> = a_mod_f_basis(&fq, f).iter().map(|c| m.phi_a(c)).collect();
    let mut picks = Vec::new();
    let mut span_cols: Vec<Vec<FqElem>> = Vec::new();
    let mut current_rank = 0;
    let coords =
        |x: &FqElem| -> Vec<FqElem> { x.coords().iter().map(|&c| fp.from_int(c as i64)).collect() };
    for x in t.points()? {
        if l.is_zero(&x) {
            continue;
        }
        let mut cols = span_cols.clone();
        cols.push(coords(&x));
        if rank(&fp, &Matrix::from_columns(&cols, l.degree())) == current_rank {
            continue;
        }
        for act in &actions {
            span_cols.push(coords(&m.ring().evaluate(act, &x)));
        }
        current_rank = rank(&fp, &Matrix::from_columns(&span_cols, l.degree()));
        picks.push(x);
        if current_rank == t.basis.len() {
            break;
        }
    }
    Ok((picks, span_cols))
}

/// Checks the `A/(a)`-module structure of `phi[a]`.
///
/// For irreducible `a` the kernel is given an `A/(a)`-basis and its size
/// `r` is certified; for `a = f^k` the cardinality `q^(r k deg f)` and the
/// surjection `phi_f: phi[f^k] -> phi[f^(k-1)]` are certified.
pub fn verify_module_structure(t: &TorsionModule) -> Result<StructureCertificate> {
    let m = &t.module;
    let fq = m.field().base_fq();
    let fq = fq.with_base_depth(fq.depth());
    let factors = factor(&fq, &t.a)?;
    if factors.len() != 1 {
        return Err(Error::OutOfScope(
            "structure of phi[a] for a that is not a prime power".into(),
        ));
    }
    let (f, k) = &factors[0];
    if let Some(ch) = m.field().a_characteristic() {
        if ch.generator() == f {
            return Err(Error::OutOfScope(
                "the characteristic divides a; phi[a] is not free".into(),
            ));
        }
    }
    let r = m.rank() as u32;
    let q = fq.order();
    let expected = q.pow(r * *k as u32 * f.degree().unwrap() as u32);
    if t.cardinality() != expected {
        return Err(Error::CertificationFailed(format!(
            "|phi[a]| = {}, expected {expected}",
            t.cardinality()
        )));
    }
    let l = t.ambient();
    let ring = m.ring();
    // stability under phi_T
    for b in &t.basis {
        if !t.contains(&ring.evaluate(m.phi_t(), b)) {
            return Err(Error::CertificationFailed(
                "phi[a] is not stable under phi_T".into(),
            ));
        }
    }
    if *k == 1 {
        let (picks, _) = greedy_basis(t, f)?;
        return Ok(StructureCertificate {
            cardinality: t.cardinality(),
            module_rank: Some(picks.len()),
            basis: picks,
            surjective_onto_previous: None,
        });
    }
    let fp = FiniteField::prime(l.characteristic())?;
    let phi_f = m.phi_a(f);
    let prev = PolyRing::new(fq.clone()).pow(f, *k as u64 - 1);
    let phi_prev = m.phi_a(&prev);
    let images: Vec<FqElem> = t.basis.iter().map(|b| ring.evaluate(&phi_f, b)).collect();
    let inside = images
        .iter()
        .all(|y| l.is_zero(&ring.evaluate(&phi_prev, y)));
    let cols: Vec<Vec<FqElem>> = images
        .iter()
        .map(|y| y.coords().iter().map(|&c| fp.from_int(c as i64)).collect())
        .collect();
    let image_rank = rank(&fp, &Matrix::from_columns(&cols, l.degree()));
    let prev_size = q.pow(r * (*k as u32 - 1) * f.degree().unwrap() as u32);
    let onto = inside && (l.characteristic() as u128).pow(image_rank as u32) == prev_size;
    Ok(StructureCertificate {
        cardinality: t.cardinality(),
        module_rank: None,
        basis: Vec::new(),
        surjective_onto_previous: Some(onto),
    })
}

/// The `|kappa_l|`-power Frobenius on `phi[f]` in a fixed `A/(f)`-basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobMatrix {
    /// The prime `l` whose Frobenius this is.
    pub prime: PrimeIdeal,
    /// `A/(f)` as a finite field.
    pub coefficient_field: FiniteField,
    pub entries: Matrix<FqElem>,
}

impl FrobMatrix {
    pub fn charpoly(&self) -> Poly<FqElem> {
        charpoly(&self.coefficient_field, &self.entries)
    }

    pub fn determinant(&self) -> FqElem {
        determinant(&self.coefficient_field, &self.entries)
    }

    pub fn is_invertible(&self) -> bool {
        !self.coefficient_field.is_zero(&self.determinant())
    }
}

/// Frobenius at the prime of definition of `t.module()` acting on `phi[f]`,
/// in the `A/(f)`-basis `basis`. Column `j` holds the coordinates of
/// `Frob(basis[j])`.
pub fn frobenius_matrix(t: &TorsionModule, basis: &[FqElem], f: &PrimeIdeal) -> Result<FrobMatrix> {
    let m = &t.module;
    let source = m
        .field()
        .a_characteristic()
        .ok_or(Error::GenericCharacteristic)?;
    if &source == f {
        return Err(Error::BadPrime(
            "p".into(),
            "Frobenius at the characteristic itself".into(),
        ));
    }
    let l = t.ambient();
    let fq = m.field().base_fq();
    let fq = fq.with_base_depth(fq.depth());
    let fp = FiniteField::prime(l.characteristic())?;
    let r = basis.len();
    let scalars = a_mod_f_basis(&fq, f.generator());
    let actions: Vec<_> = scalars.iter().map(|c| m.phi_a(c)).collect();
    // columns: phi_c(b_i) for each basis vector and each F_p-basis element c of A/(f)
    let mut cols: Vec<Vec<FqElem>> = Vec::new();
    for b in basis {
        for act in &actions {
            let y = m.ring().evaluate(act, b);
            cols.push(y.coords().iter().map(|&c| fp.from_int(c as i64)).collect());
        }
    }
    let system = Matrix::from_columns(&cols, l.degree());
    let kappa_p = residue_field(&fq, f);
    let steps = source.degree();
    let per = scalars.len();
    let mut entries = Matrix::filled(r, r, kappa_p.zero());
    for (j, b) in basis.iter().enumerate() {
        let fb = l.frobenius(b, steps);
        let rhs: Vec<FqElem> = fb.coords().iter().map(|&c| fp.from_int(c as i64)).collect();
        let x = match solve(&fp, &system, &rhs)? {
            LinearSolution::Solved {
                particular, kernel, ..
            } if kernel.is_empty() => particular,
            _ => return Err(Error::Singular),
        };
        for i in 0..r {
            // c_ij = sum x_{i,k} * scalars[k]
            let mut c = Poly::zero();
            let ring = PolyRing::new(fq.clone());
            for (kk, s) in scalars.iter().enumerate() {
                let coef = fq.from_int(x[i * per + kk].coords()[0] as i64);
                c = ring.add(&c, &ring.scale(s, &coef));
            }
            entries.set(i, j, reduce_poly(&kappa_p, &c, f));
        }
    }
    let fm = FrobMatrix {
        prime: source,
        coefficient_field: kappa_p,
        entries,
    };
    if !fm.is_invertible() {
        return Err(Error::Internal("Frobenius matrix is singular".into()));
    }
    Ok(fm)
}

/// `det(x I - M)` by cofactor expansion over `K[x]`.
pub fn charpoly<K: CoeffField>(k: &K, m: &Matrix<K::Elem>) -> Poly<K::Elem> {
    let ring = PolyRing::new(k.clone());
    let n = m.rows();
    let entries: Vec<Vec<Poly<K::Elem>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = ring.constant(k.neg(m.get(i, j)));
                    if i == j {
                        ring.add(&ring.x(), &c)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    poly_det(&ring, &entries)
}

fn poly_det<K: CoeffField>(ring: &PolyRing<K>, m: &[Vec<Poly<K::Elem>>]) -> Poly<K::Elem> {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly<K::Elem>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = ring.mul(&m[0][j], &poly_det(ring, &minor));
        acc = if j % 2 == 0 {
            ring.add(&acc, &term)
        } else {
            ring.sub(&acc, &term)
        };
    }
    acc
}

/// Whether `f` is irreducible over the constant field of `m`.
pub fn is_prime_element(m: &DrinfeldModule<FiniteAField>, f: &Poly<FqElem>) -> bool {
    let fq = m.field().base_fq();
    is_irreducible(&fq.with_base_depth(fq.depth()), f)
}

/// The ring used to evaluate `phi` on points of `t`.
pub fn point_ring(t: &TorsionModule) -> &SkewRing<FiniteAField> {
    t.module.ring()
}
