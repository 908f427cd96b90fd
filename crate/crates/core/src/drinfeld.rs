//! Drinfeld modules `phi: A -> K{tau}` over `A`-fields, reduction at places.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::finite_field::{FiniteField, FqElem};
use crate::function_field::{
    enumerate_primes, residue_at_infinity, residue_field, residue_map, valuation_at, Place,
    PrimeIdeal, RatFunc, RatFuncField,
};
use crate::poly::{Poly, PolyRing};
use crate::skew::{SkewPoly, SkewRing};

/// A coefficient field together with its structure map `gamma: A -> K`.
pub trait AField: CoeffField {
    /// The constant field `F_q` of `A`.
    fn base_fq(&self) -> FiniteField;
    /// Image of `c` in `F_q` under `F_q -> K`.
    fn scalar(&self, c: &FqElem) -> Self::Elem;
    fn gamma_t(&self) -> Self::Elem;
    /// `ker gamma`, or `None` in generic characteristic.
    fn a_characteristic(&self) -> Option<PrimeIdeal>;

    fn gamma(&self, a: &Poly<FqElem>) -> Self::Elem {
        let t = self.gamma_t();
        let mut acc = self.zero();
        for c in a.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, &t), &self.scalar(c));
        }
        acc
    }
}

impl AField for RatFuncField {
    fn base_fq(&self) -> FiniteField {
        self.fq().clone()
    }

    fn scalar(&self, c: &FqElem) -> RatFunc {
        self.constant(c)
    }

    fn gamma_t(&self) -> RatFunc {
        self.t()
    }

    fn a_characteristic(&self) -> Option<PrimeIdeal> {
        None
    }
}

/// A finite field `F_{q^s}` with `gamma(T) = t`, typically an extension of a
/// residue field `A/l`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAField {
    field: FiniteField,
    gamma_t: FqElem,
    characteristic: Option<PrimeIdeal>,
}

impl FiniteAField {
    /// `field` must have `F_q` as its base prefix; `characteristic` is not
    /// checked against `gamma_t`.
    pub fn new(field: FiniteField, gamma_t: FqElem, characteristic: Option<PrimeIdeal>) -> Self {
        FiniteAField {
            field,
            gamma_t,
            characteristic,
        }
    }

    /// `kappa = A/l` with `gamma(T) = T mod l`.
    pub fn residue(fq: &FiniteField, prime: &PrimeIdeal) -> Self {
        let kappa = residue_field(fq, prime);
        let t = kappa.generator();
        FiniteAField::new(kappa, t, Some(prime.clone()))
    }

    pub fn finite_field(&self) -> &FiniteField {
        &self.field
    }

    /// The degree-`s` extension with the same structure map.
    pub fn extension(&self, s: usize) -> Result<Self> {
        let big = self.field.extension(s, "u")?;
        let t = big.lift_from_prefix(&self.gamma_t);
        Ok(FiniteAField::new(big, t, self.characteristic.clone()))
    }

    pub fn lift(&self, x: &FqElem) -> FqElem {
        self.field.lift_from_prefix(x)
    }
}

impl CoeffField for FiniteAField {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        self.field.zero()
    }
    fn one(&self) -> FqElem {
        self.field.one()
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        self.field.is_zero(a)
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.field.add(a, b)
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        self.field.neg(a)
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.field.sub(a, b)
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.field.mul(a, b)
    }
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        self.field.inv(a)
    }
    fn q(&self) -> u64 {
        self.field.q()
    }
    fn frob(&self, a: &FqElem) -> FqElem {
        self.field.frob(a)
    }
    fn from_int(&self, n: i64) -> FqElem {
        self.field.from_int(n)
    }
    fn equal(&self, a: &FqElem, b: &FqElem) -> bool {
        a == b
    }
    fn display(&self, a: &FqElem) -> String {
        self.field.display(a)
    }
}

impl AField for FiniteAField {
    fn base_fq(&self) -> FiniteField {
        self.field.base_field()
    }

    fn scalar(&self, c: &FqElem) -> FqElem {
        self.field.lift_from_prefix(c)
    }

    fn gamma_t(&self) -> FqElem {
        self.gamma_t.clone()
    }

    fn a_characteristic(&self) -> Option<PrimeIdeal> {
        self.characteristic.clone()
    }
}

/// A Drinfeld module of rank `r`, determined by `phi_T`.
#[derive(Clone, Debug)]
pub struct DrinfeldModule<K: AField> {
    ring: SkewRing<K>,
    phi_t: SkewPoly<K::Elem>,
}

impl<K: AField> DrinfeldModule<K> {
    /// Checks `d(phi_T) = gamma(T)` and `deg_tau(phi_T) >= 1`.
    pub fn new(field: K, phi_t: SkewPoly<K::Elem>) -> Result<Self> {
        let ring = SkewRing::new(field);
        let r = phi_t.degree().unwrap_or(0);
        if r == 0 {
            return Err(Error::RankTooSmall { min: 1, got: 0 });
        }
        let k = ring.field();
        if !k.equal(&ring.derivative(&phi_t), &k.gamma_t()) {
            return Err(Error::InvalidModule(
                "constant term of phi_T must equal gamma(T)".into(),
            ));
        }
        Ok(DrinfeldModule { ring, phi_t })
    }

    pub fn field(&self) -> &K {
        self.ring.field()
    }

    pub fn ring(&self) -> &SkewRing<K> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.phi_t.degree().unwrap()
    }

    pub fn phi_t(&self) -> &SkewPoly<K::Elem> {
        &self.phi_t
    }

    /// `phi_a`, by Horner's rule in `K{tau}`.
    pub fn phi_a(&self, a: &Poly<FqElem>) -> SkewPoly<K::Elem> {
        let k = self.field();
        let mut acc = SkewPoly::zero();
        for c in a.coeffs().iter().rev() {
            acc = self.ring.mul(&acc, &self.phi_t);
            acc = self.ring.add(&acc, &self.ring.constant(k.scalar(c)));
        }
        acc
    }

    pub fn display(&self) -> String {
        self.ring.display(&self.phi_t)
    }

    /// `H = ht_tau(phi_f) / deg f` for `(f) = char_A(K)`.
    pub fn height(&self) -> Result<usize> {
        let p = self
            .field()
            .a_characteristic()
            .ok_or(Error::GenericCharacteristic)?;
        let (h, _) = self.ring.height_and_degree(&self.phi_a(p.generator()))?;
        if h % p.degree() != 0 {
            return Err(Error::Internal(format!(
                "height {h} of phi_p is not a multiple of deg p = {}",
                p.degree()
            )));
        }
        Ok(h / p.degree())
    }
}

impl DrinfeldModule<FiniteAField> {
    /// The same module over the degree-`s` extension of its field.
    pub fn base_change(&self, s: usize) -> Result<Self> {
        let big = self.field().extension(s)?;
        let coeffs = self.phi_t.coeffs().iter().map(|c| big.lift(c)).collect();
        let ring = SkewRing::new(big);
        let phi_t = ring.from_coeffs(coeffs);
        Ok(DrinfeldModule { ring, phi_t })
    }
}

/// `phi_T = T + tau + f(T) tau^r` over `F_q(T)`.
pub fn trinomial_module(
    fq: &FiniteField,
    r: usize,
    p: &PrimeIdeal,
) -> Result<DrinfeldModule<RatFuncField>> {
    if r < 2 {
        return Err(Error::RankTooSmall { min: 2, got: r });
    }
    let field = RatFuncField::new(fq.clone());
    let mut coeffs = vec![field.zero(); r + 1];
    coeffs[0] = field.t();
    coeffs[1] = field.one();
    coeffs[r] = field.from_poly(p.generator());
    let phi_t = SkewRing::new(field.clone()).from_coeffs(coeffs);
    DrinfeldModule::new(field, phi_t)
}

/// The Carlitz module `C_T = t + tau` over `kappa`.
pub fn carlitz(kappa: &FiniteAField) -> DrinfeldModule<FiniteAField> {
    let phi_t = SkewRing::new(kappa.clone()).from_coeffs(vec![kappa.gamma_t(), kappa.one()]);
    DrinfeldModule::new(kappa.clone(), phi_t).expect("t + tau is a rank-1 module")
}

fn reduce_coeffs(
    module: &DrinfeldModule<RatFuncField>,
    coeffs: &[RatFunc],
    prime: &PrimeIdeal,
) -> Result<DrinfeldModule<FiniteAField>> {
    let field = module.field();
    let kappa = FiniteAField::residue(field.fq(), prime);
    let mut out = Vec::with_capacity(coeffs.len());
    for (index, c) in coeffs.iter().enumerate() {
        let r = residue_map(field, kappa.finite_field(), c, prime)
            .map_err(|_| Error::NeedsIntegralModel { index })?;
        out.push(r);
    }
    let phi_t = SkewRing::new(kappa.clone()).from_coeffs(out);
    if phi_t.degree().unwrap_or(0) == 0 {
        return Err(Error::DegenerateReduction);
    }
    DrinfeldModule::new(kappa, phi_t)
}

/// Coefficient-wise reduction of `phi_T` modulo `l`.
pub fn reduce_at(
    module: &DrinfeldModule<RatFuncField>,
    prime: &PrimeIdeal,
) -> Result<DrinfeldModule<FiniteAField>> {
    reduce_coeffs(module, module.phi_t().coeffs(), prime)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionClass {
    Good,
    Stable { reduction_rank: usize },
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub place: Place,
    pub class: ReductionClass,
    /// `n` in the scaling `u = pi^n` of the chosen integral model.
    pub scaling_exponent: Option<i64>,
    /// The reduced module at a finite place.
    pub reduced: Option<DrinfeldModule<FiniteAField>>,
}

/// `a_i -> u^(q^i - 1) a_i` for `u = pi^n`, i.e. the conjugate `u^-1 phi u`.
pub fn scale_coefficients(
    field: &RatFuncField,
    coeffs: &[RatFunc],
    uniformizer: &RatFunc,
    n: i64,
) -> Vec<RatFunc> {
    let u = if n >= 0 {
        field.pow(uniformizer, n as u128)
    } else {
        field.pow(
            &field.inv(uniformizer).expect("uniformizer nonzero"),
            (-n) as u128,
        )
    };
    let q = field.q() as u128;
    coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| field.mul(a, &field.pow(&u, q.pow(i as u32) - 1)))
        .collect()
}

fn scaling_order(bound: u32) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound as i64).flat_map(|n| [n, -n]))
}

/// Searches integral models `u^-1 phi u` with `u = pi^n`, `|n| <= search_bound`,
/// and keeps the one with the largest reduction rank (first found on ties).
pub fn reduction_type(
    module: &DrinfeldModule<RatFuncField>,
    place: &Place,
    search_bound: u32,
) -> ReductionReport {
    let field = module.field();
    let uniformizer = match place {
        Place::Finite(p) => field.from_poly(p.generator()),
        Place::Infinity => field.inv(&field.t()).unwrap(),
    };
    let r = module.rank();
    let mut best: Option<(usize, i64, Option<DrinfeldModule<FiniteAField>>)> = None;
    for n in scaling_order(search_bound) {
        let coeffs = scale_coefficients(field, module.phi_t().coeffs(), &uniformizer, n);
        let integral = coeffs
            .iter()
            .all(|c| c.is_zero() || valuation_at(field, c, place).unwrap() >= 0);
        if !integral {
            continue;
        }
        let (rank, reduced) = match place {
            Place::Finite(p) => match reduce_coeffs(module, &coeffs, p) {
                Ok(m) => (m.rank(), Some(m)),
                Err(_) => continue,
            },
            Place::Infinity => {
                let res: Vec<FqElem> = coeffs
                    .iter()
                    .map(|c| residue_at_infinity(field, c).unwrap())
                    .collect();
                let rank = res
                    .iter()
                    .rposition(|c| !field.fq().is_zero(c))
                    .unwrap_or(0);
                if rank == 0 {
                    continue;
                }
                (rank, None)
            }
        };
        if best.as_ref().is_none_or(|(b, _, _)| rank > *b) {
            best = Some((rank, n, reduced));
        }
        if rank == r {
            break;
        }
    }
    match best {
        None => ReductionReport {
            place: place.clone(),
            class: ReductionClass::Undetermined,
            scaling_exponent: None,
            reduced: None,
        },
        Some((rank, n, reduced)) => ReductionReport {
            place: place.clone(),
            class: if rank == r {
                ReductionClass::Good
            } else {
                ReductionClass::Stable {
                    reduction_rank: rank,
                }
            },
            scaling_exponent: Some(n),
            reduced,
        },
    }
}

/// [`reduction_type`] at every prime of degree `<= max_degree`, in prime order.
pub fn reduction_sweep(
    module: &DrinfeldModule<RatFuncField>,
    max_degree: usize,
    search_bound: u32,
) -> Result<Vec<ReductionReport>> {
    let primes = enumerate_primes(module.field().fq(), max_degree)?;
    Ok(primes
        .into_par_iter()
        .map(|l| reduction_type(module, &Place::Finite(l), search_bound))
        .collect())
}

/// `H` of a module over a finite `A`-field of nonzero characteristic.
pub fn height_of_reduction(module: &DrinfeldModule<FiniteAField>) -> Result<usize> {
    module.height()
}

/// Image of a polynomial over `F_q` in `A`, as a helper for callers holding
/// plain integer coefficient lists.
pub fn poly_a(fq: &FiniteField, coeffs: &[i64]) -> Poly<FqElem> {
    let ring = PolyRing::new(fq.clone());
    ring.from_coeffs(coeffs.iter().map(|&c| fq.from_int(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fq(q: u64) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    fn prime(q: u64, c: &[i64]) -> PrimeIdeal {
        PrimeIdeal::new(&fq(q), &poly_a(&fq(q), c)).unwrap()
    }

    #[test]
    fn trinomial_module_shape() {
        let m = trinomial_module(&fq(2), 2, &prime(2, &[0, 1])).unwrap();
        assert_eq!(m.display(), "T + t + T*t^2");
        let m = trinomial_module(&fq(3), 3, &prime(3, &[-1, 1])).unwrap();
        assert_eq!(m.display(), "T + t + (T+2)*t^3");
        assert_eq!(m.rank(), 3);
        assert_eq!(m.ring().derivative(m.phi_t()), m.field().t());
        assert_eq!(
            trinomial_module(&fq(2), 1, &prime(2, &[0, 1])).err(),
            Some(Error::RankTooSmall { min: 2, got: 1 })
        );
    }

    #[test]
    fn phi_of_small_elements() {
        let k = fq(2);
        let m = trinomial_module(&k, 2, &prime(2, &[0, 1])).unwrap();
        assert_eq!(&m.phi_a(&poly_a(&k, &[0, 1])), m.phi_t());
        assert_eq!(m.phi_a(&poly_a(&k, &[1])), m.ring().one());
        let sq = m.ring().mul(m.phi_t(), m.phi_t());
        assert_eq!(m.phi_a(&poly_a(&k, &[0, 0, 1])), sq);
    }

    #[test]
    fn carlitz_examples() {
        let k = fq(2);
        let c = carlitz(&FiniteAField::residue(&k, &prime(2, &[0, 1])));
        assert_eq!(c.display(), "t");
        let c = carlitz(&FiniteAField::residue(&k, &prime(2, &[1, 1])));
        assert_eq!(c.display(), "1 + t");
        assert_eq!(c.height().unwrap(), 1);
        let k3 = fq(3);
        let c = carlitz(&FiniteAField::residue(&k3, &prime(3, &[1, 0, 1])));
        assert_eq!(c.rank(), 1);
        assert_eq!(c.height().unwrap(), 1);
    }

    #[test]
    fn reduction_examples() {
        let k = fq(2);
        let p = prime(2, &[0, 1]);
        let m = trinomial_module(&k, 2, &p).unwrap();
        let l = prime(2, &[1, 1]);
        let red = reduce_at(&m, &l).unwrap();
        assert_eq!(red.display(), "1 + t + t^2");
        let at_p = reduce_at(&m, &p).unwrap();
        let c = carlitz(&FiniteAField::residue(&k, &p));
        assert_eq!(at_p.phi_t(), c.phi_t());
        assert_eq!(height_of_reduction(&at_p).unwrap(), 1);

        let rep = reduction_type(&m, &Place::Finite(l.clone()), 2);
        assert_eq!(rep.class, ReductionClass::Good);
        assert_eq!(rep.scaling_exponent, Some(0));
        let rep = reduction_type(&m, &Place::Finite(p.clone()), 2);
        assert_eq!(rep.class, ReductionClass::Stable { reduction_rank: 1 });
        assert_eq!(rep.scaling_exponent, Some(0));
        let rep = reduction_type(&m, &Place::Infinity, 2);
        assert_eq!(rep.class, ReductionClass::Undetermined);
    }

    #[test]
    fn scaling_finds_good_model() {
        // phi_T = T + pi tau with pi = T + 1 over F_2: n = -1 gives T + tau
        let k = fq(2);
        let field = RatFuncField::new(k.clone());
        let pi = prime(2, &[1, 1]);
        let pif = field.from_poly(pi.generator());
        let ring = SkewRing::new(field.clone());
        let m = DrinfeldModule::new(
            field.clone(),
            ring.from_coeffs(vec![field.t(), pif.clone()]),
        )
        .unwrap();
        let rep = reduction_type(&m, &Place::Finite(pi.clone()), 1);
        assert_eq!(rep.class, ReductionClass::Good);
        assert_eq!(rep.scaling_exponent, Some(-1));
        assert_eq!(rep.reduced.unwrap().display(), "1 + t");
        // the n = 0 and n = 1 models are integral but reduce to rank 0
        for n in [0, 1] {
            let c = scale_coefficients(&field, m.phi_t().coeffs(), &pif, n);
            assert!(reduce_coeffs(&m, &c, &pi).is_err());
        }
    }

    #[test]
    fn scaling_matches_conjugation() {
        let k = fq(3);
        let p = prime(3, &[-1, 1]);
        let m = trinomial_module(&k, 2, &p).unwrap();
        let field = m.field();
        let ring = m.ring();
        let pi = field.from_poly(p.generator());
        for n in [-2i64, -1, 1, 2] {
            let u = if n > 0 {
                field.pow(&pi, n as u128)
            } else {
                field.pow(&field.inv(&pi).unwrap(), (-n) as u128)
            };
            let conj = ring.mul(
                &ring.mul(&ring.constant(field.inv(&u).unwrap()), m.phi_t()),
                &ring.constant(u),
            );
            let scaled = ring.from_coeffs(scale_coefficients(field, m.phi_t().coeffs(), &pi, n));
            assert_eq!(conj, scaled);
        }
    }

    #[test]
    fn height_two_toy() {
        // phi_T = t + tau^2 over A/(T - t) with t = 1, q = 2
        let k = fq(2);
        let l = prime(2, &[1, 1]);
        let kappa = FiniteAField::residue(&k, &l);
        let ring = SkewRing::new(kappa.clone());
        let m = DrinfeldModule::new(
            kappa.clone(),
            ring.from_coeffs(vec![kappa.gamma_t(), kappa.zero(), kappa.one()]),
        )
        .unwrap();
        assert_eq!(m.height().unwrap(), 2);
        let g = trinomial_module(&k, 2, &l).unwrap();
        assert_eq!(g.height(), Err(Error::GenericCharacteristic));
    }

    fn arb_a(q: i64, d: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(0..q, 0..=d + 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn homomorphism_laws(a in arb_a(3, 3), b in arb_a(3, 3)) {
            let k = fq(3);
            let m = trinomial_module(&k, 2, &prime(3, &[0, 1])).unwrap();
            let r = PolyRing::new(k.clone());
            let (pa, pb) = (poly_a(&k, &a), poly_a(&k, &b));
            let s = m.ring();
            prop_assert_eq!(m.phi_a(&r.add(&pa, &pb)), s.add(&m.phi_a(&pa), &m.phi_a(&pb)));
            prop_assert_eq!(m.phi_a(&r.mul(&pa, &pb)), s.mul(&m.phi_a(&pa), &m.phi_a(&pb)));
            if let Some(d) = pa.degree() {
                let f = m.phi_a(&pa);
                prop_assert_eq!(f.degree(), Some(2 * d));
                prop_assert_eq!(s.derivative(&f), m.field().from_poly(&pa));
            }
        }

        #[test]
        fn carlitz_degree_law(a in arb_a(2, 5)) {
            let k = fq(2);
            let c = carlitz(&FiniteAField::residue(&k, &prime(2, &[1, 1, 1])));
            let pa = poly_a(&k, &a);
            prop_assert_eq!(c.phi_a(&pa).degree(), pa.degree());
        }
    }
}
