use std::fmt::Debug;

/// A coefficient field for twisted polynomials: ordinary field operations plus
/// the designated `q`-power endomorphism `x -> x^q`.
///
/// Implementations are lightweight handles (cheap to clone); elements are plain
/// values and all arithmetic goes through the handle.
pub trait CoeffField: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero (or, for approximate fields, zero to working precision).
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Cardinality of the fixed base field `F_q`.
    fn q(&self) -> u64;
    /// The `q`-power map.
    fn frob(&self, a: &Self::Elem) -> Self::Elem;
    /// Image of an integer under `Z -> F_p -> K`.
    fn from_int(&self, n: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.equal(a, &self.one())
    }

    fn frob_n(&self, a: &Self::Elem, n: usize) -> Self::Elem {
        let mut x = a.clone();
        for _ in 0..n {
            x = self.frob(&x);
        }
        x
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
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

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// Human-readable rendering of an element.
    fn display(&self, a: &Self::Elem) -> String;
}
