//! Exact computer algebra for Drinfeld modules over `F_q(T)`.
//!
//! The crate builds the rank-`r` module `phi_T = T + tau + f(T) tau^r` attached
//! to a prime `p = (f)` of `A = F_q[T]` and checks its arithmetic by exact
//! computation: reduction types, torsion module structure, endomorphisms,
//! Newton polygons and Hensel lifting in local fields, and Frobenius images.

pub mod drinfeld;
pub mod endo;
pub mod error;
pub mod field;
pub mod finite_field;
pub mod function_field;
pub mod galois;
pub mod laurent;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod skew;
pub mod torsion;

pub use error::{Error, Result};
pub use field::CoeffField;
pub use finite_field::{FiniteField, FqElem};
pub use function_field::{Place, PrimeIdeal, RatFunc, RatFuncField};
pub use poly::{Poly, PolyRing};
pub use skew::{SkewPoly, SkewRing};

/// Polynomials over a finite field.
pub type FqPoly = Poly<FqElem>;
/// Elements of `A = F_q[T]`.
pub type PolyA = Poly<FqElem>;
/// Twisted polynomials over `F = F_q(T)`.
pub type GlobalSkewPoly = SkewPoly<RatFunc>;
/// Twisted polynomials over a finite field.
pub type FiniteSkewPoly = SkewPoly<FqElem>;
/// Drinfeld modules over the global field `F_q(T)`.
pub type GlobalModule = drinfeld::DrinfeldModule<RatFuncField>;
/// Drinfeld modules over a finite `A`-field.
pub type FiniteModule = drinfeld::DrinfeldModule<drinfeld::FiniteAField>;
