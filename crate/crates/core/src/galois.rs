//! Mod-`p` image evidence from Frobenius matrices, and the inertia counts at `p`.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::drinfeld::{reduce_at, DrinfeldModule};
use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::finite_field::{FiniteField, FqElem};
use crate::function_field::{display_poly_compact, enumerate_primes, PrimeIdeal, RatFuncField};
use crate::laurent::{inertia_polygon_report, NewtonPolygon};
use crate::linalg::{identity, mat_mul, Matrix};
use crate::torsion::{frobenius_matrix, torsion_points, verify_module_structure, FrobMatrix};

/// `|GL_r(F_Q)| = prod_{i<r} (Q^r - Q^i)`.
pub fn gl_order(r: u32, q: u128) -> u128 {
    let qr = q.pow(r);
    (0..r).map(|i| qr - q.pow(i)).product()
}

fn frobenius_at(
    module: &DrinfeldModule<RatFuncField>,
    p: &PrimeIdeal,
    l: &PrimeIdeal,
) -> Result<FrobMatrix> {
    let label = display_poly_compact(module.field().fq(), l.generator(), "T");
    if l == p {
        return Err(Error::BadPrime(label, "equals p".into()));
    }
    let reduced = reduce_at(module, l)?;
    if reduced.rank() != module.rank() {
        return Err(Error::BadPrime(label, "bad reduction".into()));
    }
    let t = torsion_points(&reduced, p.generator())?;
    let cert = verify_module_structure(&t)?;
    frobenius_matrix(&t, &cert.basis, p)
}

/// Frobenius at each good prime `l` acting on `phi[p]` mod `l`.
///
/// Each matrix is taken in the greedy basis of its own torsion module.
pub fn frobenius_generators(
    module: &DrinfeldModule<RatFuncField>,
    p: &PrimeIdeal,
    primes: &[PrimeIdeal],
) -> Result<Vec<FrobMatrix>> {
    primes
        .par_iter()
        .map(|l| frobenius_at(module, p, l))
        .collect()
}

fn key(m: &Matrix<FqElem>) -> Vec<u32> {
    m.to_rows()
        .iter()
        .flatten()
        .flat_map(|x| x.coords().iter().copied())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Closure {
    /// The generated group, in discovery order starting with the identity.
    Group(Vec<Matrix<FqElem>>),
    CapExceeded {
        partial: usize,
    },
}

impl Closure {
    pub fn order(&self) -> Option<u128> {
        match self {
            Closure::Group(g) => Some(g.len() as u128),
            Closure::CapExceeded { .. } => None,
        }
    }
}

/// Breadth-first closure of `mats` under multiplication.
pub fn group_closure(
    k: &FiniteField,
    mats: &[Matrix<FqElem>],
    r: usize,
    cap: usize,
) -> Result<Closure> {
    for m in mats {
        if m.rows() != r || m.cols() != r {
            return Err(Error::DimensionMismatch(format!(
                "expected {r}x{r}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if k.is_zero(&crate::linalg::determinant(k, m)) {
            return Err(Error::Singular);
        }
    }
    let id = identity(k, r);
    let mut seen = HashSet::new();
    seen.insert(key(&id));
    let mut elements = vec![id];
    let mut frontier = 0;
    while frontier < elements.len() {
        let x = elements[frontier].clone();
        frontier += 1;
        for g in mats {
            let y = mat_mul(k, &x, g);
            if seen.insert(key(&y)) {
                if elements.len() >= cap {
                    return Ok(Closure::CapExceeded {
                        partial: elements.len(),
                    });
                }
                elements.push(y);
            }
        }
    }
    Ok(Closure::Group(elements))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobEntry {
    pub prime: String,
    pub prime_degree: usize,
    pub matrix: Vec<Vec<String>>,
    pub charpoly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageEvidence {
    pub prime: String,
    pub rank: usize,
    pub scan_degree: usize,
    pub frobenius: Vec<FrobEntry>,
    /// `None` when the cap was hit.
    pub closure_order: Option<u128>,
    pub cap_exceeded: bool,
    pub gl_order: u128,
    pub index: Option<u128>,
    /// Primes of the top scanned degree did not enlarge the closure.
    pub stable: bool,
    /// Primes whose torsion field is too large to build.
    pub skipped_primes: Vec<String>,
    pub level: &'static str,
}

impl ImageEvidence {
    pub fn order_divides_gl(&self) -> bool {
        self.closure_order
            .is_some_and(|n| self.gl_order.is_multiple_of(n))
    }
}

/// Frobenius matrices at all good primes of degree `<= scan_degree`, and the
/// group they generate in `GL_r(A/p)`.
pub fn image_evidence(
    module: &DrinfeldModule<RatFuncField>,
    p: &PrimeIdeal,
    scan_degree: usize,
    cap: usize,
) -> Result<ImageEvidence> {
    let fq = module.field().fq().clone();
    let primes: Vec<PrimeIdeal> = enumerate_primes(&fq, scan_degree)?
        .into_iter()
        .filter(|l| l != p)
        .collect();
    let results: Vec<Result<FrobMatrix>> = primes
        .par_iter()
        .map(|l| frobenius_at(module, p, l))
        .collect();
    let mut used = Vec::new();
    let mut mats = Vec::new();
    let mut skipped = Vec::new();
    for (l, res) in primes.into_iter().zip(results) {
        match res {
            Ok(m) => {
                used.push(l);
                mats.push(m);
            }
            Err(Error::OutOfScope(_)) => {
                skipped.push(display_poly_compact(&fq, l.generator(), "T"))
            }
            Err(e) => return Err(e),
        }
    }
    let primes = used;
    let r = module.rank();
    let frobenius = primes
        .iter()
        .zip(&mats)
        .map(|(l, m)| {
            let k = &m.coefficient_field;
            FrobEntry {
                prime: display_poly_compact(&fq, l.generator(), "T"),
                prime_degree: l.degree(),
                matrix: m
                    .entries
                    .to_rows()
                    .iter()
                    .map(|row| row.iter().map(|x| k.display(x)).collect())
                    .collect(),
                charpoly: display_poly_compact(k, &m.charpoly(), "x"),
            }
        })
        .collect();
    let k = mats
        .first()
        .map(|m| m.coefficient_field.clone())
        .unwrap_or_else(|| crate::function_field::residue_field(&fq, p));
    let entries: Vec<Matrix<FqElem>> = mats.iter().map(|m| m.entries.clone()).collect();
    let full = group_closure(&k, &entries, r, cap)?;
    let lower: Vec<Matrix<FqElem>> = primes
        .iter()
        .zip(&entries)
        .filter(|(l, _)| l.degree() < scan_degree)
        .map(|(_, m)| m.clone())
        .collect();
    let partial = group_closure(&k, &lower, r, cap)?;
    let gl = gl_order(r as u32, k.order());
    let closure_order = full.order();
    Ok(ImageEvidence {
        prime: display_poly_compact(&fq, p.generator(), "T"),
        rank: r,
        scan_degree,
        frobenius,
        closure_order,
        cap_exceeded: closure_order.is_none(),
        gl_order: gl,
        index: closure_order
            .filter(|n| gl.is_multiple_of(*n))
            .map(|n| gl / n),
        stable: closure_order.is_some() && partial.order() == closure_order,
        skipped_primes: skipped,
        level: "mod p only",
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InertiaReport {
    pub prime: String,
    pub height: usize,
    /// `|phi^0[p]|`: points of positive valuation, with zero.
    pub connected_count: u128,
    /// `|phi[p] / phi^0[p]|`.
    pub etale_count: u128,
    /// `|phi-bar[p]|` for the reduced module itself, of rank below `r`.
    pub reduction_torsion_count: u128,
    pub expected_total: u128,
    pub polygon: NewtonPolygon,
    pub positive_slope_denominators: Vec<i64>,
    pub product_law: bool,
    pub connected_matches_height: bool,
    pub etale_matches_height: bool,
    /// With `Q = |A/p| > 2`: whether the first slope has denominator `Q - 1`.
    pub ramification_witness: Option<bool>,
}

impl InertiaReport {
    pub fn passed(&self) -> bool {
        self.product_law
            && self.connected_matches_height
            && self.etale_matches_height
            && self.ramification_witness != Some(false)
    }
}

/// Counts `phi^0[p]` from the Newton polygon of `phi_{f_p}` at `p`; the
/// quotient is counted as the cosets of `phi^0[p]` in `phi[p]`.
pub fn inertia_report(
    module: &DrinfeldModule<RatFuncField>,
    p: &PrimeIdeal,
) -> Result<InertiaReport> {
    let fq = module.field().fq().clone();
    let q = fq.order();
    let poly = inertia_polygon_report(module, p)?;
    let reduced = reduce_at(module, p)?;
    let reduction_torsion_count = torsion_points(&reduced, p.generator())?.cardinality();
    let d = p.degree() as u32;
    let r = module.rank() as u32;
    let h = poly.height as u32;
    let connected = poly.small_root_count as u128;
    let expected_total = q.pow(r * d);
    let found_total = connected + poly.remaining_root_count as u128;
    let etale = if found_total.is_multiple_of(connected) {
        found_total / connected
    } else {
        0
    };
    let big_q = q.pow(d);
    let ramification_witness = (big_q > 2)
        .then(|| poly.positive_slope_denominators.first() == Some(&((big_q - 1) as i64)));
    Ok(InertiaReport {
        prime: display_poly_compact(&fq, p.generator(), "T"),
        height: poly.height,
        connected_count: connected,
        etale_count: etale,
        reduction_torsion_count,
        expected_total,
        polygon: poly.polygon,
        positive_slope_denominators: poly.positive_slope_denominators,
        product_law: found_total == expected_total && connected * etale == expected_total,
        connected_matches_height: connected == q.pow(h * d),
        etale_matches_height: r >= h && etale == q.pow((r - h) * d),
        ramification_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinfeld::{poly_a, trinomial_module};
    use crate::field::CoeffField;

    fn fq(q: u64) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    fn prime(q: u64, c: &[i64]) -> PrimeIdeal {
        PrimeIdeal::new(&fq(q), &poly_a(&fq(q), c)).unwrap()
    }

    fn all_invertible(k: &FiniteField, r: usize) -> usize {
        let n = k.order() as usize;
        let total = n.pow((r * r) as u32);
        (0..total)
            .filter(|&idx| {
                let mut i = idx;
                let rows: Vec<Vec<FqElem>> = (0..r)
                    .map(|_| {
                        (0..r)
                            .map(|_| {
                                let x = k.from_index((i % n) as u128);
                                i /= n;
                                x
                            })
                            .collect()
                    })
                    .collect();
                !k.is_zero(&crate::linalg::determinant(k, &Matrix::from_rows(rows, r)))
            })
            .count()
    }

    #[test]
    fn gl_orders_match_enumeration() {
        assert_eq!(gl_order(1, 2), 1);
        for (r, q) in [(2usize, 2u64), (2, 3), (3, 2)] {
            let n = all_invertible(&fq(q), r);
            assert_eq!(gl_order(r as u32, q as u128), n as u128);
        }
        assert_eq!(gl_order(2, 3), 48);
    }

    #[test]
    fn closures() {
        let k = fq(2);
        let z = k.zero();
        let o = k.one();
        let id = identity(&k, 2);
        assert_eq!(
            group_closure(&k, std::slice::from_ref(&id), 2, 100)
                .unwrap()
                .order(),
            Some(1)
        );
        let c3 = Matrix::from_rows(
            vec![vec![z.clone(), o.clone()], vec![o.clone(), o.clone()]],
            2,
        );
        assert_eq!(
            group_closure(&k, std::slice::from_ref(&c3), 2, 100)
                .unwrap()
                .order(),
            Some(3)
        );
        let swap = Matrix::from_rows(
            vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]],
            2,
        );
        let g = group_closure(&k, &[c3.clone(), swap], 2, 100).unwrap();
        assert_eq!(g.order(), Some(6));
        if let Closure::Group(els) = &g {
            for a in els {
                for b in els {
                    assert!(els.contains(&mat_mul(&k, a, b)));
                }
            }
        }
        assert!(matches!(
            group_closure(&k, &[c3], 2, 1).unwrap(),
            Closure::CapExceeded { .. }
        ));
        let sing = Matrix::from_rows(vec![vec![o.clone(), o.clone()], vec![o.clone(), o]], 2);
        assert_eq!(group_closure(&k, &[sing], 2, 10), Err(Error::Singular));
        assert_eq!(group_closure(&k, &[], 2, 10).unwrap().order(), Some(1));
    }

    #[test]
    fn single_prime_gives_cyclic_group() {
        let k = fq(2);
        let p = prime(2, &[0, 1]);
        let phi = trinomial_module(&k, 2, &p).unwrap();
        let mats = frobenius_generators(&phi, &p, &[prime(2, &[1, 1])]).unwrap();
        assert_eq!(mats[0].charpoly(), poly_a(&k, &[1, 1, 1]));
        let g = group_closure(
            &mats[0].coefficient_field,
            &[mats[0].entries.clone()],
            2,
            100,
        )
        .unwrap();
        assert_eq!(g.order(), Some(3));
        assert!(frobenius_generators(&phi, &p, &[]).unwrap().is_empty());
        assert!(matches!(
            frobenius_generators(&phi, &p, std::slice::from_ref(&p)),
            Err(Error::BadPrime(..))
        ));
    }

    #[test]
    fn image_for_smallest_instance() {
        let k = fq(2);
        let p = prime(2, &[0, 1]);
        let phi = trinomial_module(&k, 2, &p).unwrap();
        let ev = image_evidence(&phi, &p, 4, 1_000_000).unwrap();
        assert_eq!(ev.gl_order, 6);
        assert!(ev.order_divides_gl());
        for f in &ev.frobenius {
            assert_eq!(f.matrix.len(), 2);
        }
    }

    #[test]
    fn inertia_small_instances() {
        let k = fq(2);
        let p = prime(2, &[0, 1]);
        let rep = inertia_report(&trinomial_module(&k, 2, &p).unwrap(), &p).unwrap();
        assert_eq!(
            (rep.height, rep.connected_count, rep.etale_count),
            (1, 2, 2)
        );
        assert!(rep.passed());
        assert_eq!(rep.ramification_witness, None);

        let k = fq(3);
        let p = prime(3, &[0, 1]);
        let rep = inertia_report(&trinomial_module(&k, 3, &p).unwrap(), &p).unwrap();
        assert_eq!(
            (rep.height, rep.connected_count, rep.etale_count),
            (1, 3, 9)
        );
        assert_eq!(rep.positive_slope_denominators, vec![2]);
        assert!(rep.passed());
    }
}
