use std::collections::HashSet;

use num_rational::Ratio;
use proptest::prelude::*;

use drinfeld_core::drinfeld::{poly_a, reduce_at, trinomial_module, FiniteAField};
use drinfeld_core::endo::endomorphism_space;
use drinfeld_core::function_field::residue_map;
use drinfeld_core::galois::{gl_order, group_closure, Closure};
use drinfeld_core::laurent::newton_polygon;
use drinfeld_core::linalg::{determinant, inverse, mat_mul, Matrix};
use drinfeld_core::torsion::charpoly;
use drinfeld_core::{CoeffField, FiniteField, FqElem, PolyRing, PrimeIdeal};

fn fq(q: u64) -> FiniteField {
    FiniteField::of_order(q).unwrap()
}

fn matrix(k: &FiniteField, idx: &[u128], n: usize) -> Matrix<FqElem> {
    let rows = idx
        .chunks(n)
        .map(|row| row.iter().map(|&i| k.from_index(i % k.order())).collect())
        .collect();
    Matrix::from_rows(rows, n)
}

/// Lower hull vertices by brute force.
fn brute_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = Vec::new();
    for &(x, y) in points {
        match pts.iter_mut().find(|p| p.0 == x) {
            Some(p) => p.1 = p.1.min(y),
            None => pts.push((x, y)),
        }
    }
    pts.sort();
    let on_or_above_chord = |&(x, y): &(i64, i64)| {
        pts.iter().any(|&(x1, y1)| {
            pts.iter()
                .any(|&(x2, y2)| x1 < x && x < x2 && (y - y1) * (x2 - x1) >= (y2 - y1) * (x - x1))
        })
    };
    pts.iter()
        .copied()
        .filter(|p| !on_or_above_chord(p))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polygon_matches_brute_force_hull(
        pts in prop::collection::vec((0i64..40, -10i64..10), 2..9)
    ) {
        let xs: HashSet<i64> = pts.iter().map(|p| p.0).collect();
        prop_assume!(xs.len() >= 2);
        let input: Vec<_> = pts.iter().map(|&(x, y)| (x, Some(Ratio::from_integer(y)))).collect();
        let poly = newton_polygon(&input).unwrap();
        let got: Vec<(i64, i64)> = poly.vertices.iter().map(|(x, y)| (*x, y.to_integer())).collect();
        prop_assert_eq!(got, brute_hull(&pts));
        let slopes: Vec<_> = poly.segments.iter().map(|s| s.slope).collect();
        prop_assert!(slopes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn closure_is_a_group(idx in prop::collection::vec(0u128..9, 8), q in prop::sample::select(vec![2u64, 3])) {
        let k = fq(q);
        let mats: Vec<_> = idx.chunks(4).map(|c| matrix(&k, c, 2)).collect();
        prop_assume!(mats.iter().all(|m| !k.is_zero(&determinant(&k, m))));
        let Closure::Group(g) = group_closure(&k, &mats, 2, 100_000).unwrap() else {
            panic!("cap exceeded for GL_2");
        };
        let keys: HashSet<Vec<Vec<FqElem>>> = g.iter().map(|m| m.to_rows()).collect();
        prop_assert_eq!(keys.len(), g.len());
        prop_assert_eq!(gl_order(2, q as u128) % g.len() as u128, 0);
        for a in &g {
            for b in &mats {
                prop_assert!(keys.contains(&mat_mul(&k, a, b).to_rows()));
            }
            prop_assert!(keys.contains(&inverse(&k, a).unwrap().to_rows()));
        }
    }

    #[test]
    fn charpoly_is_conjugation_invariant(
        m in prop::collection::vec(0u128..25, 9),
        p in prop::collection::vec(0u128..25, 9),
    ) {
        let k = fq(5);
        let (m, p) = (matrix(&k, &m, 3), matrix(&k, &p, 3));
        prop_assume!(!k.is_zero(&determinant(&k, &p)));
        let conj = mat_mul(&k, &mat_mul(&k, &p, &m), &inverse(&k, &p).unwrap());
        let c = charpoly(&k, &m);
        prop_assert_eq!(&c, &charpoly(&k, &conj));
        // constant term is (-1)^n det
        prop_assert!(k.equal(&c.coeffs()[0], &k.neg(&determinant(&k, &m))));
    }

    #[test]
    fn reduction_commutes_with_phi(a in prop::collection::vec(-2i64..3, 0..5)) {
        let k = fq(3);
        let p = PrimeIdeal::new(&k, &poly_a(&k, &[0, 1])).unwrap();
        let global = trinomial_module(&k, 2, &p).unwrap();
        let l = PrimeIdeal::new(&k, &poly_a(&k, &[1, 0, 1])).unwrap();
        let red = reduce_at(&global, &l).unwrap();
        let a = poly_a(&k, &a);
        let direct = red.phi_a(&a);
        let kappa = red.field().finite_field();
        let via: Vec<FqElem> = global
            .phi_a(&a)
            .coeffs()
            .iter()
            .map(|c| residue_map(global.field(), kappa, c, &l).unwrap())
            .collect();
        prop_assert!(red.ring().equal(&direct, &red.ring().from_coeffs(via)));
    }
}

#[test]
fn endomorphism_dimension_grows_with_degree_bound() {
    for q in [2u64, 3] {
        let k = fq(q);
        let ring = PolyRing::new(k.clone());
        let l = PrimeIdeal::new(&k, &ring.from_coeffs(vec![k.one(), k.one()])).unwrap();
        let prime = PrimeIdeal::new(&k, &poly_a(&k, &[0, 1])).unwrap();
        let global = trinomial_module(&k, 2, &prime).unwrap();
        let red = reduce_at(&global, &l).unwrap();
        let dims: Vec<usize> = (0..5)
            .map(|m| endomorphism_space(&red, m, 2).unwrap().dimension())
            .collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]), "q={q}: {dims:?}");
        assert!(dims[0] >= 1);
    }
}

#[test]
fn carlitz_residue_field_matches_prime_degree() {
    let k = fq(2);
    for f in [&[1i64, 1, 1][..], &[1, 1, 0, 1]] {
        let p = PrimeIdeal::new(&k, &poly_a(&k, f)).unwrap();
        let kappa = FiniteAField::residue(&k, &p);
        assert_eq!(kappa.finite_field().order(), 1 << (f.len() - 1));
    }
}
