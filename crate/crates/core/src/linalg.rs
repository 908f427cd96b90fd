//! Exact row reduction over any field.

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::finite_field::FiniteField;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let n = rows.len();
        let data: Vec<E> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), n * cols);
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<E>], rows: usize) -> Self {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for c in columns {
                data.push(c[i].clone());
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Solution set of `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution<E> {
    Solved {
        particular: Vec<E>,
        kernel: Vec<Vec<E>>,
        rank: usize,
    },
    /// `rank(A) < rank([A | b])`.
    Inconsistent { rank: usize, augmented_rank: usize },
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<K: CoeffField>(k: &K, m: &mut Matrix<K::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| !k.is_zero(m.get(i, c))) else {
            continue;
        };
        if pr != r {
            for j in 0..m.cols {
                m.data.swap(pr * m.cols + j, r * m.cols + j);
            }
        }
        let inv = k.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in c..m.cols {
            let v = k.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || k.is_zero(m.get(i, c)) {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in c..m.cols {
                let v = k.sub(m.get(i, j), &k.mul(&f, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<K: CoeffField>(k: &K, m: &Matrix<K::Elem>) -> usize {
    let mut m = m.clone();
    rref(k, &mut m).len()
}

/// Basis of the right kernel `{x : A x = 0}`.
pub fn kernel<K: CoeffField>(k: &K, a: &Matrix<K::Elem>) -> Vec<Vec<K::Elem>> {
    let mut m = a.clone();
    let pivots = rref(k, &mut m);
    kernel_from_rref(k, &m, &pivots)
}

fn kernel_from_rref<K: CoeffField>(
    k: &K,
    m: &Matrix<K::Elem>,
    pivots: &[usize],
) -> Vec<Vec<K::Elem>> {
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![k.zero(); m.cols];
            v[f] = k.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(m.get(r, f));
            }
            v
        })
        .collect()
}

/// Solves `A x = b` exactly, returning a particular solution and a kernel
/// basis, or a rank certificate when the system is inconsistent.
pub fn solve<K: CoeffField>(
    k: &K,
    a: &Matrix<K::Elem>,
    b: &[K::Elem],
) -> Result<LinearSolution<K::Elem>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has {}",
            a.rows,
            b.len()
        )));
    }
    let mut aug = Matrix::filled(a.rows, a.cols + 1, k.zero());
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, b[i].clone());
    }
    let pivots = rref(k, &mut aug);
    if pivots.last() == Some(&a.cols) {
        return Ok(LinearSolution::Inconsistent {
            rank: pivots.len() - 1,
            augmented_rank: pivots.len(),
        });
    }
    let mut particular = vec![k.zero(); a.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug.get(r, a.cols).clone();
    }
    // the kernel of A is read off the same echelon form, ignoring the last column
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![k.zero(); a.cols];
            v[f] = k.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(aug.get(r, f));
            }
            v
        })
        .collect();
    if !mat_vec(k, a, &particular)
        .iter()
        .zip(b)
        .all(|(x, y)| k.equal(x, y))
    {
        return Err(Error::Internal("particular solution fails A x = b".into()));
    }
    let sol = LinearSolution::Solved {
        particular,
        kernel,
        rank: pivots.len(),
    };
    Ok(sol)
}

pub fn mat_vec<K: CoeffField>(k: &K, a: &Matrix<K::Elem>, x: &[K::Elem]) -> Vec<K::Elem> {
    (0..a.rows)
        .map(|i| {
            a.row(i)
                .iter()
                .zip(x)
                .fold(k.zero(), |acc, (u, v)| k.add(&acc, &k.mul(u, v)))
        })
        .collect()
}

pub fn mat_mul<K: CoeffField>(k: &K, a: &Matrix<K::Elem>, b: &Matrix<K::Elem>) -> Matrix<K::Elem> {
    assert_eq!(a.cols, b.rows);
    let mut out = Matrix::filled(a.rows, b.cols, k.zero());
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = k.zero();
            for t in 0..a.cols {
                acc = k.add(&acc, &k.mul(a.get(i, t), b.get(t, j)));
            }
            out.set(i, j, acc);
        }
    }
    out
}

pub fn identity<K: CoeffField>(k: &K, n: usize) -> Matrix<K::Elem> {
    let mut m = Matrix::filled(n, n, k.zero());
    for i in 0..n {
        m.set(i, i, k.one());
    }
    m
}

pub fn determinant<K: CoeffField>(k: &K, a: &Matrix<K::Elem>) -> K::Elem {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut det = k.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !k.is_zero(m.get(i, c))) else {
            return k.zero();
        };
        if pr != c {
            for j in 0..n {
                m.data.swap(pr * n + j, c * n + j);
            }
            det = k.neg(&det);
        }
        let piv = m.get(c, c).clone();
        det = k.mul(&det, &piv);
        let inv = k.inv(&piv).expect("nonzero pivot");
        for i in c + 1..n {
            if k.is_zero(m.get(i, c)) {
                continue;
            }
            let f = k.mul(m.get(i, c), &inv);
            for j in c..n {
                let v = k.sub(m.get(i, j), &k.mul(&f, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    det
}

pub fn inverse<K: CoeffField>(k: &K, a: &Matrix<K::Elem>) -> Result<Matrix<K::Elem>> {
    let n = a.rows;
    let mut aug = Matrix::filled(n, 2 * n, k.zero());
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, n + i, k.one());
    }
    let pivots = rref(k, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    let mut out = Matrix::filled(n, n, k.zero());
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Ok(out)
}

/// Exact solve over a prime field `F_p`.
pub fn fp_linear_solve(
    fp: &FiniteField,
    a: &Matrix<u32>,
    b: &[u32],
) -> Result<LinearSolution<u32>> {
    if fp.depth() != 0 {
        return Err(Error::DimensionMismatch(
            "fp_linear_solve needs a prime field".into(),
        ));
    }
    let lift = |v: &u32| fp.from_int(*v as i64);
    let am = Matrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().map(lift).collect(),
    };
    let bm: Vec<_> = b.iter().map(lift).collect();
    let down = |v: Vec<crate::finite_field::FqElem>| -> Vec<u32> {
        v.into_iter().map(|e| e.coords()[0]).collect()
    };
    Ok(match solve(fp, &am, &bm)? {
        LinearSolution::Solved {
            particular,
            kernel,
            rank,
        } => LinearSolution::Solved {
            particular: down(particular),
            kernel: kernel.into_iter().map(down).collect(),
            rank,
        },
        LinearSolution::Inconsistent {
            rank,
            augmented_rank,
        } => LinearSolution::Inconsistent {
            rank,
            augmented_rank,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let a = Matrix::from_rows(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 3);
        match fp_linear_solve(&fp2(), &a, &[0, 0, 0]).unwrap() {
            LinearSolution::Solved { kernel, .. } => assert!(kernel.is_empty()),
            _ => panic!(),
        }
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let a = Matrix::filled(4, 4, 0u32);
        match fp_linear_solve(&fp2(), &a, &[0; 4]).unwrap() {
            LinearSolution::Solved { kernel, rank, .. } => {
                assert_eq!(kernel.len(), 4);
                assert_eq!(rank, 0);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn inconsistent_system_reports_ranks() {
        let a = Matrix::from_rows(vec![vec![1, 1], vec![1, 1]], 2);
        assert_eq!(
            fp_linear_solve(&fp2(), &a, &[0, 1]).unwrap(),
            LinearSolution::Inconsistent {
                rank: 1,
                augmented_rank: 2
            }
        );
    }

    fn span(kernel: &[Vec<u32>]) -> std::collections::BTreeSet<Vec<u32>> {
        let n = kernel.first().map_or(0, |v| v.len());
        let mut out = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << kernel.len()) {
            let mut v = vec![0u32; n];
            for (i, b) in kernel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x ^= y;
                    }
                }
            }
            out.insert(v);
        }
        out
    }

    #[test]
    fn random_6x6_kernels_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows: Vec<Vec<u32>> = (0..6)
                .map(|_| (0..6).map(|_| rng.gen_range(0..2)).collect())
                .collect();
            let a = Matrix::from_rows(rows.clone(), 6);
            let brute: std::collections::BTreeSet<Vec<u32>> = (0u32..64)
                .map(|m| (0..6).map(|i| m >> i & 1).collect::<Vec<u32>>())
                .filter(|x| {
                    rows.iter()
                        .all(|r| r.iter().zip(x).map(|(a, b)| a * b).sum::<u32>() % 2 == 0)
                })
                .collect();
            let LinearSolution::Solved { kernel, .. } =
                fp_linear_solve(&fp2(), &a, &[0; 6]).unwrap()
            else {
                panic!()
            };
            if kernel.is_empty() {
                assert_eq!(brute.len(), 1);
            } else {
                assert_eq!(span(&kernel), brute);
            }
        }
    }

    #[test]
    fn particular_solution_satisfies_system() {
        let f3 = FiniteField::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let rows: Vec<Vec<u32>> = (0..4)
                .map(|_| (0..5).map(|_| rng.gen_range(0..3)).collect())
                .collect();
            let x: Vec<u32> = (0..5).map(|_| rng.gen_range(0..3)).collect();
            let b: Vec<u32> = rows
                .iter()
                .map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum::<u32>() % 3)
                .collect();
            let a = Matrix::from_rows(rows.clone(), 5);
            let LinearSolution::Solved { particular, .. } = fp_linear_solve(&f3, &a, &b).unwrap()
            else {
                panic!("consistent by construction")
            };
            for (r, bi) in rows.iter().zip(&b) {
                assert_eq!(
                    r.iter().zip(&particular).map(|(a, b)| a * b).sum::<u32>() % 3,
                    *bi
                );
            }
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let k = FiniteField::of_order(4).unwrap();
        let g = k.generator();
        let a = Matrix::from_rows(vec![vec![k.one(), g.clone()], vec![g.clone(), k.one()]], 2);
        // det = 1 - g^2 = 1 + g + 1 = g  (g^2 = g + 1)
        assert_eq!(determinant(&k, &a), g);
        let inv = inverse(&k, &a).unwrap();
        assert_eq!(mat_mul(&k, &a, &inv), identity(&k, 2));
    }
}
