use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{Matrix, QMatrix};
use crate::error::{Error, Result};
use crate::field::{denominator_lcm, Field};

/// Reduced row echelon form together with the pivot columns.
pub fn rref<F: Field>(field: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let (rows, cols) = m.shape();
    let mut a = m.row_vecs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = field.inv(&a[r][c]).expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let out = Matrix::from_rows(a, cols).expect("rectangular");
    (out, pivots)
}

pub fn rank_by_elimination<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    rref(field, m).1.len()
}

/// Fraction-free (Bareiss) rank over the rationals. Rows are first scaled
/// to integer vectors, which leaves the rank unchanged.
pub fn bareiss_rank(m: &QMatrix) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let l = denominator_lcm(row);
            row.iter()
                .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    field.rank(m)
}

/// Basis of the right kernel `{x : m x = 0}`; `cols - rank` vectors.
pub fn nullspace<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let cols = m.cols();
    let (r, pivots) = rref(field, m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(r.get(i, f));
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<E> {
    pub particular: Vec<E>,
    pub kernel: Vec<Vec<E>>,
}

/// Solves `coeffs · x = rhs`. Returns `None` when the system is inconsistent.
pub fn solve_linear_system<F: Field>(
    field: &F,
    coeffs: &Matrix<F::Elem>,
    rhs: &[F::Elem],
) -> Result<Option<Solution<F::Elem>>> {
    if rhs.len() != coeffs.rows() {
        return Err(Error::ShapeMismatch(format!(
            "rhs of length {} for {} equations",
            rhs.len(),
            coeffs.rows()
        )));
    }
    let cols = coeffs.cols();
    let aug = coeffs.hstack(&Matrix::from_columns(rhs.len(), &[rhs.to_vec()]))?;
    let (r, pivots) = rref(field, &aug);
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut particular = vec![field.zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        particular[p] = r.get(i, cols).clone();
    }
    Ok(Some(Solution {
        particular,
        kernel: nullspace(field, coeffs),
    }))
}

pub fn inverse<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let aug = m.hstack(&Matrix::identity(field, n)).ok()?;
    let (r, pivots) = rref(field, &aug);
    if pivots.len() < n || pivots.get(n.wrapping_sub(1)).is_some_and(|&c| c >= n) {
        return None;
    }
    let idx: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (n..2 * n).collect();
    Some(r.submatrix(&idx, &cols))
}

pub fn determinant<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Result<F::Elem> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut a = m.row_vecs();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !field.is_zero(&a[i][c])) else {
            return Ok(field.zero());
        };
        if p != c {
            a.swap(p, c);
            det = field.neg(&det);
        }
        det = field.mul(&det, &a[c][c]);
        let inv = field.inv(&a[c][c]).expect("pivot");
        for i in c + 1..n {
            if field.is_zero(&a[i][c]) {
                continue;
            }
            let f = field.mul(&a[i][c], &inv);
            let pivot_row = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row).skip(c) {
                *x = field.sub(x, &field.mul(&f, y));
            }
        }
    }
    Ok(det)
}

/// Row-reduced basis of the span of `vectors` (each of length `dim`).
pub fn span_basis<F: Field>(field: &F, dim: usize, vectors: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec(), dim).expect("vector length");
    let (r, pivots) = rref(field, &m);
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Basis of the intersection of two subspaces given by spanning vectors.
pub fn intersect<F: Field>(
    field: &F,
    dim: usize,
    u: &[Vec<F::Elem>],
    w: &[Vec<F::Elem>],
) -> Vec<Vec<F::Elem>> {
    let u = span_basis(field, dim, u);
    let w = span_basis(field, dim, w);
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    // Solve sum a_i u_i - sum b_j w_j = 0.
    let mut cols: Vec<Vec<F::Elem>> = u.clone();
    cols.extend(w.iter().map(|v| v.iter().map(|x| field.neg(x)).collect()));
    let m = Matrix::from_columns(dim, &cols);
    let ker = nullspace(field, &m);
    let vecs: Vec<Vec<F::Elem>> = ker
        .iter()
        .map(|k| {
            (0..dim)
                .map(|t| {
                    u.iter()
                        .zip(k)
                        .fold(field.zero(), |acc, (ui, ki)| field.add(&acc, &field.mul(&ui[t], ki)))
                })
                .collect()
        })
        .collect();
    span_basis(field, dim, &vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, PrimeField, Rationals};

    fn q(rows: usize, cols: usize, v: &[i64]) -> QMatrix {
        QMatrix::from_i64(rows, cols, v).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Rationals, &q(2, 2, &[0, 0, 0, 0])), 0);
        assert_eq!(rank(&Rationals, &q(2, 2, &[1, 0, 0, 1])), 2);
        assert_eq!(rank(&Rationals, &q(2, 2, &[1, 2, 2, 4])), 1);
        assert_eq!(rank(&Rationals, &q(0, 3, &[])), 0);
        let f = PrimeField::new(2).unwrap();
        let m = Matrix::new(2, 2, vec![1u64, 1, 1, 1]).unwrap();
        assert_eq!(rank(&f, &m), 1);
    }

    #[test]
    fn bareiss_matches_field_elimination() {
        let m = q(3, 4, &[2, 4, 6, 8, 1, 3, 5, 7, 3, 7, 11, 15]);
        assert_eq!(bareiss_rank(&m), rank_by_elimination(&Rationals, &m));
        assert_eq!(bareiss_rank(&m), 2);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&Rationals, &q(2, 2, &[1, 0, 0, 1])).is_empty());
        assert_eq!(nullspace(&Rationals, &q(3, 3, &[0; 9])).len(), 3);
        let k = nullspace(&Rationals, &q(1, 2, &[1, 1]));
        assert_eq!(k.len(), 1);
        // span{(1,-1)}
        assert_eq!(&k[0][0], &(-&k[0][1]));
    }

    #[test]
    fn solve_examples() {
        let id = q(2, 2, &[1, 0, 0, 1]);
        let s = solve_linear_system(&Rationals, &id, &[rat(3), rat(-2)])
            .unwrap()
            .unwrap();
        assert_eq!(s.particular, vec![rat(3), rat(-2)]);
        assert!(s.kernel.is_empty());

        let zero = q(1, 1, &[0]);
        assert!(solve_linear_system(&Rationals, &zero, &[rat(1)])
            .unwrap()
            .is_none());

        let under = q(1, 2, &[1, 1]);
        let s = solve_linear_system(&Rationals, &under, &[rat(2)])
            .unwrap()
            .unwrap();
        assert_eq!(s.particular, vec![rat(2), rat(0)]);
        assert_eq!(s.kernel, vec![vec![rat(-1), rat(1)]]);
    }

    #[test]
    fn inverse_and_determinant() {
        let m = q(2, 2, &[2, 1, 1, 1]);
        let inv = inverse(&Rationals, &m).unwrap();
        assert_eq!(m.mul(&Rationals, &inv).unwrap(), Matrix::identity(&Rationals, 2));
        assert_eq!(determinant(&Rationals, &m).unwrap(), rat(1));
        assert!(inverse(&Rationals, &q(2, 2, &[1, 2, 2, 4])).is_none());
    }

    #[test]
    fn subspace_intersection() {
        let u = vec![vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(1), rat(0)]];
        let w = vec![vec![rat(0), rat(1), rat(0)], vec![rat(0), rat(0), rat(1)]];
        let i = intersect(&Rationals, 3, &u, &w);
        assert_eq!(i, vec![vec![rat(0), rat(1), rat(0)]]);
    }
}
