//! Exact linear algebra over Q and F_p.

mod elim;
mod matrix;

pub use elim::{
    bareiss_rank, determinant, intersect, inverse, nullspace, rank, rank_by_elimination, rref,
    solve_linear_system, span_basis, Solution,
};
pub use matrix::{Matrix, QMatrix};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, Rationals};
use crate::poly::{char_poly, factor, Poly};

/// Random invertible `n x n` rational matrix with entries in `[-3, 3]`,
/// deterministic per seed.
pub fn random_invertible(n: usize, seed: u64) -> QMatrix {
    random_invertible_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Like [`random_invertible`] but drawing from a caller-owned generator.
pub fn random_invertible_with<R: Rng>(n: usize, rng: &mut R) -> QMatrix {
    loop {
        let m = QMatrix::from_fn(n, n, |_, _| Rationals.from_i64(rng.gen_range(-3..=3)));
        if bareiss_rank(&m) == n {
            return m;
        }
    }
}

/// Derives the `k`-th child seed of `seed` (splitmix64 step).
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random rational matrix with small integer entries.
pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> QMatrix {
    QMatrix::from_fn(rows, cols, |_, _| Rationals.from_i64(rng.gen_range(-3..=3)))
}

/// One primary component of a square matrix: an irreducible factor of the
/// characteristic polynomial, its multiplicity, and a basis of the
/// generalized kernel `ker f(m)^mult`.
#[derive(Clone, Debug)]
pub struct PrimaryComponent {
    pub factor: Poly,
    pub multiplicity: usize,
    pub basis: Vec<Vec<BigRational>>,
}

/// Splits `Q^n` into the primary components of `m`.
pub fn char_poly_factor_split(m: &QMatrix) -> Vec<PrimaryComponent> {
    factor(&char_poly(m))
        .into_iter()
        .map(|(f, mult)| {
            let fm = f.eval_matrix(m).pow(&Rationals, mult as u32).expect("square");
            PrimaryComponent {
                basis: nullspace(&Rationals, &fm),
                factor: f,
                multiplicity: mult,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_invertible_has_full_rank() {
        for n in 0..5 {
            assert_eq!(bareiss_rank(&random_invertible(n, 7)), n);
        }
        assert_eq!(random_invertible(2, 11), random_invertible(2, 11));
    }

    #[test]
    fn primary_components_cover_space() {
        // diag(J_2(1), [[0,-2],[1,0]]) : char poly (x-1)^2 (x^2+2)
        let m = QMatrix::from_i64(
            4,
            4,
            &[1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, -2, 0, 0, 1, 0],
        )
        .unwrap();
        let comps = char_poly_factor_split(&m);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps.iter().map(|c| c.basis.len()).sum::<usize>(), 4);
        assert_eq!(comps[0].multiplicity, 2);
        assert_eq!(comps[1].factor, Poly::from_i64(&[2, 0, 1]));
    }

    #[test]
    fn split_examples() {
        let d = QMatrix::from_i64(2, 2, &[1, 0, 0, 2]).unwrap();
        let comps = char_poly_factor_split(&d);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.basis.len() == 1));
        let j = QMatrix::from_i64(2, 2, &[0, 1, 0, 0]).unwrap();
        let comps = char_poly_factor_split(&j);
        assert_eq!(comps.len(), 1);
        assert_eq!((comps[0].multiplicity, comps[0].basis.len()), (2, 2));
        let c = QMatrix::from_i64(2, 2, &[0, 2, 1, 0]).unwrap();
        let comps = char_poly_factor_split(&c);
        assert_eq!(comps[0].factor, Poly::from_i64(&[-2, 0, 1]));
    }
}
