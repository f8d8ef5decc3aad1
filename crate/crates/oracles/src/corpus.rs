//! Fixed test corpora and seeded random generators.

use biserial::circular::{valid_rank_sequences, CycleShape, RankSeq};
use biserial::field::ratio;
use biserial::quiver::{catalog, BoundQuiver, DimVector, Quiver, Weight};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

/// Every cycle shape with `len` in `lens` and each `n_i` in `1..=max_n`.
pub fn cycle_shapes(lens: std::ops::RangeInclusive<usize>, max_n: usize) -> Vec<CycleShape> {
    let mut out = Vec::new();
    for l in lens {
        let mut n = vec![1; l];
        loop {
            out.push(CycleShape::new(n.clone()).expect("positive"));
            let Some(i) = n.iter().position(|&x| x < max_n) else { break };
            n[..i].iter_mut().for_each(|x| *x = 1);
            n[i] += 1;
        }
    }
    out
}

/// `1 -> 2 -> 3` plus `c : 1 -> 3`, no relations.
pub fn triangle() -> BoundQuiver {
    let q = Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3")]).expect("valid");
    BoundQuiver::new("triangle", q, Vec::new())
}

/// Gentle inputs for completion: one loop, Kronecker, oriented cycles of
/// length at most 4, and linear quivers up to 4 vertices with no, alternating
/// or all zero relations.
pub fn completion_corpus() -> Vec<BoundQuiver> {
    let mut out = vec![catalog::kronecker()];
    out.extend((1..=4).map(catalog::cyclic));
    for n in 2..=4 {
        let all: Vec<usize> = (1..n - 1).collect();
        let alternating: Vec<usize> = (1..n - 1).step_by(2).collect();
        out.push(catalog::linear(n, &[]));
        if !all.is_empty() {
            out.push(catalog::linear(n, &alternating));
            if all != alternating {
                out.push(catalog::linear(n, &all));
            }
        }
    }
    out
}

/// Gentle algebras used for module-level checks.
pub fn module_corpus() -> Vec<BoundQuiver> {
    vec![
        catalog::kronecker(),
        catalog::cyclic(2),
        catalog::cyclic(3),
        catalog::two_loops(),
        catalog::linear(3, &[1]),
        catalog::linear(3, &[]),
        triangle(),
    ]
}

pub fn random_shape<R: Rng>(rng: &mut R, max_len: usize, max_n: usize) -> CycleShape {
    let l = rng.gen_range(1..=max_len);
    CycleShape::new((0..l).map(|_| rng.gen_range(1..=max_n)).collect()).expect("positive")
}

/// A valid rank sequence `r` and a valid `r' <= r`.
pub fn random_rank_pair<R: Rng>(rng: &mut R, shape: &CycleShape) -> (RankSeq, RankSeq) {
    let valid = valid_rank_sequences(shape);
    let r = valid.choose(rng).expect("zero sequence is valid").clone();
    let below: Vec<&RankSeq> = valid
        .iter()
        .filter(|s| s.0.iter().zip(&r.0).all(|(a, b)| a <= b))
        .collect();
    let target = (*below.choose(rng).expect("r is below itself")).clone();
    (r, target)
}

/// Nonzero rational with numerator and denominator in small ranges.
pub fn random_nonzero_rational<R: Rng>(rng: &mut R) -> BigRational {
    let num = *[-5i64, -3, -2, -1, 1, 2, 3, 4, 7].choose(rng).expect("nonempty");
    let den = *[1i64, 1, 1, 2, 3].choose(rng).expect("nonempty");
    ratio(num, den)
}

pub fn random_dim_vector<R: Rng>(rng: &mut R, vertices: usize, max: usize) -> DimVector {
    loop {
        let d = DimVector((0..vertices).map(|_| rng.gen_range(0..=max)).collect());
        if d.total() > 0 {
            return d;
        }
    }
}

/// Random weight with `θ(d) = 0`: `|d| θ' - θ'(d) (1, ..., 1)`.
pub fn random_balanced_weight<R: Rng>(rng: &mut R, d: &DimVector) -> Weight {
    let raw: Vec<i64> = (0..d.len()).map(|_| rng.gen_range(-2..=2)).collect();
    let pairing: i64 = raw.iter().zip(&d.0).map(|(t, &x)| t * x as i64).sum();
    let total = d.total() as i64;
    Weight(raw.iter().map(|t| total * t - pairing).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use biserial::quiver::theta_pairing;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shape_enumeration() {
        assert_eq!(cycle_shapes(1..=3, 2).len(), 2 + 4 + 8);
        assert_eq!(cycle_shapes(2..=2, 3).len(), 9);
    }

    #[test]
    fn balanced_weights_vanish_on_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let d = random_dim_vector(&mut rng, 3, 3);
            let t = random_balanced_weight(&mut rng, &d);
            assert_eq!(theta_pairing(&t, &d).unwrap(), 0);
        }
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(completion_corpus().len(), 11);
    }
}
