//! Property checks across modules.

use std::sync::Arc;

use biserial::circular::{
    build_m0, closure_leq, dim_comp, maximal_rank_sequences, rank_sequence_of, valid_rank_sequences, CycleShape,
};
use biserial::field::{rat, Rationals};
use biserial::krull_schmidt::{decompose, end_ring, is_isomorphic};
use biserial::linalg::{derive_seed, random_invertible, QMatrix};
use biserial::quiver::{catalog, DimVector, Weight};
use biserial::repvar::json::{rational_from_json, to_json};
use biserial::repvar::{
    components, dim_component, hom_dimension, sample_generic, GentleAlgebra, QRep, Representation,
};
use biserial::stability::{check_stability, StabilityOptions, StabilityStatus};
use biserial::strings_bands::{
    band_module, enumerate_bands, enumerate_strings, string_module, BandWord, StringWord,
};
use biserial::text::{parse_quiver, print_quiver, QuiverFile};
use proptest::prelude::*;

fn shape_strategy(max_len: usize, max_n: usize) -> impl Strategy<Value = CycleShape> {
    prop::collection::vec(1..=max_n, 1..=max_len).prop_map(|n| CycleShape::new(n).unwrap())
}

fn conjugated(m: &QRep, seed: u64) -> QRep {
    let g: Vec<QMatrix> = m
        .dim()
        .0
        .iter()
        .enumerate()
        .map(|(x, &n)| random_invertible(n, derive_seed(seed, x as u64)))
        .collect();
    m.conjugate(&g).unwrap()
}

fn corpus() -> Vec<Arc<biserial::quiver::BoundQuiver>> {
    [catalog::kronecker(), catalog::cyclic(2), catalog::cyclic(3), catalog::two_loops(), catalog::linear(3, &[1])]
        .into_iter()
        .map(Arc::new)
        .collect()
}

/// String and band modules (bands at a few parameters) up to dimension 4.
fn small_indecomposables() -> Vec<QRep> {
    let mut out = Vec::new();
    for bq in corpus() {
        for w in enumerate_strings(&bq, 4).unwrap() {
            out.push(string_module(&bq, &w).unwrap());
        }
        for b in enumerate_bands(&bq, 4).unwrap() {
            for l in [1, -2] {
                out.push(band_module(&bq, &b, &rat(l), 1).unwrap());
            }
        }
    }
    out
}

#[test]
fn sum_of_squares_identity_up_to_length_four() {
    for l in 1..=4usize {
        let mut n = vec![1usize; l];
        loop {
            let shape = CycleShape::new(n.clone()).unwrap();
            for r in valid_rank_sequences(&shape) {
                let dim = dim_comp(&shape, &r).unwrap() as i64;
                let lhs = n.iter().map(|&x| (x * x) as i64).sum::<i64>() - 2 * dim;
                let rhs: i64 = (0..l)
                    .map(|i| (n[i] as i64 - r.0[i] as i64 - r.0[(i + l - 1) % l] as i64).pow(2))
                    .sum();
                assert_eq!(lhs, rhs, "n={n:?} r={:?}", r.0);
            }
            let Some(i) = n.iter().position(|&x| x < 3) else { break };
            n[..i].iter_mut().for_each(|x| *x = 1);
            n[i] += 1;
        }
    }
}

#[test]
fn text_format_round_trips() {
    for bq in corpus() {
        let file = QuiverFile::new((*bq).clone());
        let printed = print_quiver(&file);
        assert_eq!(parse_quiver(&printed).unwrap(), file, "{printed}");
    }
}

#[test]
fn words_round_trip_through_text() {
    for bq in corpus() {
        let q = bq.quiver();
        for w in enumerate_strings(&bq, 5).unwrap() {
            assert_eq!(StringWord::parse(&bq, &w.render(q)).unwrap(), w);
            assert_eq!(w.canonical(q), w.canonical(q).canonical(q));
            assert_eq!(string_module(&bq, &w).unwrap().dim(), &w.dim_vector(q));
        }
        for b in enumerate_bands(&bq, 6).unwrap() {
            assert_eq!(BandWord::parse(&bq, &b.render(q)).unwrap(), b);
        }
    }
}

#[test]
fn string_and_band_modules_satisfy_relations_and_are_indecomposable() {
    for (k, m) in small_indecomposables().iter().enumerate() {
        assert!(m.satisfies_relations());
        let split = decompose(m, k as u64).unwrap();
        assert_eq!(split.count(), 1, "{m:?}");
    }
}

#[test]
fn end_is_additive_over_direct_sums() {
    let mods = small_indecomposables();
    for (i, m) in mods.iter().enumerate().step_by(3) {
        for n in mods.iter().skip(i).step_by(5).filter(|n| n.same_algebra(m)).take(3) {
            let sum = m.direct_sum(n).unwrap();
            let expected = end_ring(m).unwrap().dim()
                + end_ring(n).unwrap().dim()
                + hom_dimension(m, n).unwrap()
                + hom_dimension(n, m).unwrap();
            assert_eq!(end_ring(&sum).unwrap().dim(), expected);
        }
    }
}

#[test]
fn json_round_trip_preserves_modules() {
    for m in small_indecomposables().iter().take(40) {
        let back = rational_from_json(m.algebra().clone(), &to_json(m)).unwrap();
        assert_eq!(&back, m);
    }
}

#[test]
fn generic_samples_lie_on_their_component() {
    for bq in corpus() {
        let a = Arc::new(GentleAlgebra::new(&bq).unwrap());
        let n = bq.quiver().num_vertices();
        for total in 1..=3usize {
            let d = DimVector((0..n).map(|x| if x == 0 { total } else { 1 + x % 2 }).collect());
            for (k, c) in components(&a, &d).unwrap().iter().enumerate() {
                let m = sample_generic(c, k as u64).unwrap();
                assert!(m.satisfies_relations());
                assert!(dim_component(c).unwrap() <= d.0.iter().map(|x| x * x).sum());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn m0_realizes_its_rank_sequence(shape in shape_strategy(4, 3), pick in any::<prop::sample::Index>()) {
        let valid = valid_rank_sequences(&shape);
        let r = pick.get(&valid);
        let m = build_m0(&shape, r).unwrap();
        prop_assert_eq!(&rank_sequence_of(&m), r);
        prop_assert!(QRep::circular(m).unwrap().satisfies_relations());
    }

    #[test]
    fn dimension_is_monotone_under_closure(
        shape in shape_strategy(4, 3),
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
    ) {
        let valid = valid_rank_sequences(&shape);
        let (r1, r2) = (a.get(&valid), b.get(&valid));
        if closure_leq(r1, r2).unwrap() {
            prop_assert!(dim_comp(&shape, r1).unwrap() <= dim_comp(&shape, r2).unwrap());
        }
        let twice = 2 * dim_comp(&shape, r1).unwrap();
        prop_assert!(twice <= shape.n().iter().map(|x| x * x).sum::<usize>());
    }

    #[test]
    fn maximal_sequences_are_valid_and_incomparable(shape in shape_strategy(4, 3)) {
        let max = maximal_rank_sequences(&shape);
        let valid = valid_rank_sequences(&shape);
        for r in &max {
            prop_assert!(valid.contains(r));
            for s in &max {
                prop_assert!(r == s || !closure_leq(r, s).unwrap());
            }
        }
        for r in &valid {
            prop_assert!(max.iter().any(|s| closure_leq(r, s).unwrap()));
        }
    }

    #[test]
    fn conjugation_preserves_isomorphism_class(pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let mods = small_indecomposables();
        let m = pick.get(&mods);
        let c = conjugated(m, seed);
        prop_assert!(is_isomorphic(m, &c, 4, seed).unwrap());
        prop_assert_eq!(decompose(&c, seed).unwrap().count(), 1);
    }

    #[test]
    fn stability_ignores_scaling_and_base_change(
        a in -3i64..=3, b in -3i64..=3, k in 1i64..=4, seed in any::<u64>(),
    ) {
        let kron = Representation::new(
            Arc::new(catalog::kronecker()),
            Rationals,
            DimVector(vec![1, 1]),
            vec![QMatrix::from_i64(1, 1, &[a]).unwrap(), QMatrix::from_i64(1, 1, &[b]).unwrap()],
        )
        .unwrap();
        let opts = StabilityOptions::default();
        let t = Weight(vec![1, -1]);
        let base = check_stability(&kron, &t, &opts).unwrap();
        let scaled = check_stability(&kron, &t.scaled(k), &opts).unwrap();
        let moved = check_stability(&conjugated(&kron, seed), &t, &opts).unwrap();
        prop_assert_eq!(base.status, scaled.status);
        prop_assert_eq!(base.status, moved.status);
    }

    #[test]
    fn direct_sums_are_never_stable(a in -2i64..=2, b in -2i64..=2, c in -2i64..=2, e in -2i64..=2) {
        let kron = Arc::new(catalog::kronecker());
        let rep = |x: i64, y: i64| Representation::new(
            kron.clone(),
            Rationals,
            DimVector(vec![1, 1]),
            vec![QMatrix::from_i64(1, 1, &[x]).unwrap(), QMatrix::from_i64(1, 1, &[y]).unwrap()],
        )
        .unwrap();
        let (m, n) = (rep(a, b), rep(c, e));
        let opts = StabilityOptions::default();
        let t = Weight(vec![1, -1]);
        let semistable = |s: StabilityStatus| s != StabilityStatus::Unstable;
        let sm = check_stability(&m, &t, &opts).unwrap().status;
        let sn = check_stability(&n, &t, &opts).unwrap().status;
        let sum = check_stability(&m.direct_sum(&n).unwrap(), &t, &opts).unwrap().status;
        prop_assert_ne!(sum, StabilityStatus::Stable);
        prop_assert_eq!(semistable(sum), semistable(sm) && semistable(sn));
    }
}
