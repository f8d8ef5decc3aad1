use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{hom_dimension, QRep, Representation};
use crate::circular::{build_m0, dim_comp, maximal_rank_sequences_with, CycleShape, RankSeq};
use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::linalg::{derive_seed, inverse, random_invertible_with, QMatrix};
use crate::quiver::{
    check_complete_gentle, complete_gentle_closure, effective_cycles, BoundQuiver, Cycle,
    DimVector, Quiver, Verdict,
};

/// Ranks indexed by the arrows of the complete gentle quiver.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankSequence(pub Vec<usize>);

impl RankSequence {
    /// `(a:2,b:2,w1:0)`
    pub fn render(&self, quiver: &Quiver) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .map(|(a, r)| format!("{}:{r}", quiver.arrow_name(a)))
            .collect();
        format!("({})", parts.join(","))
    }
}

/// A complete gentle algebra `Λ` together with a set `Z` of arrows; the
/// algebra of interest is `Λ / ⟨Z⟩`. Gentle algebras enter through their
/// completion, with `Z` the added arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GentleAlgebra {
    complete: Arc<BoundQuiver>,
    original: Arc<BoundQuiver>,
    zero: Vec<usize>,
    cycles: Vec<Cycle>,
}

impl GentleAlgebra {
    /// Uses `bq` directly if it is complete gentle, otherwise its completion.
    pub fn new(bq: &BoundQuiver) -> Result<Self> {
        if check_complete_gentle(bq).is_pass() {
            let complete = Arc::new(bq.clone());
            return Self::with_zero_arrows(complete.clone(), complete, Vec::new());
        }
        let c = complete_gentle_closure(bq)?;
        Self::with_zero_arrows(Arc::new(c.bound), Arc::new(bq.clone()), c.added)
    }

    pub fn with_zero_arrows(
        complete: Arc<BoundQuiver>,
        original: Arc<BoundQuiver>,
        zero: Vec<usize>,
    ) -> Result<Self> {
        if let Verdict::Fail { axiom, witness } = check_complete_gentle(&complete) {
            return Err(Error::NotCompleteGentle(format!("{axiom}: {witness}")));
        }
        let cycles = effective_cycles(&complete)?;
        Ok(Self {
            complete,
            original,
            zero,
            cycles,
        })
    }

    pub fn complete(&self) -> &Arc<BoundQuiver> {
        &self.complete
    }

    /// The algebra before completion (equal to the complete one when `Z` is empty).
    pub fn original(&self) -> &Arc<BoundQuiver> {
        &self.original
    }

    pub fn zero_arrows(&self) -> &[usize] {
        &self.zero
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn quiver(&self) -> &Quiver {
        self.complete.quiver()
    }

    /// Cycle shape of `d` restricted to one cycle (entries may be zero).
    pub fn cycle_shape(&self, cycle: &Cycle, d: &DimVector) -> CycleShape {
        let q = self.quiver();
        CycleShape::allowing_zero((0..cycle.len()).map(|i| d[cycle.vertex(q, i)]).collect())
    }

    /// Views a representation of the original algebra as one of the complete
    /// algebra, with zero matrices on the added arrows.
    pub fn lift(&self, m: &QRep) -> Result<QRep> {
        if *m.algebra().as_ref() == *self.complete {
            return Ok(m.clone());
        }
        let q = self.quiver();
        let old = m.algebra().quiver().num_arrows();
        let mut mats = m.mats().to_vec();
        for a in old..q.num_arrows() {
            let arrow = q.arrow(a);
            mats.push(QMatrix::zeros(&Rationals, m.dim()[arrow.head], m.dim()[arrow.tail]));
        }
        Representation::new(self.complete.clone(), Rationals, m.dim().clone(), mats)
    }

    /// Drops the added arrows (which must act by zero).
    pub fn to_original(&self, m: &QRep) -> Result<QRep> {
        let n = self.original.quiver().num_arrows();
        if let Some(&z) = self.zero.iter().find(|&&z| !m.mat(z).is_zero(&Rationals)) {
            return Err(Error::InvalidInput(format!(
                "arrow {} is not zero",
                self.quiver().arrow_name(z)
            )));
        }
        Representation::new(self.original.clone(), Rationals, m.dim().clone(), m.mats()[..n].to_vec())
    }
}

/// The irreducible component `rep(Λ, d, r)` (inside `rep(Λ/⟨Z⟩, d)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDescriptor {
    algebra: Arc<GentleAlgebra>,
    dim: DimVector,
    ranks: RankSequence,
}

impl ComponentDescriptor {
    pub fn new(algebra: Arc<GentleAlgebra>, dim: DimVector, ranks: RankSequence) -> Result<Self> {
        let q = algebra.quiver();
        if dim.len() != q.num_vertices() {
            return Err(Error::VertexMismatch("dimension vector length".into()));
        }
        if ranks.0.len() != q.num_arrows() {
            return Err(Error::InvalidRankSequence(format!(
                "{} ranks for {} arrows",
                ranks.0.len(),
                q.num_arrows()
            )));
        }
        if let Some(&z) = algebra.zero.iter().find(|&&z| ranks.0[z] != 0) {
            return Err(Error::InvalidRankSequence(format!(
                "arrow {} is zero in the algebra but has rank {}",
                q.arrow_name(z),
                ranks.0[z]
            )));
        }
        let c = Self {
            algebra,
            dim,
            ranks,
        };
        for (shape, r) in c.per_cycle() {
            if !crate::circular::is_rank_sequence(&shape, &r.0)? {
                return Err(Error::InvalidRankSequence(format!(
                    "{} violates r_a + r_b <= d(ta) along a relation",
                    c.ranks.render(c.algebra.quiver())
                )));
            }
        }
        Ok(c)
    }

    pub fn algebra(&self) -> &Arc<GentleAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn ranks(&self) -> &RankSequence {
        &self.ranks
    }

    /// `(shape, rank sequence)` for every effective cycle.
    pub fn per_cycle(&self) -> Vec<(CycleShape, RankSeq)> {
        self.algebra
            .cycles
            .iter()
            .map(|c| {
                let shape = self.algebra.cycle_shape(c, &self.dim);
                let r = RankSeq(c.arrows.iter().map(|&a| self.ranks.0[a]).collect());
                (shape, r)
            })
            .collect()
    }
}

impl fmt::Display for ComponentDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={}", self.ranks.render(self.algebra.quiver()))
    }
}

/// Irreducible components of `rep(Λ/⟨Z⟩, d)`: on every effective cycle a
/// maximal rank sequence vanishing on `Z`, combined over all cycles.
pub fn components(algebra: &Arc<GentleAlgebra>, d: &DimVector) -> Result<Vec<ComponentDescriptor>> {
    let q = algebra.quiver();
    if d.len() != q.num_vertices() {
        return Err(Error::VertexMismatch("dimension vector length".into()));
    }
    let per_cycle: Vec<(&Cycle, Vec<RankSeq>)> = algebra
        .cycles
        .iter()
        .map(|c| {
            let shape = algebra.cycle_shape(c, d);
            let zero: Vec<bool> = c.arrows.iter().map(|a| algebra.zero.contains(a)).collect();
            (c, maximal_rank_sequences_with(&shape, &zero))
        })
        .collect();
    let mut out = vec![vec![0usize; q.num_arrows()]];
    for (cycle, options) in &per_cycle {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for partial in &out {
            for r in options {
                let mut full = partial.clone();
                for (i, &a) in cycle.arrows.iter().enumerate() {
                    full[a] = r.0[i];
                }
                next.push(full);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|r| ComponentDescriptor::new(algebra.clone(), d.clone(), RankSequence(r)))
        .collect()
}

/// Sum over effective cycles of the circular-complex dimensions.
pub fn dim_component(c: &ComponentDescriptor) -> Result<usize> {
    let total = c
        .per_cycle()
        .iter()
        .map(|(s, r)| dim_comp(s, r))
        .sum::<Result<usize>>()?;
    let bound: usize = c.dim.0.iter().map(|x| x * x).sum();
    debug_assert!(total <= bound, "component dimension {total} exceeds Σd(x)^2 = {bound}");
    Ok(total)
}

const SAMPLE_ATTEMPTS: u64 = 8;

/// A general point of the component: on each cycle, `M⁰` conjugated by
/// independent random invertible matrices at every position.
pub fn sample_generic(c: &ComponentDescriptor, seed: u64) -> Result<QRep> {
    for attempt in 0..SAMPLE_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, attempt));
        let m = sample_once(c, &mut rng)?;
        if m.satisfies_relations() && m.rank_sequence() == c.ranks {
            return Ok(m);
        }
    }
    Err(Error::GenericityFailure(format!(
        "no sample of {c} reached the expected ranks in {SAMPLE_ATTEMPTS} attempts"
    )))
}

fn sample_once(c: &ComponentDescriptor, rng: &mut ChaCha8Rng) -> Result<QRep> {
    let algebra = &c.algebra;
    let q = algebra.quiver();
    let mut mats: Vec<Option<QMatrix>> = vec![None; q.num_arrows()];
    for (cycle, (shape, r)) in algebra.cycles.iter().zip(c.per_cycle()) {
        let blocks = build_m0(&shape, &r)?;
        let g: Vec<QMatrix> = shape.n().iter().map(|&n| random_invertible_with(n, rng)).collect();
        let g_inv: Vec<QMatrix> = g.iter().map(|m| inverse(&Rationals, m).expect("invertible")).collect();
        for (i, &a) in cycle.arrows.iter().enumerate() {
            let j = shape.next(i);
            let m = g[j].mul(&Rationals, &blocks[i])?.mul(&Rationals, &g_inv[i])?;
            mats[a] = Some(m);
        }
    }
    Representation::new(
        algebra.complete.clone(),
        Rationals,
        c.dim.clone(),
        mats.into_iter().map(|m| m.expect("every arrow lies on a cycle")).collect(),
    )
}

/// `min` over `trials` sample pairs of `dim Hom(X, Y)`, an upper bound for
/// the generic value that is attained with probability one.
pub fn generic_hom(
    c1: &ComponentDescriptor,
    c2: &ComponentDescriptor,
    trials: usize,
    seed: u64,
) -> Result<usize> {
    if c1.algebra != c2.algebra {
        return Err(Error::InvalidInput("components of different algebras".into()));
    }
    let mut best = usize::MAX;
    for t in 0..trials.max(1) as u64 {
        let x = sample_generic(c1, derive_seed(seed, 2 * t))?;
        let y = sample_generic(c2, derive_seed(seed, 2 * t + 1))?;
        best = best.min(hom_dimension(&x, &y)?);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::catalog;

    fn algebra(bq: BoundQuiver) -> Arc<GentleAlgebra> {
        Arc::new(GentleAlgebra::new(&bq).unwrap())
    }

    #[test]
    fn kronecker_components() {
        let a = algebra(catalog::kronecker());
        let cs = components(&a, &DimVector(vec![1, 1])).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].ranks().0, vec![1, 1, 0, 0]);
        assert_eq!(dim_component(&cs[0]).unwrap(), 2);
        assert_eq!(cs[0].to_string(), "r=(a:1,b:1,w1:0,w2:0)");
    }

    #[test]
    fn cyclic_two_components() {
        let a = algebra(catalog::cyclic(2));
        let cs = components(&a, &DimVector(vec![1, 1])).unwrap();
        let ranks: Vec<Vec<usize>> = cs.iter().map(|c| c.ranks().0.clone()).collect();
        assert_eq!(ranks, vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0]]);
        assert!(cs.iter().all(|c| dim_component(c).unwrap() == 1));
    }

    #[test]
    fn two_loop_components() {
        let a = algebra(catalog::two_loops());
        assert!(a.zero_arrows().is_empty());
        let cs = components(&a, &DimVector(vec![2])).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].ranks().0, vec![1, 1]);
        assert_eq!(dim_component(&cs[0]).unwrap(), 4);
        let zero = ComponentDescriptor::new(a, DimVector(vec![2]), RankSequence(vec![0, 0])).unwrap();
        assert_eq!(dim_component(&zero).unwrap(), 0);
    }

    #[test]
    fn descriptors_reject_ranks_on_zero_arrows() {
        let a = algebra(catalog::kronecker());
        assert!(matches!(
            ComponentDescriptor::new(a, DimVector(vec![1, 1]), RankSequence(vec![1, 0, 1, 0])),
            Err(Error::InvalidRankSequence(_))
        ));
    }

    #[test]
    fn samples_are_generic_points() {
        let a = algebra(catalog::kronecker());
        let c = &components(&a, &DimVector(vec![1, 1])).unwrap()[0];
        let m = sample_generic(c, 3).unwrap();
        assert!(!m.mat(0).is_zero(&Rationals) && !m.mat(1).is_zero(&Rationals));
        assert_eq!(m, sample_generic(c, 3).unwrap());

        let one_loop = algebra(catalog::cyclic(1));
        let c = ComponentDescriptor::new(one_loop, DimVector(vec![2]), RankSequence(vec![1, 0])).unwrap();
        let m = sample_generic(&c, 9).unwrap();
        assert_eq!(m.rank_sequence(), RankSequence(vec![1, 0]));
        assert!(m.mat(0).mul(&Rationals, m.mat(0)).unwrap().is_zero(&Rationals));

        let zero = ComponentDescriptor::new(a, DimVector(vec![2, 1]), RankSequence(vec![0; 4])).unwrap();
        assert!(sample_generic(&zero, 1).unwrap().mats().iter().all(|m| m.is_zero(&Rationals)));
    }

    #[test]
    fn generic_hom_examples() {
        let a = algebra(catalog::kronecker());
        let band = &components(&a, &DimVector(vec![1, 1])).unwrap()[0];
        assert_eq!(generic_hom(band, band, 3, 5).unwrap(), 0);
        let s1 = &components(&a, &DimVector(vec![1, 0])).unwrap()[0];
        let s2 = &components(&a, &DimVector(vec![0, 1])).unwrap()[0];
        assert_eq!(generic_hom(s1, s2, 2, 5).unwrap(), 0);
        assert_eq!(generic_hom(s1, s1, 2, 5).unwrap(), 1);
    }
}
