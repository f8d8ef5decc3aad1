//! Representations of bound quivers, Hom spaces, and irreducible components
//! of representation varieties of gentle and complete gentle algebras.

mod components;
mod hom;
pub mod json;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::linalg::{inverse, Matrix, QMatrix};
use crate::quiver::{catalog, BoundQuiver, DimVector};

pub use components::{
    components, dim_component, generic_hom, sample_generic, ComponentDescriptor, GentleAlgebra,
    RankSequence,
};
pub use hom::{hom_dimension, hom_equations, hom_space, unpack_hom, HomMap};

/// A representation: one matrix `M(a)` of shape `d(head) x d(tail)` per arrow.
#[derive(Clone, Debug)]
pub struct Representation<F: Field = Rationals> {
    algebra: Arc<BoundQuiver>,
    field: F,
    dim: DimVector,
    mats: Vec<Matrix<F::Elem>>,
}

pub type QRep = Representation<Rationals>;

impl<F: Field> PartialEq for Representation<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.mats == other.mats
            && *self.algebra == *other.algebra
    }
}

impl<F: Field> Eq for Representation<F> {}

impl<F: Field> Representation<F> {
    pub fn new(
        algebra: Arc<BoundQuiver>,
        field: F,
        dim: DimVector,
        mats: Vec<Matrix<F::Elem>>,
    ) -> Result<Self> {
        let q = algebra.quiver();
        if dim.len() != q.num_vertices() {
            return Err(Error::VertexMismatch(format!(
                "dimension vector has {} entries for {} vertices",
                dim.len(),
                q.num_vertices()
            )));
        }
        if mats.len() != q.num_arrows() {
            return Err(Error::ShapeMismatch(format!(
                "{} matrices for {} arrows",
                mats.len(),
                q.num_arrows()
            )));
        }
        for (a, m) in q.arrows().iter().zip(&mats) {
            if m.shape() != (dim[a.head], dim[a.tail]) {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    a.name,
                    dim[a.head],
                    dim[a.tail],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self {
            algebra,
            field,
            dim,
            mats,
        })
    }

    pub fn zero(algebra: Arc<BoundQuiver>, field: F, dim: DimVector) -> Result<Self> {
        let mats = algebra
            .quiver()
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(&field, dim.0.get(a.head).copied().unwrap_or(0), dim.0.get(a.tail).copied().unwrap_or(0)))
            .collect();
        Self::new(algebra, field, dim, mats)
    }

    pub fn algebra(&self) -> &Arc<BoundQuiver> {
        &self.algebra
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn total_dim(&self) -> usize {
        self.dim.total()
    }

    pub fn mat(&self, arrow: usize) -> &Matrix<F::Elem> {
        &self.mats[arrow]
    }

    pub fn mats(&self) -> &[Matrix<F::Elem>] {
        &self.mats
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }

    /// Evaluates every relation; returns the first one that does not vanish.
    pub fn check_relations(&self) -> Result<Option<String>> {
        let f = &self.field;
        let q = self.algebra.quiver();
        for rel in self.algebra.relations() {
            let (_, first) = &rel.terms()[0];
            let (s, t) = (first.source(q), first.target(q));
            let mut sum = Matrix::zeros(f, self.dim[t], self.dim[s]);
            for (c, path) in rel.terms() {
                let c = f.from_rational(c).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "relation coefficient has no image in {}",
                        f.tag()
                    ))
                })?;
                let mut prod = Matrix::identity(f, self.dim[s]);
                for &a in path.arrows() {
                    prod = self.mats[a].mul(f, &prod)?;
                }
                sum = sum.add(f, &prod.scale(f, &c))?;
            }
            if !sum.is_zero(f) {
                return Ok(Some(rel.render(q)));
            }
        }
        Ok(None)
    }

    pub fn satisfies_relations(&self) -> bool {
        matches!(self.check_relations(), Ok(None))
    }

    /// Per-arrow ranks.
    pub fn rank_sequence(&self) -> RankSequence {
        RankSequence(self.mats.iter().map(|m| self.field.rank(m)).collect())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !self.same_algebra(other) || self.field != other.field {
            return Err(Error::InvalidInput("direct sum of representations of different algebras".into()));
        }
        let dim = DimVector(self.dim.0.iter().zip(&other.dim.0).map(|(a, b)| a + b).collect());
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| Matrix::block_diagonal(&self.field, &[a.clone(), b.clone()]))
            .collect();
        Self::new(self.algebra.clone(), self.field.clone(), dim, mats)
    }

    /// Direct sum of a nonempty list.
    pub fn sum_of(parts: &[Self]) -> Result<Self> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        rest.iter().try_fold(first.clone(), |acc, p| acc.direct_sum(p))
    }

    /// Base change `M(a) -> g_{head} M(a) g_{tail}^{-1}` by invertible `g_x`.
    pub fn conjugate(&self, g: &[Matrix<F::Elem>]) -> Result<Self> {
        let f = &self.field;
        let inv: Vec<Matrix<F::Elem>> = g
            .iter()
            .map(|m| inverse(f, m).ok_or_else(|| Error::InvalidInput("singular base change".into())))
            .collect::<Result<_>>()?;
        let q = self.algebra.quiver();
        let mats = q
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| g[a.head].mul(f, m)?.mul(f, &inv[a.tail]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.algebra.clone(), f.clone(), self.dim.clone(), mats)
    }

    /// The representation induced on subspaces `U_x` (given by bases, as
    /// columns) that are invariant under every arrow, together with nothing
    /// else: matrices are expressed in the given bases.
    pub fn restrict(&self, bases: &[Vec<Vec<F::Elem>>]) -> Result<Self> {
        let f = &self.field;
        let q = self.algebra.quiver();
        let dim = DimVector(bases.iter().map(Vec::len).collect());
        let mut mats = Vec::with_capacity(q.num_arrows());
        for (a, m) in q.arrows().iter().zip(&self.mats) {
            let src = &bases[a.tail];
            let dst = Matrix::from_columns(self.dim[a.head], &bases[a.head]);
            let mut cols = Vec::with_capacity(src.len());
            for v in src {
                let image = m.mul_vec(f, v)?;
                let sol = crate::linalg::solve_linear_system(f, &dst, &image)?
                    .ok_or_else(|| Error::InvalidInput(format!("subspace not invariant under {}", a.name)))?;
                cols.push(sol.particular);
            }
            mats.push(Matrix::from_columns(dim[a.head], &cols));
        }
        Self::new(self.algebra.clone(), f.clone(), dim, mats)
    }

    /// Same algebra and dimension vector, new matrices.
    pub fn with_mats(&self, mats: Vec<Matrix<F::Elem>>) -> Result<Self> {
        Self::new(self.algebra.clone(), self.field.clone(), self.dim.clone(), mats)
    }

    /// Same matrices viewed over a different bound quiver with the same
    /// vertices and arrow shapes (e.g. the completion of the original quiver).
    pub fn with_algebra(&self, algebra: Arc<BoundQuiver>) -> Result<Self> {
        Self::new(algebra, self.field.clone(), self.dim.clone(), self.mats.clone())
    }
}

impl QRep {
    /// The representation of the cyclic algebra of length `mats.len()`
    /// (see [`catalog::cyclic`]) with `M(a_i) = mats[i]`.
    pub fn circular(mats: Vec<QMatrix>) -> Result<Self> {
        let l = mats.len();
        let dim = DimVector(mats.iter().map(|m| m.cols()).collect());
        Self::new(Arc::new(catalog::cyclic(l)), Rationals, dim, mats)
    }

    /// Reduction modulo `p`; `None` if some entry has a denominator divisible by `p`.
    pub fn reduce_mod(&self, field: &crate::field::PrimeField) -> Option<Representation<crate::field::PrimeField>> {
        let mats = self
            .mats
            .iter()
            .map(|m| {
                let entries: Option<Vec<u64>> = m.entries().iter().map(|x| field.reduce(x)).collect();
                Matrix::new(m.rows(), m.cols(), entries?).ok()
            })
            .collect::<Option<Vec<_>>>()?;
        Representation::new(self.algebra.clone(), *field, self.dim.clone(), mats).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circular::{build_m0, CycleShape, RankSeq};

    #[test]
    fn relations_on_cyclic_algebra() {
        let m0 = build_m0(&CycleShape::new(vec![2, 2]).unwrap(), &RankSeq(vec![1, 1])).unwrap();
        let m = QRep::circular(m0).unwrap();
        assert_eq!(m.check_relations().unwrap(), None);
        let one = QMatrix::from_i64(1, 1, &[1]).unwrap();
        let bad = QRep::circular(vec![one.clone(), one]).unwrap();
        assert_eq!(bad.check_relations().unwrap(), Some("a1*a0".to_string()));
        let zero = QRep::zero(Arc::new(catalog::cyclic(3)), Rationals, DimVector(vec![1, 2, 0])).unwrap();
        assert_eq!(zero.check_relations().unwrap(), None);
    }

    #[test]
    fn shapes_are_checked() {
        let bq = Arc::new(catalog::kronecker());
        let m = QMatrix::from_i64(1, 1, &[1]).unwrap();
        assert!(Representation::new(bq.clone(), Rationals, DimVector(vec![1, 2]), vec![m.clone(), m]).is_err());
    }

    #[test]
    fn rank_sequence_of_m0() {
        let s = CycleShape::new(vec![2, 3, 1]).unwrap();
        let r = RankSeq(vec![1, 1, 0]);
        let m = QRep::circular(build_m0(&s, &r).unwrap()).unwrap();
        assert_eq!(m.rank_sequence().0, r.0);
    }

    #[test]
    fn conjugation_and_restriction() {
        let bq = Arc::new(catalog::kronecker());
        let m = Representation::new(
            bq,
            Rationals,
            DimVector(vec![1, 1]),
            vec![QMatrix::from_i64(1, 1, &[2]).unwrap(), QMatrix::from_i64(1, 1, &[3]).unwrap()],
        )
        .unwrap();
        let g = vec![QMatrix::from_i64(1, 1, &[2]).unwrap(), QMatrix::from_i64(1, 1, &[5]).unwrap()];
        let c = m.conjugate(&g).unwrap();
        assert_eq!(c.mat(0), &QMatrix::from_i64(1, 1, &[5]).unwrap());
        let s = m.direct_sum(&m).unwrap();
        assert_eq!(s.dim(), &DimVector(vec![2, 2]));
        let e = |i: usize| {
            let mut v = vec![Rationals.zero(); 2];
            v[i] = Rationals.one();
            v
        };
        let sub = s.restrict(&[vec![e(1)], vec![e(1)]]).unwrap();
        assert_eq!(sub, m);
    }
}
