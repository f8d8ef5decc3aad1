use super::Representation;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{nullspace, Matrix};

/// A morphism given vertex by vertex: `φ_x` has shape `d_N(x) x d_M(x)`.
pub type HomMap<E> = Vec<Matrix<E>>;

fn offsets<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.dim().len() + 1);
    let mut acc = 0;
    for x in 0..m.dim().len() {
        out.push(acc);
        acc += m.dim()[x] * n.dim()[x];
    }
    out.push(acc);
    out
}

/// Coefficient matrix of the intertwining equations `φ_{ha} M(a) = N(a) φ_{ta}`
/// in the entries of the `φ_x` (vertex by vertex, row-major).
pub fn hom_equations<F: Field>(
    m: &Representation<F>,
    n: &Representation<F>,
) -> Result<Matrix<F::Elem>> {
    if !m.same_algebra(n) {
        return Err(Error::InvalidInput("Hom between representations of different algebras".into()));
    }
    let f = m.field();
    let off = offsets(m, n);
    let vars = off[off.len() - 1];
    let q = m.algebra().quiver();
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (a, arrow) in q.arrows().iter().enumerate() {
        let (t, h) = (arrow.tail, arrow.head);
        let (ma, na) = (m.mat(a), n.mat(a));
        let (dm_t, dm_h, dn_t, dn_h) = (m.dim()[t], m.dim()[h], n.dim()[t], n.dim()[h]);
        for i in 0..dn_h {
            for j in 0..dm_t {
                let mut row = vec![f.zero(); vars];
                // (φ_h M(a))_{ij} = Σ_k φ_h[i][k] M(a)[k][j]
                for k in 0..dm_h {
                    let c = ma.get(k, j);
                    if !f.is_zero(c) {
                        let idx = off[h] + i * dm_h + k;
                        row[idx] = f.add(&row[idx], c);
                    }
                }
                // - (N(a) φ_t)_{ij} = - Σ_k N(a)[i][k] φ_t[k][j]
                for k in 0..dn_t {
                    let c = na.get(i, k);
                    if !f.is_zero(c) {
                        let idx = off[t] + k * dm_t + j;
                        row[idx] = f.sub(&row[idx], c);
                    }
                }
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(rows, vars)
}

/// Turns a solution vector of [`hom_equations`] into per-vertex matrices.
pub fn unpack_hom<F: Field>(
    m: &Representation<F>,
    n: &Representation<F>,
    v: &[F::Elem],
) -> HomMap<F::Elem> {
    let off = offsets(m, n);
    (0..m.dim().len())
        .map(|x| {
            let (r, c) = (n.dim()[x], m.dim()[x]);
            Matrix::new(r, c, v[off[x]..off[x] + r * c].to_vec()).expect("sized")
        })
        .collect()
}

/// Basis of `Hom(M, N)`.
pub fn hom_space<F: Field>(
    m: &Representation<F>,
    n: &Representation<F>,
) -> Result<Vec<HomMap<F::Elem>>> {
    let eq = hom_equations(m, n)?;
    Ok(nullspace(m.field(), &eq)
        .iter()
        .map(|v| unpack_hom(m, n, v))
        .collect())
}

pub fn hom_dimension<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<usize> {
    let eq = hom_equations(m, n)?;
    Ok(eq.cols() - m.field().rank(&eq))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::Rationals;
    use crate::linalg::QMatrix;
    use crate::quiver::{catalog, DimVector};
    use crate::repvar::QRep;

    fn kronecker(a: i64, b: i64) -> QRep {
        Representation::new(
            Arc::new(catalog::kronecker()),
            Rationals,
            DimVector(vec![1, 1]),
            vec![QMatrix::from_i64(1, 1, &[a]).unwrap(), QMatrix::from_i64(1, 1, &[b]).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn kronecker_band_homs() {
        assert_eq!(hom_dimension(&kronecker(1, 2), &kronecker(1, 2)).unwrap(), 1);
        assert_eq!(hom_dimension(&kronecker(1, 2), &kronecker(1, 3)).unwrap(), 0);
        let basis = hom_space(&kronecker(1, 2), &kronecker(2, 4)).unwrap();
        assert_eq!(basis.len(), 1);
        // φ_2 M(a) = N(a) φ_1 with M(a) = 1, N(a) = 2
        let phi = &basis[0];
        assert_eq!(phi[1].get(0, 0), &(phi[0].get(0, 0) * Rationals.from_i64(2)));
    }

    #[test]
    fn simples_at_distinct_vertices() {
        let bq = Arc::new(catalog::kronecker());
        let s1 = QRep::zero(bq.clone(), Rationals, DimVector(vec![1, 0])).unwrap();
        let s2 = QRep::zero(bq, Rationals, DimVector(vec![0, 1])).unwrap();
        assert_eq!(hom_dimension(&s1, &s2).unwrap(), 0);
        assert_eq!(hom_dimension(&s1, &s1).unwrap(), 1);
        assert_eq!(hom_dimension(&s1.direct_sum(&s1).unwrap(), &s1.direct_sum(&s1).unwrap()).unwrap(), 4);
    }
}
