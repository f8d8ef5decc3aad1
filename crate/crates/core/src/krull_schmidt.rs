//! Endomorphism rings, Krull-Schmidt splitting and isomorphism tests for
//! representations over Q.
//!
//! A representation is split along the primary components of random
//! endomorphisms. A summand is certified indecomposable once `End/rad` is
//! shown to be a field: the radical is the kernel of the trace form (exact
//! in characteristic zero) and a random element generating a subfield of
//! full dimension proves the quotient is that field.

use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::linalg::{derive_seed, determinant, nullspace, span_basis, Matrix, QMatrix};
use crate::poly::{char_poly, factor, Poly};
use crate::repvar::{hom_space, json::to_json, HomMap, QRep};

type Vector = Vec<BigRational>;
/// Per-vertex bases of a graded subspace.
type Graded = Vec<Vec<Vector>>;

const COEFF_RANGE: i64 = 9;

/// A basis of `End(M)`; the first element is the identity.
#[derive(Clone, Debug)]
pub struct EndBasis {
    pub basis: Vec<HomMap<BigRational>>,
}

impl EndBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of `End / rad End`.
    pub fn semisimple_dim(&self) -> usize {
        let n = self.dim();
        let gram = Matrix::from_fn(n, n, |i, j| trace_of_product(&self.basis[i], &self.basis[j]));
        Rationals.rank(&gram)
    }

    fn combination(&self, coeffs: &[BigRational]) -> HomMap<BigRational> {
        combine(&self.basis, coeffs)
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> HomMap<BigRational> {
        let coeffs: Vec<BigRational> = (0..self.dim())
            .map(|_| Rationals.from_i64(rng.gen_range(-COEFF_RANGE..=COEFF_RANGE)))
            .collect();
        self.combination(&coeffs)
    }
}

fn combine(basis: &[HomMap<BigRational>], coeffs: &[BigRational]) -> HomMap<BigRational> {
    let f = Rationals;
    let mut out: HomMap<BigRational> = basis[0]
        .iter()
        .map(|m| Matrix::zeros(&f, m.rows(), m.cols()))
        .collect();
    for (b, c) in basis.iter().zip(coeffs) {
        if f.is_zero(c) {
            continue;
        }
        for (o, m) in out.iter_mut().zip(b) {
            *o = o.add(&f, &m.scale(&f, c)).expect("same shape");
        }
    }
    out
}

fn trace_of_product(a: &HomMap<BigRational>, b: &HomMap<BigRational>) -> BigRational {
    let f = Rationals;
    a.iter()
        .zip(b)
        .map(|(x, y)| x.mul(&f, y).expect("square").trace(&f))
        .fold(f.zero(), |acc, t| acc + t)
}

fn flatten(phi: &HomMap<BigRational>) -> Vector {
    phi.iter().flat_map(|m| m.entries().iter().cloned()).collect()
}

/// Basis of `End(M)`, starting with the identity.
pub fn end_ring(m: &QRep) -> Result<EndBasis> {
    let f = Rationals;
    let raw = hom_space(m, m)?;
    let identity: HomMap<BigRational> = m.dim().0.iter().map(|&d| Matrix::identity(&f, d)).collect();
    let len = flatten(&identity).len();
    let mut basis = vec![identity];
    let mut rows = vec![flatten(&basis[0])];
    for phi in raw {
        let mut candidate = rows.clone();
        candidate.push(flatten(&phi));
        if span_basis(&f, len, &candidate).len() > rows.len() {
            rows = candidate;
            basis.push(phi);
        }
    }
    if m.total_dim() == 0 {
        basis.clear();
    }
    Ok(EndBasis { basis })
}

/// One indecomposable summand class with its multiplicity.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: QRep,
    pub multiplicity: usize,
    /// Dimension of `End/rad` over Q; larger than 1 when the summand only
    /// splits after extending scalars (e.g. a band with irrational parameter).
    pub residue_degree: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SummandList {
    pub summands: Vec<Summand>,
}

impl SummandList {
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Number of indecomposable summands over Q, counted with multiplicity.
    pub fn count(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.summands
                .iter()
                .map(|s| {
                    json!({
                        "multiplicity": s.multiplicity,
                        "residue_degree": s.residue_degree,
                        "module": to_json(&s.module),
                    })
                })
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitOptions {
    /// Random endomorphisms tried per module before giving up.
    pub attempts: usize,
    /// Random elements of `Hom(M, N)` tried by isomorphism tests.
    pub iso_trials: usize,
}

impl Default for SplitOptions {
    fn default() -> Self {
        Self {
            attempts: 24,
            iso_trials: 4,
        }
    }
}

/// Certificate returned by [`is_indecomposable`].
#[derive(Clone, Debug)]
pub enum Certificate {
    /// `End/rad` is a field of the given degree over Q.
    Indecomposable { residue_degree: usize },
    /// A nontrivial idempotent endomorphism.
    Decomposable { idempotent: HomMap<BigRational> },
    /// Neither a split nor a proof was found within the allotted attempts.
    Inconclusive,
}

enum Analysis {
    Indecomposable(usize),
    Split(Vec<Graded>),
}

/// Splits `M` into indecomposables and groups isomorphic ones.
pub fn decompose(m: &QRep, seed: u64) -> Result<SummandList> {
    decompose_with(m, seed, &SplitOptions::default())
}

pub fn decompose_with(m: &QRep, seed: u64, opts: &SplitOptions) -> Result<SummandList> {
    if !m.satisfies_relations() {
        return Err(Error::InvalidInput("representation violates a relation".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::new();
    split_into(m, &mut rng, opts, &mut parts)?;
    let mut out = SummandList::default();
    for (k, (part, e)) in parts.into_iter().enumerate() {
        let mut placed = false;
        for s in out.summands.iter_mut() {
            if s.residue_degree == e
                && is_isomorphic(&s.module, &part, opts.iso_trials, derive_seed(seed, k as u64))?
            {
                s.multiplicity += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            out.summands.push(Summand {
                module: part,
                multiplicity: 1,
                residue_degree: e,
            });
        }
    }
    Ok(out)
}

fn split_into(
    m: &QRep,
    rng: &mut ChaCha8Rng,
    opts: &SplitOptions,
    out: &mut Vec<(QRep, usize)>,
) -> Result<()> {
    if m.total_dim() == 0 {
        return Ok(());
    }
    match analyse(m, rng, opts.attempts)? {
        Some(Analysis::Indecomposable(e)) => out.push((m.clone(), e)),
        Some(Analysis::Split(parts)) => {
            for p in parts {
                split_into(&m.restrict(&p)?, rng, opts, out)?;
            }
        }
        None => {
            return Err(Error::SplitInconclusive(format!(
                "no split and no certificate after {} attempts for dimension vector {:?}",
                opts.attempts,
                m.dim().0
            )))
        }
    }
    Ok(())
}

fn analyse(m: &QRep, rng: &mut ChaCha8Rng, attempts: usize) -> Result<Option<Analysis>> {
    let end = end_ring(m)?;
    if end.dim() == 1 {
        return Ok(Some(Analysis::Indecomposable(1)));
    }
    let s = end.semisimple_dim();
    if s == 1 {
        return Ok(Some(Analysis::Indecomposable(1)));
    }
    let lattice = invariant_subspaces(m);
    for attempt in 0..attempts {
        let phi = end.random_element(rng);
        match primary_parts(m, &phi) {
            Parts::Split(parts) => return Ok(Some(Analysis::Split(parts))),
            Parts::Primary(e) if e == s => return Ok(Some(Analysis::Indecomposable(e))),
            Parts::Primary(_) => {}
        }
        if let Some(phi) = annihilator_element(m, &end, &lattice, attempt, rng) {
            if let Parts::Split(parts) = primary_parts(m, &phi) {
                return Ok(Some(Analysis::Split(parts)));
            }
        }
    }
    Ok(None)
}

enum Parts {
    Split(Vec<Graded>),
    /// A single irreducible factor of the given degree.
    Primary(usize),
}

/// Primary decomposition of `M` under an endomorphism, vertex by vertex.
fn primary_parts(m: &QRep, phi: &HomMap<BigRational>) -> Parts {
    let f = Rationals;
    let chi = phi
        .iter()
        .filter(|p| p.rows() > 0)
        .fold(Poly::one(), |acc, p| acc.mul(&char_poly(p)));
    let factors = factor(&chi);
    if factors.len() == 1 {
        return Parts::Primary(factors[0].0.degree().unwrap_or(0));
    }
    let parts = factors
        .iter()
        .map(|(g, mult)| {
            phi.iter()
                .zip(&m.dim().0)
                .map(|(p, &d)| {
                    if d == 0 {
                        return Vec::new();
                    }
                    let gm = g.eval_matrix(p).pow(&f, *mult as u32).expect("square");
                    nullspace(&f, &gm)
                })
                .collect()
        })
        .collect();
    Parts::Split(parts)
}

/// Subspaces `W_x ⊆ M(x)` stable under every endomorphism, generated from
/// the whole spaces by images, preimages and intersections along arrows.
fn invariant_subspaces(m: &QRep) -> Vec<(usize, Vec<Vector>)> {
    const ROUNDS: usize = 3;
    const CAP: usize = 48;
    let f = Rationals;
    let q = m.algebra().quiver();
    let n = m.dim().len();
    let mut spaces: Vec<BTreeSet<Vec<Vector>>> = vec![BTreeSet::new(); n];
    let key = |v: Vec<Vector>, d: usize| -> Vec<Vector> { span_basis(&f, d, &v) };
    for x in 0..n {
        let d = m.dim()[x];
        if d > 0 {
            let full: Vec<Vector> = (0..d).map(|i| unit(d, i)).collect();
            spaces[x].insert(key(full, d));
        }
    }
    for _ in 0..ROUNDS {
        let snapshot = spaces.clone();
        for (a, arrow) in q.arrows().iter().enumerate() {
            let (t, h) = (arrow.tail, arrow.head);
            let (dt, dh) = (m.dim()[t], m.dim()[h]);
            let mat = m.mat(a);
            for w in &snapshot[t] {
                let img: Vec<Vector> = w.iter().map(|v| mat.mul_vec(&f, v).expect("shape")).collect();
                let img = key(img, dh);
                if !img.is_empty() && spaces[h].len() < CAP {
                    spaces[h].insert(img);
                }
            }
            for w in &snapshot[h] {
                let pre = key(preimage(mat, w, dt), dt);
                if !pre.is_empty() && spaces[t].len() < CAP {
                    spaces[t].insert(pre);
                }
            }
        }
        for x in 0..n {
            let list: Vec<Vec<Vector>> = spaces[x].iter().cloned().collect();
            for (i, u) in list.iter().enumerate() {
                for w in &list[i + 1..] {
                    let c = crate::linalg::intersect(&f, m.dim()[x], u, w);
                    if !c.is_empty() && spaces[x].len() < CAP {
                        spaces[x].insert(c);
                    }
                }
            }
        }
    }
    let mut out: Vec<(usize, Vec<Vector>)> = spaces
        .into_iter()
        .enumerate()
        .flat_map(|(x, s)| s.into_iter().map(move |w| (x, w)))
        .collect();
    out.sort_by_key(|(x, w)| (w.len(), *x));
    out
}

fn unit(d: usize, i: usize) -> Vector {
    let f = Rationals;
    (0..d).map(|j| if i == j { f.one() } else { f.zero() }).collect()
}

/// `{u : M u ∈ span(w)}`.
fn preimage(mat: &QMatrix, w: &[Vector], dt: usize) -> Vec<Vector> {
    let f = Rationals;
    let mut cols: Vec<Vector> = (0..dt).map(|j| mat.column(j)).collect();
    cols.extend(w.iter().map(|v| v.iter().map(|x| f.neg(x)).collect()));
    let sys = Matrix::from_columns(mat.rows(), &cols);
    nullspace(&f, &sys)
        .into_iter()
        .map(|k| k[..dt].to_vec())
        .collect()
}

/// A random endomorphism killing a random vector of a small invariant
/// subspace. On an isotypic module `S^m` such a subspace looks like
/// `Q^m ⊗ U` with `dim U < m`, so the annihilator contains singular
/// elements that are not nilpotent.
fn annihilator_element(
    m: &QRep,
    end: &EndBasis,
    lattice: &[(usize, Vec<Vector>)],
    attempt: usize,
    rng: &mut ChaCha8Rng,
) -> Option<HomMap<BigRational>> {
    let f = Rationals;
    let (x, w) = lattice.get(attempt % lattice.len().max(1))?;
    let v: Vector = w.iter().fold(vec![f.zero(); m.dim()[*x]], |acc, b| {
        let c = f.from_i64(rng.gen_range(-COEFF_RANGE..=COEFF_RANGE));
        acc.iter().zip(b).map(|(a, bi)| a + &c * bi).collect()
    });
    if v.iter().all(|c| f.is_zero(c)) {
        return None;
    }
    let images: Vec<Vector> = end
        .basis
        .iter()
        .map(|phi| phi[*x].mul_vec(&f, &v).expect("shape"))
        .collect();
    let ker = nullspace(&f, &Matrix::from_columns(m.dim()[*x], &images));
    if ker.is_empty() {
        return None;
    }
    let coeffs: Vec<BigRational> = ker.iter().fold(vec![f.zero(); end.dim()], |acc, k| {
        let c = f.from_i64(rng.gen_range(-COEFF_RANGE..=COEFF_RANGE));
        acc.iter().zip(k).map(|(a, ki)| a + &c * ki).collect()
    });
    Some(end.combination(&coeffs))
}

/// Randomized indecomposability test with `attempts` random endomorphisms.
pub fn is_indecomposable(m: &QRep, seed: u64, attempts: usize) -> Result<Certificate> {
    if m.total_dim() == 0 {
        return Ok(Certificate::Decomposable {
            idempotent: m.dim().0.iter().map(|_| QMatrix::zeros(&Rationals, 0, 0)).collect(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match analyse(m, &mut rng, attempts)? {
        Some(Analysis::Indecomposable(e)) => Certificate::Indecomposable { residue_degree: e },
        Some(Analysis::Split(parts)) => Certificate::Decomposable {
            idempotent: projection(m, &parts),
        },
        None => Certificate::Inconclusive,
    })
}

/// Projection onto the first part along the others.
fn projection(m: &QRep, parts: &[Graded]) -> HomMap<BigRational> {
    let f = Rationals;
    (0..m.dim().len())
        .map(|x| {
            let d = m.dim()[x];
            let cols: Vec<Vector> = parts.iter().flat_map(|p| p[x].iter().cloned()).collect();
            let basis = Matrix::from_columns(d, &cols);
            let keep = parts[0][x].len();
            let diag = Matrix::from_fn(d, d, |i, j| if i == j && i < keep { f.one() } else { f.zero() });
            let inv = crate::linalg::inverse(&f, &basis).expect("parts span M(x)");
            basis.mul(&f, &diag).and_then(|p| p.mul(&f, &inv)).expect("square")
        })
        .collect()
}

/// Searches `Hom(M, N)` for an isomorphism. A `true` answer is certain; a
/// `false` one can be wrong only if every random trial hit a singular map.
pub fn is_isomorphic(m: &QRep, n: &QRep, trials: usize, seed: u64) -> Result<bool> {
    if !m.same_algebra(n) {
        return Err(Error::InvalidInput("modules over different algebras".into()));
    }
    if m.dim() != n.dim() || m.rank_sequence() != n.rank_sequence() {
        return Ok(false);
    }
    if m.total_dim() == 0 {
        return Ok(true);
    }
    let basis = hom_space(m, n)?;
    if basis.is_empty() {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = Rationals;
    for _ in 0..trials.max(1) {
        let coeffs: Vec<BigRational> = (0..basis.len())
            .map(|_| f.from_i64(rng.gen_range(-1000..=1000)))
            .collect();
        let phi = combine(&basis, &coeffs);
        let invertible = phi
            .iter()
            .all(|p| p.rows() == 0 || !f.is_zero(&determinant(&f, p).expect("square")));
        if invertible {
            return Ok(true);
        }
    }
    Ok(false)
}
