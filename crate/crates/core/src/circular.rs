//! Varieties of circular complexes `Comp(n)`: tuples of matrices
//! `A_i : K^{n_i} -> K^{n_{i+1}}` (indices mod `l`) with `A_{i+1} A_i = 0`,
//! and their rank-bounded subvarieties `Comp(n, r)`.

use std::sync::atomic::{AtomicU64, Ordering};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::linalg::{Matrix, QMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycleShape {
    n: Vec<usize>,
}

impl CycleShape {
    pub fn new(n: Vec<usize>) -> Result<Self> {
        if n.is_empty() {
            return Err(Error::InvalidInput("a cycle has at least one vertex".into()));
        }
        if n.contains(&0) {
            return Err(Error::InvalidInput("cycle dimensions must be positive".into()));
        }
        Ok(Self { n })
    }

    /// Shape that may contain zero dimensions, as arises when a dimension
    /// vector is restricted to one cycle of a larger quiver.
    pub(crate) fn allowing_zero(n: Vec<usize>) -> Self {
        assert!(!n.is_empty());
        Self { n }
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.n.len()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.n.len() - 1) % self.n.len()
    }
}

/// Per-arrow ranks `r_i` of `A_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankSeq(pub Vec<usize>);

impl RankSeq {
    pub fn zero(l: usize) -> Self {
        Self(vec![0; l])
    }
}

fn check_len(shape: &CycleShape, r: &[usize]) -> Result<()> {
    if r.len() != shape.len() {
        return Err(Error::ShapeMismatch(format!(
            "rank sequence of length {} for a cycle of length {}",
            r.len(),
            shape.len()
        )));
    }
    Ok(())
}

/// `r_{i-1} + r_i <= n_i` for every `i` (for `l = 1`: `2 r_0 <= n_0`).
pub fn is_rank_sequence(shape: &CycleShape, r: &[usize]) -> Result<bool> {
    check_len(shape, r)?;
    Ok((0..shape.len()).all(|i| r[shape.prev(i)] + r[i] <= shape.n[i]))
}

fn require_valid(shape: &CycleShape, r: &RankSeq) -> Result<()> {
    if !is_rank_sequence(shape, &r.0)? {
        return Err(Error::InvalidRankSequence(format!(
            "{:?} violates r_(i-1) + r_i <= n_i for n = {:?}",
            r.0, shape.n
        )));
    }
    Ok(())
}

/// All coordinatewise-maximal rank sequences, sorted lexicographically.
pub fn maximal_rank_sequences(shape: &CycleShape) -> Vec<RankSeq> {
    maximal_rank_sequences_with(shape, &vec![false; shape.len()])
}

/// Maximal rank sequences subject to `r_i = 0` wherever `zero[i]` holds.
pub fn maximal_rank_sequences_with(shape: &CycleShape, zero: &[bool]) -> Vec<RankSeq> {
    let all = valid_rank_sequences_with(shape, zero);
    let mut out: Vec<RankSeq> = all
        .iter()
        .filter(|r| !all.iter().any(|s| s != *r && leq(&r.0, &s.0)))
        .cloned()
        .collect();
    out.sort();
    out
}

/// Every valid rank sequence (all entries `r_i <= min(n_i, n_{i+1})`).
pub fn valid_rank_sequences(shape: &CycleShape) -> Vec<RankSeq> {
    valid_rank_sequences_with(shape, &vec![false; shape.len()])
}

fn valid_rank_sequences_with(shape: &CycleShape, zero: &[bool]) -> Vec<RankSeq> {
    let l = shape.len();
    let bounds: Vec<usize> = (0..l)
        .map(|i| {
            if zero[i] {
                0
            } else {
                shape.n[i].min(shape.n[shape.next(i)])
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0; l];
    loop {
        if is_rank_sequence(shape, &cur).expect("length") {
            out.push(RankSeq(cur.clone()));
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == l {
                return out;
            }
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

fn leq(a: &[usize], b: &[usize]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `Σ_i (r_{i-1} + r_i)(n_i - r_{i-1})`.
pub fn dim_comp(shape: &CycleShape, r: &RankSeq) -> Result<usize> {
    require_valid(shape, r)?;
    Ok((0..shape.len())
        .map(|i| {
            let p = r.0[shape.prev(i)];
            (p + r.0[i]) * (shape.n[i] - p)
        })
        .sum())
}

/// Multiplicities `(t, s)` of `E_{i,i+1}` and `S_i` in `M⁰(n, r)`:
/// `t_i = r_i`, `s_i = n_i - r_i - r_{i-1}`.
pub fn indecomposable_multiplicities(
    shape: &CycleShape,
    r: &RankSeq,
) -> Result<(Vec<usize>, Vec<usize>)> {
    require_valid(shape, r)?;
    let s = (0..shape.len())
        .map(|i| shape.n[i] - r.0[i] - r.0[shape.prev(i)])
        .collect();
    Ok((r.0.clone(), s))
}

/// `M⁰(n, r) = ⊕ E_{i,i+1}^{r_i} ⊕ ⊕ S_i^{k_i}` as matrices `A_0, ..., A_{l-1}`.
///
/// At position `i` the basis is ordered as: the `r_i` starting vectors of
/// the `E_{i,i+1}` summands, the `r_{i-1}` end vectors of the `E_{i-1,i}`
/// summands, then the simples. For `l = 1` the two halves of each `E`
/// live at the same vertex and form a nilpotent Jordan block `J_{2,0}`.
pub fn build_m0(shape: &CycleShape, r: &RankSeq) -> Result<Vec<QMatrix>> {
    let one = BigRational::one();
    witness(shape, r, r, &one)
}

/// The degeneration family `⊕E^{r'} ⊕ S^{n-r-r_prev} ⊕ E(λ)^{r-r'}`: isomorphic
/// to `M⁰(n, r)` for `λ != 0` and equal to `M⁰(n, r')` at `λ = 0`.
pub fn degeneration_path(
    shape: &CycleShape,
    r: &RankSeq,
    target: &RankSeq,
    lambda: &BigRational,
) -> Result<Vec<QMatrix>> {
    require_valid(shape, r)?;
    require_valid(shape, target)?;
    if !leq(&target.0, &r.0) {
        return Err(Error::NotComparable(format!(
            "{:?} is not below {:?} coordinatewise",
            target.0, r.0
        )));
    }
    witness(shape, r, target, lambda)
}

fn witness(
    shape: &CycleShape,
    r: &RankSeq,
    keep: &RankSeq,
    lambda: &BigRational,
) -> Result<Vec<QMatrix>> {
    require_valid(shape, r)?;
    let f = Rationals;
    Ok((0..shape.len())
        .map(|i| {
            let j = shape.next(i);
            let mut a = Matrix::zeros(&f, shape.n[j], shape.n[i]);
            for k in 0..r.0[i] {
                let v = if k < keep.0[i] { BigRational::one() } else { lambda.clone() };
                if !v.is_zero() {
                    a.set(r.0[j] + k, k, v);
                }
            }
            a
        })
        .collect())
}

/// `r1 <= r2` coordinatewise.
pub fn closure_leq(r1: &RankSeq, r2: &RankSeq) -> Result<bool> {
    if r1.0.len() != r2.0.len() {
        return Err(Error::ShapeMismatch("rank sequences of different lengths".into()));
    }
    Ok(leq(&r1.0, &r2.0))
}

/// Work limit for the finite-field enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountBudget {
    /// Largest number of candidate matrices generated for a single arrow.
    pub max_matrices: u64,
    /// Largest number of partial tuples visited.
    pub max_nodes: u64,
}

impl Default for CountBudget {
    fn default() -> Self {
        Self {
            max_matrices: 1 << 20,
            max_nodes: 200_000_000,
        }
    }
}

/// Small dense matrix over `F_q` with entries in `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl FqMatrix {
    fn mul_is_zero(&self, rhs: &FqMatrix, q: u32) -> bool {
        // self * rhs, where self is rows x cols and rhs is cols x rhs.cols
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0u32;
                for k in 0..self.cols {
                    acc = (acc + self.data[i * self.cols + k] * rhs.data[k * rhs.cols + j]) % q;
                }
                if acc != 0 {
                    return false;
                }
            }
        }
        true
    }

    pub fn rank(&self, q: u32) -> usize {
        let mut a = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            for k in 0..cols {
                a.swap(r * cols + k, p * cols + k);
            }
            let inv = inv_mod(a[r * cols + c], q);
            for i in 0..rows {
                if i != r && a[i * cols + c] != 0 {
                    let f = a[i * cols + c] * inv % q;
                    for k in 0..cols {
                        a[i * cols + k] = (a[i * cols + k] + q * q - f * a[r * cols + k]) % q;
                    }
                }
            }
            r += 1;
            if r == rows {
                break;
            }
        }
        r
    }
}

fn inv_mod(a: u32, q: u32) -> u32 {
    (1..q).find(|x| a * x % q == 1).expect("unit")
}

fn matrices_of_rank_at_most(
    rows: usize,
    cols: usize,
    rank: usize,
    q: u32,
    budget: &CountBudget,
) -> Result<Vec<FqMatrix>> {
    let entries = rows * cols;
    let total = (q as u64).checked_pow(entries as u32).filter(|&t| t <= budget.max_matrices);
    let Some(total) = total else {
        return Err(Error::BudgetExceeded(format!(
            "{q}^{entries} candidate {rows}x{cols} matrices exceed the budget of {}",
            budget.max_matrices
        )));
    };
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let data: Vec<u32> = (0..entries)
            .map(|_| {
                let d = (c % q as u64) as u32;
                c /= q as u64;
                d
            })
            .collect();
        let m = FqMatrix { rows, cols, data };
        if m.rank(q) <= rank {
            out.push(m);
        }
    }
    Ok(out)
}

fn check_prime(q: u64) -> Result<u32> {
    if !crate::field::is_prime(q) || q > 251 {
        return Err(Error::InvalidInput(format!(
            "point counts are over prime fields F_q with q <= 251; got {q}"
        )));
    }
    Ok(q as u32)
}

/// Walks every tuple in `Comp(n, r)(F_q)`, calling `visit` on complete tuples.
/// Parallel over the first arrow; `visit` must be thread-safe.
fn walk<V>(shape: &CycleShape, r: &RankSeq, q: u32, budget: &CountBudget, visit: V) -> Result<()>
where
    V: Fn(&[&FqMatrix]) + Sync,
{
    require_valid(shape, r)?;
    let l = shape.len();
    let lists: Vec<Vec<FqMatrix>> = (0..l)
        .map(|i| matrices_of_rank_at_most(shape.n[shape.next(i)], shape.n[i], r.0[i], q, budget))
        .collect::<Result<_>>()?;
    let nodes = AtomicU64::new(0);
    let over = || nodes.load(Ordering::Relaxed) > budget.max_nodes;

    fn rec<V: Fn(&[&FqMatrix])>(
        i: usize,
        lists: &[Vec<FqMatrix>],
        q: u32,
        stack: &mut Vec<usize>,
        nodes: &AtomicU64,
        max_nodes: u64,
        visit: &V,
    ) -> bool {
        let l = lists.len();
        if i == l {
            let tuple: Vec<&FqMatrix> = stack.iter().enumerate().map(|(k, &j)| &lists[k][j]).collect();
            visit(&tuple);
            return true;
        }
        for (j, a) in lists[i].iter().enumerate() {
            if nodes.fetch_add(1, Ordering::Relaxed) > max_nodes {
                return false;
            }
            // A_i A_{i-1} = 0
            if i > 0 && !a.mul_is_zero(&lists[i - 1][stack[i - 1]], q) {
                continue;
            }
            // closing condition A_0 A_{l-1} = 0 (for l = 1 this is A_0^2 = 0)
            if i == l - 1 && !lists[0][stack.first().copied().unwrap_or(j)].mul_is_zero(a, q) {
                continue;
            }
            stack.push(j);
            let ok = rec(i + 1, lists, q, stack, nodes, max_nodes, visit);
            stack.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    let first = &lists[0];
    let completed: Vec<bool> = (0..first.len())
        .into_par_iter()
        .map(|j| {
            if over() {
                return false;
            }
            let a = &first[j];
            if l == 1 {
                if a.mul_is_zero(a, q) {
                    visit(&[a]);
                }
                return true;
            }
            let mut stack = vec![j];
            rec(1, &lists, q, &mut stack, &nodes, budget.max_nodes, &visit)
        })
        .collect();
    if completed.iter().all(|&b| b) && !over() {
        Ok(())
    } else {
        Err(Error::BudgetExceeded(format!(
            "more than {} partial tuples visited",
            budget.max_nodes
        )))
    }
}

/// `|Comp(n, r)(F_q)|`.
pub fn count_points(shape: &CycleShape, r: &RankSeq, q: u64) -> Result<u64> {
    count_points_with_budget(shape, r, q, &CountBudget::default())
}

pub fn count_points_with_budget(
    shape: &CycleShape,
    r: &RankSeq,
    q: u64,
    budget: &CountBudget,
) -> Result<u64> {
    let q = check_prime(q)?;
    let count = AtomicU64::new(0);
    walk(shape, r, q, budget, |_| {
        count.fetch_add(1, Ordering::Relaxed);
    })?;
    Ok(count.into_inner())
}

/// Every point of `Comp(n, r)(F_q)`, each tuple flattened to its entries
/// (arrows in cycle order, row-major), sorted.
pub fn enumerate_points(
    shape: &CycleShape,
    r: &RankSeq,
    q: u64,
    budget: &CountBudget,
) -> Result<Vec<Vec<u32>>> {
    let q = check_prime(q)?;
    let found = std::sync::Mutex::new(Vec::new());
    walk(shape, r, q, budget, |tuple| {
        let flat: Vec<u32> = tuple.iter().flat_map(|m| m.data.iter().copied()).collect();
        found.lock().expect("poisoned").push(flat);
    })?;
    let mut out = found.into_inner().expect("poisoned");
    out.sort();
    Ok(out)
}

/// Rank of each `A_i` over Q.
pub fn rank_sequence_of(mats: &[QMatrix]) -> RankSeq {
    RankSeq(mats.iter().map(|m| Rationals.rank(m)).collect())
}
