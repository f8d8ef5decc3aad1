//! Brute-force oracles for the `biserial` acceptance suite.
//!
//! Everything here is deliberately naive: representation tuples are
//! enumerated entry by entry and relations are evaluated by plain matrix
//! products mod `p`. Nothing calls into the formulas being checked.

use std::collections::BTreeSet;
use std::fmt::Display;

use biserial::field::PrimeField;
use biserial::quiver::{BoundQuiver, DimVector};
use biserial::repvar::Representation;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub mod corpus;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("BudgetExceeded: {0}")]
    BudgetExceeded(String),
    #[error("too few samples: need at least 3 distinct primes, got {0}")]
    TooFewSamples(usize),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type OracleResult<T> = std::result::Result<T, OracleError>;

/// One oracle-versus-formula comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub instance: String,
    pub oracle: String,
    pub formula: String,
    pub agree: bool,
}

impl OracleReport {
    pub fn compare<T: PartialEq + Display>(instance: impl Into<String>, oracle: &T, formula: &T) -> Self {
        Self {
            instance: instance.into(),
            oracle: oracle.to_string(),
            formula: formula.to_string(),
            agree: oracle == formula,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = if self.agree { "ok" } else { "MISMATCH" };
        write!(f, "{mark} {}: oracle={} formula={}", self.instance, self.oracle, self.formula)
    }
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|k| k * k <= q).all(|k| !q.is_multiple_of(k))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Dense matrix over F_p used only inside the oracle.
#[derive(Clone, Debug)]
struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Mat {
    fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        (0..n).for_each(|i| data[i * n + i] = 1);
        Self { rows: n, cols: n, data }
    }

    /// `self * rhs`
    fn mul(&self, rhs: &Mat, p: u64) -> Mat {
        let mut data = vec![0; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cell = &mut data[i * rhs.cols + j];
                    *cell = (*cell + a * rhs.data[k * rhs.cols + j]) % p;
                }
            }
        }
        Mat { rows: self.rows, cols: rhs.cols, data }
    }
}

/// A relation reduced mod `p`: scalar times arrow path, first-applied first.
type ModRelation = Vec<(u64, Vec<usize>)>;

fn reduce_relations(bq: &BoundQuiver, p: u64) -> OracleResult<Vec<ModRelation>> {
    let pi = p as i64;
    bq.relations()
        .iter()
        .map(|rel| {
            rel.terms()
                .iter()
                .map(|(c, path)| {
                    let to_mod = |x: &num_bigint::BigInt| {
                        let r = (x % pi).to_i64().expect("fits after reduction");
                        r.rem_euclid(pi) as u64
                    };
                    let den = to_mod(c.denom());
                    if den == 0 {
                        return Err(OracleError::InvalidInput(format!(
                            "relation coefficient {c} is undefined mod {p}"
                        )));
                    }
                    let coeff = to_mod(c.numer()) * pow_mod(den, p - 2, p) % p;
                    Ok((coeff, path.arrows().to_vec()))
                })
                .collect()
        })
        .collect()
}

/// Every tuple of matrices over F_q with dimension vector `d` satisfying the
/// relations of `bq`. Each point is flattened arrow by arrow (in arrow order),
/// each matrix row-major with `d(head)` rows; the list is sorted.
///
/// `budget` bounds the number of raw tuples `q^(sum d(ha) d(ta))` inspected.
pub fn exhaustive_rep_enumeration(
    bq: &BoundQuiver,
    d: &DimVector,
    q: u64,
    budget: u64,
) -> OracleResult<Vec<Vec<u32>>> {
    if !is_prime(q) {
        return Err(OracleError::InvalidInput(format!("{q} is not prime")));
    }
    let quiver = bq.quiver();
    if d.len() != quiver.num_vertices() {
        return Err(OracleError::InvalidInput(format!(
            "dimension vector has {} entries, quiver has {} vertices",
            d.len(),
            quiver.num_vertices()
        )));
    }
    let shapes: Vec<(usize, usize)> = quiver.arrows().iter().map(|a| (d.0[a.head], d.0[a.tail])).collect();
    let entries: u32 = shapes
        .iter()
        .map(|&(r, c)| r * c)
        .sum::<usize>()
        .try_into()
        .map_err(|_| OracleError::BudgetExceeded("too many matrix entries".into()))?;
    let total = q
        .checked_pow(entries)
        .filter(|&t| t <= budget)
        .ok_or_else(|| OracleError::BudgetExceeded(format!("{q}^{entries} tuples exceed budget {budget}")))?;
    let relations = reduce_relations(bq, q)?;

    let mut points: Vec<Vec<u32>> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut digits = Vec::with_capacity(entries as usize);
            let mut c = code;
            for _ in 0..entries {
                digits.push(c % q);
                c /= q;
            }
            let mut offset = 0;
            let mats: Vec<Mat> = shapes
                .iter()
                .map(|&(rows, cols)| {
                    let m = Mat { rows, cols, data: digits[offset..offset + rows * cols].to_vec() };
                    offset += rows * cols;
                    m
                })
                .collect();
            let holds = relations.iter().all(|rel| {
                let mut sum: Option<Mat> = None;
                for (coeff, path) in rel {
                    let start = d.0[quiver.arrow(path[0]).tail];
                    let prod = path.iter().fold(Mat::identity(start), |acc, &a| mats[a].mul(&acc, q));
                    sum = Some(match sum {
                        None => Mat { data: prod.data.iter().map(|x| x * coeff % q).collect(), ..prod },
                        Some(mut s) => {
                            s.data.iter_mut().zip(&prod.data).for_each(|(x, y)| *x = (*x + y * coeff) % q);
                            s
                        }
                    });
                }
                sum.is_none_or(|s| s.data.iter().all(|&x| x == 0))
            });
            holds.then(|| digits.iter().map(|&x| x as u32).collect())
        })
        .collect();
    points.sort();
    Ok(points)
}

/// Every subspace of `F_p^n` as its full set of vectors, found by adjoining
/// one vector at a time to subspaces already found.
fn naive_subspaces(n: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
    let vectors: Vec<Vec<u64>> = (0..p.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let x = c % p;
                    c /= p;
                    x
                })
                .collect()
        })
        .collect();
    let zero: BTreeSet<Vec<u64>> = BTreeSet::from([vec![0u64; n]]);
    let mut found = BTreeSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(s) = frontier.pop() {
        for v in vectors.iter().filter(|v| !s.contains(*v)) {
            let mut bigger = s.clone();
            for w in &s {
                for k in 1..p {
                    bigger.insert(w.iter().zip(v).map(|(a, b)| (a + k * b) % p).collect());
                }
            }
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    found.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Dimension vectors of all subrepresentations, by listing every tuple of
/// vertex subspaces and testing arrow invariance element by element.
pub fn naive_subrep_dim_vectors(
    m: &Representation<PrimeField>,
    budget: u64,
) -> OracleResult<BTreeSet<DimVector>> {
    let p = m.field().modulus();
    let d = &m.dim().0;
    let lists: Vec<Vec<Vec<Vec<u64>>>> = d.iter().map(|&n| naive_subspaces(n, p)).collect();
    let tuples = lists.iter().try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64));
    let total = tuples
        .filter(|&t| t <= budget)
        .ok_or_else(|| OracleError::BudgetExceeded(format!("more than {budget} subspace tuples")))?;
    let q = m.algebra().quiver();
    let apply = |a: usize, v: &[u64]| -> Vec<u64> {
        let mat = m.mat(a);
        (0..mat.rows())
            .map(|i| mat.row(i).iter().zip(v).map(|(x, y)| x * y % p).sum::<u64>() % p)
            .collect()
    };
    let mut out = BTreeSet::new();
    for code in 0..total {
        let mut c = code;
        let pick: Vec<&Vec<Vec<u64>>> = lists
            .iter()
            .map(|l| {
                let i = (c % l.len() as u64) as usize;
                c /= l.len() as u64;
                &l[i]
            })
            .collect();
        let invariant = q.arrows().iter().enumerate().all(|(a, arrow)| {
            pick[arrow.tail].iter().all(|v| pick[arrow.head].contains(&apply(a, v)))
        });
        if invariant {
            let dims = pick
                .iter()
                .map(|s| (s.len() as f64).log(p as f64).round() as usize)
                .collect();
            out.insert(DimVector(dims));
        }
    }
    Ok(out)
}

/// Outcome of reading a dimension off point counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionFit {
    /// Degree estimated from the growth between the two largest primes.
    pub estimate: usize,
    /// Integer coefficients (constant term first) of the interpolating
    /// polynomial, present when the data determines it.
    pub exact: Option<Vec<i64>>,
    pub expected: usize,
    pub agrees: bool,
}

/// Compares the growth of `N_q` with `expected`.
///
/// The degree estimate is `round(log(N_q'/N_q) / log(q'/q))` over the two
/// largest primes. When that estimate is at most `k - 2` for `k` samples the
/// interpolating polynomial through all samples is overdetermined; it must
/// then have integer coefficients and degree equal to the estimate.
pub fn dimension_from_counts(counts: &[(u64, u64)], expected: usize) -> OracleResult<DimensionFit> {
    let mut samples = counts.to_vec();
    samples.sort();
    samples.dedup();
    if samples.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(OracleError::Inconsistent("two different counts for the same prime".into()));
    }
    if samples.len() < 3 {
        return Err(OracleError::TooFewSamples(samples.len()));
    }
    if let Some(&(q, _)) = samples.iter().find(|(q, _)| !is_prime(*q)) {
        return Err(OracleError::InvalidInput(format!("{q} is not prime")));
    }
    if samples.iter().any(|&(_, n)| n == 0) {
        return Err(OracleError::Inconsistent("a variety through the origin has at least one point".into()));
    }
    if samples.windows(2).any(|w| w[1].1 < w[0].1) {
        return Err(OracleError::Inconsistent("counts decrease as q grows".into()));
    }
    let k = samples.len();
    let (q0, n0) = samples[k - 2];
    let (q1, n1) = samples[k - 1];
    let slope = (n1 as f64 / n0 as f64).ln() / (q1 as f64 / q0 as f64).ln();
    let estimate = slope.round().max(0.0) as usize;

    let exact = if estimate + 2 <= k {
        let coeffs = interpolate(&samples);
        let integral = coeffs.iter().all(|&(num, den)| num % den == 0);
        let ints: Vec<i64> = coeffs.iter().map(|&(num, den)| (num / den) as i64).collect();
        let degree = ints.iter().rposition(|&c| c != 0).unwrap_or(0);
        if !integral || degree != estimate {
            return Err(OracleError::Inconsistent(format!(
                "counts are not a polynomial of degree {estimate} in q"
            )));
        }
        Some(ints[..=degree].to_vec())
    } else {
        None
    };
    Ok(DimensionFit { estimate, exact, expected, agrees: estimate == expected })
}

/// Newton interpolation over Q with `i128` fractions; returns monomial
/// coefficients as reduced `(num, den)` pairs, constant term first.
fn interpolate(samples: &[(u64, u64)]) -> Vec<(i128, i128)> {
    fn norm((n, d): (i128, i128)) -> (i128, i128) {
        let g = gcd(n.abs(), d.abs()).max(1);
        let s = if d < 0 { -1 } else { 1 };
        (s * n / g, s * d / g)
    }
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let add = |a: (i128, i128), b: (i128, i128)| norm((a.0 * b.1 + b.0 * a.1, a.1 * b.1));
    let mul = |a: (i128, i128), b: (i128, i128)| norm((a.0 * b.0, a.1 * b.1));

    let xs: Vec<i128> = samples.iter().map(|&(q, _)| q as i128).collect();
    let mut dd: Vec<(i128, i128)> = samples.iter().map(|&(_, n)| (n as i128, 1)).collect();
    let k = xs.len();
    for level in 1..k {
        for i in (level..k).rev() {
            let num = add(dd[i], (-dd[i - 1].0, dd[i - 1].1));
            dd[i] = norm((num.0, num.1 * (xs[i] - xs[i - level])));
        }
    }
    // Horner on the Newton form.
    let mut poly: Vec<(i128, i128)> = vec![dd[k - 1]];
    for i in (0..k - 1).rev() {
        let mut next = vec![(0, 1); poly.len() + 1];
        for (j, &c) in poly.iter().enumerate() {
            next[j + 1] = add(next[j + 1], c);
            next[j] = add(next[j], mul(c, (-xs[i], 1)));
        }
        next[0] = add(next[0], dd[i]);
        poly = next;
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use biserial::quiver::catalog;

    #[test]
    fn enumeration_examples() {
        let k = catalog::kronecker();
        assert_eq!(exhaustive_rep_enumeration(&k, &DimVector(vec![1, 1]), 2, 1 << 20).unwrap().len(), 4);
        let c2 = catalog::cyclic(2);
        assert_eq!(exhaustive_rep_enumeration(&c2, &DimVector(vec![1, 1]), 2, 1 << 20).unwrap().len(), 3);
        let t = catalog::two_loops();
        assert_eq!(exhaustive_rep_enumeration(&t, &DimVector(vec![0]), 5, 1).unwrap(), vec![Vec::<u32>::new()]);
        assert!(matches!(
            exhaustive_rep_enumeration(&k, &DimVector(vec![3, 3]), 2, 1000),
            Err(OracleError::BudgetExceeded(_))
        ));
        assert!(exhaustive_rep_enumeration(&k, &DimVector(vec![1, 1]), 4, 100).is_err());
    }

    #[test]
    fn square_zero_two_by_two() {
        // A^2 = 0 on F_q^2: the zero matrix plus q^2 - 1 rank-one nilpotents.
        let one_loop = catalog::cyclic(1);
        for q in [2, 3] {
            let n = exhaustive_rep_enumeration(&one_loop, &DimVector(vec![2]), q, 1 << 20).unwrap().len();
            assert_eq!(n as u64, q * q);
        }
    }

    #[test]
    fn fit_examples() {
        let f = dimension_from_counts(&[(2, 4), (3, 9), (5, 25)], 2).unwrap();
        assert!(f.agrees);
        let f = dimension_from_counts(&[(2, 1), (3, 1), (5, 1)], 0).unwrap();
        assert_eq!(f.exact, Some(vec![1]));
        assert!(f.agrees);
        assert_eq!(dimension_from_counts(&[(2, 4)], 2), Err(OracleError::TooFewSamples(1)));
        let f = dimension_from_counts(&[(2, 2), (3, 3), (5, 5)], 1).unwrap();
        assert_eq!(f.exact, Some(vec![0, 1]));
        let f = dimension_from_counts(&[(2, 10), (3, 33), (5, 145)], 2).unwrap();
        assert_eq!(f.estimate, 3);
        assert!(!f.agrees);
        assert!(dimension_from_counts(&[(2, 2), (3, 4), (5, 5)], 1).is_err());
        assert!(dimension_from_counts(&[(2, 0), (3, 4), (5, 5)], 1).is_err());
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let p = |q: i128| q * q * q + q * q - q;
        let s: Vec<(u64, u64)> = [2, 3, 5, 7].iter().map(|&q| (q as u64, p(q) as u64)).collect();
        assert_eq!(interpolate(&s), vec![(0, 1), (-1, 1), (1, 1), (1, 1)]);
    }

    #[test]
    fn naive_subspace_counts() {
        assert_eq!(naive_subspaces(2, 2).len(), 5);
        assert_eq!(naive_subspaces(3, 2).len(), 16);
        assert_eq!(naive_subspaces(2, 3).len(), 6);
        assert_eq!(naive_subspaces(0, 5).len(), 1);
    }

    #[test]
    fn report_flag_tracks_values() {
        let r = OracleReport::compare("x", &3, &3);
        assert!(r.agree);
        assert!(!OracleReport::compare("x", &3, &4).agree);
        assert!(r.to_json().contains("\"agree\":true"));
    }
}
