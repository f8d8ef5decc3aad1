//! The special biserial, gentle and complete gentle axioms.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::BoundQuiver;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { axiom: &'static str, witness: String },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    fn fail(axiom: &'static str, witness: String) -> Self {
        Verdict::Fail { axiom, witness }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "yes"),
            Verdict::Fail { axiom, witness } => write!(f, "no ({axiom}: {witness})"),
        }
    }
}

/// Checks SB1 and SB2. Only monomial relations of length two are supported.
pub fn check_special_biserial(bq: &BoundQuiver) -> Result<Verdict> {
    let Some(pairs) = bq.zero_pairs() else {
        return Err(Error::NonMonomialRelations(format!(
            "'{}' has a relation that is not a path of length two",
            bq.name()
        )));
    };
    Ok(degree_bound(bq).unwrap_or_else(|| sb2(bq, &pairs)))
}

fn degree_bound(bq: &BoundQuiver) -> Option<Verdict> {
    let q = bq.quiver();
    for v in 0..q.num_vertices() {
        let name = q.vertex_name(v);
        if q.in_arrows(v).len() > 2 {
            return Some(Verdict::fail("SB1", format!("more than two arrows end at vertex {name}")));
        }
        if q.out_arrows(v).len() > 2 {
            return Some(Verdict::fail("SB1", format!("more than two arrows start at vertex {name}")));
        }
    }
    None
}

fn sb2(bq: &BoundQuiver, pairs: &BTreeSet<(usize, usize)>) -> Verdict {
    let q = bq.quiver();
    for a in 0..q.num_arrows() {
        let arrow = q.arrow(a);
        // arrows b with a*b nonzero
        let before: Vec<usize> = q
            .in_arrows(arrow.tail)
            .into_iter()
            .filter(|&b| !pairs.contains(&(b, a)))
            .collect();
        if before.len() > 1 {
            return Verdict::fail(
                "SB2",
                format!(
                    "{0}*{1} and {0}*{2} are both nonzero",
                    q.arrow_name(a),
                    q.arrow_name(before[0]),
                    q.arrow_name(before[1])
                ),
            );
        }
        let after: Vec<usize> = q
            .out_arrows(arrow.head)
            .into_iter()
            .filter(|&c| !pairs.contains(&(a, c)))
            .collect();
        if after.len() > 1 {
            return Verdict::fail(
                "SB2",
                format!(
                    "{1}*{0} and {2}*{0} are both nonzero",
                    q.arrow_name(a),
                    q.arrow_name(after[0]),
                    q.arrow_name(after[1])
                ),
            );
        }
    }
    Verdict::Pass
}

/// Checks G3, SB1, G1, G2 and SB2 (in that order, so a failing
/// "precisely one" condition is reported as such).
pub fn check_gentle(bq: &BoundQuiver) -> Verdict {
    let Some(pairs) = bq.zero_pairs() else {
        return Verdict::fail("G3", "a relation is not a path of length two".into());
    };
    if let Some(v) = degree_bound(bq) {
        return v;
    }
    let q = bq.quiver();
    for v in 0..q.num_vertices() {
        let (ins, outs) = (q.in_arrows(v), q.out_arrows(v));
        if let [a1, a2] = outs[..] {
            for &b in &ins {
                let hits = [(b, a1), (b, a2)].iter().filter(|p| pairs.contains(p)).count();
                if hits != 1 {
                    return Verdict::fail(
                        "G1",
                        format!(
                            "{hits} of {1}*{0}, {2}*{0} are relations",
                            q.arrow_name(b),
                            q.arrow_name(a1),
                            q.arrow_name(a2)
                        ),
                    );
                }
            }
        }
        if let [b1, b2] = ins[..] {
            for &a in &outs {
                let hits = [(b1, a), (b2, a)].iter().filter(|p| pairs.contains(p)).count();
                if hits != 1 {
                    return Verdict::fail(
                        "G2",
                        format!(
                            "{hits} of {0}*{1}, {0}*{2} are relations",
                            q.arrow_name(a),
                            q.arrow_name(b1),
                            q.arrow_name(b2)
                        ),
                    );
                }
            }
        }
    }
    sb2(bq, &pairs)
}

/// Two arrows in and two out at every vertex, and every arrow has exactly
/// one zero composite on each side.
pub fn check_complete_gentle(bq: &BoundQuiver) -> Verdict {
    let Some(pairs) = bq.zero_pairs() else {
        return Verdict::fail("relations", "a relation is not a path of length two".into());
    };
    let q = bq.quiver();
    for v in 0..q.num_vertices() {
        let (i, o) = (q.in_arrows(v).len(), q.out_arrows(v).len());
        if i != 2 || o != 2 {
            return Verdict::fail(
                "degree",
                format!("vertex {} has in-degree {i} and out-degree {o}", q.vertex_name(v)),
            );
        }
    }
    for a in 0..q.num_arrows() {
        let before = pairs.iter().filter(|(_, y)| *y == a).count();
        let after = pairs.iter().filter(|(x, _)| *x == a).count();
        if before != 1 || after != 1 {
            return Verdict::fail(
                "relations",
                format!(
                    "arrow {} has {before} zero composites before it and {after} after it",
                    q.arrow_name(a)
                ),
            );
        }
    }
    Verdict::Pass
}

/// Decides finite-dimensionality for monomial relation sets by looking for
/// a cycle among relation-free path suffixes. `None` for non-monomial relations.
pub fn is_finite_dimensional(bq: &BoundQuiver) -> Option<bool> {
    if !bq.is_monomial() {
        return None;
    }
    let q = bq.quiver();
    let rels: Vec<Vec<usize>> = bq
        .relations()
        .iter()
        .map(|r| r.terms()[0].1.arrows().to_vec())
        .collect();
    let keep = rels.iter().map(Vec::len).max().unwrap_or(2).max(2) - 1;
    let successors = |state: &Vec<usize>| -> Vec<Vec<usize>> {
        let last = *state.last().expect("nonempty");
        q.out_arrows(q.arrow(last).head)
            .into_iter()
            .filter_map(|b| {
                let mut path = state.clone();
                path.push(b);
                if rels.iter().any(|r| path.ends_with(r)) {
                    return None;
                }
                let start = path.len().saturating_sub(keep);
                Some(path[start..].to_vec())
            })
            .collect()
    };
    // iterative DFS with colors: 1 = on stack, 2 = done
    let mut color: HashMap<Vec<usize>, u8> = HashMap::new();
    for a in 0..q.num_arrows() {
        let root = vec![a];
        if color.contains_key(&root) {
            continue;
        }
        let mut stack: Vec<(Vec<usize>, Vec<Vec<usize>>)> = Vec::new();
        color.insert(root.clone(), 1);
        let next = successors(&root);
        stack.push((root, next));
        while let Some((state, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(s) => match color.get(&s) {
                    Some(1) => return Some(false),
                    Some(_) => {}
                    None => {
                        color.insert(s.clone(), 1);
                        let next = successors(&s);
                        stack.push((s, next));
                    }
                },
                None => {
                    color.insert(state.clone(), 2);
                    stack.pop();
                }
            }
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{catalog, Quiver};

    #[test]
    fn special_biserial_examples() {
        assert!(check_special_biserial(&catalog::kronecker()).unwrap().is_pass());
        let star = Quiver::new(
            &["0", "1", "2", "3"],
            &[("a", "0", "1"), ("b", "0", "2"), ("c", "0", "3")],
        )
        .unwrap();
        let v = check_special_biserial(&BoundQuiver::new("star", star, vec![])).unwrap();
        assert!(matches!(v, Verdict::Fail { axiom: "SB1", .. }));
        assert!(check_special_biserial(&catalog::cyclic(1)).unwrap().is_pass());
    }

    #[test]
    fn gentle_examples() {
        assert!(check_gentle(&catalog::kronecker()).is_pass());
        let q = Quiver::new(
            &["1", "2", "3", "4"],
            &[("b1", "1", "2"), ("b2", "3", "2"), ("a", "2", "4")],
        )
        .unwrap();
        let v = check_gentle(&BoundQuiver::new("fork", q, vec![]));
        assert!(matches!(v, Verdict::Fail { axiom: "G2", .. }));
        assert!(check_gentle(&catalog::cyclic(2)).is_pass());
    }

    #[test]
    fn complete_gentle_examples() {
        assert!(check_complete_gentle(&catalog::two_loops()).is_pass());
        assert!(matches!(
            check_complete_gentle(&catalog::cyclic(2)),
            Verdict::Fail { axiom: "degree", .. }
        ));
    }

    #[test]
    fn finite_dimensionality() {
        assert_eq!(is_finite_dimensional(&catalog::kronecker()), Some(true));
        assert_eq!(is_finite_dimensional(&catalog::cyclic(3)), Some(true));
        assert_eq!(is_finite_dimensional(&catalog::two_loops()), Some(false));
        let loop_only = Quiver::new(&["0"], &[("a", "0", "0")]).unwrap();
        assert_eq!(
            is_finite_dimensional(&BoundQuiver::new("loop", loop_only, vec![])),
            Some(false)
        );
        assert_eq!(is_finite_dimensional(&catalog::linear(4, &[])), Some(true));
    }
}
