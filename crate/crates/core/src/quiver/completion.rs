//! Completion of gentle bound quivers to complete gentle ones, and the
//! decomposition of a complete gentle quiver into effective oriented cycles.

use std::collections::BTreeSet;

use super::axioms::{check_complete_gentle, check_gentle, Verdict};
use super::{BoundQuiver, Quiver, Relation};
use crate::error::{Error, Result};

/// A complete gentle bound quiver together with the arrows that were added
/// to reach it. The original algebra is the quotient by the added arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub bound: BoundQuiver,
    pub added: Vec<usize>,
}

impl Completion {
    pub fn is_added(&self, arrow: usize) -> bool {
        self.added.contains(&arrow)
    }
}

/// Adds `2|Q_0| - |Q_1|` arrows and the relations needed to make a gentle
/// bound quiver complete gentle.
///
/// Each round joins the lexicographically smallest pair `(x, y)` with at
/// most one arrow leaving `x` and at most one arrow entering `y`, preferring
/// `x != y`. Relations are then added per vertex until the zero composites
/// through every vertex form a perfect matching between incoming and
/// outgoing arrows; existing relations are never removed.
pub fn complete_gentle_closure(bq: &BoundQuiver) -> Result<Completion> {
    if let Verdict::Fail { axiom, witness } = check_gentle(bq) {
        return Err(Error::NotGentle(format!("{axiom}: {witness}")));
    }
    let mut quiver = bq.quiver().clone();
    let mut pairs = bq.zero_pairs().expect("gentle relations are monomial");
    let mut relations = bq.relations().to_vec();
    let mut added = Vec::new();
    let mut fresh = 1;

    let mut new_pairs: Vec<(usize, usize)> = Vec::new();
    while quiver.num_arrows() < 2 * quiver.num_vertices() {
        let n = quiver.num_vertices();
        let sources: Vec<usize> = (0..n).filter(|&v| quiver.out_arrows(v).len() <= 1).collect();
        let targets: Vec<usize> = (0..n).filter(|&v| quiver.in_arrows(v).len() <= 1).collect();
        let distinct = sources
            .iter()
            .flat_map(|&x| targets.iter().map(move |&y| (x, y)))
            .find(|(x, y)| x != y);
        let (x, y) = match distinct {
            Some(p) => p,
            None => match sources.iter().find(|x| targets.contains(x)) {
                Some(&x) => (x, x),
                None => {
                    return Err(Error::CompletionFailed(
                        "no vertex pair admits a new arrow".into(),
                    ))
                }
            },
        };
        let outs_x = quiver.out_arrows(x);
        let ins_x = quiver.in_arrows(x);
        let outs_y = quiver.out_arrows(y);
        let ins_y = quiver.in_arrows(y);

        while quiver.arrow_id(&format!("w{fresh}")).is_ok() {
            fresh += 1;
        }
        let c = quiver.add_arrow(&format!("w{fresh}"), x, y)?;
        fresh += 1;
        added.push(c);

        match outs_x.first() {
            Some(&a) => {
                for &p in &ins_x {
                    if !pairs.contains(&(p, a)) {
                        new_pairs.push((p, c));
                    }
                }
            }
            None => {
                if let [p, _] = ins_x[..] {
                    new_pairs.push((p, c));
                }
            }
        }
        match ins_y.first() {
            Some(&b) => {
                for &u in &outs_y {
                    if !pairs.contains(&(b, u)) {
                        new_pairs.push((c, u));
                    }
                }
            }
            None => {
                if let [u, _] = outs_y[..] {
                    new_pairs.push((c, u));
                }
            }
        }
        for p in new_pairs.drain(..) {
            push_pair(&quiver, &mut pairs, &mut relations, p)?;
        }
    }

    for v in 0..quiver.num_vertices() {
        let (ins, outs) = (quiver.in_arrows(v), quiver.out_arrows(v));
        let (&[p, q], &[c, d]) = (ins.as_slice(), outs.as_slice()) else {
            return Err(Error::CompletionFailed(format!(
                "vertex {} does not have two incoming and two outgoing arrows",
                quiver.vertex_name(v)
            )));
        };
        let present: BTreeSet<(usize, usize)> = [(p, c), (p, d), (q, c), (q, d)]
            .into_iter()
            .filter(|x| pairs.contains(x))
            .collect();
        let matching = [[(p, c), (q, d)], [(p, d), (q, c)]]
            .into_iter()
            .find(|m| present.iter().all(|x| m.contains(x)))
            .ok_or_else(|| {
                Error::CompletionFailed(format!(
                    "relations through vertex {} cannot be extended to a matching",
                    quiver.vertex_name(v)
                ))
            })?;
        for x in matching {
            push_pair(&quiver, &mut pairs, &mut relations, x)?;
        }
    }

    // The original algebra must stay the quotient by the new arrows.
    let old = bq.quiver().num_arrows();
    if let Some(r) = relations[bq.relations().len()..]
        .iter()
        .find(|r| r.terms()[0].1.arrows().iter().all(|&a| a < old))
    {
        return Err(Error::CompletionFailed(format!(
            "matching would add the relation {} between original arrows",
            r.render(&quiver)
        )));
    }
    let bound = BoundQuiver::new(bq.name(), quiver, relations);
    if let Verdict::Fail { axiom, witness } = check_complete_gentle(&bound) {
        return Err(Error::CompletionFailed(format!("{axiom}: {witness}")));
    }
    Ok(Completion { bound, added })
}

fn push_pair(
    quiver: &Quiver,
    pairs: &mut BTreeSet<(usize, usize)>,
    relations: &mut Vec<Relation>,
    (x, y): (usize, usize),
) -> Result<()> {
    if pairs.insert((x, y)) {
        relations.push(Relation::monomial(quiver, vec![x, y])?);
    }
    Ok(())
}

/// An effective oriented cycle `c_0, ..., c_{l-1}`: each `c_{i+1} c_i`
/// (indices mod `l`) is a relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    pub arrows: Vec<usize>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Vertex at position `i` of the cycle, i.e. the tail of `c_i`.
    pub fn vertex(&self, quiver: &Quiver, i: usize) -> usize {
        quiver.arrow(self.arrows[i]).tail
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        let names: Vec<&str> = self.arrows.iter().map(|&a| quiver.arrow_name(a)).collect();
        format!("({})", names.join(" "))
    }
}

/// Partition of the arrows into effective oriented cycles, each starting
/// at its smallest arrow, ordered by that arrow.
pub fn effective_cycles(bq: &BoundQuiver) -> Result<Vec<Cycle>> {
    if let Verdict::Fail { axiom, witness } = check_complete_gentle(bq) {
        return Err(Error::NotCompleteGentle(format!("{axiom}: {witness}")));
    }
    let pairs = bq.zero_pairs().expect("complete gentle relations are monomial");
    let n = bq.quiver().num_arrows();
    let next: Vec<usize> = (0..n)
        .map(|a| {
            pairs
                .iter()
                .find(|(x, _)| *x == a)
                .map(|&(_, y)| y)
                .expect("one successor")
        })
        .collect();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut arrows = Vec::new();
        let mut a = start;
        while !seen[a] {
            seen[a] = true;
            arrows.push(a);
            a = next[a];
        }
        if a != start {
            return Err(Error::NotCompleteGentle(
                "successor map is not a permutation".into(),
            ));
        }
        cycles.push(Cycle { arrows });
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::catalog;

    fn relation_strings(bq: &BoundQuiver) -> Vec<String> {
        bq.relations().iter().map(|r| r.render(bq.quiver())).collect()
    }

    fn arrow_triples(bq: &BoundQuiver) -> Vec<(String, String, String)> {
        let q = bq.quiver();
        q.arrows()
            .iter()
            .map(|a| {
                (
                    a.name.clone(),
                    q.vertex_name(a.tail).to_string(),
                    q.vertex_name(a.head).to_string(),
                )
            })
            .collect()
    }

    #[test]
    fn completes_cyclic_two() {
        let c = complete_gentle_closure(&catalog::cyclic(2)).unwrap();
        let t = arrow_triples(&c.bound);
        assert_eq!(&t[2], &("w1".into(), "0".into(), "1".into()));
        assert_eq!(&t[3], &("w2".into(), "1".into(), "0".into()));
        assert_eq!(relation_strings(&c.bound)[2..], ["w2*w1", "w1*w2"]);
        let cycles = effective_cycles(&c.bound).unwrap();
        assert_eq!(cycles, vec![Cycle { arrows: vec![0, 1] }, Cycle { arrows: vec![2, 3] }]);
    }

    #[test]
    fn completes_one_loop() {
        let c = complete_gentle_closure(&catalog::cyclic(1)).unwrap();
        assert_eq!(c.added, vec![1]);
        assert_eq!(relation_strings(&c.bound), ["a0*a0", "w1*w1"]);
        assert_eq!(effective_cycles(&c.bound).unwrap().len(), 2);
    }

    #[test]
    fn completes_kronecker() {
        let c = complete_gentle_closure(&catalog::kronecker()).unwrap();
        let t = arrow_triples(&c.bound);
        assert_eq!(&t[2], &("w1".into(), "2".into(), "1".into()));
        assert_eq!(&t[3], &("w2".into(), "2".into(), "1".into()));
        let mut rels = relation_strings(&c.bound);
        rels.sort();
        assert_eq!(rels, ["a*w1", "b*w2", "w1*a", "w2*b"]);
        let cycles = effective_cycles(&c.bound).unwrap();
        assert_eq!(cycles, vec![Cycle { arrows: vec![0, 2] }, Cycle { arrows: vec![1, 3] }]);
    }

    #[test]
    fn two_loop_cycles_and_idempotence() {
        let bq = catalog::two_loops();
        let cycles = effective_cycles(&bq).unwrap();
        assert_eq!(cycles, vec![Cycle { arrows: vec![0] }, Cycle { arrows: vec![1] }]);
        let c = complete_gentle_closure(&bq).unwrap();
        assert!(c.added.is_empty());
        assert_eq!(c.bound, bq);
    }

    #[test]
    fn effective_cycles_needs_complete_input() {
        assert!(matches!(
            effective_cycles(&catalog::kronecker()),
            Err(Error::NotCompleteGentle(_))
        ));
    }

    #[test]
    fn completes_linear_quivers() {
        for n in 1usize..=4 {
            for mask in 0..(1usize << n.saturating_sub(2)) {
                let zeros: Vec<usize> = (1..n.saturating_sub(1))
                    .filter(|i| mask >> (i - 1) & 1 == 1)
                    .collect();
                let bq = catalog::linear(n, &zeros);
                let c = complete_gentle_closure(&bq).unwrap();
                assert_eq!(c.added.len(), 2 * n - (n - 1));
                assert!(check_complete_gentle(&c.bound).is_pass());
            }
        }
    }
}
