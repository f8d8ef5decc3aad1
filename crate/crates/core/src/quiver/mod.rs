//! Quivers, paths, relations, dimension vectors and weights.

mod axioms;
mod completion;

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::format_rational;

pub use axioms::{
    check_complete_gentle, check_gentle, check_special_biserial, is_finite_dimensional, Verdict,
};
pub use completion::{complete_gentle_closure, effective_cycles, Completion, Cycle};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub tail: usize,
    pub head: usize,
}

/// A finite quiver. Vertices and arrows are addressed by their index in
/// declaration order, which is also the lexicographic order used for
/// tie-breaking throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl Quiver {
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let mut q = Self {
            vertices: Vec::new(),
            arrows: Vec::new(),
            vertex_index: HashMap::new(),
            arrow_index: HashMap::new(),
        };
        for v in vertices {
            q.add_vertex(v.as_ref())?;
        }
        for (name, tail, head) in arrows {
            let t = q.vertex(tail.as_ref())?;
            let h = q.vertex(head.as_ref())?;
            q.add_arrow(name.as_ref(), t, h)?;
        }
        Ok(q)
    }

    pub(crate) fn add_vertex(&mut self, name: &str) -> Result<usize> {
        if self.vertex_index.contains_key(name) {
            return Err(Error::InvalidInput(format!("duplicate vertex '{name}'")));
        }
        self.vertex_index.insert(name.to_string(), self.vertices.len());
        self.vertices.push(name.to_string());
        Ok(self.vertices.len() - 1)
    }

    pub(crate) fn add_arrow(&mut self, name: &str, tail: usize, head: usize) -> Result<usize> {
        if self.arrow_index.contains_key(name) {
            return Err(Error::InvalidInput(format!("duplicate arrow '{name}'")));
        }
        if tail >= self.vertices.len() || head >= self.vertices.len() {
            return Err(Error::InvalidInput(format!("arrow '{name}' has an unknown endpoint")));
        }
        self.arrow_index.insert(name.to_string(), self.arrows.len());
        self.arrows.push(Arrow {
            name: name.to_string(),
            tail,
            head,
        });
        Ok(self.arrows.len() - 1)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn arrow_name(&self, a: usize) -> &str {
        &self.arrows[a].name
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("unknown vertex '{name}'")))
    }

    pub fn arrow_id(&self, name: &str) -> Result<usize> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("unknown arrow '{name}'")))
    }

    pub fn out_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].tail == v).collect()
    }

    pub fn in_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].head == v).collect()
    }

    /// Whether the underlying undirected graph is connected.
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for a in &self.arrows {
                for (x, y) in [(a.tail, a.head), (a.head, a.tail)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// A nonempty path, stored in the order the arrows are applied.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn new(quiver: &Quiver, arrows: Vec<usize>) -> Result<Self> {
        if arrows.is_empty() {
            return Err(Error::InvalidInput("empty path".into()));
        }
        if let Some(&a) = arrows.iter().find(|&&a| a >= quiver.num_arrows()) {
            return Err(Error::InvalidInput(format!("arrow index {a} out of range")));
        }
        for w in arrows.windows(2) {
            if quiver.arrow(w[0]).head != quiver.arrow(w[1]).tail {
                return Err(Error::InvalidInput(format!(
                    "arrows {} and {} are not composable",
                    quiver.arrow_name(w[1]),
                    quiver.arrow_name(w[0])
                )));
            }
        }
        Ok(Self(arrows))
    }

    pub fn arrows(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn source(&self, quiver: &Quiver) -> usize {
        quiver.arrow(self.0[0]).tail
    }

    pub fn target(&self, quiver: &Quiver) -> usize {
        quiver.arrow(*self.0.last().expect("nonempty")).head
    }

    /// Right-to-left rendering `a_k*...*a_1`.
    pub fn render(&self, quiver: &Quiver) -> String {
        self.0
            .iter()
            .rev()
            .map(|&a| quiver.arrow_name(a))
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A linear combination of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    terms: Vec<(BigRational, Path)>,
}

impl Relation {
    pub fn new(quiver: &Quiver, terms: Vec<(BigRational, Path)>) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidInput("relation without terms".into()));
        };
        let (s, t) = (first.source(quiver), first.target(quiver));
        for (c, p) in &terms {
            if p.len() < 2 {
                return Err(Error::InvalidInput(format!(
                    "relation term {} has length < 2",
                    p.render(quiver)
                )));
            }
            if p.source(quiver) != s || p.target(quiver) != t {
                return Err(Error::InvalidInput(format!(
                    "relation terms are not parallel: {}",
                    p.render(quiver)
                )));
            }
            if num_traits::Zero::is_zero(c) {
                return Err(Error::InvalidInput("zero coefficient in relation".into()));
            }
        }
        Ok(Self { terms })
    }

    pub fn monomial(quiver: &Quiver, arrows: Vec<usize>) -> Result<Self> {
        Self::new(quiver, vec![(BigRational::one(), Path::new(quiver, arrows)?)])
    }

    pub fn terms(&self) -> &[(BigRational, Path)] {
        &self.terms
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// For a monomial relation of length two, the arrows `(first, second)`
    /// in order of application.
    pub fn as_pair(&self) -> Option<(usize, usize)> {
        match self.terms.as_slice() {
            [(_, p)] if p.len() == 2 => Some((p.0[0], p.0[1])),
            _ => None,
        }
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        let mut out = String::new();
        for (i, (c, p)) in self.terms.iter().enumerate() {
            let neg = num_traits::Signed::is_negative(c);
            let abs = num_traits::Signed::abs(c);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&format_rational(&abs));
                out.push('*');
            }
            out.push_str(&p.render(quiver));
        }
        out
    }
}

/// Whether a bound quiver presents a finite-dimensional algebra or a
/// (necessarily infinite-dimensional) complete gentle algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    FiniteDimensional,
    CompleteGentle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundQuiver {
    name: String,
    quiver: Quiver,
    relations: Vec<Relation>,
}

impl BoundQuiver {
    pub fn new(name: impl Into<String>, quiver: Quiver, relations: Vec<Relation>) -> Self {
        Self {
            name: name.into(),
            quiver,
            relations,
        }
    }

    /// Builds a bound quiver whose relations are all monomial of length two,
    /// each given as `(first, second)` arrow names in application order.
    pub fn with_zero_relations<S: AsRef<str>>(
        name: &str,
        quiver: Quiver,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let relations = pairs
            .iter()
            .map(|(x, y)| {
                let x = quiver.arrow_id(x.as_ref())?;
                let y = quiver.arrow_id(y.as_ref())?;
                Relation::monomial(&quiver, vec![x, y])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(name, quiver, relations))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn kind(&self) -> Kind {
        if check_complete_gentle(self).is_pass() {
            Kind::CompleteGentle
        } else {
            Kind::FiniteDimensional
        }
    }

    /// The set of pairs `(first, second)` such that the path "second after
    /// first" is a relation, if every relation is a length-two monomial.
    pub fn zero_pairs(&self) -> Option<BTreeSet<(usize, usize)>> {
        self.relations.iter().map(Relation::as_pair).collect()
    }

    pub fn is_monomial(&self) -> bool {
        self.relations.iter().all(Relation::is_monomial)
    }
}

/// Dimension vector indexed by vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(pub Vec<usize>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Builds a dimension vector from `vertex=value` assignments covering every vertex.
    pub fn from_assignments(quiver: &Quiver, pairs: &[(String, i64)]) -> Result<Self> {
        let v = assignments(quiver, pairs, "dimension vector")?;
        if let Some(x) = v.iter().find(|x| **x < 0) {
            return Err(Error::InvalidInput(format!("negative dimension {x}")));
        }
        Ok(Self(v.into_iter().map(|x| x as usize).collect()))
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        render_assignments(quiver, self.0.iter().map(|&x| x as i64))
    }
}

impl std::ops::Index<usize> for DimVector {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// Integer weight indexed by vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn from_assignments(quiver: &Quiver, pairs: &[(String, i64)]) -> Result<Self> {
        Ok(Self(assignments(quiver, pairs, "weight")?))
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        render_assignments(quiver, self.0.iter().copied())
    }
}

fn assignments(quiver: &Quiver, pairs: &[(String, i64)], what: &str) -> Result<Vec<i64>> {
    let mut out = vec![None; quiver.num_vertices()];
    for (name, value) in pairs {
        let v = quiver.vertex(name).map_err(|_| {
            Error::VertexMismatch(format!("{what} mentions unknown vertex '{name}'"))
        })?;
        if out[v].replace(*value).is_some() {
            return Err(Error::VertexMismatch(format!("{what} assigns '{name}' twice")));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(v, x)| {
            x.ok_or_else(|| {
                Error::VertexMismatch(format!(
                    "{what} has no entry for vertex '{}'",
                    quiver.vertex_name(v)
                ))
            })
        })
        .collect()
}

fn render_assignments(quiver: &Quiver, values: impl Iterator<Item = i64>) -> String {
    values
        .enumerate()
        .map(|(v, x)| format!("{}={x}", quiver.vertex_name(v)))
        .collect::<Vec<_>>()
        .join(",")
}

/// `θ(d) = Σ_x θ(x) d(x)`.
pub fn theta_pairing(theta: &Weight, d: &DimVector) -> Result<i64> {
    if theta.0.len() != d.0.len() {
        return Err(Error::VertexMismatch(format!(
            "weight has {} entries, dimension vector {}",
            theta.0.len(),
            d.0.len()
        )));
    }
    Ok(theta.0.iter().zip(&d.0).map(|(t, &x)| t * x as i64).sum())
}

/// Small catalogue of bound quivers used in examples and tests.
pub mod catalog {
    use super::*;

    /// Two vertices `1`, `2` and arrows `a, b : 1 -> 2`, no relations.
    pub fn kronecker() -> BoundQuiver {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).expect("valid");
        BoundQuiver::new("kronecker", q, Vec::new())
    }

    /// Oriented cycle `a_i : i -> i+1 (mod l)` with all length-two composites zero.
    /// For `l = 1` this is the one-loop quiver with `a_0 a_0 = 0`.
    pub fn cyclic(l: usize) -> BoundQuiver {
        let vertices: Vec<String> = (0..l).map(|i| i.to_string()).collect();
        let arrows: Vec<(String, String, String)> = (0..l)
            .map(|i| (format!("a{i}"), i.to_string(), ((i + 1) % l).to_string()))
            .collect();
        let q = Quiver::new(&vertices, &arrows).expect("valid");
        let pairs: Vec<(String, String)> = (0..l)
            .map(|i| (format!("a{i}"), format!("a{}", (i + 1) % l)))
            .collect();
        BoundQuiver::with_zero_relations(&format!("cyclic{l}"), q, &pairs).expect("valid")
    }

    /// One vertex with loops `a`, `b` and relations `a^2 = b^2 = 0`.
    pub fn two_loops() -> BoundQuiver {
        let q = Quiver::new(&["0"], &[("a", "0", "0"), ("b", "0", "0")]).expect("valid");
        BoundQuiver::with_zero_relations("two_loops", q, &[("a", "a"), ("b", "b")]).expect("valid")
    }

    /// Linear quiver `1 -> 2 -> ... -> n` with arrows `a1, ..., a{n-1}`;
    /// `zero_at` lists the indices `i` with `a{i+1} a{i} = 0`.
    pub fn linear(n: usize, zero_at: &[usize]) -> BoundQuiver {
        let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows: Vec<(String, String, String)> = (1..n)
            .map(|i| (format!("a{i}"), i.to_string(), (i + 1).to_string()))
            .collect();
        let q = Quiver::new(&vertices, &arrows).expect("valid");
        let pairs: Vec<(String, String)> = zero_at
            .iter()
            .map(|&i| (format!("a{i}"), format!("a{}", i + 1)))
            .collect();
        BoundQuiver::with_zero_relations(&format!("linear{n}"), q, &pairs).expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_render_right_to_left() {
        let bq = catalog::cyclic(2);
        let q = bq.quiver();
        let p = Path::new(q, vec![0, 1]).unwrap();
        assert_eq!(p.render(q), "a1*a0");
        assert_eq!(p.source(q), 0);
        assert_eq!(p.target(q), 0);
        assert!(Path::new(q, vec![0, 0]).is_err());
    }

    #[test]
    fn relations_must_be_parallel_and_long() {
        let bq = catalog::kronecker();
        let q = bq.quiver();
        assert!(Relation::monomial(q, vec![0]).is_err());
        let c = catalog::cyclic(2);
        let r = Relation::monomial(c.quiver(), vec![0, 1]).unwrap();
        assert_eq!(r.as_pair(), Some((0, 1)));
        assert_eq!(r.render(c.quiver()), "a1*a0");
    }

    #[test]
    fn theta_pairing_examples() {
        let t = Weight(vec![1, -1]);
        assert_eq!(theta_pairing(&t, &DimVector(vec![1, 1])).unwrap(), 0);
        assert_eq!(theta_pairing(&t, &DimVector(vec![2, 1])).unwrap(), 1);
        assert_eq!(theta_pairing(&Weight(vec![0, 0]), &DimVector(vec![3, 7])).unwrap(), 0);
        assert!(matches!(
            theta_pairing(&t, &DimVector(vec![1])),
            Err(Error::VertexMismatch(_))
        ));
    }

    #[test]
    fn assignments_cover_all_vertices() {
        let bq = catalog::kronecker();
        let q = bq.quiver();
        let d = DimVector::from_assignments(q, &[("2".into(), 3), ("1".into(), 1)]).unwrap();
        assert_eq!(d, DimVector(vec![1, 3]));
        assert!(DimVector::from_assignments(q, &[("1".into(), 1)]).is_err());
        assert_eq!(d.render(q), "1=1,2=3");
    }

    #[test]
    fn connectivity() {
        assert!(catalog::kronecker().quiver().is_connected());
        let q = Quiver::new(&["x", "y"], &[] as &[(&str, &str, &str)]).unwrap();
        assert!(!q.is_connected());
    }
}
