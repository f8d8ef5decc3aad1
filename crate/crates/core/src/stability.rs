//! King stability of representations, θ-stable decompositions of
//! irreducible components, and the moduli structure they determine.
//!
//! Subrepresentations are enumerated exhaustively over small prime fields.
//! Representations over Q are reduced at primes where no arrow loses rank
//! and the verdicts of all good primes are compared.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{denominator_lcm, Field, PrimeField, Rationals};
use crate::krull_schmidt::{decompose_with, end_ring, SplitOptions};
use crate::linalg::{derive_seed, Matrix};
use crate::quiver::{theta_pairing, BoundQuiver, DimVector, Quiver, Weight};
use crate::repvar::{
    hom_dimension, sample_generic, ComponentDescriptor, GentleAlgebra, QRep, Representation,
};
use crate::strings_bands::{band_module, BandParameter, BandWord, Identification, WordCatalog};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubrepBudget {
    pub max_total_dim: usize,
    /// Bound on the number of closure steps (one per subrepresentation and
    /// candidate generator) in the enumeration.
    pub max_candidates: u64,
}

impl Default for SubrepBudget {
    fn default() -> Self {
        Self {
            max_total_dim: 6,
            max_candidates: 1 << 20,
        }
    }
}

/// Reduced row echelon basis of a subspace of `F_p^n`, rows sorted by pivot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Subspace {
    pivots: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

impl Subspace {
    fn zero() -> Self {
        Self { pivots: Vec::new(), rows: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `v` reduced against the basis: zero exactly when `v` lies in the span.
    fn reduce(&self, v: &[u64], p: u64) -> Vec<u64> {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let k = v[c];
            if k != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + p - k * r % p) % p;
                }
            }
        }
        v
    }

    /// Adds `v` to the span; returns false if it was already there.
    fn insert(&mut self, v: &[u64], p: u64) -> bool {
        let mut w = self.reduce(v, p);
        let Some(c) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(w[c], p);
        w.iter_mut().for_each(|x| *x = *x * inv % p);
        for row in &mut self.rows {
            let k = row[c];
            if k != 0 {
                for (x, y) in row.iter_mut().zip(&w) {
                    *x = (*x + p - k * y % p) % p;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, w);
        true
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Vectors of `F_p^n` with leading entry 1 and zeros in the pivot columns
/// of `u`: one generator per line of `F_p^n / u`.
fn complement_lines(u: &Subspace, n: usize, p: u64) -> Vec<Vec<u64>> {
    let free: Vec<usize> = (0..n).filter(|c| !u.pivots.contains(c)).collect();
    let mut out = Vec::new();
    for (i, &lead) in free.iter().enumerate() {
        let rest = &free[i + 1..];
        let total = p.pow(rest.len() as u32);
        for code in 0..total {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            let mut c = code;
            for &j in rest {
                v[j] = c % p;
                c /= p;
            }
            out.push(v);
        }
    }
    out
}

/// Dimension vectors of all subrepresentations of a representation over `F_p`.
///
/// Every subrepresentation is reached from zero by repeatedly adjoining one
/// vector at a single vertex and closing under the arrows, so the search
/// visits each subrepresentation once and tries one generator per line of
/// each quotient space.
pub fn subrep_dim_vectors(
    m: &Representation<PrimeField>,
    budget: &SubrepBudget,
) -> Result<BTreeSet<DimVector>> {
    let p = m.field().modulus();
    let d = &m.dim().0;
    if m.total_dim() > budget.max_total_dim {
        return Err(Error::BudgetExceeded(format!(
            "total dimension {} exceeds the subrepresentation budget {}",
            m.total_dim(),
            budget.max_total_dim
        )));
    }
    let q = m.algebra().quiver();
    let f = m.field();
    let closure = |mut u: Vec<Subspace>, x: usize, v: Vec<u64>| -> Vec<Subspace> {
        let mut stack = vec![(x, v)];
        while let Some((y, w)) = stack.pop() {
            if u[y].insert(&w, p) {
                for a in q.out_arrows(y) {
                    let image = m.mat(a).mul_vec(f, &w).expect("shape");
                    stack.push((q.arrow(a).head, image));
                }
            }
        }
        u
    };
    let start: Vec<Subspace> = vec![Subspace::zero(); d.len()];
    let mut seen: BTreeSet<Vec<Subspace>> = BTreeSet::from([start.clone()]);
    let mut frontier = vec![start];
    let mut steps = 0u64;
    while let Some(u) = frontier.pop() {
        for (x, &n) in d.iter().enumerate() {
            for v in complement_lines(&u[x], n, p) {
                steps += 1;
                if steps > budget.max_candidates {
                    return Err(Error::BudgetExceeded(format!(
                        "more than {} closure steps over F{p}",
                        budget.max_candidates
                    )));
                }
                let next = closure(u.clone(), x, v);
                if !seen.contains(&next) {
                    seen.insert(next.clone());
                    frontier.push(next);
                }
            }
        }
    }
    Ok(seen
        .iter()
        .map(|u| DimVector(u.iter().map(Subspace::dim).collect()))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StabilityStatus {
    Unstable,
    SemistableNotStable,
    Stable,
}

impl fmt::Display for StabilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Unstable => "unstable",
            Self::SemistableNotStable => "semistable_not_stable",
            Self::Stable => "stable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    /// Dimension vector of a destabilizing subrepresentation (or of one with
    /// θ-value zero); absent for stable verdicts.
    pub witness: Option<DimVector>,
    /// Primes whose reductions were used.
    pub primes: Vec<u64>,
    /// `FieldSensitivity` and consistency warnings.
    pub warnings: Vec<String>,
}

impl StabilityVerdict {
    pub fn has_field_sensitivity(&self) -> bool {
        self.warnings.iter().any(|w| w.starts_with("FieldSensitivity"))
    }

    pub fn render(&self, q: &Quiver) -> String {
        match &self.witness {
            Some(w) => format!("{} (witness {})", self.status, w.render(q)),
            None => self.status.to_string(),
        }
    }

    pub fn to_json(&self, q: &Quiver) -> Value {
        json!({
            "status": self.status.to_string(),
            "witness": self.witness.as_ref().map(|w| w.render(q)),
            "primes": self.primes,
            "warnings": self.warnings,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityOptions {
    pub primes: Vec<u64>,
    pub budget: SubrepBudget,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        Self {
            primes: vec![2, 3, 5],
            budget: SubrepBudget::default(),
        }
    }
}

/// Verdict from a set of subrepresentation dimension vectors.
pub fn verdict_from_subreps(
    subreps: &BTreeSet<DimVector>,
    d: &DimVector,
    theta: &Weight,
) -> Result<(StabilityStatus, Option<DimVector>)> {
    let zero = DimVector::zero(d.len());
    let mut worst: Option<(i64, &DimVector)> = None;
    let mut tie: Option<&DimVector> = None;
    for s in subreps.iter().filter(|s| **s != zero && *s != d) {
        let v = theta_pairing(theta, s)?;
        if v > 0 && worst.is_none_or(|(w, _)| v > w) {
            worst = Some((v, s));
        }
        if v == 0 && tie.is_none() {
            tie = Some(s);
        }
    }
    Ok(match (worst, tie) {
        (Some((_, s)), _) => (StabilityStatus::Unstable, Some(s.clone())),
        (None, Some(s)) => (StabilityStatus::SemistableNotStable, Some(s.clone())),
        (None, None) => (StabilityStatus::Stable, None),
    })
}

fn theta_on_total(m_dim: &DimVector, theta: &Weight) -> Result<Option<StabilityVerdict>> {
    let total = theta_pairing(theta, m_dim)?;
    if total > 0 {
        return Ok(Some(StabilityVerdict {
            status: StabilityStatus::Unstable,
            witness: Some(m_dim.clone()),
            primes: Vec::new(),
            warnings: Vec::new(),
        }));
    }
    if total < 0 {
        return Err(Error::ThetaMismatch(format!("theta(dim M) = {total} is negative")));
    }
    Ok(None)
}

/// Stability of a representation over `F_p`.
pub fn check_stability_fp(
    m: &Representation<PrimeField>,
    theta: &Weight,
    budget: &SubrepBudget,
) -> Result<StabilityVerdict> {
    if let Some(v) = theta_on_total(m.dim(), theta)? {
        return Ok(v);
    }
    let subs = subrep_dim_vectors(m, budget)?;
    let (status, witness) = verdict_from_subreps(&subs, m.dim(), theta)?;
    Ok(StabilityVerdict {
        status,
        witness,
        primes: vec![m.field().modulus()],
        warnings: Vec::new(),
    })
}

/// Reduction of `M` modulo `p` after clearing denominators arrow by arrow,
/// or `None` if some arrow loses rank.
pub fn good_reduction(m: &QRep, p: &PrimeField) -> Option<Representation<PrimeField>> {
    let f = Rationals;
    let cleared: Vec<Matrix<BigRational>> = m
        .mats()
        .iter()
        .map(|a| {
            let l = BigRational::from_integer(denominator_lcm(a.entries()));
            a.scale(&f, &l)
        })
        .collect();
    let scaled = m.with_mats(cleared).ok()?;
    let r = scaled.reduce_mod(p)?;
    (r.rank_sequence() == m.rank_sequence()).then_some(r)
}

/// King stability of a representation over Q, decided over every good prime
/// among `opts.primes`.
pub fn check_stability(m: &QRep, theta: &Weight, opts: &StabilityOptions) -> Result<StabilityVerdict> {
    if let Some(v) = theta_on_total(m.dim(), theta)? {
        return Ok(v);
    }
    let mut verdicts: Vec<(u64, StabilityStatus, Option<DimVector>)> = Vec::new();
    let mut skipped = Vec::new();
    for &p in &opts.primes {
        let field = PrimeField::new(p)?;
        let Some(r) = good_reduction(m, &field) else {
            skipped.push(p);
            continue;
        };
        let subs = subrep_dim_vectors(&r, &opts.budget)?;
        let (status, witness) = verdict_from_subreps(&subs, m.dim(), theta)?;
        verdicts.push((p, status, witness));
    }
    let Some((_, status, witness)) = verdicts.last().cloned() else {
        return Err(Error::NoGoodPrime(format!(
            "every prime in {:?} reduces some arrow's rank",
            opts.primes
        )));
    };
    let mut warnings = Vec::new();
    if verdicts.iter().any(|(_, s, _)| *s != status) {
        let parts: Vec<String> = verdicts.iter().map(|(p, s, _)| format!("F{p}: {s}")).collect();
        warnings.push(format!("FieldSensitivity: verdicts differ ({})", parts.join(", ")));
    }
    if !skipped.is_empty() {
        warnings.push(format!("bad primes skipped: {skipped:?}"));
    }
    if status == StabilityStatus::Stable {
        let e = end_ring(m)?.dim();
        if e != 1 {
            warnings.push(format!("stable verdict but dim End = {e}"));
        }
    }
    Ok(StabilityVerdict {
        status,
        witness,
        primes: verdicts.iter().map(|(p, _, _)| *p).collect(),
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    BandFamily,
    OrbitClosure,
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BandFamily => "band_family",
            Self::OrbitClosure => "orbit_closure",
        })
    }
}

/// One term `m_i C_i` of a θ-stable decomposition.
#[derive(Clone, Debug)]
pub struct StableFactor {
    pub kind: FactorKind,
    /// Band word or string/simple label.
    pub label: String,
    pub dim: DimVector,
    pub multiplicity: usize,
    /// A θ-stable point of `C_i`.
    pub representative: QRep,
}

#[derive(Clone, Debug)]
pub struct ThetaStableDecomposition {
    pub component: ComponentDescriptor,
    pub factors: Vec<StableFactor>,
    pub notes: Vec<String>,
}

impl ThetaStableDecomposition {
    pub fn render(&self) -> String {
        let q = self.component.algebra().original().quiver();
        self.factors
            .iter()
            .map(|f| format!("{}*[{} {} dim {}]", f.multiplicity, f.kind, f.label, f.dim.render(q)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_json(&self) -> Value {
        let q = self.component.algebra().original().quiver();
        json!({
            "component": self.component.to_string(),
            "factors": self.factors.iter().map(|f| json!({
                "kind": f.kind.to_string(),
                "label": f.label,
                "dim": f.dim.render(q),
                "multiplicity": f.multiplicity,
            })).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionOptions {
    pub stability: StabilityOptions,
    pub split: SplitOptions,
    /// Fresh generic samples tried when a sample is visibly special.
    pub resamples: usize,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        Self {
            stability: StabilityOptions::default(),
            split: SplitOptions::default(),
            resamples: 6,
        }
    }
}

fn support_weight_is_trivial(theta: &Weight, d: &DimVector) -> bool {
    theta.0.iter().zip(&d.0).all(|(t, &n)| n == 0 || *t == 0)
}

/// θ-stable decomposition of a component, read off the Krull-Schmidt
/// decomposition of a generic point whose summands are all θ-stable.
pub fn theta_stable_decomposition(
    c: &ComponentDescriptor,
    theta: &Weight,
    seed: u64,
    opts: &DecompositionOptions,
) -> Result<ThetaStableDecomposition> {
    let algebra = c.algebra();
    let original = algebra.original().clone();
    let q = original.quiver();
    let d = c.dim();
    let total = theta_pairing(theta, d)?;
    if total != 0 {
        return Err(Error::ThetaMismatch(format!("theta(d) = {total}, expected 0")));
    }
    if support_weight_is_trivial(theta, d) {
        return semisimple_decomposition(c, &original);
    }
    let catalog = WordCatalog::new(original.clone(), d.total())?;
    let mut last_reason = String::new();
    for attempt in 0..opts.resamples.max(1) as u64 {
        let sample_seed = derive_seed(seed, attempt);
        let point = algebra.to_original(&sample_generic(c, sample_seed)?)?;
        match decompose_point(c, &point, &catalog, theta, sample_seed, opts)? {
            Ok(decomposition) => return Ok(decomposition),
            Err(reason) => last_reason = reason,
        }
    }
    Err(Error::GenericityFailure(format!(
        "{} samples of {} were all special: {last_reason}",
        opts.resamples,
        c.ranks().render(q)
    )))
}

/// With θ vanishing on the support, semistable points degenerate to their
/// semisimplification; every factor is the orbit of a simple.
fn semisimple_decomposition(c: &ComponentDescriptor, original: &Arc<BoundQuiver>) -> Result<ThetaStableDecomposition> {
    let q = original.quiver();
    let factors = c
        .dim()
        .0
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(x, &n)| {
            let mut e = DimVector::zero(q.num_vertices());
            e.0[x] = 1;
            Ok(StableFactor {
                kind: FactorKind::OrbitClosure,
                label: format!("S_{}", q.vertex_name(x)),
                representative: QRep::zero(original.clone(), Rationals, e.clone())?,
                dim: e,
                multiplicity: n,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThetaStableDecomposition {
        component: c.clone(),
        factors,
        notes: vec!["theta vanishes on the support of d: polystable points are semisimple".into()],
    })
}

/// `Ok(Err(reason))` when the sample is special and should be redrawn.
fn decompose_point(
    c: &ComponentDescriptor,
    point: &QRep,
    catalog: &WordCatalog,
    theta: &Weight,
    seed: u64,
    opts: &DecompositionOptions,
) -> Result<std::result::Result<ThetaStableDecomposition, String>> {
    let q = catalog.algebra().quiver().clone();
    let list = decompose_with(point, seed, &opts.split)?;
    let mut factors: Vec<StableFactor> = Vec::new();
    let mut bands: Vec<(BandWord, Vec<BandParameter>, usize)> = Vec::new();
    let mut notes = Vec::new();
    for (k, s) in list.summands.iter().enumerate() {
        let value = theta_pairing(theta, s.module.dim())?;
        if value != 0 {
            return Err(Error::GenericPointUnstable(format!(
                "summand of dimension {} has theta-value {value}",
                s.module.dim().render(&q)
            )));
        }
        let id = catalog.identify(&s.module, opts.split.iso_trials, derive_seed(seed, 100 + k as u64))?;
        match id {
            Identification::Band { word, parameter, mult } => {
                if mult > 1 || s.multiplicity > 1 {
                    return Ok(Err(format!("band {} repeats a parameter", word.render(&q))));
                }
                let count = parameter.degree();
                match bands.iter_mut().find(|(w, _, _)| *w == word) {
                    Some(entry) => {
                        entry.1.push(parameter);
                        entry.2 += count;
                    }
                    None => bands.push((word, vec![parameter], count)),
                }
            }
            other => {
                let verdict = check_stability(&s.module, theta, &opts.stability)?;
                match verdict.status {
                    StabilityStatus::Unstable => {
                        return Err(Error::GenericPointUnstable(format!(
                            "summand {} is unstable",
                            other.render(&q)
                        )))
                    }
                    StabilityStatus::SemistableNotStable => {
                        return Err(Error::SummandNotStable(format!(
                            "summand {} is semistable but not stable",
                            other.render(&q)
                        )))
                    }
                    StabilityStatus::Stable => {}
                }
                notes.extend(verdict.warnings);
                factors.push(StableFactor {
                    kind: FactorKind::OrbitClosure,
                    label: match &other {
                        Identification::Simple(v) => format!("S_{}", q.vertex_name(*v)),
                        Identification::String(w) => w.render(&q),
                        Identification::Band { .. } => unreachable!(),
                    },
                    dim: s.module.dim().clone(),
                    multiplicity: s.multiplicity,
                    representative: s.module.clone(),
                });
            }
        }
    }
    for (word, params, count) in bands {
        let lambda = params
            .iter()
            .find_map(|p| match p {
                BandParameter::Rational(l) => Some(l.clone()),
                BandParameter::Algebraic(_) => None,
            })
            .unwrap_or_else(|| Rationals.one());
        let mut other = &lambda + Rationals.one();
        if Rationals.is_zero(&other) {
            other = Rationals.from_i64(2);
        }
        let b1 = band_module(catalog.algebra(), &word, &lambda, 1)?;
        let b2 = band_module(catalog.algebra(), &word, &other, 1)?;
        let v1 = check_stability(&b1, theta, &opts.stability)?;
        let v2 = check_stability(&b2, theta, &opts.stability)?;
        if v1.status != v2.status {
            notes.push(format!(
                "band {} changes stability between two parameters ({} vs {})",
                word.render(&q),
                v1.status,
                v2.status
            ));
        }
        match v1.status {
            StabilityStatus::Unstable => {
                return Err(Error::GenericPointUnstable(format!(
                    "band {} is unstable",
                    word.render(&q)
                )))
            }
            StabilityStatus::SemistableNotStable => {
                return Err(Error::SummandNotStable(format!(
                    "band {} is semistable but not stable",
                    word.render(&q)
                )))
            }
            StabilityStatus::Stable => {}
        }
        if hom_dimension(&b1, &b2)? != 0 {
            return Err(Error::SummandNotStable(format!(
                "bands {} at different parameters are not orthogonal",
                word.render(&q)
            )));
        }
        notes.extend(v1.warnings);
        factors.push(StableFactor {
            kind: FactorKind::BandFamily,
            label: word.render(&q),
            dim: word.dim_vector(&q),
            multiplicity: count,
            representative: b1,
        });
    }
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i + 1..] {
            if hom_dimension(&a.representative, &b.representative)? != 0
                || hom_dimension(&b.representative, &a.representative)? != 0
            {
                return Err(Error::SummandNotStable(format!(
                    "factors {} and {} are not Hom-orthogonal",
                    a.label, b.label
                )));
            }
        }
    }
    let mut sum = DimVector::zero(q.num_vertices());
    for f in &factors {
        for (s, x) in sum.0.iter_mut().zip(&f.dim.0) {
            *s += f.multiplicity * x;
        }
    }
    debug_assert_eq!(&sum, c.dim(), "multiplicities must add up to d");
    factors.sort_by(|a, b| (a.kind, &a.label).cmp(&(b.kind, &b.label)));
    Ok(Ok(ThetaStableDecomposition {
        component: c.clone(),
        factors,
        notes,
    }))
}

/// `P^{m_1} x ... x P^{m_l}` over the band families of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliStructure {
    pub exponents: Vec<usize>,
}

impl ModuliStructure {
    pub fn from_decomposition(t: &ThetaStableDecomposition) -> Self {
        Self {
            exponents: t
                .factors
                .iter()
                .filter(|f| f.kind == FactorKind::BandFamily)
                .map(|f| f.multiplicity)
                .collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.exponents.iter().sum()
    }

    pub fn is_point(&self) -> bool {
        self.exponents.is_empty()
    }
}

impl fmt::Display for ModuliStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return f.write_str("point");
        }
        let parts: Vec<String> = self.exponents.iter().map(|m| format!("P^{m}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

#[derive(Clone, Debug)]
pub enum ModuliOutcome {
    Computed {
        structure: ModuliStructure,
        decomposition: ThetaStableDecomposition,
    },
    /// The generic point of the component is θ-unstable.
    NotComputed(String),
}

#[derive(Clone, Debug)]
pub struct ModuliEntry {
    pub component: ComponentDescriptor,
    pub outcome: ModuliOutcome,
}

impl ModuliEntry {
    /// `r=(...)  ->  P^2  (dim 2)`
    pub fn render(&self) -> String {
        let r = self.component.ranks().render(self.component.algebra().quiver());
        match &self.outcome {
            ModuliOutcome::Computed { structure, .. } => {
                format!("r={r}  ->  {structure}  (dim {})", structure.dimension())
            }
            ModuliOutcome::NotComputed(reason) => format!("r={r}  ->  not computed ({reason})"),
        }
    }

    pub fn to_json(&self) -> Value {
        let q = self.component.algebra().quiver();
        let r = self.component.ranks().render(q);
        match &self.outcome {
            ModuliOutcome::Computed {
                structure,
                decomposition,
            } => json!({
                "component": r,
                "moduli": structure.to_string(),
                "exponents": structure.exponents,
                "dim": structure.dimension(),
                "decomposition": decomposition.to_json(),
            }),
            ModuliOutcome::NotComputed(reason) => json!({
                "component": r,
                "moduli": null,
                "reason": reason,
            }),
        }
    }
}

/// Moduli structure of every irreducible component of `rep(A, d)`.
pub fn moduli_structure(
    algebra: &Arc<GentleAlgebra>,
    d: &DimVector,
    theta: &Weight,
    seed: u64,
    opts: &DecompositionOptions,
) -> Result<Vec<ModuliEntry>> {
    let total = theta_pairing(theta, d)?;
    if total != 0 {
        return Err(Error::ThetaMismatch(format!("theta(d) = {total}, expected 0")));
    }
    crate::repvar::components(algebra, d)?
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let outcome = match theta_stable_decomposition(&c, theta, derive_seed(seed, k as u64), opts) {
                Ok(decomposition) => ModuliOutcome::Computed {
                    structure: ModuliStructure::from_decomposition(&decomposition),
                    decomposition,
                },
                Err(Error::GenericPointUnstable(_)) => {
                    ModuliOutcome::NotComputed("generic point unstable".into())
                }
                Err(e) => return Err(e),
            };
            Ok(ModuliEntry { component: c, outcome })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circular::{build_m0, CycleShape, RankSeq};
    use crate::linalg::QMatrix;
    use crate::quiver::catalog;

    fn kron(a: i64, b: i64) -> QRep {
        Representation::new(
            Arc::new(catalog::kronecker()),
            Rationals,
            DimVector(vec![1, 1]),
            vec![QMatrix::from_i64(1, 1, &[a]).unwrap(), QMatrix::from_i64(1, 1, &[b]).unwrap()],
        )
        .unwrap()
    }

    fn dims(v: &[&[usize]]) -> BTreeSet<DimVector> {
        v.iter().map(|d| DimVector(d.to_vec())).collect()
    }

    #[test]
    fn complement_lines_count_projective_points() {
        let u = Subspace::zero();
        assert_eq!(complement_lines(&u, 3, 2).len(), 7);
        let mut u = Subspace::zero();
        assert!(u.insert(&[1, 1, 0], 3));
        assert!(!u.insert(&[2, 2, 0], 3));
        assert_eq!(complement_lines(&u, 3, 3).len(), 4);
    }

    #[test]
    fn large_single_vertex_module_fits_budget() {
        // Band of length 6 on two loops over F5: far too many subspaces of
        // F5^6 to list, but few subrepresentations.
        let bq = Arc::new(catalog::two_loops());
        let b = BandWord::parse(&bq, "a.b.a.b.a^-1.b").unwrap();
        let m = band_module(&bq, &b, &crate::field::ratio(1, 3), 1).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        let subs = subrep_dim_vectors(&m.reduce_mod(&f5).unwrap(), &SubrepBudget::default()).unwrap();
        assert!(subs.contains(&DimVector(vec![0])) && subs.contains(&DimVector(vec![6])));
    }

    #[test]
    fn subreps_over_f2() {
        let f2 = PrimeField::new(2).unwrap();
        let b = SubrepBudget::default();
        let generic = kron(1, 1).reduce_mod(&f2).unwrap();
        assert_eq!(subrep_dim_vectors(&generic, &b).unwrap(), dims(&[&[0, 0], &[0, 1], &[1, 1]]));
        let zero = kron(0, 0).reduce_mod(&f2).unwrap();
        assert_eq!(
            subrep_dim_vectors(&zero, &b).unwrap(),
            dims(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]])
        );
        let s = CycleShape::new(vec![1, 1]).unwrap();
        let e01 = QRep::circular(build_m0(&s, &RankSeq(vec![1, 0])).unwrap()).unwrap();
        assert_eq!(
            subrep_dim_vectors(&e01.reduce_mod(&f2).unwrap(), &b).unwrap(),
            dims(&[&[0, 0], &[0, 1], &[1, 1]])
        );
    }

    #[test]
    fn stability_table() {
        let o = StabilityOptions::default();
        let t = Weight(vec![1, -1]);
        assert_eq!(check_stability(&kron(1, 2), &t, &o).unwrap().status, StabilityStatus::Stable);
        let v = check_stability(&kron(0, 0), &t, &o).unwrap();
        assert_eq!((v.status, v.witness), (StabilityStatus::Unstable, Some(DimVector(vec![1, 0]))));
        let v = check_stability(&kron(1, 2), &Weight(vec![0, 0]), &o).unwrap();
        assert_eq!(
            (v.status, v.witness),
            (StabilityStatus::SemistableNotStable, Some(DimVector(vec![0, 1])))
        );
        assert!(matches!(
            check_stability(&kron(1, 2), &Weight(vec![-1, 0]), &o),
            Err(Error::ThetaMismatch(_))
        ));
    }

    #[test]
    fn kronecker_moduli() {
        let a = Arc::new(GentleAlgebra::new(&catalog::kronecker()).unwrap());
        for m in 1..=2 {
            let out = moduli_structure(&a, &DimVector(vec![m, m]), &Weight(vec![1, -1]), 7, &Default::default())
                .unwrap();
            assert_eq!(out.len(), 1);
            match &out[0].outcome {
                ModuliOutcome::Computed { structure, .. } => assert_eq!(structure.exponents, vec![m]),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn cyclic_moduli() {
        let a = Arc::new(GentleAlgebra::new(&catalog::cyclic(2)).unwrap());
        let out = moduli_structure(&a, &DimVector(vec![1, 1]), &Weight(vec![1, -1]), 1, &Default::default())
            .unwrap();
        let lines: Vec<String> = out.iter().map(ModuliEntry::render).collect();
        assert_eq!(
            lines,
            vec![
                "r=(a0:0,a1:1,w1:0,w2:0)  ->  not computed (generic point unstable)",
                "r=(a0:1,a1:0,w1:0,w2:0)  ->  point  (dim 0)",
            ]
        );
    }
}
