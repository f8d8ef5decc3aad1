//! String and band combinatorics for algebras whose relations are
//! length-two monomials, the modules they define, and identification of
//! indecomposable summands.
//!
//! Words are walks in the quiver read left to right. A direct letter `a`
//! walks from the tail of `a` to its head, an inverse letter `a^-1` walks
//! back. Text form: `a0.a1^-1.a2`; the trivial string at vertex `v` is `1_v`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{format_rational, Field, Rationals};
use crate::krull_schmidt::is_isomorphic;
use crate::linalg::{derive_seed, determinant, rref, Matrix, QMatrix};
use crate::poly::{factor, Poly};
use crate::quiver::{BoundQuiver, DimVector, Quiver};
use crate::repvar::{hom_equations, QRep, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub arrow: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn direct(arrow: usize) -> Self {
        Self { arrow, inverse: false }
    }

    pub fn inverse(arrow: usize) -> Self {
        Self { arrow, inverse: true }
    }

    pub fn inv(self) -> Self {
        Self {
            arrow: self.arrow,
            inverse: !self.inverse,
        }
    }

    pub fn start(self, q: &Quiver) -> usize {
        let a = q.arrow(self.arrow);
        if self.inverse {
            a.head
        } else {
            a.tail
        }
    }

    pub fn end(self, q: &Quiver) -> usize {
        let a = q.arrow(self.arrow);
        if self.inverse {
            a.tail
        } else {
            a.head
        }
    }

    pub fn render(self, q: &Quiver) -> String {
        let name = q.arrow_name(self.arrow);
        if self.inverse {
            format!("{name}^-1")
        } else {
            name.to_string()
        }
    }
}

/// Zero pairs `(first, second)` of a bound quiver with monomial length-two relations.
fn zero_pairs(bq: &BoundQuiver) -> Result<BTreeSet<(usize, usize)>> {
    bq.zero_pairs().ok_or_else(|| {
        Error::NonMonomialRelations("words need length-two monomial relations".into())
    })
}

/// Whether `l2` may follow `l1` in a reduced walk.
fn may_follow(q: &Quiver, zero: &BTreeSet<(usize, usize)>, l1: Letter, l2: Letter) -> bool {
    if l1.end(q) != l2.start(q) || l2 == l1.inv() {
        return false;
    }
    match (l1.inverse, l2.inverse) {
        (false, false) => !zero.contains(&(l1.arrow, l2.arrow)),
        (true, true) => !zero.contains(&(l2.arrow, l1.arrow)),
        _ => true,
    }
}

fn inverse_word(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inv()).collect()
}

fn render_letters(q: &Quiver, letters: &[Letter]) -> String {
    letters.iter().map(|l| l.render(q)).collect::<Vec<_>>().join(".")
}

fn parse_letters(q: &Quiver, text: &str) -> Result<Vec<Letter>> {
    text.split('.')
        .map(|part| {
            let part = part.trim();
            match part.strip_suffix("^-1") {
                Some(name) => Ok(Letter::inverse(q.arrow_id(name.trim())?)),
                None => Ok(Letter::direct(q.arrow_id(part)?)),
            }
        })
        .collect()
}

/// A reduced walk; the empty walk at a vertex is the trivial string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringWord {
    start: usize,
    letters: Vec<Letter>,
}

impl StringWord {
    pub fn trivial(vertex: usize) -> Self {
        Self {
            start: vertex,
            letters: Vec::new(),
        }
    }

    pub fn new(bq: &BoundQuiver, letters: Vec<Letter>) -> Result<Self> {
        let q = bq.quiver();
        let first = letters
            .first()
            .ok_or_else(|| Error::InvalidInput("a nontrivial string needs a letter".into()))?;
        let zero = zero_pairs(bq)?;
        if let Some(w) = letters.windows(2).find(|w| !may_follow(q, &zero, w[0], w[1])) {
            return Err(Error::InvalidInput(format!(
                "{} cannot follow {} in a string",
                w[1].render(q),
                w[0].render(q)
            )));
        }
        Ok(Self {
            start: first.start(q),
            letters,
        })
    }

    pub fn parse(bq: &BoundQuiver, text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix("1_") {
            return Ok(Self::trivial(bq.quiver().vertex(v)?));
        }
        Self::new(bq, parse_letters(bq.quiver(), text)?)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_trivial(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Vertices visited, in order (one more than the number of letters).
    pub fn vertices(&self, q: &Quiver) -> Vec<usize> {
        let mut out = vec![self.start];
        out.extend(self.letters.iter().map(|l| l.end(q)));
        out
    }

    pub fn inverse(&self, q: &Quiver) -> Self {
        match self.letters.last() {
            None => self.clone(),
            Some(l) => Self {
                start: l.end(q),
                letters: inverse_word(&self.letters),
            },
        }
    }

    /// The representative of `{w, w^-1}` with the smaller letter sequence.
    pub fn canonical(&self, q: &Quiver) -> Self {
        let inv = self.inverse(q);
        if inv.letters < self.letters {
            inv
        } else {
            self.clone()
        }
    }

    pub fn dim_vector(&self, q: &Quiver) -> DimVector {
        occurrence_counts(q, &self.vertices(q))
    }

    pub fn render(&self, q: &Quiver) -> String {
        if self.is_trivial() {
            format!("1_{}", q.vertex_name(self.start))
        } else {
            render_letters(q, &self.letters)
        }
    }
}

fn occurrence_counts(q: &Quiver, vertices: &[usize]) -> DimVector {
    let mut d = DimVector::zero(q.num_vertices());
    for &v in vertices {
        d.0[v] += 1;
    }
    d
}

/// A primitive cyclic reduced walk with letters of both directions, stored
/// as its least rotation among the rotations of the word and its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BandWord {
    letters: Vec<Letter>,
}

impl BandWord {
    pub fn new(bq: &BoundQuiver, letters: Vec<Letter>) -> Result<Self> {
        let q = bq.quiver();
        let zero = zero_pairs(bq)?;
        let n = letters.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty band".into()));
        }
        for i in 0..n {
            let (l1, l2) = (letters[i], letters[(i + 1) % n]);
            if !may_follow(q, &zero, l1, l2) {
                return Err(Error::InvalidInput(format!(
                    "{} cannot follow {} in a band",
                    l2.render(q),
                    l1.render(q)
                )));
            }
        }
        if !letters.iter().any(|l| l.inverse) || letters.iter().all(|l| l.inverse) {
            return Err(Error::InvalidInput("a band needs direct and inverse letters".into()));
        }
        if !is_primitive(&letters) {
            return Err(Error::InvalidInput("band word is a proper power".into()));
        }
        Ok(Self {
            letters: normalize_cycle(&letters),
        })
    }

    pub fn parse(bq: &BoundQuiver, text: &str) -> Result<Self> {
        Self::new(bq, parse_letters(bq.quiver(), text.trim())?)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn dim_vector(&self, q: &Quiver) -> DimVector {
        let starts: Vec<usize> = self.letters.iter().map(|l| l.start(q)).collect();
        occurrence_counts(q, &starts)
    }

    pub fn render(&self, q: &Quiver) -> String {
        render_letters(q, &self.letters)
    }
}

fn is_primitive(letters: &[Letter]) -> bool {
    let n = letters.len();
    (1..n)
        .filter(|p| n.is_multiple_of(*p))
        .all(|p| (0..n).any(|i| letters[i] != letters[(i + p) % n]))
}

fn normalize_cycle(letters: &[Letter]) -> Vec<Letter> {
    let inv = inverse_word(letters);
    let n = letters.len();
    (0..n)
        .flat_map(|r| {
            [
                letters[r..].iter().chain(&letters[..r]).copied().collect::<Vec<_>>(),
                inv[r..].iter().chain(&inv[..r]).copied().collect::<Vec<_>>(),
            ]
        })
        .min()
        .expect("nonempty")
}

/// All strings whose modules have total dimension at most `max_total_dim`,
/// one per inversion class: trivial strings first, then by length and letters.
pub fn enumerate_strings(bq: &BoundQuiver, max_total_dim: usize) -> Result<Vec<StringWord>> {
    let q = bq.quiver();
    let zero = zero_pairs(bq)?;
    if max_total_dim == 0 {
        return Ok(Vec::new());
    }
    let mut out: Vec<StringWord> = (0..q.num_vertices()).map(StringWord::trivial).collect();
    let mut found = BTreeSet::new();
    let mut stack: Vec<Vec<Letter>> = all_letters(q).into_iter().map(|l| vec![l]).collect();
    while let Some(w) = stack.pop() {
        if w.len() + 1 > max_total_dim {
            continue;
        }
        let s = StringWord {
            start: w[0].start(q),
            letters: w.clone(),
        };
        found.insert(s.canonical(q));
        let last = *w.last().expect("nonempty");
        for l in all_letters(q) {
            if may_follow(q, &zero, last, l) {
                let mut next = w.clone();
                next.push(l);
                stack.push(next);
            }
        }
    }
    let mut rest: Vec<StringWord> = found.into_iter().collect();
    rest.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.letters.cmp(&b.letters)));
    out.extend(rest);
    Ok(out)
}

fn all_letters(q: &Quiver) -> Vec<Letter> {
    (0..q.num_arrows())
        .flat_map(|a| [Letter::direct(a), Letter::inverse(a)])
        .collect()
}

/// All bands whose modules (with multiplicity one) have total dimension at
/// most `max_total_dim`, ordered by length and letters.
pub fn enumerate_bands(bq: &BoundQuiver, max_total_dim: usize) -> Result<Vec<BandWord>> {
    let q = bq.quiver();
    let zero = zero_pairs(bq)?;
    let mut found = BTreeSet::new();
    let mut stack: Vec<Vec<Letter>> = all_letters(q).into_iter().map(|l| vec![l]).collect();
    while let Some(w) = stack.pop() {
        let (first, last) = (w[0], *w.last().expect("nonempty"));
        if may_follow(q, &zero, last, first) {
            if let Ok(b) = BandWord::new(bq, w.clone()) {
                if b.letters == w {
                    found.insert(b);
                }
            }
        }
        if w.len() >= max_total_dim {
            continue;
        }
        for l in all_letters(q) {
            // Canonical words start with their least letter.
            if l >= first && may_follow(q, &zero, last, l) {
                let mut next = w.clone();
                next.push(l);
                stack.push(next);
            }
        }
    }
    let mut out: Vec<BandWord> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.letters.cmp(&b.letters)));
    Ok(out)
}

/// Per-vertex basis index of every walk position.
fn position_indices(positions: &[usize], n_vertices: usize) -> (Vec<usize>, DimVector) {
    let mut counts = vec![0usize; n_vertices];
    let idx = positions
        .iter()
        .map(|&v| {
            counts[v] += 1;
            counts[v] - 1
        })
        .collect();
    (idx, DimVector(counts))
}

/// The string module: one basis vector per walk position, each letter
/// acting by the identity between neighbouring positions.
pub fn string_module(bq: &Arc<BoundQuiver>, w: &StringWord) -> Result<QRep> {
    let q = bq.quiver();
    let f = Rationals;
    let verts = w.vertices(q);
    let (idx, dim) = position_indices(&verts, q.num_vertices());
    let mut mats: Vec<QMatrix> = q
        .arrows()
        .iter()
        .map(|a| Matrix::zeros(&f, dim[a.head], dim[a.tail]))
        .collect();
    for (i, l) in w.letters.iter().enumerate() {
        let (src, dst) = if l.inverse { (i + 1, i) } else { (i, i + 1) };
        mats[l.arrow].set(idx[dst], idx[src], f.one());
    }
    debug_assert_eq!(dim, w.dim_vector(q));
    Representation::new(bq.clone(), f, dim, mats)
}

/// The band module with parameter `lambda` and multiplicity `mult`: blocks
/// `I` on every letter except the last, which carries the Jordan block `J_mult(lambda)`.
pub fn band_module(bq: &Arc<BoundQuiver>, b: &BandWord, lambda: &BigRational, mult: usize) -> Result<QRep> {
    if Rationals.is_zero(lambda) {
        return Err(Error::InvalidInput("band parameter must be nonzero".into()));
    }
    if mult == 0 {
        return Err(Error::InvalidInput("band multiplicity must be positive".into()));
    }
    band_module_with(bq, b, &jordan_block(lambda, mult))
}

pub fn jordan_block(lambda: &BigRational, mult: usize) -> QMatrix {
    let f = Rationals;
    QMatrix::from_fn(mult, mult, |i, j| {
        if i == j {
            lambda.clone()
        } else if j == i + 1 {
            f.one()
        } else {
            f.zero()
        }
    })
}

/// Block companion matrix of `g^mult` in the shape of a Jordan block:
/// companion blocks of the monic `g` on the diagonal, identities above it.
pub fn companion_block(g: &Poly, mult: usize) -> QMatrix {
    let f = Rationals;
    let g = g.monic();
    let e = g.degree().unwrap_or(0);
    QMatrix::from_fn(e * mult, e * mult, |i, j| {
        let (bi, bj, r, c) = (i / e, j / e, i % e, j % e);
        if bi == bj {
            if c == e - 1 {
                -g.coeff(r)
            } else if r == c + 1 {
                f.one()
            } else {
                f.zero()
            }
        } else if bj == bi + 1 && r == c {
            f.one()
        } else {
            f.zero()
        }
    })
}

/// The band module with an arbitrary square block `t` on the last letter.
pub fn band_module_with(bq: &Arc<BoundQuiver>, b: &BandWord, t: &QMatrix) -> Result<QRep> {
    let q = bq.quiver();
    let f = Rationals;
    let s = t.rows();
    let n = b.letters.len();
    let starts: Vec<usize> = b.letters.iter().map(|l| l.start(q)).collect();
    let (idx, counts) = position_indices(&starts, q.num_vertices());
    let dim = DimVector(counts.0.iter().map(|c| c * s).collect());
    let mut mats: Vec<QMatrix> = q
        .arrows()
        .iter()
        .map(|a| Matrix::zeros(&f, dim[a.head], dim[a.tail]))
        .collect();
    let identity = QMatrix::identity(&f, s);
    for (i, l) in b.letters.iter().enumerate() {
        let block = if i + 1 == n { t } else { &identity };
        let (src, dst) = if l.inverse { ((i + 1) % n, i) } else { (i, (i + 1) % n) };
        let m = &mut mats[l.arrow];
        for r in 0..s {
            for c in 0..s {
                let (row, col) = (idx[dst] * s + r, idx[src] * s + c);
                let v = m.get(row, col) + block.get(r, c);
                m.set(row, col, v);
            }
        }
    }
    Representation::new(bq.clone(), f, dim, mats)
}

/// Parameter of an identified band summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BandParameter {
    Rational(BigRational),
    /// Minimal polynomial of an irrational parameter: over Q the summand is
    /// the sum of the bands at all of its roots.
    Algebraic(Poly),
}

impl BandParameter {
    /// Number of geometric parameters represented.
    pub fn degree(&self) -> usize {
        match self {
            Self::Rational(_) => 1,
            Self::Algebraic(g) => g.degree().unwrap_or(0),
        }
    }
}

impl fmt::Display for BandParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational(l) => write!(f, "{}", format_rational(l)),
            Self::Algebraic(g) => write!(f, "root of {g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Identification {
    Simple(usize),
    String(StringWord),
    Band {
        word: BandWord,
        parameter: BandParameter,
        mult: usize,
    },
}

impl Identification {
    pub fn render(&self, q: &Quiver) -> String {
        match self {
            Self::Simple(v) => format!("simple S_{}", q.vertex_name(*v)),
            Self::String(w) => format!("string {}", w.render(q)),
            Self::Band { word, parameter, mult } => {
                let m = if *mult > 1 { format!(", mult {mult}") } else { String::new() };
                format!("band {} (lambda = {parameter}{m})", word.render(q))
            }
        }
    }
}

/// Strings and bands of one algebra up to a dimension bound, for repeated
/// identification.
#[derive(Clone, Debug)]
pub struct WordCatalog {
    algebra: Arc<BoundQuiver>,
    strings: Vec<(StringWord, QRep)>,
    bands: Vec<BandWord>,
}

impl WordCatalog {
    pub fn new(algebra: Arc<BoundQuiver>, max_total_dim: usize) -> Result<Self> {
        let strings = enumerate_strings(&algebra, max_total_dim)?
            .into_iter()
            .map(|w| string_module(&algebra, &w).map(|m| (w, m)))
            .collect::<Result<_>>()?;
        let bands = enumerate_bands(&algebra, max_total_dim)?;
        Ok(Self {
            algebra,
            strings,
            bands,
        })
    }

    pub fn algebra(&self) -> &Arc<BoundQuiver> {
        &self.algebra
    }

    pub fn strings(&self) -> impl Iterator<Item = &StringWord> {
        self.strings.iter().map(|(w, _)| w)
    }

    pub fn bands(&self) -> &[BandWord] {
        &self.bands
    }

    /// Names an indecomposable module as a string or band module.
    pub fn identify(&self, n: &QRep, trials: usize, seed: u64) -> Result<Identification> {
        let q = self.algebra.quiver();
        if *n.algebra().as_ref() != *self.algebra {
            return Err(Error::InvalidInput("module over a different algebra".into()));
        }
        for (k, (w, m)) in self.strings.iter().enumerate() {
            if m.dim() == n.dim() && is_isomorphic(m, n, trials, derive_seed(seed, k as u64))? {
                return Ok(if w.is_trivial() {
                    Identification::Simple(w.start)
                } else {
                    Identification::String(w.clone())
                });
            }
        }
        for (k, b) in self.bands.iter().enumerate() {
            let bd = b.dim_vector(q);
            let Some(ratio) = dim_ratio(n.dim(), &bd) else {
                continue;
            };
            let child = derive_seed(seed, (self.strings.len() + k) as u64);
            for g in parameter_candidates(&self.algebra, b, n, child)? {
                let e = g.degree().unwrap_or(0);
                if e == 0 || ratio % e != 0 || Rationals.is_zero(&g.coeff(0)) {
                    continue;
                }
                let mult = ratio / e;
                let (parameter, t) = if e == 1 {
                    let l = -g.coeff(0);
                    (BandParameter::Rational(l.clone()), jordan_block(&l, mult))
                } else {
                    (BandParameter::Algebraic(g.clone()), companion_block(&g, mult))
                };
                let candidate = band_module_with(&self.algebra, b, &t)?;
                if is_isomorphic(&candidate, n, trials, child)? {
                    return Ok(Identification::Band {
                        word: b.clone(),
                        parameter,
                        mult,
                    });
                }
            }
        }
        Err(Error::Unidentified(format!(
            "no string or band matches dimension vector {}",
            n.dim().render(q)
        )))
    }
}

/// `k` with `d = k * unit`, if any.
fn dim_ratio(d: &DimVector, unit: &DimVector) -> Option<usize> {
    let mut k = None;
    for (&a, &b) in d.0.iter().zip(&unit.0) {
        match (a, b) {
            (0, 0) => {}
            (_, 0) | (0, _) => return None,
            (a, b) if a % b != 0 => return None,
            (a, b) => match k {
                None => k = Some(a / b),
                Some(k0) if k0 != a / b => return None,
                _ => {}
            },
        }
    }
    k
}

/// Irreducible factors of a polynomial vanishing at every `t` for which
/// `dim Hom(B(b, t), N)` jumps, i.e. where the affine Hom system
/// `H(t) = H0 + t H1` drops below its generic rank `ρ`.
///
/// For a generic shift `s`, a nonsingular `ρ x ρ` minor `A` of `H(s)` is
/// picked from pivots. Only the parameter letter moves, so `H1` restricted
/// to that minor factors as `P Q` with few columns in `P`, and the minor of
/// `H(t)` equals `det(A) det(I + (t - s) Q A^-1 P)`. The gcd over two shifts
/// may keep spurious factors; callers confirm every candidate.
fn parameter_candidates(bq: &Arc<BoundQuiver>, b: &BandWord, n: &QRep, seed: u64) -> Result<Vec<Poly>> {
    let f = Rationals;
    let one = QMatrix::identity(&f, 1);
    let zero = QMatrix::zeros(&f, 1, 1);
    let h0 = hom_equations(&band_module_with(bq, b, &zero)?, n)?;
    let h1 = hom_equations(&band_module_with(bq, b, &one)?, n)?.sub(&f, &h0)?;
    let at = |t: &BigRational| h0.add(&f, &h1.scale(&f, t)).expect("same shape");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut minors = Vec::new();
    for _ in 0..2 {
        let s = f.from_i64(rng.gen_range(100..10_000));
        let m = at(&s);
        let (_, cols) = rref(&f, &m);
        if cols.is_empty() {
            return Ok(Vec::new());
        }
        let all_rows: Vec<usize> = (0..m.rows()).collect();
        let (_, rows) = rref(&f, &m.submatrix(&all_rows, &cols).transpose());
        let a = m.submatrix(&rows, &cols);
        let b1 = h1.submatrix(&rows, &cols);
        let (reduced, piv) = rref(&f, &b1);
        let k = piv.len();
        if k == 0 {
            continue;
        }
        let all_b1_rows: Vec<usize> = (0..b1.rows()).collect();
        let p = b1.submatrix(&all_b1_rows, &piv);
        let q = reduced.submatrix(&(0..k).collect::<Vec<_>>(), &(0..b1.cols()).collect::<Vec<_>>());
        // rref(A | P) = (I | A^-1 P)
        let rho = a.rows();
        let (solved, _) = rref(&f, &a.hstack(&p)?);
        let a_inv_p = solved.submatrix(&(0..rho).collect::<Vec<_>>(), &(rho..rho + k).collect::<Vec<_>>());
        let small = q.mul(&f, &a_inv_p)?;
        let id = QMatrix::identity(&f, k);
        let points: Vec<(BigRational, BigRational)> = (0..=k as i64)
            .map(|t| {
                let t = f.from_i64(t);
                let m = id.add(&f, &small.scale(&f, &(&t - &s))).expect("shape");
                let d = determinant(&f, &m).expect("square");
                (t, d)
            })
            .collect();
        minors.push(Poly::interpolate(&points));
    }
    let g = match minors.as_slice() {
        [] => return Ok(Vec::new()),
        [g] => g.clone(),
        [g0, g1, ..] => g0.gcd(g1),
    };
    Ok(factor(&g).into_iter().map(|(p, _)| p).collect())
}
