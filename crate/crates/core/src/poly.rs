//! Univariate polynomials over the rationals, characteristic polynomials
//! and factorization into irreducibles over Q.
//!
//! Factorization follows the classical route: square-free decomposition,
//! then for each square-free part a Zassenhaus factorization (factor modulo
//! a small prime, Hensel-lift, recombine lifted factors by trial division).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{denominator_lcm, format_rational, Field, Rationals};
use crate::linalg::{Matrix, QMatrix};

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rationals.from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `x - c`
    pub fn linear(c: &BigRational) -> Self {
        Self::new(vec![-c, BigRational::one()])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Evaluates the polynomial at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        let f = Rationals;
        let mut acc = Matrix::zeros(&f, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&f, m).expect("square");
            for i in 0..n {
                let v = acc.get(i, i) + c;
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> Self {
        let mut out = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let denom = xi - xj;
                    basis = basis.mul(&Self::new(vec![-xj / &denom, BigRational::one() / &denom]));
                }
            }
            out = out.add(&basis);
        }
        out
    }

    /// Integer primitive polynomial with positive leading coefficient,
    /// a rational multiple of `self`.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = denominator_lcm(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        if g.is_zero() {
            return ints;
        }
        ints.iter().map(|c| c * &sign / &g).collect()
    }

    fn from_integer_coeffs(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// Rational roots (without multiplicity) in increasing order.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots: Vec<BigRational> = factor(self)
            .into_iter()
            .filter(|(f, _)| f.degree() == Some(1))
            .map(|(f, _)| -f.coeff(0))
            .collect();
        roots.sort();
        roots
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || i == 0;
            if show_coeff {
                write!(f, "{}", format_rational(&abs))?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Deterministic order used to sort factor lists: by degree, then coefficients.
fn poly_order(a: &Poly, b: &Poly) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

/// Characteristic polynomial `det(xI - m)` via the Faddeev-LeVerrier recursion.
pub fn char_poly(m: &QMatrix) -> Poly {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let f = Rationals;
    let n = m.rows();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = Matrix::zeros(&f, n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = m.mul(&f, &mk).expect("square");
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        let am = m.mul(&f, &next).expect("square");
        coeffs[n - k] = -am.trace(&f) / BigRational::from_integer(BigInt::from(k));
        mk = next;
    }
    Poly::new(coeffs)
}

/// Yun's square-free decomposition: returns `(g_i, i)` with `f = lc * prod g_i^i`,
/// each `g_i` monic, square-free and pairwise coprime.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = f.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let mut c = df.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.monic(), i));
        }
        b = b.div_rem(&a).0;
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Factorization over Q into monic irreducibles with multiplicities,
/// sorted by degree then coefficients. Constants factor as the empty list.
pub fn factor(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    for (g, mult) in squarefree_decomposition(f) {
        for h in factor_squarefree(&g) {
            out.push((h, mult));
        }
    }
    out.sort_by(|a, b| poly_order(&a.0, &b.0).then(a.1.cmp(&b.1)));
    out
}

fn factor_squarefree(g: &Poly) -> Vec<Poly> {
    let n = g.degree().unwrap_or(0);
    if n <= 1 {
        return if n == 1 { vec![g.monic()] } else { Vec::new() };
    }
    let prim = g.primitive_integer();
    // Monic transform: F(y) = lc^(n-1) f(y / lc).
    let lc = prim[n].clone();
    let monic: Vec<BigInt> = (0..=n)
        .map(|i| {
            if i == n {
                BigInt::one()
            } else {
                &prim[i] * num_traits::pow(lc.clone(), n - 1 - i)
            }
        })
        .collect();
    let factors = zassenhaus_monic(&monic);
    factors
        .into_iter()
        .map(|h| {
            // h(lc x), then back to a monic rational polynomial.
            let scaled: Vec<BigInt> = h
                .iter()
                .enumerate()
                .map(|(i, c)| c * num_traits::pow(lc.clone(), i))
                .collect();
            Poly::from_integer_coeffs(&scaled).monic()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Polynomials over F_p (small p), lowest degree first.

type PolyP = Vec<u64>;

fn trim_p(a: &mut PolyP) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn mod_p(a: &[BigInt], p: u64) -> PolyP {
    let pb = BigInt::from(p);
    let mut out: PolyP = a
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("residue"))
        .collect();
    trim_p(&mut out);
    out
}

fn inv_p(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn sub_p(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let mut out: PolyP = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim_p(&mut out);
    out
}

fn add_p(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let n = a.len().max(b.len());
    let mut out: PolyP = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim_p(&mut out);
    out
}

fn mul_p(a: &[u64], b: &[u64], p: u64) -> PolyP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim_p(&mut out);
    out
}

fn divrem_p(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP) {
    let db = b.len() - 1;
    let inv = inv_p(b[db], p);
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db] * inv % p;
        if c != 0 {
            for (j, d) in b.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - c * d % p) % p;
            }
        }
        quot[k] = c;
    }
    rem.truncate(db);
    trim_p(&mut rem);
    trim_p(&mut quot);
    (quot, rem)
}

fn monic_p(a: &[u64], p: u64) -> PolyP {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_p(lc, p);
            a.iter().map(|c| c * inv % p).collect()
        }
    }
}

fn gcd_p(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = divrem_p(&a, &b, p).1;
        a = b;
        b = r;
    }
    monic_p(&a, p)
}

/// Extended Euclid: returns (s, t) with s a + t b = 1 (a, b coprime).
fn bezout_p(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1): (PolyP, PolyP) = (vec![1], Vec::new());
    let (mut t0, mut t1): (PolyP, PolyP) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem_p(&r0, &r1, p);
        let s2 = sub_p(&s0, &mul_p(&q, &s1, p), p);
        let t2 = sub_p(&t0, &mul_p(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    // r0 is a nonzero constant
    let inv = inv_p(r0[0], p);
    let s: PolyP = s0.iter().map(|c| c * inv % p).collect();
    let t: PolyP = t0.iter().map(|c| c * inv % p).collect();
    (s, t)
}

fn powmod_p(base: &[u64], mut e: u128, modulus: &[u64], p: u64) -> PolyP {
    let mut result: PolyP = vec![1];
    let mut b = divrem_p(base, modulus, p).1;
    while e > 0 {
        if e & 1 == 1 {
            result = divrem_p(&mul_p(&result, &b, p), modulus, p).1;
        }
        b = divrem_p(&mul_p(&b, &b, p), modulus, p).1;
        e >>= 1;
    }
    result
}

fn derivative_p(a: &[u64], p: u64) -> PolyP {
    let mut out: PolyP = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| (i as u64 % p) * c % p)
        .collect();
    trim_p(&mut out);
    out
}

/// Factors a monic square-free polynomial over F_p (p odd) into monic irreducibles.
fn factor_mod_p(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<PolyP> {
    // distinct-degree factorization
    let mut rest = f.to_vec();
    let mut dd: Vec<(PolyP, usize)> = Vec::new();
    let x: PolyP = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            dd.push((rest.clone(), rest.len() - 1));
            break;
        }
        h = powmod_p(&h, p as u128, &rest, p);
        let g = gcd_p(&rest, &sub_p(&h, &x, p), p);
        if g.len() > 1 {
            rest = divrem_p(&rest, &g, p).0;
            h = divrem_p(&h, &rest, p).1;
            dd.push((g, d));
        }
    }
    let mut out = Vec::new();
    for (g, d) in dd {
        equal_degree_split(&g, d, p, rng, &mut out);
    }
    out
}

fn equal_degree_split(g: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<PolyP>) {
    let n = g.len() - 1;
    if n == d {
        out.push(g.to_vec());
        return;
    }
    let e = (p as u128).pow(d as u32);
    let e = (e - 1) / 2;
    loop {
        let mut a: PolyP = (0..n).map(|_| rng.gen_range(0..p)).collect();
        trim_p(&mut a);
        if a.len() < 2 {
            continue;
        }
        let b = sub_p(&powmod_p(&a, e, g, p), &[1], p);
        let h = gcd_p(g, &b, p);
        if h.len() > 1 && h.len() < g.len() {
            let other = monic_p(&divrem_p(g, &h, p).0, p);
            equal_degree_split(&h, d, p, rng, out);
            equal_degree_split(&other, d, p, rng, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Integer polynomial helpers

fn symmetric_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn reduce_z(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = a.iter().map(|c| symmetric_mod(c, m)).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Exact division in Z[x] by a monic divisor; `None` if it does not divide.
fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let db = b.len() - 1;
    if a.len() <= db {
        return None;
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db].clone();
        if !c.is_zero() {
            for (j, d) in b.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
        }
        quot[k] = c;
    }
    if rem.iter().take(db).all(|c| c.is_zero()) {
        Some(quot)
    } else {
        None
    }
}

fn to_z(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// One linear Hensel step bundle: lift `f = g h (mod p)` to modulus `p^k`,
/// with `g` monic. Returns the lifted pair, both monic since `f` is monic.
fn hensel_lift(f: &[BigInt], g: &[u64], h: &[u64], p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let pb = BigInt::from(p);
    let (s, t) = bezout_p(g, h, p);
    let mut gz = to_z(g);
    let mut hz = to_z(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        // e = (f - g h) / p^j mod p
        let prod = mul_z(&gz, &hz);
        let n = f.len().max(prod.len());
        let diff: Vec<BigInt> = (0..n)
            .map(|i| {
                f.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default()
            })
            .collect();
        let e: Vec<BigInt> = diff.iter().map(|c| c / &pj).collect();
        let e = mod_p(&e, p);
        if !e.is_empty() {
            // t e = q g + dg, and then e = g (s e + q h) + h dg.
            let (q, dg) = divrem_p(&mul_p(&t, &e, p), g, p);
            let dh = add_p(&mul_p(&s, &e, p), &mul_p(&q, h, p), p);
            for (i, c) in dg.iter().enumerate() {
                if i >= gz.len() {
                    gz.resize(i + 1, BigInt::zero());
                }
                gz[i] += &pj * BigInt::from(*c);
            }
            for (i, c) in dh.iter().enumerate() {
                if i >= hz.len() {
                    hz.resize(i + 1, BigInt::zero());
                }
                hz[i] += &pj * BigInt::from(*c);
            }
        }
        pj *= &pb;
    }
    (reduce_z(&gz, &pj), reduce_z(&hz, &pj))
}

/// Zassenhaus factorization of a monic, square-free integer polynomial.
fn zassenhaus_monic(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // choose an odd prime for which f stays square-free
    let mut p = 3u64;
    loop {
        if crate::field::is_prime(p) {
            let fp = mod_p(f, p);
            if fp.len() == f.len() {
                let g = gcd_p(&fp, &derivative_p(&fp, p), p);
                if g.len() == 1 {
                    break;
                }
            }
        }
        p += 2;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d ^ p);
    let fp = mod_p(f, p);
    let mut local = factor_mod_p(&fp, p, &mut rng);
    if local.len() == 1 {
        return vec![f.to_vec()];
    }
    local.sort();

    // Mignotte-style bound on factor coefficients: 2^n * sum |c_i|.
    let norm: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = (BigInt::one() << n) * norm * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }

    // sequential multifactor lifting
    let mut lifted: Vec<Vec<BigInt>> = Vec::new();
    let mut target = f.to_vec();
    for i in 0..local.len() - 1 {
        let rest = local[i + 1..]
            .iter()
            .fold(vec![1u64], |acc, g| mul_p(&acc, g, p));
        let (g, h) = hensel_lift(&target, &local[i], &rest, p, k);
        lifted.push(g);
        target = h;
    }
    lifted.push(target);

    // recombination
    let mut remaining = f.to_vec();
    let mut pool: Vec<Vec<BigInt>> = lifted;
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= pool.len() {
        let mut hit = None;
        for subset in combinations(pool.len(), size) {
            let cand = subset
                .iter()
                .fold(vec![BigInt::one()], |acc, &i| reduce_z(&mul_z(&acc, &pool[i]), &pk));
            if let Some(q) = exact_div_monic(&remaining, &cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                remaining = q;
                pool = pool
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
            }
            None => size += 1,
        }
    }
    if remaining.len() > 1 {
        found.push(remaining);
    }
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
