//! Exact arithmetic in small finite fields GF(p^h).
//!
//! Every field is built deterministically: the defining polynomial is the
//! lexicographically least monic irreducible of degree `h` (coefficient list
//! read constant term first). Elements are stored as their index
//! `sum(coeffs[i] * p^i)`, so `0` and `1` are the additive and multiplicative
//! identities and serialization is just the integer.
//!
//! All operations are table driven; a [`FieldCtx`] is cheap to clone and
//! immutable after construction.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{h} exceeds the supported maximum {MAX_ORDER}")]
    Unsupported { p: u32, h: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("inversion of zero")]
    InverseOfZero,
    #[error("element index {index} out of range for GF({q})")]
    OutOfRange { index: u32, q: u32 },
    #[error("Frobenius exponent {e} must be below the degree {h}")]
    BadExponent { e: u32, h: u32 },
}

/// An element of a finite field, identified by its index in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Builds an element from an index without checking it against a field.
    pub const fn from_index_unchecked(index: u8) -> Self {
        FieldElement(index)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Binary and unary operations accepted by [`FieldCtx::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow(u64),
}

struct Tables {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// `frob[e][a] = a^(p^e)`.
    frob: Vec<Vec<u8>>,
    primitive: u8,
}

/// A finite field GF(p^h) with precomputed operation tables.
#[derive(Clone)]
pub struct FieldCtx(Arc<Tables>);

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.h)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.h == other.0.h
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, h)`.
pub fn prime_power(q: u32) -> Result<(u32, u32), GfError> {
    if q < 2 {
        return Err(GfError::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let (mut rest, mut h) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    if rest != 1 {
        return Err(GfError::NotPrimePower(q));
    }
    Ok((p, h))
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p); both constant term first.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let t = (lead * c) % p;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r
}

/// Digits of `idx` in base `p`, most significant first, `len` digits.
fn digits_msf(mut idx: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % p;
        idx /= p;
    }
    out
}

/// Irreducibility by exhaustive search for a monic divisor of degree at most `deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut div = digits_msf(idx, p, d);
            div.reverse();
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically least monic irreducible polynomial of degree `h`,
/// comparing coefficient lists constant term first.
fn least_irreducible(p: u32, h: u32) -> Vec<u32> {
    let h = h as usize;
    for idx in 0..p.pow(h as u32) {
        let mut poly = digits_msf(idx, p, h);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn to_coeffs(mut index: u32, p: u32, h: u32) -> Vec<u32> {
    (0..h)
        .map(|_| {
            let c = index % p;
            index /= p;
            c
        })
        .collect()
}

fn from_coeffs(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Builds the deterministic field GF(p^h).
pub fn make_field(p: u32, h: u32) -> Result<FieldCtx, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if h == 0 {
        return Err(GfError::ZeroDegree);
    }
    let q = (p as u64).checked_pow(h).filter(|&q| q <= MAX_ORDER as u64);
    let q = q.ok_or(GfError::Unsupported { p, h })? as u32;
    let modulus = least_irreducible(p, h);
    let qs = q as usize;

    let mut add = vec![0u8; qs * qs];
    let mut mul = vec![0u8; qs * qs];
    let coeffs: Vec<Vec<u32>> = (0..q).map(|i| to_coeffs(i, p, h)).collect();
    for a in 0..qs {
        for b in 0..qs {
            let sum: Vec<u32> = coeffs[a].iter().zip(&coeffs[b]).map(|(x, y)| (x + y) % p).collect();
            add[a * qs + b] = from_coeffs(&sum, p) as u8;

            let mut prod = vec![0u32; 2 * h as usize - 1];
            for (i, x) in coeffs[a].iter().enumerate() {
                for (j, y) in coeffs[b].iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut rem = if h == 1 { prod } else { poly_rem(&prod, &modulus, p) };
            rem.resize(h as usize, 0);
            mul[a * qs + b] = from_coeffs(&rem, p) as u8;
        }
    }
    let mut neg = vec![0u8; qs];
    let mut inv = vec![0u8; qs];
    for a in 0..qs {
        neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8;
        if a != 0 {
            inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u8;
        }
    }
    let pow = |a: usize, e: u64| -> u8 {
        let mut r = 1usize;
        for _ in 0..e {
            r = mul[r * qs + a] as usize;
        }
        if e == 0 {
            1
        } else {
            r as u8
        }
    };
    let frob: Vec<Vec<u8>> =
        (0..h).map(|e| (0..qs).map(|a| if a == 0 { 0 } else { pow(a, (p as u64).pow(e)) }).collect()).collect();
    let primitive = (1..qs)
        .find(|&a| {
            let mut x = a;
            let mut ord = 1;
            while x != 1 {
                x = mul[x * qs + a] as usize;
                ord += 1;
            }
            ord == qs - 1
        })
        .unwrap() as u8;

    Ok(FieldCtx(Arc::new(Tables { p, h, q, modulus, add, mul, neg, inv, frob, primitive })))
}

/// Builds GF(q) for a prime power `q`.
pub fn field_of_order(q: u32) -> Result<FieldCtx, GfError> {
    let (p, h) = prime_power(q)?;
    make_field(p, h)
}

impl FieldCtx {
    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn h(&self) -> u32 {
        self.0.h
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Defining polynomial, constant term first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, GfError> {
        if index >= self.0.q {
            return Err(GfError::OutOfRange { index, q: self.0.q });
        }
        Ok(FieldElement(index as u8))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, GfError> {
        let index = from_coeffs(coeffs, self.0.p);
        self.element(index)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        to_coeffs(a.0 as u32, self.0.p, self.0.h)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(|i| FieldElement(i as u8))
    }

    /// A generator of the multiplicative group (the one of least index).
    pub fn primitive_element(&self) -> FieldElement {
        FieldElement(self.0.primitive)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.0.add[a.index() * self.0.q as usize + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.0.mul[a.index() * self.0.q as usize + b.index()])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.is_zero() {
            return Err(GfError::InverseOfZero);
        }
        Ok(FieldElement(self.0.inv[a.index()]))
    }

    /// Inverse of a value already known to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        FieldElement(self.0.inv[a.index()])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(p^e)`, for `0 <= e < h`.
    pub fn frobenius(&self, a: FieldElement, e: u32) -> Result<FieldElement, GfError> {
        if e >= self.0.h {
            return Err(GfError::BadExponent { e, h: self.0.h });
        }
        Ok(self.frob(a, e))
    }

    /// Frobenius power with the exponent reduced modulo `h`.
    #[inline]
    pub fn frob(&self, a: FieldElement, e: u32) -> FieldElement {
        FieldElement(self.0.frob[(e % self.0.h) as usize][a.index()])
    }

    /// Single entry point dispatching on [`ArithOp`]; `b` is ignored by unary operations.
    pub fn arith(&self, op: ArithOp, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Inv => self.inv(a)?,
            ArithOp::Pow(e) => self.pow(a, e),
        })
    }

    /// Elements of the subfield of order `q0`, which must divide the field in the usual sense.
    pub fn subfield(&self, q0: u32) -> Option<Vec<FieldElement>> {
        let (p0, h0) = prime_power(q0).ok()?;
        if p0 != self.0.p || self.0.h % h0 != 0 {
            return None;
        }
        Some(self.elements().filter(|&a| self.pow(a, q0 as u64) == a).collect())
    }

    /// Embeds `sub` into this field: returns the image of every element of `sub`
    /// (indexed by element index) under a field monomorphism.
    pub fn embedding_of(&self, sub: &FieldCtx) -> Option<Vec<FieldElement>> {
        if sub.p() != self.p() || self.h() % sub.h() != 0 {
            return None;
        }
        let m = sub.modulus();
        // a root of the defining polynomial of `sub` inside this field
        let root = self.elements().find(|&r| {
            let mut acc = FieldElement::ZERO;
            for &c in m.iter().rev() {
                acc = self.add(self.mul(acc, r), self.scalar(c));
            }
            acc.is_zero()
        })?;
        let map = sub
            .elements()
            .map(|a| {
                let mut acc = FieldElement::ZERO;
                for &c in sub.coeffs(a).iter().rev() {
                    acc = self.add(self.mul(acc, root), self.scalar(c));
                }
                acc
            })
            .collect();
        Some(map)
    }

    /// The prime-field element `c mod p`.
    pub fn scalar(&self, c: u32) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for _ in 0..(c % self.0.p) {
            acc = self.add(acc, FieldElement::ONE);
        }
        acc
    }
}
