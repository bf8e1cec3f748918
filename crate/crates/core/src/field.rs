//! Finite field arithmetic over GF(p^e) backed by precomputed tables.
//!
//! Elements are integer indices `0..q`. The index of an element is the
//! base-`p` encoding of its polynomial representative, so `Σ c_i x^i` is
//! stored as `Σ c_i p^i`. Index 0 is zero and index 1 is one.

use std::fmt;

use crate::error::{Error, Result};

/// Default upper bound on the field order.
pub const DEFAULT_FIELD_CAP: u64 = 64;

/// Hard ceiling for configurable caps; the tables are `q * q` entries.
pub const MAX_FIELD_CAP: u64 = 4096;

/// An element of GF(q), identified by its polynomial encoding.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// GF(p^e) with its defining modulus and full operation tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    e: u32,
    q: u64,
    modulus: u64,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first, no
// trailing zeros.

fn decode(mut index: u64, p: u64) -> Vec<u64> {
    let mut coeffs = Vec::new();
    while index > 0 {
        coeffs.push(index % p);
        index /= p;
    }
    coeffs
}

fn encode(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn trim(poly: &mut Vec<u64>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

fn inv_mod_prime(a: u64, p: u64) -> u64 {
    // Fermat; p is small.
    let mut result = 1;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

fn poly_rem(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dd = den.len() - 1;
    let lead_inv = inv_mod_prime(den[dd], p);
    while rem.len() > dd {
        let shift = rem.len() - 1 - dd;
        let factor = rem[rem.len() - 1] * lead_inv % p;
        for (i, &c) in den.iter().enumerate() {
            let slot = &mut rem[shift + i];
            *slot = (*slot + p - factor * c % p) % p;
        }
        trim(&mut rem);
    }
    rem
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let monic_lo = p.pow(d as u32);
        for enc in monic_lo..2 * monic_lo {
            if poly_rem(poly, &decode(enc, p), p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^e) with the default order cap.
    pub fn build(p: u64, e: u32) -> Result<Self> {
        Self::build_with_cap(p, e, DEFAULT_FIELD_CAP)
    }

    pub fn build_with_cap(p: u64, e: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidParameters("extension degree must be at least 1".into()));
        }
        let cap = cap.min(MAX_FIELD_CAP);
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= cap)
            .ok_or(Error::FieldTooLarge { order: p.saturating_pow(e), cap })?;

        // Smallest encoding among monic irreducibles of degree e.
        let modulus = (q..2 * q)
            .find(|&enc| is_irreducible(&decode(enc, p), p))
            .expect("an irreducible polynomial of every degree exists");
        let modulus_poly = decode(modulus, p);

        let qs = q as usize;
        let polys: Vec<Vec<u64>> = (0..q).map(|i| decode(i, p)).collect();
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let len = polys[a].len().max(polys[b].len());
                let sum: Vec<u64> = (0..len)
                    .map(|i| {
                        (polys[a].get(i).copied().unwrap_or(0) + polys[b].get(i).copied().unwrap_or(0)) % p
                    })
                    .collect();
                add[a * qs + b] = encode(&sum, p) as u16;
                let prod = poly_rem(&poly_mul(&polys[a], &polys[b], p), &modulus_poly, p);
                mul[a * qs + b] = encode(&prod, p) as u16;
            }
        }
        let mut neg = vec![0u16; qs];
        let mut inv = vec![0u16; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).expect("additive inverse") as u16;
            if a != 0 {
                inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).expect("multiplicative inverse") as u16;
            }
        }
        Ok(FieldSpec { p, e, q, modulus, add, mul, neg, inv })
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Self> {
        Self::with_order_and_cap(q, DEFAULT_FIELD_CAP)
    }

    pub fn with_order_and_cap(q: u64, cap: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::build_with_cap(p, e, cap)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Integer encoding of the monic defining polynomial, leading term included.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.q as usize
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index as u16))
        } else {
            Err(Error::InvalidParameters(format!("{index} is not an element of GF({})", self.q)))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u16).map(FieldElement)
    }

    /// Polynomial coefficients of `a`, lowest degree first, padded to `e`.
    pub fn coefficients(&self, a: FieldElement) -> Vec<u64> {
        let mut c = decode(a.0 as u64, self.p);
        c.resize(self.e as usize, 0);
        c
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.index() * self.size() + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[a.index() * self.size() + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.index()])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::ZeroInverse)
        } else {
            Ok(FieldElement(self.inv[a.index()]))
        }
    }

    pub fn pow(&self, a: FieldElement, exp: u64) -> FieldElement {
        (0..exp).fold(FieldElement::ONE, |acc, _| self.mul(acc, a))
    }
}
