//! Finite fields F_{p^n} as `F_p[x]` modulo a fixed irreducible polynomial.
//!
//! The modulus per (p, n) is fixed and documented: small cases come from the
//! Conway polynomial table below; for everything else we take the monic
//! irreducible polynomial of degree n whose coefficient vector
//! (c_{n-1}, ..., c_1, c_0) is smallest in counting order. This keeps element
//! payloads reproducible across runs.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

/// Elements are coefficient vectors of length n over F_p, little-endian
/// (index i holds the coefficient of x^i), always reduced mod the modulus.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GfElem {
    pub p: u64,
    pub n: u32,
    pub coeffs: Vec<u64>,
}

/// Conway polynomials for the small cases exercised by the test corpus.
/// Entries list the non-leading coefficients (c_0, ..., c_{n-1}).
const CONWAY: &[(u64, u32, &[u64])] = &[
    (2, 2, &[1, 1]),    // x^2 + x + 1
    (2, 3, &[1, 1, 0]), // x^3 + x + 1
    (2, 4, &[1, 1, 0, 0]),
    (3, 2, &[2, 2]), // x^2 + 2x + 2
    (3, 3, &[1, 2, 0]),
    (5, 2, &[2, 4]), // x^2 + 4x + 2
    (7, 2, &[3, 6]),
];

fn modulus_cache() -> &'static Mutex<HashMap<(u64, u32), Vec<u64>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Vec<u64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Non-leading coefficients (c_0 .. c_{n-1}) of the fixed modulus for F_{p^n}.
pub fn modulus(p: u64, n: u32) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    if let Some((_, _, c)) = CONWAY.iter().find(|(cp, cn, _)| *cp == p && *cn == n) {
        return c.to_vec();
    }
    let mut cache = modulus_cache().lock().unwrap();
    if let Some(m) = cache.get(&(p, n)) {
        return m.clone();
    }
    let m = search_irreducible(p, n);
    cache.insert((p, n), m.clone());
    m
}

/// Smallest monic irreducible of degree n in counting order of the
/// non-leading coefficient vector read as a base-p number.
fn search_irreducible(p: u64, n: u32) -> Vec<u64> {
    let total = (p as u128).pow(n);
    for idx in 0..total {
        let mut c = Vec::with_capacity(n as usize);
        let mut rest = idx;
        for _ in 0..n {
            c.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        if is_irreducible(p, n, &c) {
            return c;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p");
}

/// Trial division by all monic polynomials of degree 1..=n/2.
fn is_irreducible(p: u64, n: u32, c: &[u64]) -> bool {
    // poly = x^n + sum c_i x^i, dense little-endian with leading 1
    let mut poly = c.to_vec();
    poly.push(1);
    if n >= 1 && poly[0] == 0 {
        return false; // divisible by x
    }
    for d in 1..=(n / 2) {
        let count = (p as u128).pow(d);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d as usize + 1);
            let mut rest = idx;
            for _ in 0..d {
                div.push((rest % p as u128) as u64);
                rest /= p as u128;
            }
            div.push(1);
            if poly_rem_is_zero(p, &poly, &div) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u64, a: &[u64], d: &[u64]) -> bool {
    let mut rem: Vec<u64> = a.to_vec();
    let dd = d.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let k = rem.len() - 1 - dd;
        if lead != 0 {
            for i in 0..=dd {
                let idx = k + i;
                rem[idx] = (rem[idx] + p * p - (lead * d[i]) % p) % p;
            }
        }
        rem.pop();
        while rem.len() > dd && *rem.last().unwrap() == 0 {
            rem.pop();
        }
    }
    rem.iter().all(|&x| x == 0)
}

impl GfElem {
    pub fn zero(p: u64, n: u32) -> Self {
        GfElem {
            p,
            n,
            coeffs: vec![0; n as usize],
        }
    }

    pub fn one(p: u64, n: u32) -> Self {
        let mut e = Self::zero(p, n);
        e.coeffs[0] = 1;
        e
    }

    /// The class of x, written `w` in the element grammar.
    pub fn generator(p: u64, n: u32) -> Self {
        if n == 1 {
            // For a prime field the grammar has no w; expose the smallest
            // multiplicative generator candidate instead (unused internally).
            return Self::one(p, 1);
        }
        let mut e = Self::zero(p, n);
        e.coeffs[1] = 1;
        e
    }

    pub fn from_int(p: u64, n: u32, v: i64) -> Self {
        let mut e = Self::zero(p, n);
        e.coeffs[0] = v.rem_euclid(p as i64) as u64;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &GfElem) -> GfElem {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        GfElem {
            p: self.p,
            n: self.n,
            coeffs,
        }
    }

    pub fn neg(&self) -> GfElem {
        let coeffs = self.coeffs.iter().map(|a| (self.p - a) % self.p).collect();
        GfElem {
            p: self.p,
            n: self.n,
            coeffs,
        }
    }

    pub fn sub(&self, o: &GfElem) -> GfElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &GfElem) -> GfElem {
        let p = self.p;
        let n = self.n as usize;
        let mut prod = vec![0u64; 2 * n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // reduce by x^n = -(c_{n-1} x^{n-1} + ... + c_0)
        let m = modulus(p, self.n);
        for k in (n..2 * n).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, c) in m.iter().enumerate() {
                let idx = k - n + i;
                prod[idx] = (prod[idx] + p * p - (lead * c) % p) % p;
            }
        }
        prod.truncate(n);
        GfElem {
            p,
            n: self.n,
            coeffs: prod,
        }
    }

    pub fn pow(&self, mut e: u64) -> GfElem {
        let mut base = self.clone();
        let mut acc = GfElem::one(self.p, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<GfElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = (self.p as u128).pow(self.n);
        debug_assert!(q <= u64::MAX as u128);
        Ok(self.pow(q as u64 - 2))
    }

    /// x -> x^(p^k), the k-th Frobenius power.
    pub fn frobenius(&self, k: u32) -> GfElem {
        let k = k % self.n;
        if k == 0 {
            return self.clone();
        }
        let e = (self.p as u128).pow(k);
        self.pow(e as u64)
    }

    /// Total order key: the element as the integer sum c_i p^i.
    pub fn key(&self) -> u128 {
        let mut acc: u128 = 0;
        for c in self.coeffs.iter().rev() {
            acc = acc * self.p as u128 + *c as u128;
        }
        acc
    }

    /// Field size p^n.
    pub fn field_size(p: u64, n: u32) -> u128 {
        (p as u128).pow(n)
    }

    /// All field elements in key order.
    pub fn all(p: u64, n: u32) -> Vec<GfElem> {
        let q = Self::field_size(p, n);
        assert!(q <= 1 << 16, "field enumeration capped at 2^16 elements");
        let mut out = Vec::with_capacity(q as usize);
        for idx in 0..q {
            let mut coeffs = Vec::with_capacity(n as usize);
            let mut rest = idx;
            for _ in 0..n {
                coeffs.push((rest % p as u128) as u64);
                rest /= p as u128;
            }
            out.push(GfElem { p, n, coeffs });
        }
        out
    }
}

impl std::fmt::Display for GfElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<String> = Vec::new();
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, c) => format!("{}", c),
                (i, 1) => format!("w^{}", i),
                (i, c) => format!("{}w^{}", c, i),
            });
        }
        write!(f, "{}", terms.join("+"))
    }
}
