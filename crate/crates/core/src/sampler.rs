//! Deterministic sample generator for randomized identity checks.
//!
//! A splitmix64 stream keyed by an explicit seed: identical seeds produce
//! identical samples on every platform, which keeps the verification suites
//! and CLI reports byte-reproducible.

use crate::scalars::{gf::GfElem, poly2::Poly2, quat::Quaternion, RingElement, RingSpec};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Default seed used by CLI runs when none is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug)]
pub struct Sampler {
    state: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    pub fn poly2(&mut self, max_deg: usize) -> Poly2 {
        let deg = self.below(max_deg as u64 + 1) as usize;
        let mut words = vec![0u64; deg / 64 + 1];
        for w in words.iter_mut() {
            *w = self.next_u64();
        }
        // force degree exactly `deg` and clear everything above
        let top_word = deg / 64;
        let top_bit = deg % 64;
        words.truncate(top_word + 1);
        words[top_word] &= (1u64 << top_bit) - 1;
        words[top_word] |= 1u64 << top_bit;
        Poly2::from_words(words)
    }

    pub fn rational(&mut self, max_abs: u64) -> BigRational {
        let n = self.below(2 * max_abs + 1) as i64 - max_abs as i64;
        let d = self.below(max_abs) as i64 + 1;
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Random element with small payload: full range for finite fields,
    /// numerator/denominator degree at most `size` for F_2(t), coefficient
    /// height about `size` for quaternions.
    pub fn element_sized(&mut self, ring: &RingSpec, size: usize) -> RingElement {
        match ring {
            RingSpec::FiniteField { p, n } => {
                let coeffs = (0..*n).map(|_| self.below(*p)).collect();
                RingElement::Gf(GfElem {
                    p: *p,
                    n: *n,
                    coeffs,
                })
            }
            RingSpec::FuncField2 => {
                let num = if self.below(8) == 0 {
                    Poly2::zero()
                } else {
                    self.poly2(size)
                };
                let den = if self.below(3) == 0 {
                    self.poly2(size.min(2))
                } else {
                    Poly2::one()
                };
                RingElement::Func(
                    crate::scalars::func::FuncElem::new(num, den)
                        .expect("denominator is nonzero by construction"),
                )
            }
            RingSpec::Quaternions => {
                let m = size.max(1) as u64;
                RingElement::Quat(Quaternion::new([
                    self.rational(m),
                    self.rational(m),
                    self.rational(m),
                    self.rational(m),
                ]))
            }
        }
    }

    pub fn element(&mut self, ring: &RingSpec) -> RingElement {
        self.element_sized(ring, 4)
    }

    pub fn nonzero_element(&mut self, ring: &RingSpec) -> RingElement {
        loop {
            let e = self.element(ring);
            if !e.is_zero() {
                return e;
            }
        }
    }

    pub fn vector(&mut self, ring: &RingSpec, n: usize) -> Vec<RingElement> {
        (0..n).map(|_| self.element(ring)).collect()
    }

    pub fn vector_sized(&mut self, ring: &RingSpec, n: usize, size: usize) -> Vec<RingElement> {
        (0..n).map(|_| self.element_sized(ring, size)).collect()
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }
}
