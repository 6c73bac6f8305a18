//! Polynomials over F_2, bit-packed into 64-bit words.
//!
//! Bit `i` of the word vector is the coefficient of `t^i`. Addition is XOR,
//! multiplication is shift-and-XOR. Every nonzero polynomial over F_2 is
//! monic, so no normalization beyond trimming high zero words is needed.

use crate::error::{Error, Result};

/// Hard guard against runaway intermediate growth. Parsed inputs are capped
/// much lower (see [`crate::scalars::INPUT_DEGREE_CAP`]).
pub const GUARD_DEGREE_CAP: usize = 1 << 16;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly2 {
    words: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2 { words: vec![1] }
    }

    /// The monomial t^k.
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; k / 64 + 1];
        words[k / 64] = 1u64 << (k % 64);
        Poly2 { words }
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Poly2 { words };
        p.trim();
        p
    }

    /// Coefficients as exponents of the nonzero terms, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, word) in self.words.iter().enumerate() {
            let mut m = *word;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                out.push(w * 64 + b);
                m &= m - 1;
            }
        }
        out
    }

    fn trim(&mut self) {
        while let Some(&0) = self.words.last() {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + (63 - last.leading_zeros() as usize))
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words
            .get(k / 64)
            .map(|w| (w >> (k % 64)) & 1 == 1)
            .unwrap_or(false)
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let (long, short) = if self.words.len() >= other.words.len() {
            (&self.words, &other.words)
        } else {
            (&other.words, &self.words)
        };
        let mut words = long.clone();
        for (i, w) in short.iter().enumerate() {
            words[i] ^= w;
        }
        Poly2::from_words(words)
    }

    pub fn mul(&self, other: &Poly2) -> Result<Poly2> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly2::zero());
        }
        let da = self.degree().unwrap();
        let db = other.degree().unwrap();
        if da + db > GUARD_DEGREE_CAP {
            return Err(Error::DegreeOverflow {
                got: da + db,
                cap: GUARD_DEGREE_CAP,
            });
        }
        let mut words = vec![0u64; (da + db) / 64 + 1];
        for k in self.support() {
            let shift_w = k / 64;
            let shift_b = k % 64;
            for (i, w) in other.words.iter().enumerate() {
                if *w == 0 {
                    continue;
                }
                words[i + shift_w] ^= w << shift_b;
                if shift_b != 0 && i + shift_w + 1 < words.len() {
                    words[i + shift_w + 1] ^= w >> (64 - shift_b);
                }
            }
        }
        Ok(Poly2::from_words(words))
    }

    /// Quotient and remainder of self by `d`.
    pub fn divrem(&self, d: &Poly2) -> Result<(Poly2, Poly2)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.degree().unwrap();
        let mut rem = self.clone();
        let mut quo = Poly2::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            quo = quo.add(&Poly2::monomial(shift));
            rem = rem.add(&d.mul(&Poly2::monomial(shift))?);
        }
        Ok((quo, rem))
    }

    pub fn gcd(&self, other: &Poly2) -> Result<Poly2> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Squaring, i.e. the substitution t -> t^2 (characteristic 2).
    pub fn square(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for k in self.support() {
            out = out.add(&Poly2::monomial(2 * k));
        }
        out
    }

    /// Split into even- and odd-exponent parts with exponents halved:
    /// `self = even.square() + t * odd.square()`.
    pub fn split_halved(&self) -> (Poly2, Poly2) {
        let mut even = Poly2::zero();
        let mut odd = Poly2::zero();
        for k in self.support() {
            if k % 2 == 0 {
                even = even.add(&Poly2::monomial(k / 2));
            } else {
                odd = odd.add(&Poly2::monomial((k - 1) / 2));
            }
        }
        (even, odd)
    }

    /// Total order: by degree, then by coefficient words.
    pub fn key(&self) -> (usize, Vec<u64>) {
        (self.degree().map_or(0, |d| d + 1), self.words.clone())
    }
}

impl std::fmt::Display for Poly2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<String> = Vec::new();
        for k in self.support().into_iter().rev() {
            terms.push(match k {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{}", k),
            });
        }
        write!(f, "{}", terms.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_divrem_roundtrip() {
        let a = Poly2::from_words(vec![0b1011]); // t^3 + t + 1
        let b = Poly2::from_words(vec![0b110]); // t^2 + t
        let p = a.mul(&b).unwrap();
        let (q, r) = p.divrem(&a).unwrap();
        assert_eq!(q, b);
        assert!(r.is_zero());
    }

    #[test]
    fn square_spreads_exponents() {
        let a = Poly2::from_words(vec![0b111]); // t^2 + t + 1
        assert_eq!(a.square(), Poly2::from_words(vec![0b10101]));
    }

    #[test]
    fn split_halved_reassembles() {
        let a = Poly2::from_words(vec![0b1101101]);
        let (e, o) = a.split_halved();
        let back = e
            .square()
            .add(&Poly2::monomial(1).mul(&o.square()).unwrap());
        assert_eq!(back, a);
    }

    #[test]
    fn display_matches_grammar() {
        let a = Poly2::from_words(vec![0b1010]); // t^3 + t
        assert_eq!(a.to_string(), "t^3+t");
        assert_eq!(Poly2::one().to_string(), "1");
        assert_eq!(Poly2::zero().to_string(), "0");
    }
}
