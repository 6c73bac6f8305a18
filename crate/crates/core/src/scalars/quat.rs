//! The rational quaternion division algebra (-1, -1 / Q).
//!
//! Elements a + bi + cj + dk with exact rational coefficients,
//! i^2 = j^2 = -1 and ij = k = -ji.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Guard on coefficient size (bits of numerator/denominator).
pub const HEIGHT_CAP_BITS: u64 = 1 << 20;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quaternion {
    /// Coefficients of 1, i, j, k.
    pub c: [BigRational; 4],
}

fn check_height(q: &Quaternion) -> Result<()> {
    for r in &q.c {
        let bits = r.numer().bits().max(r.denom().bits());
        if bits > HEIGHT_CAP_BITS {
            return Err(Error::HeightOverflow {
                got: bits,
                cap: HEIGHT_CAP_BITS,
            });
        }
    }
    Ok(())
}

impl Quaternion {
    pub fn new(c: [BigRational; 4]) -> Self {
        Quaternion { c }
    }

    pub fn zero() -> Self {
        Quaternion {
            c: std::array::from_fn(|_| BigRational::zero()),
        }
    }

    pub fn one() -> Self {
        let mut q = Self::zero();
        q.c[0] = BigRational::one();
        q
    }

    pub fn unit(idx: usize) -> Self {
        let mut q = Self::zero();
        q.c[idx] = BigRational::one();
        q
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut q = Self::zero();
        q.c[0] = r;
        q
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|r| r.is_zero())
    }

    /// True when the i, j, k parts vanish, i.e. the element is central.
    pub fn is_real(&self) -> bool {
        self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero()
    }

    pub fn is_pure(&self) -> bool {
        self.c[0].is_zero()
    }

    pub fn real_part(&self) -> Quaternion {
        Self::from_rational(self.c[0].clone())
    }

    pub fn pure_part(&self) -> Quaternion {
        let mut q = self.clone();
        q.c[0] = BigRational::zero();
        q
    }

    pub fn add(&self, o: &Quaternion) -> Result<Quaternion> {
        let q = Quaternion {
            c: std::array::from_fn(|i| &self.c[i] + &o.c[i]),
        };
        check_height(&q)?;
        Ok(q)
    }

    pub fn neg(&self) -> Quaternion {
        Quaternion {
            c: std::array::from_fn(|i| -&self.c[i]),
        }
    }

    pub fn sub(&self, o: &Quaternion) -> Result<Quaternion> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Quaternion) -> Result<Quaternion> {
        let (a1, b1, c1, d1) = (&self.c[0], &self.c[1], &self.c[2], &self.c[3]);
        let (a2, b2, c2, d2) = (&o.c[0], &o.c[1], &o.c[2], &o.c[3]);
        let q = Quaternion {
            c: [
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            ],
        };
        check_height(&q)?;
        Ok(q)
    }

    /// Standard involution a + bi + cj + dk -> a - bi - cj - dk.
    pub fn conj(&self) -> Quaternion {
        Quaternion {
            c: [self.c[0].clone(), -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }

    /// The reduced norm a^2 + b^2 + c^2 + d^2 (positive definite over Q).
    pub fn norm(&self) -> BigRational {
        self.c.iter().map(|r| r * r).sum()
    }

    pub fn inv(&self) -> Result<Quaternion> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let conj = self.conj();
        Ok(Quaternion {
            c: std::array::from_fn(|i| &conj.c[i] / &n),
        })
    }

    pub fn key(&self) -> Vec<(BigInt, BigInt)> {
        self.c
            .iter()
            .map(|r| (r.numer().clone(), r.denom().clone()))
            .collect()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl std::fmt::Display for Quaternion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let units = ["", "i", "j", "k"];
        let mut out = String::new();
        for (idx, r) in self.c.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let mag = r.abs();
            let coeff = if idx > 0 && mag.is_one() {
                String::new()
            } else {
                fmt_rational(&mag)
            };
            if out.is_empty() {
                if r.is_negative() {
                    out.push('-');
                }
            } else if r.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&coeff);
            out.push_str(units[idx]);
        }
        write!(f, "{}", out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defining_relations() {
        let i = Quaternion::unit(1);
        let j = Quaternion::unit(2);
        let k = Quaternion::unit(3);
        assert_eq!(i.mul(&j).unwrap(), k);
        assert_eq!(j.mul(&i).unwrap(), k.neg());
        assert_eq!(i.mul(&i).unwrap(), Quaternion::from_int(-1));
        assert_eq!(j.mul(&j).unwrap(), Quaternion::from_int(-1));
    }

    #[test]
    fn conjugation_is_involutive_antiautomorphism() {
        let i = Quaternion::unit(1);
        assert_eq!(i.conj(), i.neg());
        let a = Quaternion::new([
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::from_integer(BigInt::from(3)),
            BigRational::new(BigInt::from(-2), BigInt::from(5)),
            BigRational::from_integer(BigInt::from(1)),
        ]);
        let b = Quaternion::new([
            BigRational::from_integer(BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(3)),
            BigRational::from_integer(BigInt::from(-1)),
            BigRational::from_integer(BigInt::from(4)),
        ]);
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.mul(&b).unwrap().conj(), b.conj().mul(&a.conj()).unwrap());
    }

    #[test]
    fn inverse() {
        let a = Quaternion::new([
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(2)),
            BigRational::from_integer(BigInt::from(-3)),
            BigRational::new(BigInt::from(3), BigInt::from(4)),
        ]);
        assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), Quaternion::one());
        assert_eq!(a.inv().unwrap().mul(&a).unwrap(), Quaternion::one());
    }

    #[test]
    fn display() {
        let q = Quaternion::new([
            BigRational::from_integer(BigInt::from(1)),
            BigRational::from_integer(BigInt::from(2)),
            BigRational::zero(),
            BigRational::new(BigInt::from(-3), BigInt::from(4)),
        ]);
        assert_eq!(q.to_string(), "1 + 2i - 3/4k");
    }
}
