//! The rational function field F_2(t): reduced fractions of `F_2[t]` polynomials.
//!
//! Fractions are kept in lowest terms. Over F_2 every nonzero polynomial is
//! monic, so representatives are canonical without further normalization.

use super::poly2::Poly2;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FuncElem {
    num: Poly2,
    den: Poly2,
}

impl FuncElem {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(FuncElem {
                num: Poly2::zero(),
                den: Poly2::one(),
            });
        }
        let g = num.gcd(&den)?;
        let (num, _) = num.divrem(&g)?;
        let (den, _) = den.divrem(&g)?;
        Ok(FuncElem { num, den })
    }

    pub fn from_poly(p: Poly2) -> Self {
        FuncElem {
            num: p,
            den: Poly2::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly2::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly2::one())
    }

    /// The indeterminate t.
    pub fn gen() -> Self {
        Self::from_poly(Poly2::monomial(1))
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, o: &FuncElem) -> Result<FuncElem> {
        let n = self.num.mul(&o.den)?.add(&o.num.mul(&self.den)?);
        FuncElem::new(n, self.den.mul(&o.den)?)
    }

    pub fn mul(&self, o: &FuncElem) -> Result<FuncElem> {
        FuncElem::new(self.num.mul(&o.num)?, self.den.mul(&o.den)?)
    }

    pub fn inv(&self) -> Result<FuncElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FuncElem {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn div(&self, o: &FuncElem) -> Result<FuncElem> {
        self.mul(&o.inv()?)
    }

    /// Squaring is the substitution t -> t^2 in characteristic 2.
    pub fn square(&self) -> FuncElem {
        FuncElem {
            num: self.num.square(),
            den: self.den.square(),
        }
    }

    /// Unique (a, b) with `self = a^2 + t * b^2`.
    ///
    /// For u = p/q write u = (p q)/q^2, split the numerator's monomials by
    /// exponent parity and halve exponents; q^2 halves back to q exactly.
    pub fn sqrt_decompose(&self) -> Result<(FuncElem, FuncElem)> {
        let c = self.num.mul(&self.den)?;
        let (even, odd) = c.split_halved();
        Ok((
            FuncElem::new(even, self.den.clone())?,
            FuncElem::new(odd, self.den.clone())?,
        ))
    }

    /// Maximum of numerator and denominator degree.
    pub fn height(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    pub fn key(&self) -> (usize, Vec<u64>, Vec<u64>) {
        let (d, nk) = self.num.key();
        let (_, dk) = self.den.key();
        (d, nk, dk)
    }
}

impl std::fmt::Display for FuncElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
