//! Exact arithmetic for the three supported coefficient systems and their
//! anti-automorphisms: finite fields F_{p^n}, the rational function field
//! F_2(t), and the rational quaternions (-1, -1 / Q).
//!
//! All values are immutable after construction and every operation is a pure
//! function, so concurrent evaluation needs no synchronization.

pub mod func;
pub mod gf;
pub mod poly2;
pub mod quat;

use crate::error::{Error, Result};
use func::FuncElem;
use gf::GfElem;
use poly2::Poly2;
use quat::Quaternion;

/// Degree cap applied to elements read from input files.
pub const INPUT_DEGREE_CAP: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RingSpec {
    /// F_{p^n}, p prime, n >= 1, as `F_p[x]` mod a fixed irreducible.
    FiniteField { p: u64, n: u32 },
    /// F_2(t).
    FuncField2,
    /// (-1, -1 / Q).
    Quaternions,
}

impl RingSpec {
    pub fn finite(p: u64, n: u32) -> Result<Self> {
        if n == 0 || !is_prime(p) {
            return Err(Error::NotAdmissible(format!(
                "field({}, {}) is not a prime power specification",
                p, n
            )));
        }
        if (p as u128).pow(n) > 1 << 16 {
            return Err(Error::SizeCapExceeded((p as u128).pow(n)));
        }
        Ok(RingSpec::FiniteField { p, n })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            RingSpec::FiniteField { p, .. } => *p,
            RingSpec::FuncField2 => 2,
            RingSpec::Quaternions => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RingSpec::FiniteField { .. })
    }

    pub fn is_commutative(&self) -> bool {
        !matches!(self, RingSpec::Quaternions)
    }

    pub fn zero(&self) -> RingElement {
        match self {
            RingSpec::FiniteField { p, n } => RingElement::Gf(GfElem::zero(*p, *n)),
            RingSpec::FuncField2 => RingElement::Func(FuncElem::zero()),
            RingSpec::Quaternions => RingElement::Quat(Quaternion::zero()),
        }
    }

    pub fn one(&self) -> RingElement {
        match self {
            RingSpec::FiniteField { p, n } => RingElement::Gf(GfElem::one(*p, *n)),
            RingSpec::FuncField2 => RingElement::Func(FuncElem::one()),
            RingSpec::Quaternions => RingElement::Quat(Quaternion::one()),
        }
    }

    pub fn from_int(&self, v: i64) -> RingElement {
        match self {
            RingSpec::FiniteField { p, n } => RingElement::Gf(GfElem::from_int(*p, *n, v)),
            RingSpec::FuncField2 => {
                if v.rem_euclid(2) == 0 {
                    RingElement::Func(FuncElem::zero())
                } else {
                    RingElement::Func(FuncElem::one())
                }
            }
            RingSpec::Quaternions => RingElement::Quat(Quaternion::from_int(v)),
        }
    }

    /// All elements of a finite field, in key order.
    pub fn elements(&self) -> Result<Vec<RingElement>> {
        match self {
            RingSpec::FiniteField { p, n } => Ok(GfElem::all(*p, *n)
                .into_iter()
                .map(RingElement::Gf)
                .collect()),
            _ => Err(Error::InfiniteRing),
        }
    }

    /// Field size for finite fields.
    pub fn size(&self) -> Result<u128> {
        match self {
            RingSpec::FiniteField { p, n } => Ok(GfElem::field_size(*p, *n)),
            _ => Err(Error::InfiniteRing),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl std::fmt::Display for RingSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingSpec::FiniteField { p, n } => write!(f, "field({}, {})", p, n),
            RingSpec::FuncField2 => write!(f, "funcfield2(t)"),
            RingSpec::Quaternions => write!(f, "quaternions()"),
        }
    }
}

/// An exact element of one of the supported rings. Equality is decidable and
/// canonical: equal values have equal payloads.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RingElement {
    Gf(GfElem),
    Func(FuncElem),
    Quat(Quaternion),
}

impl RingElement {
    pub fn ring(&self) -> RingSpec {
        match self {
            RingElement::Gf(e) => RingSpec::FiniteField { p: e.p, n: e.n },
            RingElement::Func(_) => RingSpec::FuncField2,
            RingElement::Quat(_) => RingSpec::Quaternions,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElement::Gf(e) => e.is_zero(),
            RingElement::Func(e) => e.is_zero(),
            RingElement::Quat(e) => e.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring().one()
    }

    fn same_ring(&self, o: &RingElement) -> Result<()> {
        if self.ring() != o.ring() {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring(),
                o.ring()
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &RingElement) -> Result<RingElement> {
        self.same_ring(o)?;
        Ok(match (self, o) {
            (RingElement::Gf(a), RingElement::Gf(b)) => RingElement::Gf(a.add(b)),
            (RingElement::Func(a), RingElement::Func(b)) => RingElement::Func(a.add(b)?),
            (RingElement::Quat(a), RingElement::Quat(b)) => RingElement::Quat(a.add(b)?),
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> RingElement {
        match self {
            RingElement::Gf(a) => RingElement::Gf(a.neg()),
            RingElement::Func(a) => RingElement::Func(a.clone()), // char 2
            RingElement::Quat(a) => RingElement::Quat(a.neg()),
        }
    }

    pub fn sub(&self, o: &RingElement) -> Result<RingElement> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RingElement) -> Result<RingElement> {
        self.same_ring(o)?;
        Ok(match (self, o) {
            (RingElement::Gf(a), RingElement::Gf(b)) => RingElement::Gf(a.mul(b)),
            (RingElement::Func(a), RingElement::Func(b)) => RingElement::Func(a.mul(b)?),
            (RingElement::Quat(a), RingElement::Quat(b)) => RingElement::Quat(a.mul(b)?),
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<RingElement> {
        Ok(match self {
            RingElement::Gf(a) => RingElement::Gf(a.inv()?),
            RingElement::Func(a) => RingElement::Func(a.inv()?),
            RingElement::Quat(a) => RingElement::Quat(a.inv()?),
        })
    }

    pub fn div(&self, o: &RingElement) -> Result<RingElement> {
        // Right division a * b^{-1}; the two quotients differ in a
        // non-commutative ring, callers that need b^{-1} a compose directly.
        self.mul(&o.inv()?)
    }

    /// Central elements commute with everything.
    pub fn is_central(&self) -> bool {
        match self {
            RingElement::Quat(q) => q.is_real(),
            _ => true,
        }
    }

    /// Deterministic total order used for reproducible enumeration output.
    pub fn sort_key(&self) -> ElementKey {
        match self {
            RingElement::Gf(e) => ElementKey::Gf(e.key()),
            RingElement::Func(e) => ElementKey::Func(e.key()),
            RingElement::Quat(e) => ElementKey::Quat(e.key()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ElementKey {
    Gf(u128),
    Func((usize, Vec<u64>, Vec<u64>)),
    Quat(Vec<(num_bigint::BigInt, num_bigint::BigInt)>),
}

impl std::fmt::Display for RingElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingElement::Gf(e) => write!(f, "{}", e),
            RingElement::Func(e) => write!(f, "{}", e),
            RingElement::Quat(e) => write!(f, "{}", e),
        }
    }
}

/// The supported anti-automorphisms. For commutative rings any automorphism
/// qualifies; for the quaternions only the standard involution is exposed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum AntiAutoSpec {
    Identity,
    /// x -> x^(p^k) on a finite field.
    FrobeniusPower(u32),
    QuaternionConjugation,
}

impl AntiAutoSpec {
    pub fn compatible_with(&self, ring: &RingSpec) -> Result<()> {
        match (self, ring) {
            (AntiAutoSpec::Identity, RingSpec::Quaternions) => Err(Error::IncompatibleAntiAuto(
                "the identity is not an anti-automorphism of a non-commutative ring".into(),
            )),
            (AntiAutoSpec::Identity, _) => Ok(()),
            (AntiAutoSpec::FrobeniusPower(_), RingSpec::FiniteField { .. }) => Ok(()),
            (AntiAutoSpec::FrobeniusPower(_), r) => Err(Error::IncompatibleAntiAuto(format!(
                "frobenius powers are only defined on finite fields, not {}",
                r
            ))),
            (AntiAutoSpec::QuaternionConjugation, RingSpec::Quaternions) => Ok(()),
            (AntiAutoSpec::QuaternionConjugation, r) => Err(Error::IncompatibleAntiAuto(format!(
                "quaternion conjugation undefined on {}",
                r
            ))),
        }
    }

    pub fn apply(&self, t: &RingElement) -> Result<RingElement> {
        self.compatible_with(&t.ring())?;
        Ok(match (self, t) {
            (AntiAutoSpec::Identity, t) => t.clone(),
            (AntiAutoSpec::FrobeniusPower(k), RingElement::Gf(e)) => {
                RingElement::Gf(e.frobenius(*k))
            }
            (AntiAutoSpec::QuaternionConjugation, RingElement::Quat(q)) => {
                RingElement::Quat(q.conj())
            }
            _ => unreachable!(),
        })
    }

    /// The composite of the map with itself (sigma squared).
    pub fn squared(&self, ring: &RingSpec) -> AntiAutoSpec {
        match (self, ring) {
            (AntiAutoSpec::FrobeniusPower(k), RingSpec::FiniteField { n, .. }) => {
                let kk = (2 * *k) % *n;
                if kk == 0 {
                    AntiAutoSpec::Identity
                } else {
                    AntiAutoSpec::FrobeniusPower(kk)
                }
            }
            (AntiAutoSpec::QuaternionConjugation, _) => AntiAutoSpec::Identity,
            _ => AntiAutoSpec::Identity,
        }
    }

    pub fn is_identity_on(&self, ring: &RingSpec) -> bool {
        match (self, ring) {
            (AntiAutoSpec::Identity, _) => true,
            (AntiAutoSpec::FrobeniusPower(k), RingSpec::FiniteField { n, .. }) => k % n == 0,
            _ => false,
        }
    }
}

impl std::fmt::Display for AntiAutoSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AntiAutoSpec::Identity => write!(f, "id"),
            AntiAutoSpec::FrobeniusPower(k) => write!(f, "frob^{}", k),
            AntiAutoSpec::QuaternionConjugation => write!(f, "conj"),
        }
    }
}

/// Binary arithmetic entry point matching the operation table of the module.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arithmetic(a: &RingElement, b: &RingElement, which: ArithOp) -> Result<RingElement> {
    match which {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b),
    }
}

/// Writes u in F_2(t) as u0 + t*u1 with u0, u1 in the subfield F_2(t^2).
pub fn decompose_char2(u: &RingElement) -> Result<(RingElement, RingElement)> {
    match u {
        RingElement::Func(e) => {
            let (a, b) = e.sqrt_decompose()?;
            Ok((RingElement::Func(a.square()), RingElement::Func(b.square())))
        }
        _ => Err(Error::Unsupported(
            "decompose_char2 is defined on F_2(t) only".into(),
        )),
    }
}

/// Unique square root in F_2(t) or in a finite field of characteristic 2.
pub fn char2_sqrt(u: &RingElement) -> Result<RingElement> {
    match u {
        RingElement::Func(e) => {
            let (a, b) = e.sqrt_decompose()?;
            if !b.is_zero() {
                return Err(Error::Unsupported(format!(
                    "{} is not a square in F_2(t)",
                    e
                )));
            }
            Ok(RingElement::Func(a))
        }
        RingElement::Gf(e) if e.p == 2 => {
            // sqrt(x) = x^(q/2) since squaring is bijective
            let q = GfElem::field_size(2, e.n) as u64;
            Ok(RingElement::Gf(e.pow(q / 2)))
        }
        _ => Err(Error::Unsupported(
            "square root needs characteristic 2".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Element and ring-spec grammar
// ---------------------------------------------------------------------------

/// Parses `field(p, n)`, `funcfield2(t)` or `quaternions()`.
pub fn parse_ring(s: &str) -> Result<RingSpec> {
    let s = s.trim();
    let err = |msg: &str| Error::Parse {
        line: 0,
        msg: msg.to_string(),
    };
    if let Some(rest) = s.strip_prefix("field") {
        let inner = rest
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| err("expected field(p, n)"))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(err("expected field(p, n)"));
        }
        let p: u64 = parts[0].parse().map_err(|_| err("bad prime"))?;
        let n: u32 = parts[1].parse().map_err(|_| err("bad extension degree"))?;
        RingSpec::finite(p, n)
    } else if s == "funcfield2(t)" || s == "funcfield2" {
        Ok(RingSpec::FuncField2)
    } else if s == "quaternions()" || s == "quaternions" {
        Ok(RingSpec::Quaternions)
    } else {
        Err(err(&format!("unknown ring spec `{}`", s)))
    }
}

/// Parses `id`, `frob^k` or `conj`.
pub fn parse_antiauto(s: &str) -> Result<AntiAutoSpec> {
    let s = s.trim();
    if s == "id" {
        Ok(AntiAutoSpec::Identity)
    } else if s == "conj" {
        Ok(AntiAutoSpec::QuaternionConjugation)
    } else if let Some(k) = s.strip_prefix("frob^") {
        Ok(AntiAutoSpec::FrobeniusPower(k.parse().map_err(|_| {
            Error::Parse {
                line: 0,
                msg: format!("bad frobenius power `{}`", s),
            }
        })?))
    } else if s == "frob" {
        Ok(AntiAutoSpec::FrobeniusPower(1))
    } else {
        Err(Error::Parse {
            line: 0,
            msg: format!("unknown anti-automorphism `{}`", s),
        })
    }
}

/// Parses one element literal in the given ring. Finite fields use
/// polynomial strings in `w` (`w^1+1`), F_2(t) uses fraction strings
/// (`(t^3+t)/(t^2+1)`), quaternions use four-term sums (`1 + 2i - 3/4k`).
pub fn parse_element(ring: &RingSpec, s: &str) -> Result<RingElement> {
    let s = s.trim();
    match ring {
        RingSpec::FiniteField { p, n } => parse_gf(*p, *n, s),
        RingSpec::FuncField2 => parse_func(s),
        RingSpec::Quaternions => parse_quat(s),
    }
}

fn parse_err(msg: String) -> Error {
    Error::Parse { line: 0, msg }
}

fn parse_gf(p: u64, n: u32, s: &str) -> Result<RingElement> {
    let mut acc = GfElem::zero(p, n);
    for term in split_terms(s)? {
        let (sign, body) = term;
        let body = body.trim();
        if body.is_empty() {
            return Err(parse_err("empty term".into()));
        }
        let (coeff_str, pow) = if let Some(idx) = body.find('w') {
            let c = body[..idx].trim_end_matches('*').trim();
            let rest = &body[idx + 1..];
            let k: u32 = if let Some(e) = rest.strip_prefix('^') {
                e.trim()
                    .parse()
                    .map_err(|_| parse_err(format!("bad exponent in `{}`", body)))?
            } else if rest.trim().is_empty() {
                1
            } else {
                return Err(parse_err(format!("bad term `{}`", body)));
            };
            (c, k)
        } else {
            (body, 0)
        };
        if pow >= n && n > 1 {
            return Err(parse_err(format!(
                "w^{} is not a reduced payload in degree {}",
                pow, n
            )));
        }
        if pow > 0 && n == 1 {
            return Err(parse_err("prime fields have no generator w".into()));
        }
        let c: i64 = if coeff_str.is_empty() {
            1
        } else {
            coeff_str
                .parse()
                .map_err(|_| parse_err(format!("bad coefficient `{}`", coeff_str)))?
        };
        let c = (sign * c).rem_euclid(p as i64) as u64;
        let mut term_el = GfElem::zero(p, n);
        term_el.coeffs[pow as usize] = c;
        acc = acc.add(&term_el);
    }
    Ok(RingElement::Gf(acc))
}

fn parse_poly2(s: &str) -> Result<Poly2> {
    let mut acc = Poly2::zero();
    for (sign, body) in split_terms(s)? {
        if sign < 0 {
            // char 2: minus equals plus, tolerated on input
        }
        let body = body.trim();
        let term = if body == "0" {
            continue;
        } else if body == "1" {
            Poly2::one()
        } else if body == "t" {
            Poly2::monomial(1)
        } else if let Some(e) = body.strip_prefix("t^") {
            let k: usize = e
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad exponent `{}`", body)))?;
            if k > INPUT_DEGREE_CAP {
                return Err(Error::DegreeOverflow {
                    got: k,
                    cap: INPUT_DEGREE_CAP,
                });
            }
            Poly2::monomial(k)
        } else {
            return Err(parse_err(format!("bad F_2[t] term `{}`", body)));
        };
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn parse_func(s: &str) -> Result<RingElement> {
    let s = s.trim();
    // Split on a '/' at paren depth zero, if any.
    let mut depth = 0usize;
    let mut slash = None;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '/' if depth == 0 => {
                slash = Some(i);
                break;
            }
            _ => {}
        }
    }
    let strip = |part: &str| -> String {
        let part = part.trim();
        if part.starts_with('(') && part.ends_with(')') {
            // only strip if the parens match
            let inner = &part[1..part.len() - 1];
            let mut d = 0i64;
            for ch in inner.chars() {
                match ch {
                    '(' => d += 1,
                    ')' => d -= 1,
                    _ => {}
                }
                if d < 0 {
                    return part.to_string();
                }
            }
            return inner.to_string();
        }
        part.to_string()
    };
    let (num, den) = match slash {
        Some(i) => (strip(&s[..i]), Some(strip(&s[i + 1..]))),
        None => (strip(s), None),
    };
    let num = parse_poly2(&num)?;
    let den = match den {
        Some(d) => parse_poly2(&d)?,
        None => Poly2::one(),
    };
    Ok(RingElement::Func(FuncElem::new(num, den)?))
}

fn parse_quat(s: &str) -> Result<RingElement> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let mut c = [
        BigRational::zero_const(),
        BigRational::zero_const(),
        BigRational::zero_const(),
        BigRational::zero_const(),
    ];
    for (sign, body) in split_terms(s)? {
        let body = body.trim();
        if body.is_empty() {
            return Err(parse_err("empty quaternion term".into()));
        }
        let (idx, coeff_str) = match body.chars().last().unwrap() {
            'i' => (1, &body[..body.len() - 1]),
            'j' => (2, &body[..body.len() - 1]),
            'k' => (3, &body[..body.len() - 1]),
            _ => (0, body),
        };
        let coeff_str = coeff_str.trim().trim_end_matches('*').trim();
        let r = if coeff_str.is_empty() {
            BigRational::from_integer(BigInt::from(1))
        } else if let Some(i) = coeff_str.find('/') {
            let n: BigInt = coeff_str[..i]
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad rational `{}`", coeff_str)))?;
            let d: BigInt = coeff_str[i + 1..]
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad rational `{}`", coeff_str)))?;
            if d == BigInt::from(0) {
                return Err(Error::DivisionByZero);
            }
            BigRational::new(n, d)
        } else {
            BigRational::from_integer(
                coeff_str
                    .parse()
                    .map_err(|_| parse_err(format!("bad integer `{}`", coeff_str)))?,
            )
        };
        let signed = if sign < 0 { -r } else { r };
        c[idx] = &c[idx] + signed;
    }
    Ok(RingElement::Quat(Quaternion::new(c)))
}

trait ZeroConst {
    fn zero_const() -> Self;
}
impl ZeroConst for num_rational::BigRational {
    fn zero_const() -> Self {
        use num_traits::Zero;
        num_rational::BigRational::zero()
    }
}

/// Splits "a + b - c" into signed terms, respecting parentheses.
fn split_terms(s: &str) -> Result<Vec<(i64, String)>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(parse_err("empty element".into()));
    }
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut sign = 1i64;
    let mut depth = 0i64;
    let mut chars = s.chars().peekable();
    // leading sign
    if let Some('-') = chars.peek() {
        sign = -1;
        chars.next();
    } else if let Some('+') = chars.peek() {
        chars.next();
    }
    for ch in chars {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                out.push((sign, cur.trim().to_string()));
                sign = if ch == '-' { -1 } else { 1 };
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    out.push((sign, cur.trim().to_string()));
    if out.iter().any(|(_, t)| t.is_empty()) {
        return Err(parse_err(format!("malformed element `{}`", s)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_roundtrip_gf() {
        let ring = RingSpec::finite(2, 2).unwrap();
        let w1 = parse_element(&ring, "w^1+1").unwrap();
        assert_eq!(w1.to_string(), "w^1+1");
        let ring5 = RingSpec::finite(5, 1).unwrap();
        assert_eq!(parse_element(&ring5, "-3").unwrap(), ring5.from_int(2));
    }

    #[test]
    fn parse_and_display_roundtrip_func() {
        let ring = RingSpec::FuncField2;
        for s in ["(t^3+t)/(t^2+1)", "t^2+t", "1", "0", "(1)/(t)"] {
            let e = parse_element(&ring, s).unwrap();
            let back = parse_element(&ring, &e.to_string()).unwrap();
            assert_eq!(e, back);
        }
    }

    #[test]
    fn parse_and_display_roundtrip_quat() {
        let ring = RingSpec::Quaternions;
        for s in [
            "1 + 2i - 3/4k",
            "i",
            "-j",
            "0",
            "5",
            "1/2 + 1/2i + 1/2j + 1/2k",
        ] {
            let e = parse_element(&ring, s).unwrap();
            let back = parse_element(&ring, &e.to_string()).unwrap();
            assert_eq!(e, back);
        }
    }

    #[test]
    fn arithmetic_dispatch() {
        let ring = RingSpec::FuncField2;
        let a = parse_element(&ring, "(1)/(t)").unwrap();
        let b = parse_element(&ring, "(1)/(t+1)").unwrap();
        let s = arithmetic(&a, &b, ArithOp::Add).unwrap();
        assert_eq!(s, parse_element(&ring, "(1)/(t^2+t)").unwrap());
        assert!(matches!(
            arithmetic(&a, &ring.zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        ));
        let q = RingSpec::Quaternions;
        assert!(matches!(
            arithmetic(&a, &q.one(), ArithOp::Add),
            Err(Error::RingMismatch(_))
        ));
    }

    #[test]
    fn antiauto_application() {
        let ring = RingSpec::finite(2, 2).unwrap();
        let w = parse_element(&ring, "w^1").unwrap();
        let frob = AntiAutoSpec::FrobeniusPower(1);
        assert_eq!(frob.apply(&w).unwrap(), w.mul(&w).unwrap());
        let conj = AntiAutoSpec::QuaternionConjugation;
        let i = parse_element(&RingSpec::Quaternions, "i").unwrap();
        assert_eq!(conj.apply(&i).unwrap(), i.neg());
        assert!(conj.apply(&w).is_err());
    }

    #[test]
    fn decompose_examples() {
        let ring = RingSpec::FuncField2;
        let t3t2 = parse_element(&ring, "t^3+t^2").unwrap();
        let (u0, u1) = decompose_char2(&t3t2).unwrap();
        assert_eq!(u0, parse_element(&ring, "t^2").unwrap());
        assert_eq!(u1, parse_element(&ring, "t^2").unwrap());
        let invt = parse_element(&ring, "(1)/(t)").unwrap();
        let (u0, u1) = decompose_char2(&invt).unwrap();
        assert!(u0.is_zero());
        assert_eq!(u1, parse_element(&ring, "(1)/(t^2)").unwrap());
        let (u0, u1) = decompose_char2(&ring.one()).unwrap();
        assert!(u0.is_one());
        assert!(u1.is_zero());
    }

    #[test]
    fn canonical_cancellation() {
        let ring = RingSpec::FuncField2;
        let a = parse_element(&ring, "(t^3+1)/(t^2+t)").unwrap();
        assert!(a.sub(&a).unwrap().is_zero());
        assert!(a.div(&a).unwrap().is_one());
    }
}
