//! Built-in forms: the standard quadric, symplectic and hermitian models
//! over small finite fields, hyperbolic forms over F_2(t) with a chosen
//! co-defect, and the exceptional rank-2 quaternion form.

use crate::admissible::{validate_pair, AdmissiblePair, ClosedSubgroup, CosetElement};
use crate::error::Result;
use crate::forms::{GenPseudoQuadraticForm, SesquilinearForm};
use crate::linalg::Matrix;
use crate::sampler::Sampler;
use crate::scalars::{parse_element, AntiAutoSpec, RingElement, RingSpec};

/// (id, 1) over any field.
pub fn quadratic_pair(ring: &RingSpec) -> Result<AdmissiblePair> {
    validate_pair(ring, AntiAutoSpec::Identity, ring.one())
}

/// (id, -1) over any field; coincides with (id, 1) in characteristic 2.
pub fn symplectic_pair(ring: &RingSpec) -> Result<AdmissiblePair> {
    validate_pair(ring, AntiAutoSpec::Identity, ring.from_int(-1))
}

/// (conj, -1) over the rational quaternions.
pub fn quaternion_pair() -> Result<AdmissiblePair> {
    let ring = RingSpec::Quaternions;
    validate_pair(
        &ring,
        AntiAutoSpec::QuaternionConjugation,
        ring.from_int(-1),
    )
}

/// (frob, 1) over F_4.
pub fn hermitian_pair_f4() -> Result<AdmissiblePair> {
    let ring = RingSpec::finite(2, 2)?;
    validate_pair(&ring, AntiAutoSpec::FrobeniusPower(1), ring.one())
}

fn zero_matrix(ring: &RingSpec, n: usize) -> Matrix {
    vec![vec![ring.zero(); n]; n]
}

fn zero_values(pair: &AdmissiblePair, n: usize) -> Vec<CosetElement> {
    vec![pair.zero_coset(); n]
}

/// Hyperbolic quadratic form x_1 x_2 + x_3 x_4 + ... on 2*half coordinates,
/// with zero co-defect.
pub fn hyperbolic_q(ring: &RingSpec, half: usize) -> Result<GenPseudoQuadraticForm> {
    let pair = quadratic_pair(ring)?;
    let n = 2 * half;
    let mut gram = zero_matrix(ring, n);
    for b in 0..half {
        gram[2 * b][2 * b + 1] = ring.one();
        gram[2 * b + 1][2 * b] = ring.one();
    }
    GenPseudoQuadraticForm::new(
        pair.clone(),
        gram,
        zero_values(&pair, n),
        ClosedSubgroup::zero(&pair),
    )
}

/// Parabolic quadratic form x_1 x_2 + ... + x_{2 half} + x_{2 half + 1}^2.
pub fn parabolic_q(ring: &RingSpec, half: usize) -> Result<GenPseudoQuadraticForm> {
    let pair = quadratic_pair(ring)?;
    let n = 2 * half + 1;
    let mut gram = zero_matrix(ring, n);
    for b in 0..half {
        gram[2 * b][2 * b + 1] = ring.one();
        gram[2 * b + 1][2 * b] = ring.one();
    }
    gram[n - 1][n - 1] = ring.from_int(2);
    let mut values = zero_values(&pair, n);
    values[n - 1] = pair.coset(&ring.one())?;
    GenPseudoQuadraticForm::new(pair.clone(), gram, values, ClosedSubgroup::zero(&pair))
}

/// Elliptic quadratic form on 6 coordinates: two hyperbolic planes plus the
/// norm form x_5^2 + c x_5 x_6 + d x_6^2 of an irreducible t^2 + c t + d.
pub fn elliptic_q6(ring: &RingSpec) -> Result<GenPseudoQuadraticForm> {
    let pair = quadratic_pair(ring)?;
    let (c, d) = irreducible_quadratic(ring)?;
    let n = 6;
    let mut gram = zero_matrix(ring, n);
    for b in 0..2 {
        gram[2 * b][2 * b + 1] = ring.one();
        gram[2 * b + 1][2 * b] = ring.one();
    }
    gram[4][5] = c.clone();
    gram[5][4] = c;
    gram[4][4] = ring.from_int(2);
    gram[5][5] = d.mul(&ring.from_int(2))?;
    let mut values = zero_values(&pair, n);
    values[4] = pair.coset(&ring.one())?;
    values[5] = pair.coset(&d)?;
    GenPseudoQuadraticForm::new(pair.clone(), gram, values, ClosedSubgroup::zero(&pair))
}

/// Coefficients (c, d) with t^2 + c t + d irreducible over the field.
fn irreducible_quadratic(ring: &RingSpec) -> Result<(RingElement, RingElement)> {
    let elements = ring.elements()?;
    for c in &elements {
        for d in &elements {
            if d.is_zero() {
                continue;
            }
            let has_root = elements.iter().any(|t| {
                let v = t
                    .mul(t)
                    .and_then(|t2| t2.add(&c.mul(t).unwrap()))
                    .and_then(|s| s.add(d));
                matches!(v, Ok(v) if v.is_zero())
            });
            if !has_root {
                return Ok((c.clone(), d.clone()));
            }
        }
    }
    unreachable!("every finite field admits an irreducible quadratic")
}

/// Alternating form with Gram blocks `[[0,1],[-1,0]]` on 2*half coordinates.
pub fn symplectic_f(ring: &RingSpec, half: usize) -> Result<SesquilinearForm> {
    let pair = symplectic_pair(ring)?;
    let n = 2 * half;
    let mut gram = zero_matrix(ring, n);
    for b in 0..half {
        gram[2 * b][2 * b + 1] = ring.one();
        gram[2 * b + 1][2 * b] = ring.from_int(-1);
    }
    SesquilinearForm::new(pair, gram)
}

/// Hermitian form over F_4 on 4 coordinates, as a pseudo-quadratic form with
/// q(x) = (x_1^sigma x_2 + x_3^sigma x_4) + K_{sigma,eps}.
pub fn hermitian_q_f4() -> Result<GenPseudoQuadraticForm> {
    let pair = hermitian_pair_f4()?;
    let ring = pair.ring().clone();
    let n = 4;
    let mut gram = zero_matrix(&ring, n);
    for b in 0..2 {
        gram[2 * b][2 * b + 1] = ring.one();
        gram[2 * b + 1][2 * b] = ring.one();
    }
    GenPseudoQuadraticForm::new(
        pair.clone(),
        gram,
        zero_values(&pair, n),
        ClosedSubgroup::zero(&pair),
    )
}

/// Hyperbolic form x_1 x_2 over F_2(t) with co-defect generated by the given
/// element literals (empty list = zero co-defect, pseudo-quadratic).
pub fn funcfield_hyperbolic(codefect_gens: &[&str]) -> Result<GenPseudoQuadraticForm> {
    let ring = RingSpec::FuncField2;
    let pair = quadratic_pair(&ring)?;
    let gens = codefect_gens
        .iter()
        .map(|s| Ok(pair.coset(&parse_element(&ring, s)?)?))
        .collect::<Result<Vec<_>>>()?;
    let codefect = ClosedSubgroup::generated(&pair, gens)?;
    let mut gram = zero_matrix(&ring, 2);
    gram[0][1] = ring.one();
    gram[1][0] = ring.one();
    GenPseudoQuadraticForm::new(pair.clone(), gram, zero_values(&pair, 2), codefect)
}

/// The exceptional rank-2 form over the rational quaternions:
/// q(x) = x_1^sigma x_2 + x_3^sigma x_4 + K_{sigma,eps} with (conj, -1),
/// zero co-defect, codomain K / Z(K).
pub fn quaternion_exceptional() -> Result<GenPseudoQuadraticForm> {
    let pair = quaternion_pair()?;
    let ring = pair.ring().clone();
    let n = 4;
    let mut gram = zero_matrix(&ring, n);
    for b in 0..2 {
        gram[2 * b][2 * b + 1] = ring.one();
        gram[2 * b + 1][2 * b] = ring.from_int(-1);
    }
    GenPseudoQuadraticForm::new(
        pair.clone(),
        gram,
        zero_values(&pair, n),
        ClosedSubgroup::zero(&pair),
    )
}

/// Randomized generalized form over F_2(t) with a singular standard basis:
/// symmetric Gram with zero diagonal and cross-entry degree at most
/// `max_deg`, basis values inside the co-defect, co-defect generated by up
/// to `codefect_rank` random elements.
pub fn random_funcfield_form(
    sampler: &mut Sampler,
    dim: usize,
    codefect_rank: usize,
    max_deg: usize,
) -> Result<GenPseudoQuadraticForm> {
    let ring = RingSpec::FuncField2;
    let pair = quadratic_pair(&ring)?;
    let mut gens = Vec::new();
    for _ in 0..codefect_rank {
        gens.push(pair.coset(&sampler.element_sized(&ring, max_deg))?);
    }
    let codefect = ClosedSubgroup::generated(&pair, gens)?;
    let mut gram = zero_matrix(&ring, dim);
    loop {
        let mut nonzero = false;
        for i in 0..dim {
            for j in (i + 1)..dim {
                let e = sampler.element_sized(&ring, max_deg);
                nonzero |= !e.is_zero();
                gram[i][j] = e.clone();
                gram[j][i] = e;
            }
        }
        if nonzero {
            break;
        }
    }
    // values inside the co-defect keep the standard basis singular while
    // exercising nonzero stored representatives
    let mut values = Vec::with_capacity(dim);
    for _ in 0..dim {
        let v = match codefect.generators().first() {
            Some(g) if sampler.below(2) == 0 => {
                let lam = sampler.element_sized(&ring, 2);
                g.circ(&lam)?
            }
            _ => pair.zero_coset(),
        };
        values.push(v);
    }
    GenPseudoQuadraticForm::new(pair.clone(), gram, values, codefect)
}
