//! Admissible pairs (sigma, epsilon), the additive subgroups K_{sigma,eps}
//! and K^{sigma,eps}, the coset group K-bar = K / K_{sigma,eps} with its
//! twisted scalar action, closed subgroups, and canonical reduction in
//! K-bar and K-bar / R-bar.
//!
//! Canonical coset representatives are fixed per (ring, pair):
//! over a finite field K_{sigma,eps} is an F_p-subspace computed once from
//! the linear map s -> s - s^sigma eps, and reduction eliminates its pivot
//! coordinates; over F_2(t) with the identity the subgroup is {0}; over the
//! quaternions with the standard involution it is the center (eps = -1,
//! reduction keeps the pure part) or the pure quaternions (eps = 1,
//! reduction keeps the real part).

use crate::error::{Error, Result};
use crate::linalg::{self, fp};
use crate::scalars::{AntiAutoSpec, RingElement, RingSpec};
use std::sync::Arc;

#[derive(Debug)]
struct PairInner {
    ring: RingSpec,
    sigma: AntiAutoSpec,
    epsilon: RingElement,
    /// Finite fields only: K_{sigma,eps} as an F_p row space in the power basis.
    lower: Option<fp::FpEchelon>,
    /// Finite fields only: K^{sigma,eps} as an F_p row space.
    upper: Option<fp::FpEchelon>,
}

/// A validated admissible pair. Cheap to clone; reduction tables are built
/// once at construction and shared.
#[derive(Clone, Debug)]
pub struct AdmissiblePair(Arc<PairInner>);

impl PartialEq for AdmissiblePair {
    fn eq(&self, other: &Self) -> bool {
        self.0.ring == other.0.ring
            && self.0.sigma == other.0.sigma
            && self.0.epsilon == other.0.epsilon
    }
}
impl Eq for AdmissiblePair {}

impl std::fmt::Display for AdmissiblePair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "pair(sigma = {}, eps = {})",
            self.0.sigma, self.0.epsilon
        )
    }
}

/// Validates epsilon^sigma epsilon = 1 and t^(sigma^2) = eps t eps^{-1},
/// the latter checked on ring generators (the field generator for fields,
/// i and j for the quaternions).
pub fn validate_pair(
    ring: &RingSpec,
    sigma: AntiAutoSpec,
    epsilon: RingElement,
) -> Result<AdmissiblePair> {
    sigma.compatible_with(ring)?;
    // normalize trivial frobenius powers so pair equality is structural
    let sigma = match (&sigma, ring) {
        (AntiAutoSpec::FrobeniusPower(k), RingSpec::FiniteField { n, .. }) if k % n == 0 => {
            AntiAutoSpec::Identity
        }
        (AntiAutoSpec::FrobeniusPower(k), RingSpec::FiniteField { n, .. }) if k >= n => {
            AntiAutoSpec::FrobeniusPower(k % n)
        }
        _ => sigma,
    };
    if epsilon.ring() != *ring {
        return Err(Error::RingMismatch(format!(
            "epsilon lives in {}, pair ring is {}",
            epsilon.ring(),
            ring
        )));
    }
    if epsilon.is_zero() {
        return Err(Error::NotAdmissible("epsilon must be invertible".into()));
    }
    let eps_sigma = sigma.apply(&epsilon)?;
    if !eps_sigma.mul(&epsilon)?.is_one() {
        return Err(Error::NotAdmissible(format!(
            "epsilon^sigma * epsilon = {}, expected 1",
            eps_sigma.mul(&epsilon)?
        )));
    }
    let gens: Vec<RingElement> = match ring {
        RingSpec::FiniteField { p, n } => {
            vec![RingElement::Gf(crate::scalars::gf::GfElem::generator(
                *p, *n,
            ))]
        }
        RingSpec::FuncField2 => vec![crate::scalars::parse_element(ring, "t")?],
        RingSpec::Quaternions => vec![
            crate::scalars::parse_element(ring, "i")?,
            crate::scalars::parse_element(ring, "j")?,
        ],
    };
    let eps_inv = epsilon.inv()?;
    for g in &gens {
        let lhs = sigma.apply(&sigma.apply(g)?)?;
        let rhs = epsilon.mul(g)?.mul(&eps_inv)?;
        if lhs != rhs {
            return Err(Error::NotAdmissible(format!(
                "sigma^2 differs from conjugation by epsilon at {}",
                g
            )));
        }
    }
    let (lower, upper) = match ring {
        RingSpec::FiniteField { p, n } => {
            let e = *n as usize;
            let mut img_rows = Vec::with_capacity(e);
            let mut upper_map_rows = Vec::with_capacity(e);
            for i in 0..e {
                let mut basis = crate::scalars::gf::GfElem::zero(*p, *n);
                basis.coeffs[i] = 1;
                let b = RingElement::Gf(basis);
                let twisted = sigma.apply(&b)?.mul(&epsilon)?;
                img_rows.push(gf_coeffs(&b.sub(&twisted)?));
                // row of the map t -> t + t^sigma eps (kernel = K^{sigma,eps})
                upper_map_rows.push(gf_coeffs(&b.add(&twisted)?));
            }
            let lower = fp::rref(*p, &img_rows);
            // upper_map_rows are images of basis vectors: the map's matrix
            // has those as columns; transpose before taking the nullspace.
            let cols: Vec<Vec<u64>> = (0..e)
                .map(|r| upper_map_rows.iter().map(|row| row[r]).collect())
                .collect();
            let kernel = fp::nullspace(*p, &cols);
            (Some(lower), Some(fp::rref(*p, &kernel)))
        }
        _ => (None, None),
    };
    Ok(AdmissiblePair(Arc::new(PairInner {
        ring: ring.clone(),
        sigma,
        epsilon,
        lower,
        upper,
    })))
}

fn gf_coeffs(e: &RingElement) -> Vec<u64> {
    match e {
        RingElement::Gf(g) => g.coeffs.clone(),
        _ => unreachable!("finite-field payload expected"),
    }
}

fn gf_from_coeffs(ring: &RingSpec, coeffs: Vec<u64>) -> RingElement {
    match ring {
        RingSpec::FiniteField { p, n } => RingElement::Gf(crate::scalars::gf::GfElem {
            p: *p,
            n: *n,
            coeffs,
        }),
        _ => unreachable!(),
    }
}

impl AdmissiblePair {
    pub fn ring(&self) -> &RingSpec {
        &self.0.ring
    }

    pub fn sigma(&self) -> &AntiAutoSpec {
        &self.0.sigma
    }

    pub fn epsilon(&self) -> &RingElement {
        &self.0.epsilon
    }

    pub fn apply_sigma(&self, t: &RingElement) -> Result<RingElement> {
        self.0.sigma.apply(t)
    }

    /// Membership in K_{sigma,eps} = { s - s^sigma eps }.
    pub fn in_lower(&self, t: &RingElement) -> Result<bool> {
        self.check_ring(t)?;
        Ok(match &self.0.ring {
            RingSpec::FiniteField { .. } => self.0.lower.as_ref().unwrap().contains(&gf_coeffs(t)),
            RingSpec::FuncField2 => t.is_zero(),
            RingSpec::Quaternions => match t {
                RingElement::Quat(q) => {
                    if self.0.epsilon.is_one() {
                        q.is_pure()
                    } else {
                        q.is_real()
                    }
                }
                _ => unreachable!(),
            },
        })
    }

    /// Membership in K^{sigma,eps} = { t : t = -t^sigma eps }, by the direct
    /// identity test.
    pub fn in_upper(&self, t: &RingElement) -> Result<bool> {
        self.check_ring(t)?;
        let twisted = self.apply_sigma(t)?.mul(&self.0.epsilon)?;
        Ok(t.add(&twisted)?.is_zero())
    }

    /// Whether K_{sigma,-eps} = K^{sigma,-eps}. Decided by F_p-dimension
    /// comparison over finite fields and by closed forms otherwise.
    pub fn is_trace_type(&self) -> Result<bool> {
        match &self.0.ring {
            RingSpec::FiniteField { p, n } => {
                let e = *n as usize;
                let mut img_rows = Vec::with_capacity(e);
                let mut map_rows = Vec::with_capacity(e);
                for i in 0..e {
                    let mut basis = crate::scalars::gf::GfElem::zero(*p, *n);
                    basis.coeffs[i] = 1;
                    let b = RingElement::Gf(basis);
                    let twisted = self.apply_sigma(&b)?.mul(&self.0.epsilon)?;
                    // K_{sigma,-eps} = { t + t^sigma eps } = image of U
                    img_rows.push(gf_coeffs(&b.add(&twisted)?));
                    // K^{sigma,-eps} = { t : t = t^sigma eps } = kernel of L
                    map_rows.push(gf_coeffs(&b.sub(&twisted)?));
                }
                let img_dim = fp::rref(*p, &img_rows).rank();
                let cols: Vec<Vec<u64>> = (0..e)
                    .map(|r| map_rows.iter().map(|row| row[r]).collect())
                    .collect();
                let ker_dim = fp::nullspace(*p, &cols).len();
                Ok(img_dim == ker_dim)
            }
            // (id, 1) in characteristic 2: {t + t} = {0} but every t = t.
            RingSpec::FuncField2 => Ok(false),
            // Both admissible quaternion pairs compare the pure (resp. real)
            // quaternions with themselves.
            RingSpec::Quaternions => Ok(true),
        }
    }

    /// Canonical representative of t + K_{sigma,eps}.
    pub fn reduce_rep(&self, t: &RingElement) -> Result<RingElement> {
        self.check_ring(t)?;
        Ok(match &self.0.ring {
            RingSpec::FiniteField { .. } => {
                let v = self.0.lower.as_ref().unwrap().reduce(&gf_coeffs(t));
                gf_from_coeffs(&self.0.ring, v)
            }
            RingSpec::FuncField2 => t.clone(),
            RingSpec::Quaternions => match t {
                RingElement::Quat(q) => {
                    if self.0.epsilon.is_one() {
                        RingElement::Quat(q.real_part())
                    } else {
                        RingElement::Quat(q.pure_part())
                    }
                }
                _ => unreachable!(),
            },
        })
    }

    pub fn coset(&self, t: &RingElement) -> Result<CosetElement> {
        Ok(CosetElement {
            pair: self.clone(),
            rep: self.reduce_rep(t)?,
        })
    }

    pub fn zero_coset(&self) -> CosetElement {
        CosetElement {
            pair: self.clone(),
            rep: self.0.ring.zero(),
        }
    }

    /// F_p-dimension of K-bar over a finite field.
    pub fn coset_group_dim(&self) -> Result<usize> {
        match &self.0.ring {
            RingSpec::FiniteField { n, .. } => {
                Ok(*n as usize - self.0.lower.as_ref().unwrap().rank())
            }
            _ => Err(Error::InfiniteRing),
        }
    }

    /// Membership in K^{sigma,eps} + R for the pre-image R of a closed
    /// subgroup; used to express "value lies in the circ-vector part".
    pub fn in_upper_mod(&self, t: &RingElement, sub: &ClosedSubgroup) -> Result<bool> {
        let reduced = sub.reduce(&self.coset(t)?)?;
        match &self.0.ring {
            RingSpec::FiniteField { .. } => Ok(self
                .0
                .upper
                .as_ref()
                .unwrap()
                .contains(&gf_coeffs(&self.reduce_rep(&reduced.rep)?))
                || self.in_upper(&reduced.rep)?),
            _ => self.in_upper(&reduced.rep),
        }
    }

    fn check_ring(&self, t: &RingElement) -> Result<()> {
        if t.ring() != self.0.ring {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                t.ring(),
                self.0.ring
            )));
        }
        Ok(())
    }

    /// The admissible pair (sigma, -eps).
    pub fn negated(&self) -> Result<AdmissiblePair> {
        validate_pair(&self.0.ring, self.0.sigma.clone(), self.0.epsilon.neg())
    }

    /// The proportional pair kappa . (sigma, eps) with eps' = kappa kappa^{-sigma} eps.
    /// Over the quaternions kappa must be central so that sigma is preserved.
    pub fn scale(&self, kappa: &RingElement) -> Result<AdmissiblePair> {
        self.check_ring(kappa)?;
        if kappa.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !kappa.is_central() {
            return Err(Error::NonCentralScale);
        }
        let k_sigma_inv = self.apply_sigma(kappa)?.inv()?;
        let eps = kappa.mul(&k_sigma_inv)?.mul(&self.0.epsilon)?;
        validate_pair(&self.0.ring, self.0.sigma.clone(), eps)
    }
}

/// An element of K-bar = K / K_{sigma,eps}, stored by its canonical
/// representative. Two cosets are equal iff their representatives are equal.
#[derive(Clone, Debug)]
pub struct CosetElement {
    pair: AdmissiblePair,
    rep: RingElement,
}

impl PartialEq for CosetElement {
    fn eq(&self, other: &Self) -> bool {
        self.pair == other.pair && self.rep == other.rep
    }
}
impl Eq for CosetElement {}

impl std::fmt::Display for CosetElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl CosetElement {
    pub fn pair(&self) -> &AdmissiblePair {
        &self.pair
    }

    pub fn rep(&self) -> &RingElement {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn add(&self, o: &CosetElement) -> Result<CosetElement> {
        self.check_pair(o)?;
        self.pair.coset(&self.rep.add(&o.rep)?)
    }

    pub fn sub(&self, o: &CosetElement) -> Result<CosetElement> {
        self.check_pair(o)?;
        self.pair.coset(&self.rep.sub(&o.rep)?)
    }

    pub fn neg(&self) -> Result<CosetElement> {
        self.pair.coset(&self.rep.neg())
    }

    /// The twisted scalar action t-bar o lambda = class of lambda^sigma t lambda.
    pub fn circ(&self, lambda: &RingElement) -> Result<CosetElement> {
        let ls = self.pair.apply_sigma(lambda)?;
        self.pair.coset(&ls.mul(&self.rep)?.mul(lambda)?)
    }

    /// Left multiplication by kappa, landing in the scaled pair.
    pub fn scale_into(&self, kappa: &RingElement, target: &AdmissiblePair) -> Result<CosetElement> {
        target.coset(&kappa.mul(&self.rep)?)
    }

    fn check_pair(&self, o: &CosetElement) -> Result<()> {
        if self.pair != o.pair {
            return Err(Error::PairMismatch);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubgroupKind {
    Zero,
    Full,
    Generated,
}

#[derive(Clone, Debug, PartialEq)]
enum SubgroupData {
    Trivial,
    /// Finite field: saturated F_p row space in canonical-representative
    /// coordinates.
    Ff(fp::FpEchelon),
    /// F_2(t): reduced echelon rows of the transported coordinates
    /// u = a^2 + t b^2 -> (a, b), which turn the circ action into ordinary
    /// right scalar multiplication.
    Func(Vec<[RingElement; 2]>),
}

/// A finitely generated circ-closed subgroup R-bar of K-bar, with canonical
/// coset reduction for K-bar / R-bar.
///
/// Closure under circ is automatic for the stored data: over F_2(t) the span
/// is an F_2(t^2)-subspace and r o lambda = r lambda^2 stays inside; over a
/// finite field the basis is saturated under circ by construction at build
/// time. A randomized spot-check of closure lives in the test suite.
#[derive(Clone, Debug)]
pub struct ClosedSubgroup {
    pair: AdmissiblePair,
    kind: SubgroupKind,
    gens: Vec<CosetElement>,
    data: SubgroupData,
}

impl PartialEq for ClosedSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.pair == other.pair && self.kind == other.kind && self.data == other.data
    }
}
impl Eq for ClosedSubgroup {}

/// Transported coordinates of u in F_2(t) as a 2-dim F_2(t^2)-space:
/// u = a^2 + t b^2 -> (a, b).
pub fn func_coords(u: &RingElement) -> Result<[RingElement; 2]> {
    match u {
        RingElement::Func(e) => {
            let (a, b) = e.sqrt_decompose()?;
            Ok([RingElement::Func(a), RingElement::Func(b)])
        }
        _ => Err(Error::Unsupported(
            "transported coordinates need F_2(t)".into(),
        )),
    }
}

/// Inverse of [`func_coords`]: (a, b) -> a^2 + t b^2.
pub fn func_uncoords(v: &[RingElement]) -> Result<RingElement> {
    let t = crate::scalars::parse_element(&RingSpec::FuncField2, "t")?;
    let a2 = v[0].mul(&v[0])?;
    let b2 = v[1].mul(&v[1])?;
    a2.add(&t.mul(&b2)?)
}

impl ClosedSubgroup {
    pub fn zero(pair: &AdmissiblePair) -> Self {
        Self::normalized(
            pair.clone(),
            SubgroupKind::Zero,
            Vec::new(),
            SubgroupData::Trivial,
        )
    }

    pub fn full(pair: &AdmissiblePair) -> Self {
        ClosedSubgroup {
            pair: pair.clone(),
            kind: SubgroupKind::Full,
            gens: Vec::new(),
            data: SubgroupData::Trivial,
        }
    }

    /// Builds the circ-closed subgroup generated by the given cosets.
    /// Zero generators are dropped; each remaining generator must lie in
    /// the circ-vector part K-bar-circ, the necessary condition for a
    /// proper subgroup to serve as a co-defect.
    pub fn generated(pair: &AdmissiblePair, gens: Vec<CosetElement>) -> Result<Self> {
        let mut kept = Vec::new();
        for g in gens {
            if g.pair() != pair {
                return Err(Error::PairMismatch);
            }
            if g.is_zero() {
                continue;
            }
            if !pair.in_upper(g.rep())? {
                return Err(Error::GeneratorNotCircVector(g.rep().to_string()));
            }
            kept.push(g);
        }
        if kept.is_empty() {
            return Ok(Self::zero(pair));
        }
        let data = match pair.ring() {
            RingSpec::FiniteField { p, .. } => {
                let rows: Vec<Vec<u64>> = kept.iter().map(|g| gf_coeffs(g.rep())).collect();
                let mut ech = fp::rref(*p, &rows);
                // saturate under the circ action by every scalar
                let scalars = pair.ring().elements()?;
                loop {
                    let mut grown = false;
                    let snapshot = ech.rows.clone();
                    for row in snapshot {
                        let el = pair.coset(&gf_from_coeffs(pair.ring(), row))?;
                        for lam in &scalars {
                            let twisted = el.circ(lam)?;
                            if ech.insert(&gf_coeffs(twisted.rep())) {
                                grown = true;
                            }
                        }
                    }
                    if !grown {
                        break;
                    }
                }
                SubgroupData::Ff(ech)
            }
            RingSpec::FuncField2 => {
                let rows: Vec<Vec<RingElement>> = kept
                    .iter()
                    .map(|g| func_coords(g.rep()).map(|c| c.to_vec()))
                    .collect::<Result<_>>()?;
                let ech = linalg::rref(&rows)?;
                SubgroupData::Func(
                    ech.rows
                        .into_iter()
                        .map(|r| [r[0].clone(), r[1].clone()])
                        .collect(),
                )
            }
            // Quaternions: K-bar-circ = {0}, so nonzero generators were
            // rejected above and this point is unreachable.
            RingSpec::Quaternions => unreachable!(),
        };
        Ok(Self::normalized(
            pair.clone(),
            SubgroupKind::Generated,
            kept,
            data,
        ))
    }

    /// Normalizes degenerate kinds: an empty subgroup of a trivial coset
    /// group, or a generated subgroup that saturates everything, is Full.
    fn normalized(
        pair: AdmissiblePair,
        kind: SubgroupKind,
        gens: Vec<CosetElement>,
        data: SubgroupData,
    ) -> Self {
        let full_dim = match pair.ring() {
            RingSpec::FiniteField { .. } => pair.coset_group_dim().unwrap_or(usize::MAX),
            RingSpec::FuncField2 => 2,
            RingSpec::Quaternions => usize::MAX,
        };
        let reached = match &data {
            SubgroupData::Trivial => 0,
            SubgroupData::Ff(e) => e.rank(),
            SubgroupData::Func(rows) => rows.len(),
        };
        if reached >= full_dim {
            ClosedSubgroup {
                pair,
                kind: SubgroupKind::Full,
                gens,
                data: SubgroupData::Trivial,
            }
        } else {
            ClosedSubgroup {
                pair,
                kind,
                gens,
                data,
            }
        }
    }

    pub fn pair(&self) -> &AdmissiblePair {
        &self.pair
    }

    pub fn kind(&self) -> SubgroupKind {
        self.kind
    }

    pub fn generators(&self) -> &[CosetElement] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, SubgroupKind::Zero)
    }

    pub fn is_full(&self) -> bool {
        matches!(self.kind, SubgroupKind::Full)
    }

    pub fn contains(&self, t: &CosetElement) -> Result<bool> {
        if t.pair() != &self.pair {
            return Err(Error::PairMismatch);
        }
        Ok(match (&self.kind, &self.data) {
            (SubgroupKind::Zero, _) => t.is_zero(),
            (SubgroupKind::Full, _) => true,
            (_, SubgroupData::Ff(e)) => e.contains(&gf_coeffs(t.rep())),
            (_, SubgroupData::Func(rows)) => {
                let v = func_coords(t.rep())?;
                linalg::vec_is_zero(&reduce_func_rows(rows, &v)?)
            }
            _ => unreachable!(),
        })
    }

    /// Canonical representative of t-bar + R-bar; two cosets reduce to the
    /// same element iff their difference lies in the subgroup.
    pub fn reduce(&self, t: &CosetElement) -> Result<CosetElement> {
        if t.pair() != &self.pair {
            return Err(Error::PairMismatch);
        }
        Ok(match (&self.kind, &self.data) {
            (SubgroupKind::Zero, _) => t.clone(),
            (SubgroupKind::Full, _) => self.pair.zero_coset(),
            (_, SubgroupData::Ff(e)) => {
                let v = e.reduce(&gf_coeffs(t.rep()));
                CosetElement {
                    pair: self.pair.clone(),
                    rep: gf_from_coeffs(self.pair.ring(), v),
                }
            }
            (_, SubgroupData::Func(rows)) => {
                let v = func_coords(t.rep())?;
                let r = reduce_func_rows(rows, &v)?;
                CosetElement {
                    pair: self.pair.clone(),
                    rep: func_uncoords(&r)?,
                }
            }
            _ => unreachable!(),
        })
    }

    /// Dimension of the subgroup as an F_p-space (finite field) or as an
    /// F_2(t^2)-space (function field). Zero and Full are 0 and the ambient
    /// dimension respectively.
    pub fn dim(&self) -> Result<usize> {
        Ok(match (&self.kind, &self.data) {
            (SubgroupKind::Zero, _) => 0,
            (SubgroupKind::Full, _) => match self.pair.ring() {
                RingSpec::FiniteField { .. } => self.pair.coset_group_dim()?,
                RingSpec::FuncField2 => 2,
                RingSpec::Quaternions => {
                    return Err(Error::Unsupported(
                        "the full quaternion coset group is not a vector space".into(),
                    ))
                }
            },
            (_, SubgroupData::Ff(e)) => e.rank(),
            (_, SubgroupData::Func(rows)) => rows.len(),
            _ => unreachable!(),
        })
    }

    /// A K-basis of the subgroup as a vector space under the circ action.
    pub fn circ_basis(&self) -> Result<Vec<CosetElement>> {
        match (&self.kind, &self.data) {
            (SubgroupKind::Zero, _) => Ok(Vec::new()),
            (SubgroupKind::Full, _) => match self.pair.ring() {
                RingSpec::FuncField2 => {
                    let one = self.pair.ring().one();
                    let t = crate::scalars::parse_element(self.pair.ring(), "t")?;
                    Ok(vec![self.pair.coset(&one)?, self.pair.coset(&t)?])
                }
                _ => Err(Error::Unsupported(
                    "circ basis of a full subgroup needs K-bar = K-bar-circ".into(),
                )),
            },
            (_, SubgroupData::Func(rows)) => rows
                .iter()
                .map(|r| self.pair.coset(&func_uncoords(r)?))
                .collect(),
            (_, SubgroupData::Ff(_)) => {
                // Greedy basis of the circ K-space: repeatedly take an
                // element outside the span of the chosen ones.
                let mut chosen: Vec<CosetElement> = Vec::new();
                let mut span = ClosedSubgroup::zero(&self.pair);
                loop {
                    let mut found = None;
                    for el in self.enumerate()? {
                        if !span.contains(&el)? {
                            found = Some(el);
                            break;
                        }
                    }
                    match found {
                        Some(el) => {
                            chosen.push(el.clone());
                            span = ClosedSubgroup::generated(&self.pair, chosen.clone())?;
                        }
                        None => return Ok(chosen),
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    /// All elements (finite fields only).
    pub fn enumerate(&self) -> Result<Vec<CosetElement>> {
        let SubgroupData::Ff(e) = &self.data else {
            return Err(Error::InfiniteRing);
        };
        let p = match self.pair.ring() {
            RingSpec::FiniteField { p, .. } => *p,
            _ => unreachable!(),
        };
        let rank = e.rank();
        let mut out = Vec::new();
        let total = (p as u128).pow(rank as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mut acc = vec![0u64; e.rows[0].len()];
            for row in &e.rows {
                let c = (rest % p as u128) as u64;
                rest /= p as u128;
                for (a, r) in acc.iter_mut().zip(row) {
                    *a = (*a + c * r) % p;
                }
            }
            out.push(CosetElement {
                pair: self.pair.clone(),
                rep: gf_from_coeffs(self.pair.ring(), acc),
            });
        }
        Ok(out)
    }

    /// Subgroup generated by this one together with extra cosets.
    pub fn extended(&self, extra: &[CosetElement]) -> Result<ClosedSubgroup> {
        if self.is_full() {
            return Ok(self.clone());
        }
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        ClosedSubgroup::generated(&self.pair, gens)
    }

    /// Image kappa R-bar inside the coset group of the scaled pair.
    pub fn scaled(&self, kappa: &RingElement, target: &AdmissiblePair) -> Result<ClosedSubgroup> {
        match self.kind {
            SubgroupKind::Zero => Ok(ClosedSubgroup::zero(target)),
            SubgroupKind::Full => Ok(ClosedSubgroup::full(target)),
            SubgroupKind::Generated => {
                let gens = self
                    .gens
                    .iter()
                    .map(|g| g.scale_into(kappa, target))
                    .collect::<Result<Vec<_>>>()?;
                ClosedSubgroup::generated(target, gens)
            }
        }
    }

    /// Image under a field automorphism rho (finite fields).
    pub fn mapped(&self, rho: &AntiAutoSpec) -> Result<ClosedSubgroup> {
        match self.kind {
            SubgroupKind::Zero => Ok(self.clone()),
            SubgroupKind::Full => Ok(self.clone()),
            SubgroupKind::Generated => {
                let gens = self
                    .gens
                    .iter()
                    .map(|g| self.pair.coset(&rho.apply(g.rep())?))
                    .collect::<Result<Vec<_>>>()?;
                ClosedSubgroup::generated(&self.pair, gens)
            }
        }
    }

    /// Verifies self = s + t as a direct sum of circ-subspaces.
    pub fn is_direct_sum_of(&self, s: &ClosedSubgroup, t: &ClosedSubgroup) -> Result<bool> {
        for g in s.generators().iter().chain(t.generators()) {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        let union = s.extended(t.generators())?;
        let (ds, dt, du, dr) = (s.dim()?, t.dim()?, union.dim()?, self.dim()?);
        Ok(ds + dt == du && du == dr && self.contained_in(&union)?)
    }

    fn contained_in(&self, other: &ClosedSubgroup) -> Result<bool> {
        if other.is_full() {
            return Ok(true);
        }
        match &self.kind {
            SubgroupKind::Zero => Ok(true),
            SubgroupKind::Full => Ok(other.is_full()),
            SubgroupKind::Generated => {
                for g in &self.gens {
                    if !other.contains(g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Decomposes r-bar in self (+) other as (s_part, t_part, s_coords),
    /// where s_coords are the circ-coordinates of the s-part with respect
    /// to `self.circ_basis()`.
    pub fn split_along(
        &self,
        other: &ClosedSubgroup,
        r: &CosetElement,
    ) -> Result<(CosetElement, CosetElement, Vec<RingElement>)> {
        let sb = self.circ_basis()?;
        let tb = other.circ_basis()?;
        match self.pair.ring() {
            RingSpec::FuncField2 => {
                let mut cols: Vec<Vec<RingElement>> = Vec::new();
                for b in sb.iter().chain(tb.iter()) {
                    cols.push(func_coords(b.rep())?.to_vec());
                }
                let target = func_coords(r.rep())?.to_vec();
                let sol = linalg::solve_right(&cols, &target)?
                    .ok_or_else(|| Error::NotInSubgroup(r.rep().to_string()))?;
                let mut s_vec = vec![self.pair.ring().zero(), self.pair.ring().zero()];
                for (c, b) in sol.iter().take(sb.len()).zip(&cols) {
                    s_vec = linalg::vec_add(&s_vec, &linalg::vec_scale_right(b, c)?)?;
                }
                let s_part = self.pair.coset(&func_uncoords(&s_vec)?)?;
                let t_part = r.sub(&s_part)?;
                Ok((s_part, t_part, sol[..sb.len()].to_vec()))
            }
            RingSpec::FiniteField { p, .. } => {
                // F_p-solve over the saturated bases, then recover circ
                // coordinates of the s-part by brute force over scalar tuples.
                let (SubgroupData::Ff(se), dt) = (&self.data, &other.data) else {
                    // self may be Zero
                    if self.is_zero() {
                        if !other.contains(r)? {
                            return Err(Error::NotInSubgroup(r.rep().to_string()));
                        }
                        return Ok((self.pair.zero_coset(), r.clone(), Vec::new()));
                    }
                    return Err(Error::Unsupported("split needs generated subgroups".into()));
                };
                let t_rows: &[Vec<u64>] = match dt {
                    SubgroupData::Ff(te) => &te.rows,
                    SubgroupData::Trivial if other.is_zero() => &[],
                    _ => return Err(Error::Unsupported("split needs generated subgroups".into())),
                };
                let mut cols: Vec<Vec<RingElement>> = Vec::new();
                let fp_ring = self.pair.ring();
                let to_vec = |row: &[u64]| -> Vec<RingElement> {
                    row.iter().map(|&c| fp_ring.from_int(c as i64)).collect()
                };
                for row in se.rows.iter().chain(t_rows.iter()) {
                    cols.push(to_vec(row));
                }
                let target = to_vec(&gf_coeffs(r.rep()));
                // scalar coordinates live in F_p here; reuse generic solver
                let sol = linalg::solve_right(&cols, &target)?
                    .ok_or_else(|| Error::NotInSubgroup(r.rep().to_string()))?;
                let mut s_acc = vec![0u64; gf_coeffs(r.rep()).len()];
                for (c, row) in sol.iter().take(se.rows.len()).zip(&se.rows) {
                    let cv = match c {
                        RingElement::Gf(g) => g.coeffs[0],
                        _ => unreachable!(),
                    };
                    for (a, x) in s_acc.iter_mut().zip(row) {
                        *a = (*a + cv * x) % p;
                    }
                }
                let s_part = CosetElement {
                    pair: self.pair.clone(),
                    rep: gf_from_coeffs(self.pair.ring(), s_acc),
                };
                let t_part = r.sub(&s_part)?;
                let coords = self.circ_coords(&s_part)?;
                Ok((s_part, t_part, coords))
            }
            RingSpec::Quaternions => {
                if !r.is_zero() {
                    return Err(Error::NotInSubgroup(r.rep().to_string()));
                }
                Ok((self.pair.zero_coset(), self.pair.zero_coset(), Vec::new()))
            }
        }
    }

    /// Circ-coordinates of an element of the subgroup with respect to
    /// `circ_basis()`: r = sum basis_i o lambda_i.
    pub fn circ_coords(&self, r: &CosetElement) -> Result<Vec<RingElement>> {
        let basis = self.circ_basis()?;
        if basis.is_empty() {
            if r.is_zero() {
                return Ok(Vec::new());
            }
            return Err(Error::NotInSubgroup(r.rep().to_string()));
        }
        match self.pair.ring() {
            RingSpec::FuncField2 => {
                let cols: Vec<Vec<RingElement>> = basis
                    .iter()
                    .map(|b| func_coords(b.rep()).map(|c| c.to_vec()))
                    .collect::<Result<_>>()?;
                let target = func_coords(r.rep())?.to_vec();
                linalg::solve_right(&cols, &target)?
                    .ok_or_else(|| Error::NotInSubgroup(r.rep().to_string()))
            }
            RingSpec::FiniteField { .. } => {
                // The circ action is quadratic in the scalar, so solve by
                // enumeration; subgroup bases at desk scale are tiny.
                let scalars = self.pair.ring().elements()?;
                let m = basis.len();
                if scalars.len().pow(m as u32) > 1 << 20 {
                    return Err(Error::SizeCapExceeded(scalars.len().pow(m as u32) as u128));
                }
                let mut idx = vec![0usize; m];
                loop {
                    let mut acc = self.pair.zero_coset();
                    for (b, &i) in basis.iter().zip(&idx) {
                        acc = acc.add(&b.circ(&scalars[i])?)?;
                    }
                    if &acc == r {
                        return Ok(idx.iter().map(|&i| scalars[i].clone()).collect());
                    }
                    // advance multi-index
                    let mut k = 0;
                    loop {
                        if k == m {
                            return Err(Error::NotInSubgroup(r.rep().to_string()));
                        }
                        idx[k] += 1;
                        if idx[k] < scalars.len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                }
            }
            RingSpec::Quaternions => Err(Error::Unsupported(
                "quaternion closed subgroups are zero or full".into(),
            )),
        }
    }

    /// A complement of `self` inside `big` as circ-spaces:
    /// self (+) result = big.
    pub fn complement_within(&self, big: &ClosedSubgroup) -> Result<ClosedSubgroup> {
        if !self.contained_in(big)? {
            return Err(Error::NotInSubgroup(
                "subgroup not inside the bigger one".into(),
            ));
        }
        let mut span = self.clone();
        let mut added: Vec<CosetElement> = Vec::new();
        let candidates: Vec<CosetElement> = match (&big.kind, &big.data) {
            (SubgroupKind::Zero, _) => Vec::new(),
            (_, SubgroupData::Func(rows)) => rows
                .iter()
                .map(|r| big.pair.coset(&func_uncoords(r)?))
                .collect::<Result<_>>()?,
            (SubgroupKind::Full, _) if *big.pair.ring() == RingSpec::FuncField2 => {
                big.circ_basis()?
            }
            (_, SubgroupData::Ff(_)) => big.enumerate()?,
            (SubgroupKind::Full, _) if big.pair.ring().is_finite() => {
                // enumerate the whole coset group
                let mut out = Vec::new();
                for e in big.pair.ring().elements()? {
                    let c = big.pair.coset(&e)?;
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
                out
            }
            _ => return Err(Error::Unsupported("complement unsupported here".into())),
        };
        for cand in candidates {
            if span.dim()? == big.dim()? {
                break;
            }
            if !span.contains(&cand)? {
                added.push(cand);
                span = span.extended(std::slice::from_ref(added.last().unwrap()))?;
            }
        }
        if span.dim()? != big.dim()? {
            return Err(Error::VerificationFailed(
                "complement construction did not reach the ambient subgroup".into(),
            ));
        }
        ClosedSubgroup::generated(&self.pair, added)
    }

    /// Canonical echelon payload, used for exact subgroup comparison.
    pub fn canonical_data(&self) -> String {
        match (&self.kind, &self.data) {
            (SubgroupKind::Zero, _) => "zero".into(),
            (SubgroupKind::Full, _) => "full".into(),
            (_, SubgroupData::Ff(e)) => format!("ff:{:?}", e.rows),
            (_, SubgroupData::Func(rows)) => {
                let parts: Vec<String> = rows
                    .iter()
                    .map(|r| format!("[{},{}]", r[0], r[1]))
                    .collect();
                format!("func:{}", parts.join(";"))
            }
            _ => unreachable!(),
        }
    }
}

fn reduce_func_rows(rows: &[[RingElement; 2]], v: &[RingElement; 2]) -> Result<Vec<RingElement>> {
    let mat: Vec<Vec<RingElement>> = rows.iter().map(|r| r.to_vec()).collect();
    let ech = linalg::rref(&mat)?;
    ech.reduce(&v.to_vec())
}

/// Free-function forms of the spec operations, thin wrappers over methods.
pub fn in_lower(pair: &AdmissiblePair, t: &RingElement) -> Result<bool> {
    pair.in_lower(t)
}

pub fn in_upper(pair: &AdmissiblePair, t: &RingElement) -> Result<bool> {
    pair.in_upper(t)
}

pub fn is_trace_type(pair: &AdmissiblePair) -> Result<bool> {
    pair.is_trace_type()
}

pub fn circ(t: &CosetElement, lambda: &RingElement) -> Result<CosetElement> {
    t.circ(lambda)
}

pub fn scale_pair(kappa: &RingElement, pair: &AdmissiblePair) -> Result<AdmissiblePair> {
    pair.scale(kappa)
}

pub fn subgroup_membership(sub: &ClosedSubgroup, t: &CosetElement) -> Result<bool> {
    sub.contains(t)
}

pub fn reduce_mod(sub: &ClosedSubgroup, t: &CosetElement) -> Result<CosetElement> {
    sub.reduce(t)
}
