//! Quotient forms q_U, cover forms q_E^{S,T}, liftings of singular points,
//! dominant covers, basis-change isomorphisms between covers, and the
//! reconstruction of a form as a cover of one of its quotients.
//!
//! A cover lives on V (+) S-bar. Coordinates on the S-bar block refer to a
//! K-basis of S-bar under the circ action; composition of circ actions
//! makes the induced scalar multiplication on those coordinates the
//! ordinary right one, so cover vectors are plain coordinate tuples of
//! length dim V + dim S-bar.

use crate::admissible::{ClosedSubgroup, CosetElement};
use crate::error::{Error, Result};
use crate::forms::GenPseudoQuadraticForm;
use crate::linalg::{self, Matrix, Vector};
use crate::sampler::Sampler;
use crate::scalars::RingElement;

/// A quotient q_U of a form by a subspace U of Rad(f) meeting Rad(q)
/// trivially, together with the projection data.
#[derive(Clone, Debug)]
pub struct QuotientSpec {
    /// The original form.
    pub base: GenPseudoQuadraticForm,
    /// Echelonized basis of U.
    pub u_basis: Matrix,
    /// Standard-basis indices spanning the chosen complement W of U;
    /// quotient coordinates refer to these, in order.
    pub complement: Vec<usize>,
    /// The quotient form on V/U with the induced co-defect.
    pub form: GenPseudoQuadraticForm,
}

/// U defines a quotient iff U is contained in Rad(f) and meets Rad(q)
/// trivially.
pub fn admits_quotient(q: &GenPseudoQuadraticForm, u: &Matrix) -> Result<bool> {
    let u_basis = linalg::rref(u)?.rows;
    if u_basis.is_empty() {
        return Ok(true);
    }
    let gram = q.gram();
    for v in &u_basis {
        if !linalg::vec_is_zero(&linalg::mat_apply(gram, v)?) {
            return Ok(false);
        }
    }
    // U meets Rad(q) trivially iff no nonzero vector of U is singular.
    let ring = q.pair().ring().clone();
    match &ring {
        crate::scalars::RingSpec::FiniteField { .. } => {
            for coords in crate::polar::projective_points(&ring, u_basis.len())? {
                let mut x = linalg::zero_vector(&ring, q.dim());
                for (c, b) in coords.iter().zip(&u_basis) {
                    x = linalg::vec_add(&x, &linalg::vec_scale_right(b, c)?)?;
                }
                if q.is_singular(&x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        crate::scalars::RingSpec::FuncField2 => {
            // q restricted to U is "linear" over squares; injectivity is a
            // rank condition on the values modulo the co-defect.
            let values: Vec<CosetElement> =
                u_basis.iter().map(|b| q.eval(b)).collect::<Result<_>>()?;
            if values.iter().any(|v| v.is_zero()) {
                return Ok(false);
            }
            let extended = q.codefect().extended(&values)?;
            Ok(extended.dim()? == q.codefect().dim()? + u_basis.len())
        }
        crate::scalars::RingSpec::Quaternions => {
            // every vector of Rad(f) is singular here, so only U = 0 works
            Ok(false)
        }
    }
}

/// Builds q_U: the co-defect grows by the values q takes on U, the Gram
/// matrix and basis values restrict to a complement W of U chosen by
/// echelon pivoting on the standard basis.
pub fn quotient_form(q: &GenPseudoQuadraticForm, u: &Matrix) -> Result<QuotientSpec> {
    if !admits_quotient(q, u)? {
        return Err(Error::QuotientNotDefined(
            "U must lie in Rad(f) and meet Rad(q) trivially".into(),
        ));
    }
    let ech = linalg::rref(u)?;
    let u_basis = ech.rows.clone();
    let complement: Vec<usize> = (0..q.dim()).filter(|i| !ech.pivots.contains(i)).collect();
    let pair = q.pair().clone();
    let u_values: Vec<CosetElement> = u_basis.iter().map(|b| q.eval(b)).collect::<Result<_>>()?;
    let codefect = q.codefect().extended(&u_values)?;
    let m = complement.len();
    let ring = pair.ring().clone();
    let mut gram = vec![vec![ring.zero(); m]; m];
    for (a, &i) in complement.iter().enumerate() {
        for (b, &j) in complement.iter().enumerate() {
            gram[a][b] = q.gram()[i][j].clone();
        }
    }
    let mut values = Vec::with_capacity(m);
    for &i in &complement {
        let w = linalg::unit_vector(&ring, q.dim(), i);
        values.push(q.eval(&w)?);
    }
    let form = GenPseudoQuadraticForm::new(pair, gram, values, codefect)?;
    Ok(QuotientSpec {
        base: q.clone(),
        u_basis,
        complement,
        form,
    })
}

impl QuotientSpec {
    /// Quotient coordinates of x + U with respect to the complement basis.
    pub fn project(&self, x: &[RingElement]) -> Result<Vector> {
        let ring = self.base.pair().ring().clone();
        let n = self.base.dim();
        let mut columns: Matrix = self
            .complement
            .iter()
            .map(|&i| linalg::unit_vector(&ring, n, i))
            .collect();
        columns.extend(self.u_basis.iter().cloned());
        let sol = linalg::solve_right(&columns, x)?.ok_or(Error::NotABasis)?;
        Ok(sol[..self.complement.len()].to_vec())
    }
}

/// A cover of q via a direct-sum decomposition R-bar = S-bar (+) T-bar,
/// based at a singular ordered basis E.
#[derive(Clone, Debug)]
pub struct CoverSpec {
    pub base: GenPseudoQuadraticForm,
    pub sbar: ClosedSubgroup,
    pub tbar: ClosedSubgroup,
    /// Circ-basis of S-bar; cover coordinates n..n+m refer to it.
    pub sbar_basis: Vec<CosetElement>,
    /// The singular ordered basis E of V the cover is based at.
    pub basis: Matrix,
    /// The cover form on V (+) S-bar, with co-defect T-bar.
    pub form: GenPseudoQuadraticForm,
}

/// Builds q_E^{S,T} on V (+) S-bar: the Gram matrix extends by zero blocks,
/// the new basis values are the S-bar basis elements themselves, the values
/// on V record gamma_E, and the co-defect shrinks to T-bar.
pub fn cover_form(
    q: &GenPseudoQuadraticForm,
    sbar: &ClosedSubgroup,
    tbar: &ClosedSubgroup,
    basis: &Matrix,
) -> Result<CoverSpec> {
    if q.is_trivial()? {
        return Err(Error::Unsupported(
            "covers of trivial forms depend on a chosen sesquilinearization".into(),
        ));
    }
    if !q.codefect().is_direct_sum_of(sbar, tbar)? {
        return Err(Error::NotADirectSum(
            "S-bar (+) T-bar must equal the co-defect".into(),
        ));
    }
    let pair = q.pair().clone();
    let ring = pair.ring().clone();
    let n = q.dim();
    if basis.len() != n || linalg::rank(basis)? != n {
        return Err(Error::NotABasis);
    }
    for (i, b) in basis.iter().enumerate() {
        if !q.is_singular(b)? {
            return Err(Error::BasisNotSingular(i));
        }
    }
    let sbar_basis = sbar.circ_basis()?;
    let m = sbar_basis.len();
    let mut gram = vec![vec![ring.zero(); n + m]; n + m];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = q.gram()[i][j].clone();
        }
    }
    let mut values = Vec::with_capacity(n + m);
    for i in 0..n {
        let e_i = linalg::unit_vector(&ring, n, i);
        values.push(q.gamma(basis, &e_i)?);
    }
    values.extend(sbar_basis.iter().cloned());
    let form = GenPseudoQuadraticForm::new(pair, gram, values, tbar.clone())?;
    Ok(CoverSpec {
        base: q.clone(),
        sbar: sbar.clone(),
        tbar: tbar.clone(),
        sbar_basis,
        basis: basis.clone(),
        form,
    })
}

impl CoverSpec {
    pub fn v_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn s_dim(&self) -> usize {
        self.sbar_basis.len()
    }

    /// Projection of a cover vector onto V along S-bar.
    pub fn project_v(&self, v: &[RingElement]) -> Vector {
        v[..self.v_dim()].to_vec()
    }

    /// Lift of a q-singular point: `[x] -> [x - theta(gamma_E(x, x))]`, with
    /// theta the projection of R-bar onto S-bar along T-bar. The lift is
    /// verified singular for the cover.
    pub fn lift_point(&self, x: &[RingElement]) -> Result<Vector> {
        if !self.base.is_singular(x)? {
            return Err(Error::BasisNotSingular(0));
        }
        let gamma = self.base.gamma(&self.basis, x)?;
        if !self.base.codefect().contains(&gamma)? {
            return Err(Error::VerificationFailed(
                "gamma of a singular vector must lie in the co-defect".into(),
            ));
        }
        let (s_part, _t_part, _coords) = self.sbar.split_along(&self.tbar, &gamma)?;
        let neg_coords = self.sbar.circ_coords(&s_part.neg()?)?;
        let mut lifted = x.to_vec();
        lifted.extend(neg_coords);
        if !self.form.is_singular(&lifted)? {
            return Err(Error::VerificationFailed(
                "lifted point is not singular for the cover".into(),
            ));
        }
        Ok(lifted)
    }
}

/// The dominant cover q^{R,0}: always pseudo-quadratic (zero co-defect),
/// with defect Rad(f) (+) R-bar. A singular basis is taken from the
/// standard one when possible, otherwise greedily from enumerated singular
/// points over finite fields.
pub fn dominant_cover(q: &GenPseudoQuadraticForm) -> Result<CoverSpec> {
    let sbar = q.codefect().clone();
    let tbar = ClosedSubgroup::zero(q.pair());
    let basis = singular_basis(q)?;
    let cover = cover_form(q, &sbar, &tbar, &basis)?;
    debug_assert!(cover.form.codefect().is_zero());
    Ok(cover)
}

/// A singular ordered basis of the form's space.
pub fn singular_basis(q: &GenPseudoQuadraticForm) -> Result<Matrix> {
    let ring = q.pair().ring().clone();
    let n = q.dim();
    let standard: Matrix = (0..n).map(|i| linalg::unit_vector(&ring, n, i)).collect();
    let mut all_singular = true;
    for b in &standard {
        if !q.is_singular(b)? {
            all_singular = false;
            break;
        }
    }
    if all_singular {
        return Ok(standard);
    }
    if !ring.is_finite() {
        return Err(Error::NoSingularBasis);
    }
    let points = crate::polar::enumerate_points(&crate::polar::PolarSource::Q(q))?;
    let vectors: Matrix = points.into_iter().map(|p| p.coords).collect();
    let chosen = linalg::greedy_independent(&vectors)?;
    if chosen.len() != n {
        return Err(Error::NoSingularBasis);
    }
    Ok(chosen.into_iter().map(|i| vectors[i].clone()).collect())
}

/// The linear bijection Delta_{E,E'} of V (+) S-bar intertwining the covers
/// based at E and at E': (x, mu) -> (x, mu + M x) with
/// M column i = circ-coordinates of theta(delta_{E,E'}(e_i)).
#[derive(Clone, Debug)]
pub struct CoverIso {
    pub v_dim: usize,
    pub s_dim: usize,
    /// s_dim x v_dim block added to the S-bar coordinates.
    pub block: Matrix,
}

impl CoverIso {
    pub fn apply(&self, v: &[RingElement]) -> Result<Vector> {
        if v.len() != self.v_dim + self.s_dim {
            return Err(Error::DimensionMismatch {
                expected: self.v_dim + self.s_dim,
                got: v.len(),
            });
        }
        let x = &v[..self.v_dim];
        let mut out = v.to_vec();
        if self.s_dim > 0 {
            let add = linalg::mat_apply(&self.block, x)?;
            for (j, a) in add.into_iter().enumerate() {
                out[self.v_dim + j] = out[self.v_dim + j].add(&a)?;
            }
        }
        Ok(out)
    }
}

/// Builds Delta_{E,E'} between the covers of `cover.base` based at
/// `cover.basis` and at `target_basis`, and verifies the defining identity
/// q_E^{S,T}(v) = q_{E'}^{S,T}(Delta(v)) on a seeded sample.
pub fn basis_change_iso(
    cover: &CoverSpec,
    target_basis: &Matrix,
    samples: usize,
) -> Result<(CoverIso, CoverSpec)> {
    let q = &cover.base;
    let target = cover_form(q, &cover.sbar, &cover.tbar, target_basis)?;
    let ring = q.pair().ring().clone();
    let n = q.dim();
    let m = cover.s_dim();
    let mut block = vec![vec![ring.zero(); n]; m];
    for i in 0..n {
        let e_i = linalg::unit_vector(&ring, n, i);
        let delta = q.difference_map(&cover.basis, target_basis, &e_i)?;
        let (s_part, _t, coords) = cover.sbar.split_along(&cover.tbar, &delta)?;
        let _ = s_part;
        for (j, c) in coords.into_iter().enumerate() {
            block[j][i] = c;
        }
    }
    let iso = CoverIso {
        v_dim: n,
        s_dim: m,
        block,
    };
    let mut sampler = Sampler::new(0xb51);
    for _ in 0..samples {
        let v = sampler.vector(&ring, n + m);
        let lhs = cover.form.eval(&v)?;
        let rhs = target.form.eval(&iso.apply(&v)?)?;
        if lhs != rhs {
            return Err(Error::VerificationFailed(
                "basis-change isomorphism does not intertwine the covers".into(),
            ));
        }
    }
    Ok((iso, target))
}

/// A form reconstructed as a cover of its quotient, with the isomorphism.
#[derive(Clone, Debug)]
pub struct ReconstructedCover {
    pub quotient: QuotientSpec,
    pub cover: CoverSpec,
    /// Matrix of the isomorphism alpha from the original space onto the
    /// cover coordinates.
    pub alpha: Matrix,
}

/// Writes q-tilde as a cover of its quotient by U: alpha sends the chosen
/// complement W of U through the projection and each u to
/// theta(q-tilde(u)) in S-bar. The identity q-tilde(v) = cover(alpha(v)) is
/// verified on a seeded sample.
pub fn reconstruct_cover(
    qt: &GenPseudoQuadraticForm,
    u: &Matrix,
    chosen_sbar: Option<&ClosedSubgroup>,
    samples: usize,
) -> Result<ReconstructedCover> {
    if qt.codefect().is_full() {
        return Err(Error::FullCodefect);
    }
    let quotient = quotient_form(qt, u)?;
    let q = &quotient.form;
    let tbar = qt.codefect().clone();
    let sbar = match chosen_sbar {
        Some(s) => {
            if !q.codefect().is_direct_sum_of(s, &tbar)? {
                return Err(Error::NotADirectSum(
                    "chosen S-bar is not a complement of T-bar in R-bar".into(),
                ));
            }
            s.clone()
        }
        None => tbar.complement_within(q.codefect())?,
    };
    let basis = singular_basis(q)?;
    let cover = cover_form(q, &sbar, &tbar, &basis)?;
    // alpha on the mixed basis (complement units, then U basis)
    let ring = qt.pair().ring().clone();
    let n = qt.dim();
    let m_q = quotient.complement.len();
    let m_s = cover.s_dim();
    let mut mixed_cols: Matrix = Vec::with_capacity(n);
    let mut alpha_cols: Matrix = Vec::with_capacity(n);
    for (r, &i) in quotient.complement.iter().enumerate() {
        mixed_cols.push(linalg::unit_vector(&ring, n, i));
        alpha_cols.push(linalg::unit_vector(&ring, m_q + m_s, r));
    }
    for ub in &quotient.u_basis {
        mixed_cols.push(ub.clone());
        let value = qt.eval(ub)?;
        let (s_part, _t, _c) = sbar.split_along(&tbar, &value)?;
        let coords = sbar.circ_coords(&s_part)?;
        let mut col = linalg::zero_vector(&ring, m_q + m_s);
        for (j, c) in coords.into_iter().enumerate() {
            col[m_q + j] = c;
        }
        alpha_cols.push(col);
    }
    // alpha in standard coordinates: alpha(x) = sum_k alpha_cols[k] gamma_k
    // where gamma = mixed coordinates of x
    let mixed_matrix: Matrix = (0..n)
        .map(|r| mixed_cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let mixed_inv = linalg::invert(&mixed_matrix)?.ok_or(Error::NotABasis)?;
    let mut alpha = vec![vec![ring.zero(); n]; m_q + m_s];
    for k in 0..n {
        // image of the k-th standard vector
        let e_k = linalg::unit_vector(&ring, n, k);
        let gamma = linalg::mat_apply(&mixed_inv, &e_k)?;
        let mut img = linalg::zero_vector(&ring, m_q + m_s);
        for (col, g) in alpha_cols.iter().zip(&gamma) {
            img = linalg::vec_add(&img, &linalg::vec_scale_right(col, g)?)?;
        }
        for r in 0..m_q + m_s {
            alpha[r][k] = img[r].clone();
        }
    }
    let mut sampler = Sampler::new(0xa1fa);
    for _ in 0..samples {
        let v = sampler.vector(&ring, n);
        let lhs = qt.eval(&v)?;
        let rhs = cover.form.eval(&linalg::mat_apply(&alpha, &v)?)?;
        if lhs != rhs {
            return Err(Error::VerificationFailed(
                "reconstruction does not reproduce the original form".into(),
            ));
        }
    }
    Ok(ReconstructedCover {
        quotient,
        cover,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::forms::forms_agree;
    use crate::scalars::{parse_element, RingSpec};

    fn fel(s: &str) -> RingElement {
        parse_element(&RingSpec::FuncField2, s).unwrap()
    }

    fn fvec(parts: &[&str]) -> Vector {
        parts.iter().map(|s| fel(s)).collect()
    }

    /// S-bar block of a cover space, as standard vectors.
    fn sblock(cover: &CoverSpec) -> Matrix {
        let ring = cover.base.pair().ring().clone();
        let total = cover.v_dim() + cover.s_dim();
        (cover.v_dim()..total)
            .map(|i| linalg::unit_vector(&ring, total, i))
            .collect()
    }

    #[test]
    fn admits_quotient_examples() {
        let q = fixtures::funcfield_hyperbolic(&["1"]).unwrap();
        assert!(admits_quotient(&q, &Vec::new()).unwrap());
        // a non-radical direction is rejected
        let bad = vec![fvec(&["1", "0"])];
        assert!(!admits_quotient(&q, &bad).unwrap());
        // the S-bar block of a dominant cover defines a quotient
        let cover = dominant_cover(&q).unwrap();
        assert!(admits_quotient(&cover.form, &sblock(&cover)).unwrap());
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let q = fixtures::funcfield_hyperbolic(&["1"]).unwrap();
        let spec = quotient_form(&q, &Vec::new()).unwrap();
        assert_eq!(spec.form, q);
        assert_eq!(spec.complement, vec![0, 1]);
    }

    #[test]
    fn dominant_cover_shape_and_roundtrip() {
        let q = fixtures::funcfield_hyperbolic(&["1"]).unwrap();
        let cover = dominant_cover(&q).unwrap();
        assert_eq!(cover.form.dim(), 3);
        assert!(cover.form.codefect().is_zero());
        // q-tilde(x1, x2, mu) = x1 x2 + mu^2
        let v = fvec(&["t+1", "t^2", "t^3"]);
        let expect = fel("t+1")
            .mul(&fel("t^2"))
            .unwrap()
            .add(&fel("t^3").mul(&fel("t^3")).unwrap())
            .unwrap();
        assert_eq!(*cover.form.eval(&v).unwrap().rep(), expect);
        // quotient by the S-bar block recovers q exactly
        let spec = quotient_form(&cover.form, &sblock(&cover)).unwrap();
        assert_eq!(
            spec.form.codefect().canonical_data(),
            q.codefect().canonical_data()
        );
        let mut sampler = Sampler::new(17);
        assert!(forms_agree(&spec.form, &q, &mut sampler, 200).unwrap());
        // the new co-defect picks up the values on U: R-bar_U = span {1}
        assert!(spec
            .form
            .codefect()
            .contains(&q.pair().coset(&fel("1")).unwrap())
            .unwrap());
    }

    #[test]
    fn improper_cover_is_identity() {
        let q = fixtures::funcfield_hyperbolic(&["1"]).unwrap();
        let zero = ClosedSubgroup::zero(q.pair());
        let basis = singular_basis(&q).unwrap();
        let cover = cover_form(&q, &zero, q.codefect(), &basis).unwrap();
        assert_eq!(cover.form.dim(), 2);
        let mut sampler = Sampler::new(23);
        assert!(forms_agree(&cover.form, &q, &mut sampler, 100).unwrap());
        // a pseudo-quadratic form admits only the improper cover
        let pq = fixtures::hyperbolic_q(&RingSpec::finite(2, 1).unwrap(), 2).unwrap();
        let dom = dominant_cover(&pq).unwrap();
        assert_eq!(dom.s_dim(), 0);
        assert_eq!(dom.form, pq);
    }

    /// Hyperbolic plane plus an f-radical line carrying the value t-bar,
    /// co-defect span{t}: Rad(f) is one-dimensional and nonzero.
    fn degenerate_funcfield_form() -> GenPseudoQuadraticForm {
        let ring = RingSpec::FuncField2;
        let pair = fixtures::quadratic_pair(&ring).unwrap();
        let mut gram = vec![vec![ring.zero(); 3]; 3];
        gram[0][1] = ring.one();
        gram[1][0] = ring.one();
        let codefect =
            ClosedSubgroup::generated(&pair, vec![pair.coset(&fel("t")).unwrap()]).unwrap();
        let values = vec![
            pair.zero_coset(),
            pair.zero_coset(),
            pair.coset(&fel("t")).unwrap(),
        ];
        GenPseudoQuadraticForm::new(pair, gram, values, codefect).unwrap()
    }

    #[test]
    fn cover_radical_gains_the_s_block() {
        let q = degenerate_funcfield_form();
        assert_eq!(q.sesqui_unchecked().radical().unwrap().len(), 1);
        let cover = dominant_cover(&q).unwrap();
        assert_eq!(cover.s_dim(), 1);
        // Rad(f^S) = Rad(f) (+) S-bar
        let rad = cover.form.sesqui_unchecked().radical().unwrap();
        assert_eq!(rad.len(), 1 + cover.s_dim());
    }

    #[test]
    fn rank_two_codefect_means_trivial_form() {
        // K-bar over F_2(t) is 2-dimensional over the square subfield, so a
        // rank-2 co-defect saturates to the full group and the form is
        // trivial; covers of trivial forms are rejected.
        let q = fixtures::funcfield_hyperbolic(&["1", "t"]).unwrap();
        assert!(q.codefect().is_full());
        assert!(q.is_trivial().unwrap());
        assert!(matches!(dominant_cover(&q), Err(Error::Unsupported(_))));
    }

    #[test]
    fn lift_point_examples() {
        let q = fixtures::funcfield_hyperbolic(&["1"]).unwrap();
        let cover = dominant_cover(&q).unwrap();
        // basis vectors lift to themselves
        let ring = RingSpec::FuncField2;
        let e1 = linalg::unit_vector(&ring, 2, 0);
        let lifted = cover.lift_point(&e1).unwrap();
        assert_eq!(lifted, fvec(&["1", "0", "0"]));
        // (1, t^2): gamma = t^2, circ-coordinate of t^2 = 1 o t is t
        let lifted = cover.lift_point(&fvec(&["1", "t^2"])).unwrap();
        assert_eq!(lifted, fvec(&["1", "t^2", "t"]));
        // non-singular vectors are rejected
        assert!(cover.lift_point(&fvec(&["1", "t"])).is_err());
        // projection recovers the original point
        assert_eq!(cover.project_v(&lifted), fvec(&["1", "t^2"]));
    }

    #[test]
    fn lifted_points_singular_for_finite_forms() {
        // with zero co-defect the lift is the padded identity; check the
        // whole singular point set anyway
        let q = fixtures::hyperbolic_q(&RingSpec::finite(3, 1).unwrap(), 2).unwrap();
        let cover = dominant_cover(&q).unwrap();
        let pts = crate::polar::enumerate_points(&crate::polar::PolarSource::Q(&q)).unwrap();
        for p in &pts {
            let lifted = cover.lift_point(&p.coords).unwrap();
            assert!(cover.form.is_singular(&lifted).unwrap());
        }
    }

    #[test]
    fn basis_change_iso_examples() {
        let q = fixtures::funcfield_hyperbolic(&["1"]).unwrap();
        let cover = dominant_cover(&q).unwrap();
        assert_eq!(cover.s_dim(), 1);
        // same basis: identity block
        let (iso, _) = basis_change_iso(&cover, &cover.basis, 50).unwrap();
        for row in &iso.block {
            assert!(linalg::vec_is_zero(row));
        }
        // a different singular basis: (1, s) with s in the pre-image F_2(t^2)
        let e2 = vec![fvec(&["1", "t^2+t^4"]), fvec(&["0", "1"])];
        let (iso, target) = basis_change_iso(&cover, &e2, 200).unwrap();
        assert!(iso.block.iter().any(|r| !linalg::vec_is_zero(r)));
        // composition with the reverse map is the identity
        let (rev, _) = basis_change_iso(&target, &cover.basis, 50).unwrap();
        let mut sampler = Sampler::new(31);
        let ring = RingSpec::FuncField2;
        for _ in 0..50 {
            let v = sampler.vector(&ring, cover.v_dim() + cover.s_dim());
            let once = iso.apply(&v).unwrap();
            let back = rev.apply(&once).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn reconstruct_cover_roundtrip() {
        let q = fixtures::funcfield_hyperbolic(&["1"]).unwrap();
        let cover = dominant_cover(&q).unwrap();
        // treat the cover as q-tilde and its S-block as U
        let rec = reconstruct_cover(&cover.form, &sblock(&cover), None, 200).unwrap();
        let mut sampler = Sampler::new(41);
        assert!(forms_agree(&rec.quotient.form, &q, &mut sampler, 100).unwrap());
        // trivial U: the reconstruction is the improper cover
        let rec0 = reconstruct_cover(&q, &Vec::new(), None, 50).unwrap();
        assert_eq!(rec0.cover.s_dim(), 0);
        assert!(forms_agree(&rec0.cover.form, &q, &mut sampler, 50).unwrap());
    }

    #[test]
    fn chosen_complement_reconstruction_matches() {
        // The same subgroup presented by a circ-twisted generator is an
        // equally valid complement choice; the reconstructed cover is
        // identical.
        let q = degenerate_funcfield_form();
        let cover = dominant_cover(&q).unwrap();
        let pair = q.pair().clone();
        // span{t o (t+1)} = span{t (t+1)^2} = span{t} as circ-subspaces
        let twisted = ClosedSubgroup::generated(
            &pair,
            vec![pair.coset(&fel("t")).unwrap().circ(&fel("t+1")).unwrap()],
        )
        .unwrap();
        assert_eq!(twisted.canonical_data(), q.codefect().canonical_data());
        let rec_default = reconstruct_cover(&cover.form, &sblock(&cover), None, 100).unwrap();
        let rec_chosen =
            reconstruct_cover(&cover.form, &sblock(&cover), Some(&twisted), 100).unwrap();
        assert_eq!(
            rec_default.cover.form.codefect().canonical_data(),
            rec_chosen.cover.form.codefect().canonical_data()
        );
        let mut sampler = Sampler::new(59);
        assert!(forms_agree(
            &rec_default.cover.form,
            &rec_chosen.cover.form,
            &mut sampler,
            100
        )
        .unwrap());
    }

    #[test]
    fn quotient_collapse_to_symplectic() {
        // parabolic form on F_2^5: the radical of f is the last coordinate,
        // q is nonzero there, the quotient is trivial and its
        // sesquilinearization is the symplectic form on F_2^4.
        let f2 = RingSpec::finite(2, 1).unwrap();
        let q = fixtures::parabolic_q(&f2, 2).unwrap();
        let u = vec![linalg::unit_vector(&f2, 5, 4)];
        assert!(admits_quotient(&q, &u).unwrap());
        let spec = quotient_form(&q, &u).unwrap();
        assert!(spec.form.codefect().is_full());
        assert!(spec.form.is_trivial().unwrap());
        // the induced f is the alternating form of W(3, 2)
        let f_u = spec.form.sesqui_unchecked();
        assert!(f_u.is_alternating().unwrap());
        let sf = crate::polar::build_polar_space(&crate::polar::PolarSource::F(f_u)).unwrap();
        assert_eq!(sf.points.len(), 15);
        assert_eq!(sf.lines.len(), 15);
        // the projection maps the 15 parabolic points bijectively onto them
        let sq = crate::polar::build_polar_space(&crate::polar::PolarSource::Q(&q)).unwrap();
        let mut images = std::collections::BTreeSet::new();
        let mut image_index = Vec::new();
        for p in &sq.points {
            let proj = spec.project(&p.coords).unwrap();
            let pp = crate::polar::ProjectivePoint::new(&proj).unwrap();
            images.insert(pp.sort_key());
            image_index.push(
                sf.points
                    .iter()
                    .position(|x| x.coords == pp.coords)
                    .unwrap(),
            );
        }
        assert_eq!(images.len(), 15);
        // and the 15 parabolic lines onto the 15 symplectic lines
        let mut projected_lines = std::collections::BTreeSet::new();
        for line in &sq.lines {
            let mut idx: Vec<usize> = line.iter().map(|&i| image_index[i]).collect();
            idx.sort_unstable();
            idx.dedup();
            assert_eq!(idx.len(), line.len());
            projected_lines.insert(idx);
        }
        let sf_lines: std::collections::BTreeSet<Vec<usize>> = sf.lines.iter().cloned().collect();
        assert_eq!(projected_lines, sf_lines);
    }
}
