//! Reflexive sesquilinear forms, generalized pseudo-quadratic forms,
//! facilitating forms, difference maps, and proportional or
//! automorphism-twisted images.
//!
//! Vectors are coordinate tuples over a fixed ordered basis e_1..e_n of a
//! right vector space; all "i < j" sums use the stored order.

use crate::admissible::{AdmissiblePair, ClosedSubgroup, CosetElement};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::sampler::Sampler;
use crate::scalars::{AntiAutoSpec, RingElement, RingSpec};

/// Ambient space data: the ring and the number of basis vectors; basis
/// labels are the indices 1..=n in index order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorSpaceSpec {
    pub ring: RingSpec,
    pub dim: usize,
}

impl VectorSpaceSpec {
    pub fn new(ring: RingSpec, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        Ok(VectorSpaceSpec { ring, dim })
    }
}

/// A reflexive (sigma, eps)-sesquilinear form stored by its Gram matrix
/// G_ij = f(e_i, e_j).
#[derive(Clone, PartialEq, Debug)]
pub struct SesquilinearForm {
    pair: AdmissiblePair,
    gram: Matrix,
}

impl SesquilinearForm {
    /// Validates reflexivity G_ji = G_ij^sigma eps entry by entry.
    pub fn new(pair: AdmissiblePair, gram: Matrix) -> Result<Self> {
        let n = gram.len();
        for row in gram.iter() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for e in row {
                if e.ring() != *pair.ring() {
                    return Err(Error::RingMismatch(format!(
                        "gram entry in {}, pair over {}",
                        e.ring(),
                        pair.ring()
                    )));
                }
            }
        }
        if let Some((i, j)) = Self::reflexivity_defect(&pair, &gram)? {
            return Err(Error::NotReflexive(i, j));
        }
        Ok(SesquilinearForm { pair, gram })
    }

    /// First failing entry of the reflexivity identity, if any.
    pub fn reflexivity_defect(
        pair: &AdmissiblePair,
        gram: &Matrix,
    ) -> Result<Option<(usize, usize)>> {
        let n = gram.len();
        for i in 0..n {
            for j in 0..n {
                let rhs = pair.apply_sigma(&gram[i][j])?.mul(pair.epsilon())?;
                if gram[j][i] != rhs {
                    return Ok(Some((j, i)));
                }
            }
        }
        Ok(None)
    }

    pub fn pair(&self) -> &AdmissiblePair {
        &self.pair
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn space(&self) -> VectorSpaceSpec {
        VectorSpaceSpec {
            ring: self.pair.ring().clone(),
            dim: self.dim(),
        }
    }

    /// f(x, y) = sum_ij x_i^sigma G_ij y_j.
    pub fn eval(&self, x: &[RingElement], y: &[RingElement]) -> Result<RingElement> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len().max(y.len()),
            });
        }
        let mut acc = self.pair.ring().zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let xs = self.pair.apply_sigma(xi)?;
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || self.gram[i][j].is_zero() {
                    continue;
                }
                acc = acc.add(&xs.mul(&self.gram[i][j])?.mul(yj)?)?;
            }
        }
        Ok(acc)
    }

    pub fn is_reflexive(&self) -> bool {
        // established at construction
        true
    }

    /// Echelonized basis of Rad(f) = { y : f(x, y) = 0 for all x }.
    pub fn radical(&self) -> Result<Matrix> {
        linalg::right_kernel(&self.gram)
    }

    /// Diagonal criterion: f is trace-valued iff every G_ii lies in
    /// K_{sigma,-eps}. Cross terms x_i^sigma G_ij x_j + (x_i^sigma G_ij x_j)^sigma eps
    /// always lie there, and the diagonal contributions stay inside by
    /// circ-stability, so the criterion is necessary and sufficient.
    pub fn is_trace_valued(&self) -> Result<bool> {
        let neg = self.pair.negated()?;
        for i in 0..self.dim() {
            if !neg.in_lower(&self.gram[i][i])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// First diagonal index violating the trace-valued criterion.
    pub fn trace_valued_defect(&self) -> Result<Option<usize>> {
        let neg = self.pair.negated()?;
        for i in 0..self.dim() {
            if !neg.in_lower(&self.gram[i][i])? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// f(x, x) = 0 for every vector. Structural test: zero diagonal plus the
    /// identity G_ji = -G_ij, which reflexivity reduces to a condition on
    /// the pair.
    pub fn is_alternating(&self) -> Result<bool> {
        if !self.pair.sigma().is_identity_on(self.pair.ring()) {
            return Ok(false);
        }
        let n = self.dim();
        for i in 0..n {
            if !self.gram[i][i].is_zero() {
                return Ok(false);
            }
            for j in 0..n {
                if self.gram[j][i] != self.gram[i][j].neg() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn is_trivial(&self) -> bool {
        self.gram.iter().all(|row| row.iter().all(|e| e.is_zero()))
    }

    pub fn scale(&self, kappa: &RingElement) -> Result<SesquilinearForm> {
        let pair = self.pair.scale(kappa)?;
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|e| kappa.mul(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Matrix>>()?;
        SesquilinearForm::new(pair, gram)
    }
}

/// Transition data between two ordered bases of the same space:
/// source_k = sum_i target_i alpha_ik.
#[derive(Clone, Debug)]
pub struct BasisChange {
    pub source: Matrix,
    pub target: Matrix,
    /// `alpha[i][k]` with source_k = sum_i target_i `alpha[i][k]`.
    pub alpha: Matrix,
}

pub fn basis_change(source: &Matrix, target: &Matrix) -> Result<BasisChange> {
    let n = source.len();
    if target.len() != n || n == 0 {
        return Err(Error::NotABasis);
    }
    let inv = linalg::invert(&transpose_cols(target))?.ok_or(Error::NotABasis)?;
    // alpha column k = target-coordinates of source_k
    let mut alpha = vec![vec![source[0][0].ring().zero(); n]; n];
    for (k, s) in source.iter().enumerate() {
        let coords = linalg::mat_apply(&inv, s)?;
        for i in 0..n {
            alpha[i][k] = coords[i].clone();
        }
    }
    Ok(BasisChange {
        source: source.clone(),
        target: target.clone(),
        alpha,
    })
}

/// Vectors as columns of a coordinate matrix.
fn transpose_cols(vectors: &Matrix) -> Matrix {
    let rows = vectors.first().map(|v| v.len()).unwrap_or(0);
    (0..rows)
        .map(|r| vectors.iter().map(|v| v[r].clone()).collect())
        .collect()
}

/// Coordinates of x in the given ordered basis (vectors listed by rows).
pub fn coordinates_in(basis: &Matrix, x: &[RingElement]) -> Result<Vector> {
    linalg::solve_right(&basis.to_vec(), x)?.ok_or(Error::NotABasis)
}

/// A generalized (sigma, eps)-quadratic form q : V -> K-bar / R-bar, stored
/// by the Gram matrix of its sesquilinearization f, the basis values
/// g_i-bar with q(e_i) = g_i-bar + R-bar, and the co-defect R-bar.
///
/// Evaluation uses the facilitating formula
/// q(x) = sum_{i<j} (x_i^sigma G_ij x_j)-bar + sum_i g_i-bar o x_i, reduced
/// mod R-bar, which represents the form exactly in any basis.
#[derive(Clone, PartialEq, Debug)]
pub struct GenPseudoQuadraticForm {
    f: SesquilinearForm,
    values: Vec<CosetElement>,
    codefect: ClosedSubgroup,
}

impl GenPseudoQuadraticForm {
    /// Validates reflexivity, trace-valuedness, co-defect generators, and
    /// for a non-full co-defect the diagonal identity
    /// G_ii = g_i + g_i^sigma eps which pins the stored Gram matrix as the
    /// sesquilinearization of the stored values.
    pub fn new(
        pair: AdmissiblePair,
        gram: Matrix,
        values: Vec<CosetElement>,
        codefect: ClosedSubgroup,
    ) -> Result<Self> {
        let f = SesquilinearForm::new(pair.clone(), gram)?;
        if values.len() != f.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                got: values.len(),
            });
        }
        for v in &values {
            if v.pair() != &pair {
                return Err(Error::PairMismatch);
            }
        }
        if codefect.pair() != &pair {
            return Err(Error::PairMismatch);
        }
        if let Some(i) = f.trace_valued_defect()? {
            return Err(Error::NotTraceValued(i));
        }
        if !codefect.is_full() {
            for (i, v) in values.iter().enumerate() {
                let rep = v.rep();
                let derived = rep.add(&pair.apply_sigma(rep)?.mul(pair.epsilon())?)?;
                if f.gram()[i][i] != derived {
                    return Err(Error::GramValueMismatch(i));
                }
            }
        }
        Ok(GenPseudoQuadraticForm {
            f,
            values,
            codefect,
        })
    }

    pub fn pair(&self) -> &AdmissiblePair {
        self.f.pair()
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn space(&self) -> VectorSpaceSpec {
        self.f.space()
    }

    pub fn gram(&self) -> &Matrix {
        self.f.gram()
    }

    pub fn values(&self) -> &[CosetElement] {
        &self.values
    }

    pub fn codefect(&self) -> &ClosedSubgroup {
        &self.codefect
    }

    /// q(x), reduced to the canonical representative mod the co-defect.
    pub fn eval(&self, x: &[RingElement]) -> Result<CosetElement> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let pair = self.pair();
        let mut cross = pair.ring().zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            let xs = pair.apply_sigma(&x[i])?;
            for j in (i + 1)..n {
                if x[j].is_zero() || self.f.gram()[i][j].is_zero() {
                    continue;
                }
                cross = cross.add(&xs.mul(&self.f.gram()[i][j])?.mul(&x[j])?)?;
            }
        }
        let mut acc = pair.coset(&cross)?;
        for (g, xi) in self.values.iter().zip(x) {
            if !g.is_zero() && !xi.is_zero() {
                acc = acc.add(&g.circ(xi)?)?;
            }
        }
        let out = self.codefect.reduce(&acc)?;
        #[cfg(debug_assertions)]
        if out.is_zero() && !self.codefect.is_full() {
            debug_assert!(
                self.f.eval(x, x)?.is_zero(),
                "singular vector with nonzero f(x, x)"
            );
        }
        Ok(out)
    }

    pub fn is_singular(&self, x: &[RingElement]) -> Result<bool> {
        Ok(self.eval(x)?.is_zero())
    }

    /// Unique sesquilinearization for a non-full co-defect; the defining
    /// identity is re-verified on a fixed-seed sample before returning.
    pub fn sesquilinearization(&self) -> Result<&SesquilinearForm> {
        if self.codefect.is_full() {
            return Err(Error::FullCodefect);
        }
        let mut sampler = Sampler::new(0x5e5c);
        let ring = self.pair().ring().clone();
        for _ in 0..16 {
            let x = sampler.vector(&ring, self.dim());
            let y = sampler.vector(&ring, self.dim());
            self.check_q2(&x, &y)?;
        }
        Ok(&self.f)
    }

    /// The stored sesquilinearization without the sampled re-check; used
    /// internally where validity is known by construction.
    pub fn sesqui_unchecked(&self) -> &SesquilinearForm {
        &self.f
    }

    /// (Q'2) at one pair of vectors: q(x+y) - q(x) - q(y) = f(x,y) mod R-bar.
    fn check_q2(&self, x: &[RingElement], y: &[RingElement]) -> Result<()> {
        let sum = linalg::vec_add(x, y)?;
        let lhs = self.eval(&sum)?.sub(&self.eval(x)?)?.sub(&self.eval(y)?)?;
        let rhs = self.pair().coset(&self.f.eval(x, y)?)?;
        if self.codefect.reduce(&lhs)? != self.codefect.reduce(&rhs)? {
            return Err(Error::SesquiCheckFailed(format!(
                "additivity defect at x = [{}], y = [{}]",
                join(x),
                join(y)
            )));
        }
        Ok(())
    }

    /// (Q'1) at one vector/scalar: q(x lambda) = q(x) o lambda.
    pub fn check_q1(&self, x: &[RingElement], lambda: &RingElement) -> Result<bool> {
        let scaled = linalg::vec_scale_right(x, lambda)?;
        let lhs = self.eval(&scaled)?;
        let rhs = self.codefect.reduce(&self.eval(x)?.circ(lambda)?)?;
        Ok(lhs == rhs)
    }

    /// Trivial iff the co-defect is everything, or f vanishes and every
    /// basis value lies in the co-defect.
    pub fn is_trivial(&self) -> Result<bool> {
        if self.codefect.is_full() {
            return Ok(true);
        }
        if !self.f.is_trivial() {
            return Ok(false);
        }
        for v in &self.values {
            if !self.codefect.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// g_E(x, y) for an ordered singular basis E: the strictly
    /// upper-triangular sesquilinear expansion in E-coordinates.
    pub fn facilitating_eval(
        &self,
        basis: &Matrix,
        x: &[RingElement],
        y: &[RingElement],
    ) -> Result<RingElement> {
        self.check_singular_basis(basis)?;
        let lx = coordinates_in(basis, x)?;
        let ly = coordinates_in(basis, y)?;
        let pair = self.pair();
        let mut acc = pair.ring().zero();
        for i in 0..basis.len() {
            if lx[i].is_zero() {
                continue;
            }
            let xs = pair.apply_sigma(&lx[i])?;
            for j in (i + 1)..basis.len() {
                if ly[j].is_zero() {
                    continue;
                }
                let fij = self.f.eval(&basis[i], &basis[j])?;
                if fij.is_zero() {
                    continue;
                }
                acc = acc.add(&xs.mul(&fij)?.mul(&ly[j])?)?;
            }
        }
        Ok(acc)
    }

    /// gamma_E(x) = class of g_E(x, x) in K-bar.
    pub fn gamma(&self, basis: &Matrix, x: &[RingElement]) -> Result<CosetElement> {
        let g = self.facilitating_eval(basis, x, x)?;
        self.pair().coset(&g)
    }

    fn check_singular_basis(&self, basis: &Matrix) -> Result<()> {
        if basis.len() != self.dim() {
            return Err(Error::NotABasis);
        }
        for (i, b) in basis.iter().enumerate() {
            if !self.is_singular(b)? {
                return Err(Error::BasisNotSingular(i));
            }
        }
        Ok(())
    }

    /// delta_{E,E'}(x) = gamma_E(x) - gamma_{E'}(x), computed directly and
    /// through the closed form -sum_i gamma_{E'}(e_i) o lambda_i (lambda the
    /// E-coordinates of x); the two must agree and the value must lie in
    /// the co-defect.
    pub fn difference_map(
        &self,
        basis_e: &Matrix,
        basis_e2: &Matrix,
        x: &[RingElement],
    ) -> Result<CosetElement> {
        let direct = self.gamma(basis_e, x)?.sub(&self.gamma(basis_e2, x)?)?;
        let lambda = coordinates_in(basis_e, x)?;
        let mut closed = self.pair().zero_coset();
        for (e_i, l_i) in basis_e.iter().zip(&lambda) {
            if l_i.is_zero() {
                continue;
            }
            let g = self.gamma(basis_e2, e_i)?;
            closed = closed.sub(&g.circ(l_i)?)?;
        }
        if direct != closed {
            return Err(Error::VerificationFailed(format!(
                "difference map: direct {} vs closed form {}",
                direct, closed
            )));
        }
        if !self.codefect.contains(&direct)? {
            return Err(Error::VerificationFailed(
                "difference map value escapes the co-defect".into(),
            ));
        }
        Ok(direct)
    }

    /// kappa q over the scaled pair: gram, values and co-defect all move by
    /// left multiplication by kappa.
    pub fn scale(&self, kappa: &RingElement) -> Result<GenPseudoQuadraticForm> {
        if kappa.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.codefect.is_full() {
            return Err(Error::FullCodefect);
        }
        let new_pair = self.pair().scale(kappa)?;
        let gram = self
            .f
            .gram()
            .iter()
            .map(|row| row.iter().map(|e| kappa.mul(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Matrix>>()?;
        let values = self
            .values
            .iter()
            .map(|v| v.scale_into(kappa, &new_pair))
            .collect::<Result<Vec<_>>>()?;
        let codefect = self.codefect.scaled(kappa, &new_pair)?;
        GenPseudoQuadraticForm::new(new_pair, gram, values, codefect)
    }

    /// Image under a coordinate-wise field automorphism rho = frob^k
    /// (finite fields only); rho must fix epsilon.
    pub fn apply_automorphism(&self, k: u32) -> Result<GenPseudoQuadraticForm> {
        let pair = self.pair();
        if !pair.ring().is_finite() {
            return Err(Error::Unsupported(
                "automorphism twisting is implemented for finite fields only".into(),
            ));
        }
        let rho = AntiAutoSpec::FrobeniusPower(k);
        if rho.apply(pair.epsilon())? != *pair.epsilon() {
            return Err(Error::AutomorphismUnstable(format!(
                "rho does not fix epsilon = {}",
                pair.epsilon()
            )));
        }
        let gram = self
            .f
            .gram()
            .iter()
            .map(|row| row.iter().map(|e| rho.apply(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Matrix>>()?;
        let values = self
            .values
            .iter()
            .map(|v| pair.coset(&rho.apply(v.rep())?))
            .collect::<Result<Vec<_>>>()?;
        let codefect = self.codefect.mapped(&rho)?;
        GenPseudoQuadraticForm::new(pair.clone(), gram, values, codefect)
    }
}

fn join(v: &[RingElement]) -> String {
    v.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Structural + behavioral equality of two forms on the same space: equal
/// pairs, identical canonical co-defect data, and equal evaluation on a
/// seeded sample.
pub fn forms_agree(
    a: &GenPseudoQuadraticForm,
    b: &GenPseudoQuadraticForm,
    sampler: &mut Sampler,
    samples: usize,
) -> Result<bool> {
    if a.pair() != b.pair() || a.dim() != b.dim() {
        return Ok(false);
    }
    if a.codefect().canonical_data() != b.codefect().canonical_data() {
        return Ok(false);
    }
    let ring = a.pair().ring().clone();
    for _ in 0..samples {
        let x = sampler.vector(&ring, a.dim());
        if a.eval(&x)? != b.eval(&x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalars::parse_element;

    fn fring() -> RingSpec {
        RingSpec::FuncField2
    }

    fn fel(s: &str) -> RingElement {
        parse_element(&fring(), s).unwrap()
    }

    fn qel(s: &str) -> RingElement {
        parse_element(&RingSpec::Quaternions, s).unwrap()
    }

    fn fvec(parts: &[&str]) -> Vec<RingElement> {
        parts.iter().map(|s| fel(s)).collect()
    }

    fn qvec(parts: &[&str]) -> Vec<RingElement> {
        parts.iter().map(|s| qel(s)).collect()
    }

    #[test]
    fn eval_f_examples() {
        let q = fixtures::funcfield_hyperbolic(&[]).unwrap();
        let f = q.sesqui_unchecked();
        assert!(f
            .eval(&fvec(&["1", "0"]), &fvec(&["0", "1"]))
            .unwrap()
            .is_one());
        // alternating diagonal in characteristic 2
        let x = fvec(&["t+1", "t^2"]);
        assert!(f.eval(&x, &x).unwrap().is_zero());
        // quaternion sesquilinearization: f((1,0,0,0), (0,i,0,0)) = i
        let qq = fixtures::quaternion_exceptional().unwrap();
        let fq = qq.sesqui_unchecked();
        let v = fq
            .eval(&qvec(&["1", "0", "0", "0"]), &qvec(&["0", "i", "0", "0"]))
            .unwrap();
        assert_eq!(v, qel("i"));
    }

    #[test]
    fn reflexivity_examples() {
        let f5 = RingSpec::finite(5, 1).unwrap();
        let pair = fixtures::quadratic_pair(&f5).unwrap();
        let sym = vec![
            vec![f5.from_int(1), f5.from_int(2)],
            vec![f5.from_int(2), f5.from_int(3)],
        ];
        assert!(SesquilinearForm::new(pair.clone(), sym).is_ok());
        let bad = vec![vec![f5.zero(), f5.one()], vec![f5.zero(), f5.zero()]];
        assert!(matches!(
            SesquilinearForm::new(pair, bad),
            Err(Error::NotReflexive(_, _))
        ));
        // alternating over F_2 with (id, -1) = (id, 1)
        let f2 = RingSpec::finite(2, 1).unwrap();
        let spair = fixtures::symplectic_pair(&f2).unwrap();
        let alt = vec![vec![f2.zero(), f2.one()], vec![f2.one(), f2.zero()]];
        assert!(SesquilinearForm::new(spair, alt).is_ok());
    }

    #[test]
    fn radical_examples() {
        let q = fixtures::funcfield_hyperbolic(&[]).unwrap();
        assert!(q.sesqui_unchecked().radical().unwrap().is_empty());
        let f3 = RingSpec::finite(3, 1).unwrap();
        let pair = fixtures::quadratic_pair(&f3).unwrap();
        let mut gram = vec![vec![f3.zero(); 3]; 3];
        gram[0][1] = f3.one();
        gram[1][0] = f3.one();
        let f = SesquilinearForm::new(pair, gram).unwrap();
        let rad = f.radical().unwrap();
        assert_eq!(rad.len(), 1);
        assert_eq!(rad[0], vec![f3.zero(), f3.zero(), f3.one()]);
    }

    #[test]
    fn trace_valued_examples() {
        let f2 = RingSpec::finite(2, 1).unwrap();
        let spair = fixtures::symplectic_pair(&f2).unwrap();
        let alt = SesquilinearForm::new(
            spair.clone(),
            vec![vec![f2.zero(), f2.one()], vec![f2.one(), f2.zero()]],
        )
        .unwrap();
        assert!(alt.is_trace_valued().unwrap());
        // diag(1, 1) over F_2 with (id, 1): K_{sigma,-eps} = {t+t} = {0}
        let diag = SesquilinearForm::new(
            spair,
            vec![vec![f2.one(), f2.zero()], vec![f2.zero(), f2.one()]],
        )
        .unwrap();
        assert!(!diag.is_trace_valued().unwrap());
        // characteristic not 2 with (id, 1): always trace-valued
        let f5 = RingSpec::finite(5, 1).unwrap();
        let pair5 = fixtures::quadratic_pair(&f5).unwrap();
        let any = SesquilinearForm::new(
            pair5,
            vec![
                vec![f5.from_int(3), f5.from_int(2)],
                vec![f5.from_int(2), f5.from_int(4)],
            ],
        )
        .unwrap();
        assert!(any.is_trace_valued().unwrap());
    }

    #[test]
    fn eval_q_examples() {
        let qq = fixtures::quaternion_exceptional().unwrap();
        assert!(qq.eval(&qvec(&["1", "0", "0", "0"])).unwrap().is_zero());
        // sigma(i) * i = -i * i = 1, real, hence the zero coset
        assert!(qq.eval(&qvec(&["i", "i", "0", "0"])).unwrap().is_zero());
        assert!(!qq.eval(&qvec(&["1", "i", "0", "0"])).unwrap().is_zero());

        let q = fixtures::funcfield_hyperbolic(&["1"]).unwrap();
        assert!(!q.is_singular(&fvec(&["1", "t"])).unwrap());
        assert!(q.is_singular(&fvec(&["1", "t^2"])).unwrap());
        assert!(q.is_singular(&fvec(&["0", "0"])).unwrap());
    }

    #[test]
    fn sesquilinearization_examples() {
        let q = fixtures::funcfield_hyperbolic(&[]).unwrap();
        let f = q.sesquilinearization().unwrap();
        assert!(f.gram()[0][1].is_one());
        assert!(f.gram()[1][0].is_one());
        // full co-defect: every trace-valued form qualifies, so not unique
        let ring = fring();
        let pair = fixtures::quadratic_pair(&ring).unwrap();
        let full = GenPseudoQuadraticForm::new(
            pair.clone(),
            vec![vec![ring.zero(), ring.one()], vec![ring.one(), ring.zero()]],
            vec![pair.zero_coset(), pair.zero_coset()],
            crate::admissible::ClosedSubgroup::full(&pair),
        )
        .unwrap();
        assert!(matches!(
            full.sesquilinearization(),
            Err(Error::FullCodefect)
        ));
    }

    #[test]
    fn triviality_examples() {
        let ring = fring();
        let pair = fixtures::quadratic_pair(&ring).unwrap();
        let full = GenPseudoQuadraticForm::new(
            pair.clone(),
            vec![vec![ring.zero(); 2]; 2],
            vec![pair.zero_coset(); 2],
            crate::admissible::ClosedSubgroup::full(&pair),
        )
        .unwrap();
        assert!(full.is_trivial().unwrap());
        let zero = GenPseudoQuadraticForm::new(
            pair.clone(),
            vec![vec![ring.zero(); 2]; 2],
            vec![pair.zero_coset(); 2],
            crate::admissible::ClosedSubgroup::zero(&pair),
        )
        .unwrap();
        assert!(zero.is_trivial().unwrap());
        assert!(!fixtures::funcfield_hyperbolic(&[])
            .unwrap()
            .is_trivial()
            .unwrap());
    }

    #[test]
    fn gram_value_consistency_enforced() {
        // x_1 x_2 with a value claiming q(e_1) = t-bar but zero diagonal:
        // the derived diagonal g + g = 0 matches, so values in the co-defect
        // are fine; a diagonal entry disagreeing with the value is not.
        let f3 = RingSpec::finite(3, 1).unwrap();
        let pair = fixtures::quadratic_pair(&f3).unwrap();
        let gram = vec![vec![f3.from_int(1), f3.zero()], vec![f3.zero(), f3.zero()]];
        let values = vec![pair.zero_coset(), pair.zero_coset()];
        assert!(matches!(
            GenPseudoQuadraticForm::new(
                pair.clone(),
                gram,
                values,
                crate::admissible::ClosedSubgroup::zero(&pair)
            ),
            Err(Error::GramValueMismatch(0))
        ));
    }

    #[test]
    fn facilitating_examples() {
        let f2 = RingSpec::finite(2, 1).unwrap();
        // symplectic over F_2 as a generalized form with full co-defect
        let pair = fixtures::symplectic_pair(&f2).unwrap();
        let mut gram = vec![vec![f2.zero(); 4]; 4];
        gram[0][1] = f2.one();
        gram[1][0] = f2.one();
        gram[2][3] = f2.one();
        gram[3][2] = f2.one();
        let q = GenPseudoQuadraticForm::new(
            pair.clone(),
            gram,
            vec![pair.zero_coset(); 4],
            crate::admissible::ClosedSubgroup::full(&pair),
        )
        .unwrap();
        let basis: Matrix = (0..4).map(|i| linalg::unit_vector(&f2, 4, i)).collect();
        // single basis vector: no i < j contributions
        let e1 = linalg::unit_vector(&f2, 4, 0);
        assert!(q.facilitating_eval(&basis, &e1, &e1).unwrap().is_zero());
        let x = vec![f2.one(), f2.one(), f2.zero(), f2.zero()];
        assert!(q.facilitating_eval(&basis, &x, &x).unwrap().is_one());
        // g(x,y) + g(y,x)^sigma eps = f(x,y) on a few vectors
        let mut sampler = Sampler::new(3);
        for _ in 0..50 {
            let x = sampler.vector(&f2, 4);
            let y = sampler.vector(&f2, 4);
            let g1 = q.facilitating_eval(&basis, &x, &y).unwrap();
            let g2 = q.facilitating_eval(&basis, &y, &x).unwrap();
            let twisted = pair.apply_sigma(&g2).unwrap().mul(pair.epsilon()).unwrap();
            assert_eq!(
                g1.add(&twisted).unwrap(),
                q.sesqui_unchecked().eval(&x, &y).unwrap()
            );
        }
    }

    #[test]
    fn difference_map_examples() {
        let q = fixtures::funcfield_hyperbolic(&["1"]).unwrap();
        let ring = fring();
        let e: Matrix = (0..2).map(|i| linalg::unit_vector(&ring, 2, i)).collect();
        // second singular basis: (1, s) with s in the co-defect pre-image
        let e2 = vec![fvec(&["1", "t^2"]), fvec(&["0", "1"])];
        let x = fvec(&["t+1", "t^3"]);
        let same = q.difference_map(&e, &e, &x).unwrap();
        assert!(same.is_zero());
        let d12 = q.difference_map(&e, &e2, &x).unwrap();
        let d21 = q.difference_map(&e2, &e, &x).unwrap();
        assert_eq!(d12.neg().unwrap(), d21);
        assert!(q.codefect().contains(&d12).unwrap());
        // at a basis vector of E the closed form has a single term
        let ei = &e[0];
        let expect = q.gamma(&e2, ei).unwrap().neg().unwrap();
        assert_eq!(q.difference_map(&e, &e2, ei).unwrap(), expect);
    }

    #[test]
    fn scale_form_examples() {
        let f5 = RingSpec::finite(5, 1).unwrap();
        let q = fixtures::hyperbolic_q(&f5, 2).unwrap();
        let one = q.scale(&f5.one()).unwrap();
        assert_eq!(one, q);
        let two = f5.from_int(2);
        let scaled = q.scale(&two).unwrap();
        let mut sampler = Sampler::new(11);
        for _ in 0..200 {
            let x = sampler.vector(&f5, 4);
            assert_eq!(q.is_singular(&x).unwrap(), scaled.is_singular(&x).unwrap());
        }
        let back = scaled.scale(&two.inv().unwrap()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn automorphism_examples() {
        let q4 = fixtures::hermitian_q_f4().unwrap();
        let same = q4.apply_automorphism(0).unwrap();
        assert_eq!(same, q4);
        let twisted = q4.apply_automorphism(1).unwrap();
        // coordinate-wise frobenius maps singular vectors onto singular ones
        let ring = q4.pair().ring().clone();
        let frob = AntiAutoSpec::FrobeniusPower(1);
        let mut sampler = Sampler::new(5);
        for _ in 0..200 {
            let x = sampler.vector(&ring, 4);
            let fx: Vec<RingElement> = x.iter().map(|e| frob.apply(e).unwrap()).collect();
            assert_eq!(
                q4.is_singular(&x).unwrap(),
                twisted.is_singular(&fx).unwrap()
            );
        }
        // an automorphism moving epsilon is rejected
        let f4 = RingSpec::finite(2, 2).unwrap();
        let eps = parse_element(&f4, "w^1").unwrap();
        let pair =
            crate::admissible::validate_pair(&f4, AntiAutoSpec::FrobeniusPower(1), eps).unwrap();
        let mut gram = vec![vec![f4.zero(); 2]; 2];
        gram[0][1] = f4.one();
        gram[1][0] = parse_element(&f4, "w^1").unwrap();
        let qq = GenPseudoQuadraticForm::new(
            pair.clone(),
            gram,
            vec![pair.zero_coset(); 2],
            crate::admissible::ClosedSubgroup::zero(&pair),
        )
        .unwrap();
        assert!(matches!(
            qq.apply_automorphism(1),
            Err(Error::AutomorphismUnstable(_))
        ));
    }

    #[test]
    fn q1_q2_sampled_invariants() {
        let mut sampler = Sampler::new(99);
        let forms = vec![
            fixtures::funcfield_hyperbolic(&[]).unwrap(),
            fixtures::funcfield_hyperbolic(&["1"]).unwrap(),
            fixtures::hyperbolic_q(&RingSpec::finite(3, 1).unwrap(), 2).unwrap(),
            fixtures::hermitian_q_f4().unwrap(),
        ];
        for q in &forms {
            let ring = q.pair().ring().clone();
            for _ in 0..100 {
                let x = sampler.vector(&ring, q.dim());
                let lam = sampler.element(&ring);
                assert!(q.check_q1(&x, &lam).unwrap());
                let y = sampler.vector(&ring, q.dim());
                q.check_q2(&x, &y).unwrap();
            }
        }
    }

    #[test]
    fn basis_change_roundtrip() {
        let f5 = RingSpec::finite(5, 1).unwrap();
        let source: Matrix = vec![
            vec![f5.one(), f5.from_int(2)],
            vec![f5.from_int(3), f5.one()],
        ];
        let target: Matrix = (0..2).map(|i| linalg::unit_vector(&f5, 2, i)).collect();
        let bc = basis_change(&source, &target).unwrap();
        // source_k = sum_i target_i alpha_ik
        for k in 0..2 {
            let mut acc = linalg::zero_vector(&f5, 2);
            for i in 0..2 {
                acc = linalg::vec_add(
                    &acc,
                    &linalg::vec_scale_right(&target[i], &bc.alpha[i][k]).unwrap(),
                )
                .unwrap();
            }
            assert_eq!(acc, source[k]);
        }
    }
}
