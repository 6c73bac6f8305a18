//! Enumeration and analysis of the polar spaces S_f and S_q over finite
//! fields: singular points, totally singular lines, rank, radicals, and
//! subspace relations. Enumeration order is lexicographic over normalized
//! coordinates so outputs are byte-reproducible.
//!
//! Over F_2(t) and the quaternions the spaces are not enumerable; the module
//! exposes membership-only queries for those rings.

use crate::error::{Error, Result};
use crate::forms::{GenPseudoQuadraticForm, SesquilinearForm};
use crate::linalg::{self, Matrix, Vector};
use crate::scalars::{RingElement, RingSpec};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

/// Cap on the number of projective points enumerated.
pub const POINT_CAP: u128 = 10_000_000;

/// A projective point stored by its normalized coordinate vector: the first
/// nonzero coordinate equals 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjectivePoint {
    pub coords: Vector,
}

impl ProjectivePoint {
    /// Normalizes a nonzero vector by right multiplication with the inverse
    /// of its first nonzero coordinate.
    pub fn new(coords: &[RingElement]) -> Result<Self> {
        let first = coords
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidGeometry("the zero vector spans no point".into()))?;
        let inv = coords[first].inv()?;
        Ok(ProjectivePoint {
            coords: coords.iter().map(|c| c.mul(&inv)).collect::<Result<_>>()?,
        })
    }

    pub fn sort_key(&self) -> Vec<crate::scalars::ElementKey> {
        self.coords.iter().map(|c| c.sort_key()).collect()
    }
}

impl std::fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// What a polar space was enumerated from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceTag {
    FromQ,
    FromF,
}

/// Either form kind as an enumeration source.
pub enum PolarSource<'a> {
    Q(&'a GenPseudoQuadraticForm),
    F(&'a SesquilinearForm),
}

impl<'a> PolarSource<'a> {
    fn ring(&self) -> RingSpec {
        match self {
            PolarSource::Q(q) => q.pair().ring().clone(),
            PolarSource::F(f) => f.pair().ring().clone(),
        }
    }

    fn dim(&self) -> usize {
        match self {
            PolarSource::Q(q) => q.dim(),
            PolarSource::F(f) => f.dim(),
        }
    }

    fn tag(&self) -> SourceTag {
        match self {
            PolarSource::Q(_) => SourceTag::FromQ,
            PolarSource::F(_) => SourceTag::FromF,
        }
    }

    /// Point-level singularity: q(x) = 0 mod the co-defect, or f(x, x) = 0.
    pub fn vanishes(&self, x: &[RingElement]) -> Result<bool> {
        match self {
            PolarSource::Q(q) => q.is_singular(x),
            PolarSource::F(f) => Ok(f.eval(x, x)?.is_zero()),
        }
    }

    fn orthogonal(&self, x: &[RingElement], y: &[RingElement]) -> Result<bool> {
        let f = match self {
            PolarSource::Q(q) => q.sesqui_unchecked(),
            PolarSource::F(f) => f,
        };
        Ok(f.eval(x, y)?.is_zero())
    }

    fn trivial_q(&self) -> bool {
        matches!(self, PolarSource::Q(q) if q.codefect().is_full())
    }
}

/// An enumerated polar space with its structural invariants verified.
#[derive(Clone, Debug)]
pub struct PolarSpace {
    pub ring: RingSpec,
    pub dim: usize,
    pub points: Vec<ProjectivePoint>,
    /// Sorted point-index sets, each a full projective line.
    pub lines: Vec<Vec<usize>>,
    pub rank: usize,
    pub radical: Matrix,
    pub source: SourceTag,
}

/// All projective points of PG(dim - 1, q) in lexicographic order of the
/// normalized coordinates.
pub fn projective_points(ring: &RingSpec, dim: usize) -> Result<Vec<Vector>> {
    let q = ring.size()?;
    let total = (q.pow(dim as u32) - 1) / (q - 1);
    if total > POINT_CAP {
        return Err(Error::SizeCapExceeded(total));
    }
    let elements = ring.elements()?;
    let mut out = Vec::with_capacity(total as usize);
    for lead in 0..dim {
        // coords: zeros, then 1 at `lead`, then arbitrary tail
        let tail = dim - lead - 1;
        let mut counters = vec![0usize; tail];
        loop {
            let mut v = linalg::zero_vector(ring, dim);
            v[lead] = ring.one();
            for (k, &c) in counters.iter().enumerate() {
                v[lead + 1 + k] = elements[c].clone();
            }
            out.push(v);
            // advance, most significant first for lexicographic order
            let mut pos = tail;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                counters[pos] += 1;
                if counters[pos] < elements.len() {
                    break;
                }
                counters[pos] = 0;
                if pos == 0 {
                    break;
                }
            }
            if counters.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    Ok(out)
}

/// Worker count for enumeration, taken from the PQFORMS_WORKERS
/// environment variable; defaults to 1, capped at 64.
pub fn worker_count() -> usize {
    std::env::var("PQFORMS_WORKERS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or(1)
        .min(64)
}

/// All singular (or isotropic) points of the source, sorted. The scan is a
/// pure map over projective points; with PQFORMS_WORKERS > 1 it is
/// partitioned across threads and the final sort keeps the result
/// deterministic.
pub fn enumerate_points(source: &PolarSource) -> Result<Vec<ProjectivePoint>> {
    enumerate_points_with(source, worker_count())
}

pub fn enumerate_points_with(source: &PolarSource, workers: usize) -> Result<Vec<ProjectivePoint>> {
    let ring = source.ring();
    if !ring.is_finite() {
        return Err(Error::InfiniteRing);
    }
    let candidates = projective_points(&ring, source.dim())?;
    let mut pts: Vec<ProjectivePoint> = if workers <= 1 || candidates.len() < 256 {
        let mut out = Vec::new();
        for v in candidates {
            if source.vanishes(&v)? {
                out.push(ProjectivePoint { coords: v });
            }
        }
        out
    } else {
        let chunk = candidates.len().div_ceil(workers);
        let chunks: Vec<&[Vector]> = candidates.chunks(chunk).collect();
        let results: Vec<Result<Vec<ProjectivePoint>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|part| {
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        for v in part {
                            if source.vanishes(v)? {
                                out.push(ProjectivePoint { coords: v.clone() });
                            }
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("enumeration worker panicked"))
                .collect()
        });
        let mut out = Vec::new();
        for r in results {
            out.extend(r?);
        }
        out
    };
    pts.sort_by_key(|p| p.sort_key());
    Ok(pts)
}

/// All totally singular lines among the given points, as sorted index sets.
///
/// A line spanned by singular points x, y is totally singular exactly when
/// f(x, y) = 0; for a trivial form (full co-defect) every line of PG lies
/// in the space and the orthogonality condition is dropped.
pub fn enumerate_lines(
    source: &PolarSource,
    points: &[ProjectivePoint],
) -> Result<Vec<Vec<usize>>> {
    let ring = source.ring();
    if !ring.is_finite() {
        return Err(Error::InfiniteRing);
    }
    let index: HashMap<&Vector, usize> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (&p.coords, i))
        .collect();
    let elements = ring.elements()?;
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    let trivial = source.trivial_q();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if !trivial && !source.orthogonal(&points[i].coords, &points[j].coords)? {
                continue;
            }
            let mut line = Vec::with_capacity(elements.len() + 1);
            line.push(j);
            let mut inside = true;
            for lam in &elements {
                let v = linalg::vec_add(
                    &points[i].coords,
                    &linalg::vec_scale_right(&points[j].coords, lam)?,
                )?;
                let p = ProjectivePoint::new(&v)?;
                match index.get(&p.coords) {
                    Some(&k) => line.push(k),
                    None => {
                        inside = false;
                        break;
                    }
                }
            }
            if !inside {
                return Err(Error::VerificationFailed(format!(
                    "line through {} and {} leaves the point set",
                    points[i], points[j]
                )));
            }
            line.sort_unstable();
            lines.insert(line);
        }
    }
    Ok(lines.into_iter().collect())
}

/// Maximum number of pairwise-orthogonal, linearly independent singular
/// points, i.e. the vector dimension of a maximal totally singular
/// subspace, by exhaustive flag extension.
pub fn polar_rank(source: &PolarSource, points: &[ProjectivePoint]) -> Result<usize> {
    let m = points.len();
    if m == 0 {
        return Ok(0);
    }
    // orthogonality adjacency, bit-packed
    let words = m.div_ceil(64);
    let mut orth = vec![vec![0u64; words]; m];
    for i in 0..m {
        for j in 0..m {
            if i == j || source.orthogonal(&points[i].coords, &points[j].coords)? {
                orth[i][j / 64] |= 1u64 << (j % 64);
            }
        }
    }
    let mut best = 0usize;
    let mut basis: Matrix = Vec::new();
    let all: Vec<u64> = (0..words)
        .map(|w| {
            if (w + 1) * 64 <= m {
                u64::MAX
            } else {
                (1u64 << (m % 64)) - 1
            }
        })
        .collect();
    fn extend(
        points: &[ProjectivePoint],
        orth: &[Vec<u64>],
        allowed: &[u64],
        from: usize,
        basis: &mut Matrix,
        best: &mut usize,
    ) -> Result<()> {
        *best = (*best).max(basis.len());
        let m = points.len();
        for c in from..m {
            if allowed[c / 64] & (1u64 << (c % 64)) == 0 {
                continue;
            }
            // prune: cannot beat the best even taking everything remaining
            if basis.len() + (m - c) <= *best {
                break;
            }
            // independence from the current flag
            let mut trial = basis.clone();
            trial.push(points[c].coords.clone());
            if linalg::rank(&trial)? != trial.len() {
                continue;
            }
            let next_allowed: Vec<u64> = allowed.iter().zip(&orth[c]).map(|(a, o)| a & o).collect();
            *basis = trial;
            extend(points, orth, &next_allowed, c + 1, basis, best)?;
            basis.pop();
        }
        Ok(())
    }
    extend(points, &orth, &all, 0, &mut basis, &mut best)?;
    Ok(best)
}

/// Builds the polar space of a source with all structural checks: every
/// line has q + 1 points inside the point set, and radical points are
/// orthogonal to every point.
pub fn build_polar_space(source: &PolarSource) -> Result<PolarSpace> {
    let ring = source.ring();
    let points = enumerate_points(source)?;
    let lines = enumerate_lines(source, &points)?;
    let q = ring.size()?;
    for line in &lines {
        if line.len() as u128 != q + 1 {
            return Err(Error::VerificationFailed(format!(
                "line with {} points, expected {}",
                line.len(),
                q + 1
            )));
        }
    }
    let rank = polar_rank(source, &points)?;
    let radical = match source {
        PolarSource::F(f) => f.radical()?,
        PolarSource::Q(q) => radical_of_q(q)?.0,
    };
    // radical points lie in the space and see every point
    for r in &radical {
        let rp = ProjectivePoint::new(r)?;
        if points.iter().all(|p| p.coords != rp.coords) {
            return Err(Error::VerificationFailed(
                "radical vector is not a point of the space".into(),
            ));
        }
        for p in &points {
            if !source.orthogonal(r, &p.coords)? {
                return Err(Error::VerificationFailed(
                    "radical point not collinear with the whole space".into(),
                ));
            }
        }
    }
    Ok(PolarSpace {
        ring,
        dim: source.dim(),
        points,
        lines,
        rank,
        radical,
        source: source.tag(),
    })
}

/// Rad(q): the q-singular vectors of Rad(f), echelonized, together with the
/// dimension of the image of q restricted to Rad(f). The restriction is
/// verified to be additive.
pub fn radical_of_q(q: &GenPseudoQuadraticForm) -> Result<(Matrix, usize)> {
    let ring = q.pair().ring().clone();
    if !ring.is_finite() {
        return Err(Error::InfiniteRing);
    }
    let rad_f = q.sesqui_unchecked().radical()?;
    let d = rad_f.len();
    if d == 0 {
        return Ok((Vec::new(), 0));
    }
    let elements = ring.elements()?;
    let mut vectors = Vec::new();
    let mut counters = vec![0usize; d];
    loop {
        let mut v = linalg::zero_vector(&ring, q.dim());
        for (k, &c) in counters.iter().enumerate() {
            v = linalg::vec_add(&v, &linalg::vec_scale_right(&rad_f[k], &elements[c])?)?;
        }
        vectors.push(v);
        let mut pos = 0;
        loop {
            if pos == d {
                break;
            }
            counters[pos] += 1;
            if counters[pos] < elements.len() {
                break;
            }
            counters[pos] = 0;
            pos += 1;
        }
        if counters.iter().all(|&c| c == 0) {
            break;
        }
    }
    // additivity of q on Rad(f)
    for u in vectors.iter().take(24) {
        for v in vectors.iter().take(24) {
            let lhs = q.eval(&linalg::vec_add(u, v)?)?;
            let rhs = q.eval(u)?.add(&q.eval(v)?)?;
            if lhs != q.codefect().reduce(&rhs)? {
                return Err(Error::VerificationFailed(
                    "q is not additive on the radical of f".into(),
                ));
            }
        }
    }
    let singular: Matrix = vectors
        .into_iter()
        .filter(|v| !linalg::vec_is_zero(v))
        .filter(|v| q.is_singular(v).unwrap_or(false))
        .collect();
    let rad_q = linalg::rref(&singular)?.rows;
    let image_dim = d - rad_q.len();
    Ok((rad_q, image_dim))
}

/// Subspace test: inner points and lines are contained in the outer space,
/// and every outer line meets the inner point set in at most one point or
/// lies entirely inside it.
pub fn is_subspace(inner: &PolarSpace, outer: &PolarSpace) -> Result<bool> {
    if inner.ring != outer.ring || inner.dim != outer.dim {
        return Err(Error::AmbientMismatch);
    }
    let outer_idx: HashMap<&Vector, usize> = outer
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| (&p.coords, i))
        .collect();
    let mut inner_in_outer = Vec::with_capacity(inner.points.len());
    for p in &inner.points {
        match outer_idx.get(&p.coords) {
            Some(&i) => inner_in_outer.push(i),
            None => return Ok(false),
        }
    }
    let inner_set: BTreeSet<usize> = inner_in_outer.iter().copied().collect();
    let outer_lines: BTreeSet<&Vec<usize>> = outer.lines.iter().collect();
    for line in &inner.lines {
        let mapped: Vec<usize> = {
            let mut v: Vec<usize> = line.iter().map(|&i| inner_in_outer[i]).collect();
            v.sort_unstable();
            v
        };
        if !outer_lines.contains(&mapped) {
            return Ok(false);
        }
    }
    for line in &outer.lines {
        let hits = line.iter().filter(|i| inner_set.contains(i)).count();
        if hits > 1 && hits != line.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpanDichotomy {
    Spans,
    TotallySingular,
}

/// Either P_q spans the whole projective space or it is totally singular;
/// any other outcome is an invariant violation.
pub fn spans_or_totally_singular(q: &GenPseudoQuadraticForm) -> Result<SpanDichotomy> {
    let pts = enumerate_points(&PolarSource::Q(q))?;
    let reps: Matrix = pts.iter().map(|p| p.coords.clone()).collect();
    let rank = linalg::rank(&reps)?;
    if rank == q.dim() {
        return Ok(SpanDichotomy::Spans);
    }
    // check every point of the span is singular
    let basis = linalg::rref(&reps)?.rows;
    let ring = q.pair().ring().clone();
    for v in projective_points(&ring, basis.len())? {
        let mut x = linalg::zero_vector(&ring, q.dim());
        for (c, b) in v.iter().zip(&basis) {
            x = linalg::vec_add(&x, &linalg::vec_scale_right(b, c)?)?;
        }
        if !q.is_singular(&x)? {
            return Err(Error::VerificationFailed(
                "singular points neither span nor form a totally singular set".into(),
            ));
        }
    }
    Ok(SpanDichotomy::TotallySingular)
}

/// Membership-only query for non-enumerable rings: is the line spanned by
/// two singular vectors totally singular.
pub fn line_is_totally_singular(
    q: &GenPseudoQuadraticForm,
    x: &[RingElement],
    y: &[RingElement],
) -> Result<bool> {
    Ok(q.is_singular(x)? && q.is_singular(y)? && q.sesqui_unchecked().eval(x, y)?.is_zero())
}

/// JSON report of an enumerated space; point indices in `lines` refer to
/// the sorted `points` list.
#[derive(Serialize)]
pub struct PolarReport {
    pub points: Vec<Vec<String>>,
    pub lines: Vec<Vec<usize>>,
    pub rank: usize,
    pub radical: Vec<Vec<String>>,
    pub source: SourceTag,
}

impl PolarSpace {
    pub fn report(&self) -> PolarReport {
        PolarReport {
            points: self
                .points
                .iter()
                .map(|p| p.coords.iter().map(|c| c.to_string()).collect())
                .collect(),
            lines: self.lines.clone(),
            rank: self.rank,
            radical: self
                .radical
                .iter()
                .map(|r| r.iter().map(|c| c.to_string()).collect())
                .collect(),
            source: self.source,
        }
    }
}
