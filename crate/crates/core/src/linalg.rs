//! Linear algebra over the supported division rings, for right vector
//! spaces: vectors are coordinate tuples, scalars act on the right, and
//! linear systems have their unknowns to the right of the coefficients
//! (sum_j A_ij x_j = b_i). Row operations multiply on the left, which
//! preserves the solution set even in the non-commutative case.

use crate::error::{Error, Result};
use crate::scalars::{RingElement, RingSpec};

pub type Vector = Vec<RingElement>;
pub type Matrix = Vec<Vec<RingElement>>;

pub fn zero_vector(ring: &RingSpec, n: usize) -> Vector {
    (0..n).map(|_| ring.zero()).collect()
}

pub fn unit_vector(ring: &RingSpec, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(ring, n);
    v[i] = ring.one();
    v
}

pub fn vec_add(a: &[RingElement], b: &[RingElement]) -> Result<Vector> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[RingElement], b: &[RingElement]) -> Result<Vector> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

/// v * c with the scalar on the right.
pub fn vec_scale_right(v: &[RingElement], c: &RingElement) -> Result<Vector> {
    v.iter().map(|x| x.mul(c)).collect()
}

pub fn vec_is_zero(v: &[RingElement]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// A * v with unknowns/coordinates on the right of the matrix entries.
pub fn mat_apply(a: &Matrix, v: &[RingElement]) -> Result<Vector> {
    let ring = v.first().map(|x| x.ring()).unwrap_or(RingSpec::FuncField2);
    a.iter()
        .map(|row| {
            let mut acc = ring.zero();
            for (e, x) in row.iter().zip(v) {
                acc = acc.add(&e.mul(x)?)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Row echelon data of a matrix under left row operations.
pub struct Echelon {
    /// Reduced rows, pivots normalized to 1, pivot columns strictly increasing.
    pub rows: Matrix,
    /// Pivot column of each reduced row.
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form. Canonical: two row-equivalent matrices produce
/// identical output.
pub fn rref(mat: &Matrix) -> Result<Echelon> {
    let mut rows: Matrix = mat.iter().filter(|r| !vec_is_zero(r)).cloned().collect();
    let ncols = mat.first().map(|r| r.len()).unwrap_or(0);
    let mut out: Matrix = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..ncols {
        // find a row with nonzero entry in col
        let Some(idx) = rows.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let mut pivot_row = rows.swap_remove(idx);
        let inv = pivot_row[col].inv()?;
        // normalize: left-multiply the row by the pivot inverse
        for e in pivot_row.iter_mut() {
            *e = inv.mul(e)?;
        }
        // eliminate from remaining rows
        for r in rows.iter_mut() {
            if !r[col].is_zero() {
                let c = r[col].clone();
                for (e, p) in r.iter_mut().zip(&pivot_row) {
                    *e = e.sub(&c.mul(p)?)?;
                }
            }
        }
        // eliminate from already-reduced rows
        for r in out.iter_mut() {
            if !r[col].is_zero() {
                let c = r[col].clone();
                for (e, p) in r.iter_mut().zip(&pivot_row) {
                    *e = e.sub(&c.mul(p)?)?;
                }
            }
        }
        out.push(pivot_row);
        pivots.push(col);
        rows.retain(|r| !vec_is_zero(r));
        if rows.is_empty() {
            break;
        }
    }
    // rows are pushed in pivot-column order already
    Ok(Echelon { rows: out, pivots })
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of v after eliminating all pivot coordinates. Canonical
    /// representative of v modulo the row space.
    pub fn reduce(&self, v: &[RingElement]) -> Result<Vector> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for (e, r) in v.iter_mut().zip(row) {
                    *e = e.sub(&c.mul(r)?)?;
                }
            }
        }
        Ok(v)
    }

    pub fn contains(&self, v: &[RingElement]) -> Result<bool> {
        Ok(vec_is_zero(&self.reduce(v)?))
    }
}

/// Solves `sum_j columns[j] * x_j = target` for right coefficients x_j.
/// Returns None when the system is inconsistent.
pub fn solve_right(columns: &Matrix, target: &[RingElement]) -> Result<Option<Vector>> {
    let ncols = columns.len();
    let nrows = target.len();
    if columns.iter().any(|c| c.len() != nrows) {
        return Err(Error::DimensionMismatch {
            expected: nrows,
            got: columns.iter().map(|c| c.len()).max().unwrap_or(0),
        });
    }
    let ring = target
        .first()
        .map(|x| x.ring())
        .unwrap_or(RingSpec::FuncField2);
    // augmented rows: [A | b] with A_ij = columns[j][i]
    let mut rows: Matrix = (0..nrows)
        .map(|i| {
            let mut row: Vector = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut next_row = 0usize;
    for col in 0..ncols {
        let Some(idx) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, idx);
        let inv = rows[next_row][col].inv()?;
        for e in rows[next_row].iter_mut() {
            *e = inv.mul(e)?;
        }
        for r in 0..rows.len() {
            if r != next_row && !rows[r][col].is_zero() {
                let c = rows[r][col].clone();
                for j in 0..=ncols {
                    let t = c.mul(&rows[next_row][j])?;
                    rows[r][j] = rows[r][j].sub(&t)?;
                }
            }
        }
        pivot_of_col[col] = Some(next_row);
        next_row += 1;
    }
    // consistency: rows with zero coefficients must have zero rhs
    for r in rows.iter().skip(next_row) {
        if !r[ncols].is_zero() {
            return Ok(None);
        }
    }
    let mut x = zero_vector(&ring, ncols);
    for (col, p) in pivot_of_col.iter().enumerate() {
        if let Some(r) = p {
            x[col] = rows[*r][ncols].clone();
        }
    }
    Ok(Some(x))
}

/// Basis of the right null space { y : sum_j A_ij y_j = 0 }, echelonized.
pub fn right_kernel(a: &Matrix) -> Result<Matrix> {
    let nrows = a.len();
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    if ncols == 0 {
        return Ok(Vec::new());
    }
    let ring = a[0][0].ring();
    let mut rows = a.clone();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut next_row = 0usize;
    for col in 0..ncols {
        let Some(idx) = (next_row..nrows.min(rows.len())).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, idx);
        let inv = rows[next_row][col].inv()?;
        for e in rows[next_row].iter_mut() {
            *e = inv.mul(e)?;
        }
        for r in 0..rows.len() {
            if r != next_row && !rows[r][col].is_zero() {
                let c = rows[r][col].clone();
                for j in 0..ncols {
                    let t = c.mul(&rows[next_row][j])?;
                    rows[r][j] = rows[r][j].sub(&t)?;
                }
            }
        }
        pivot_cols.push(col);
        next_row += 1;
    }
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut y = zero_vector(&ring, ncols);
        y[fc] = ring.one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            // pivot row: y_pc + sum over free cols of coeff * y_free = 0
            y[pc] = rows[r][fc].neg();
        }
        basis.push(y);
    }
    Ok(basis)
}

/// Rank of the span of the given vectors (as rows).
pub fn rank(vectors: &Matrix) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    Ok(rref(vectors)?.rank())
}

/// Greedy selection of indices forming a maximal independent subfamily.
pub fn greedy_independent(vectors: &Matrix) -> Result<Vec<usize>> {
    let mut chosen: Matrix = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(v.clone());
        if rank(&trial)? > chosen.len() {
            chosen = trial;
            idx.push(i);
        }
    }
    Ok(idx)
}

/// Inverse of a square matrix (entries act by left multiplication on
/// right-coordinate columns). None when singular.
pub fn invert(a: &Matrix) -> Result<Option<Matrix>> {
    let n = a.len();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let ring = a[0][0].ring();
    let mut rows: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vector(&ring, n, i));
            r
        })
        .collect();
    let mut next = 0usize;
    for col in 0..n {
        let Some(idx) = (next..n).find(|&r| !rows[r][col].is_zero()) else {
            return Ok(None);
        };
        rows.swap(next, idx);
        let inv = rows[next][col].inv()?;
        for e in rows[next].iter_mut() {
            *e = inv.mul(e)?;
        }
        for r in 0..n {
            if r != next && !rows[r][col].is_zero() {
                let c = rows[r][col].clone();
                for j in 0..2 * n {
                    let t = c.mul(&rows[next][j])?;
                    rows[r][j] = rows[r][j].sub(&t)?;
                }
            }
        }
        next += 1;
    }
    Ok(Some(rows.into_iter().map(|r| r[n..].to_vec()).collect()))
}

/// Dense linear algebra over a prime field F_p with u64 entries.
/// Used for the additive-subgroup bookkeeping of finite-field pairs, where
/// everything is a vector space over the prime field.
pub mod fp {
    fn inv_mod(a: u64, p: u64) -> u64 {
        // Fermat: a^(p-2) mod p
        let mut base = a % p;
        let mut e = p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct FpEchelon {
        pub p: u64,
        pub rows: Vec<Vec<u64>>,
        pub pivots: Vec<usize>,
    }

    /// Reduced row echelon form over F_p; canonical for the row space.
    pub fn rref(p: u64, mat: &[Vec<u64>]) -> FpEchelon {
        let ncols = mat.first().map(|r| r.len()).unwrap_or(0);
        let mut rows: Vec<Vec<u64>> = mat
            .iter()
            .map(|r| r.iter().map(|x| x % p).collect())
            .filter(|r: &Vec<u64>| r.iter().any(|&x| x != 0))
            .collect();
        let mut out: Vec<Vec<u64>> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..ncols {
            let Some(idx) = rows.iter().position(|r| r[col] != 0) else {
                continue;
            };
            let mut pivot = rows.swap_remove(idx);
            let inv = inv_mod(pivot[col], p);
            for e in pivot.iter_mut() {
                *e = *e * inv % p;
            }
            for r in rows.iter_mut().chain(out.iter_mut()) {
                if r[col] != 0 {
                    let c = r[col];
                    for (e, q) in r.iter_mut().zip(&pivot) {
                        *e = (*e + p * p - c * q % p) % p;
                    }
                }
            }
            out.push(pivot);
            pivots.push(col);
            rows.retain(|r| r.iter().any(|&x| x != 0));
        }
        FpEchelon {
            p,
            rows: out,
            pivots,
        }
    }

    impl FpEchelon {
        pub fn rank(&self) -> usize {
            self.rows.len()
        }

        pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
            let p = self.p;
            let mut v: Vec<u64> = v.iter().map(|x| x % p).collect();
            for (row, &c) in self.rows.iter().zip(&self.pivots) {
                if v[c] != 0 {
                    let f = v[c];
                    for (e, q) in v.iter_mut().zip(row) {
                        *e = (*e + p * p - f * q % p) % p;
                    }
                }
            }
            v
        }

        pub fn contains(&self, v: &[u64]) -> bool {
            self.reduce(v).iter().all(|&x| x == 0)
        }

        /// Inserts a vector if independent; reports whether the rank grew.
        pub fn insert(&mut self, v: &[u64]) -> bool {
            let r = self.reduce(v);
            let Some(col) = r.iter().position(|&x| x != 0) else {
                return false;
            };
            let p = self.p;
            let inv = inv_mod(r[col], p);
            let norm: Vec<u64> = r.iter().map(|&x| x * inv % p).collect();
            for row in self.rows.iter_mut() {
                if row[col] != 0 {
                    let c = row[col];
                    for (e, q) in row.iter_mut().zip(&norm) {
                        *e = (*e + p * p - c * q % p) % p;
                    }
                }
            }
            let at = self
                .pivots
                .iter()
                .position(|&q| q > col)
                .unwrap_or(self.pivots.len());
            self.rows.insert(at, norm);
            self.pivots.insert(at, col);
            true
        }
    }

    /// Basis of `{ x : sum_j rows[i][j] x_j = 0 }` over F_p.
    pub fn nullspace(p: u64, mat: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let ncols = mat.first().map(|r| r.len()).unwrap_or(0);
        let ech = rref(p, mat);
        let mut basis = Vec::new();
        let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
        for &fc in &free {
            let mut x = vec![0u64; ncols];
            x[fc] = 1;
            for (r, &pc) in ech.pivots.iter().enumerate() {
                x[pc] = (p - ech.rows[r][fc] % p) % p;
            }
            basis.push(x);
        }
        basis
    }
}
