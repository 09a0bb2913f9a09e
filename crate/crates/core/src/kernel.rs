//! Exact rational scalars and dense linear algebra.
//!
//! Everything here works over `BigRational`; there is no tolerance anywhere.
//! Pivoting picks the first nonzero entry in a column.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

/// Shorthand for an integral scalar.
pub fn q(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `num/den`.
pub fn qr(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn fmt_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            let cells: Vec<String> = row.iter().map(fmt_scalar).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![vec![Scalar::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Matrix { rows: rows.len(), cols, data: rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r][c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[Vec<Scalar>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<Vec<Scalar>> {
        self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    t.data[j][i] = v.clone();
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        self.data.iter().map(|row| dot(row, v)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Reduced row-echelon form. Returns the rank, the echelon matrix (zero rows
    /// dropped) and the pivot columns.
    pub fn rref(&self) -> (usize, Matrix, Vec<usize>) {
        let mut rows: Vec<Vec<Scalar>> =
            self.data.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
        let pivots = rref_in_place(&mut rows, self.cols);
        let rank = pivots.len();
        rows.truncate(rank);
        (rank, Matrix { rows: rank, cols: self.cols, data: rows }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().0
    }

    /// Basis of the null space `{x : m x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (_, ech, pivots) = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            is_pivot[p] = Some(r);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                let c = &ech.data[r][free];
                if !c.is_zero() {
                    v[p] = -c.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some exact solution of `m x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let mut aug: Vec<Vec<Scalar>> = self
            .data
            .iter()
            .zip(b)
            .map(|(row, bi)| {
                let mut r = row.clone();
                r.push(bi.clone());
                r
            })
            .collect();
        let pivots = rref_in_place(&mut aug, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[r][self.cols].clone();
        }
        Ok(Some(x))
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut s = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Row-reduces `rows` in place (nonzero rows first, reduced) and returns pivot columns.
fn rref_in_place(rows: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(c) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A subspace of `Q^n`, stored as its reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinSpace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for LinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinSpace(dim {} in Q^{}) [", self.dim(), self.ambient)?;
        for b in &self.basis {
            let cells: Vec<String> = b.iter().map(fmt_scalar).collect();
            write!(f, " ({})", cells.join(","))?;
        }
        write!(f, " ]")
    }
}

impl LinSpace {
    pub fn zero(ambient: usize) -> Self {
        LinSpace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        LinSpace::from_vectors(ambient, Matrix::identity(ambient).into_rows())
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<Scalar>>>(ambient: usize, vectors: I) -> Self {
        let mut rows: Vec<Vec<Scalar>> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), ambient, "vector length mismatch"))
            .filter(|v| !is_zero_vec(v))
            .collect();
        let pivots = rref_in_place(&mut rows, ambient);
        rows.truncate(pivots.len());
        LinSpace { ambient, basis: rows, pivots }
    }

    /// `{x : m x = 0}` for a constraint matrix with `ambient` columns.
    pub fn kernel_of(ambient: usize, constraints: &[Vec<Scalar>]) -> Self {
        if constraints.is_empty() {
            return LinSpace::full(ambient);
        }
        let m = Matrix::from_rows(ambient, constraints.to_vec());
        LinSpace::from_vectors(ambient, m.kernel())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Reduce against the echelon basis; membership iff the residue vanishes.
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        is_zero_vec(&r)
    }

    pub fn includes(&self, other: &LinSpace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &LinSpace) -> LinSpace {
        LinSpace::from_vectors(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    /// Standard-dot annihilator `{y : <b, y> = 0 for every basis vector b}`.
    pub fn annihilator(&self) -> LinSpace {
        LinSpace::kernel_of(self.ambient, &self.basis)
    }

    pub fn intersect(&self, other: &LinSpace) -> LinSpace {
        let constraints: Vec<Vec<Scalar>> = self
            .annihilator()
            .basis
            .into_iter()
            .chain(other.annihilator().basis)
            .collect();
        LinSpace::kernel_of(self.ambient, &constraints)
    }

    /// Image under `map` (a `target x ambient` matrix).
    pub fn image(&self, map: &Matrix) -> LinSpace {
        assert_eq!(map.cols(), self.ambient);
        LinSpace::from_vectors(map.rows(), self.basis.iter().map(|b| map.mul_vec(b)))
    }

    /// `{x in Q^map.cols : map x in target}`.
    pub fn preimage(map: &Matrix, target: &LinSpace) -> LinSpace {
        assert_eq!(map.rows(), target.ambient);
        let ann = target.annihilator();
        let constraints: Vec<Vec<Scalar>> = ann
            .basis
            .iter()
            .map(|a| map.transpose().mul_vec(a))
            .collect();
        LinSpace::kernel_of(map.cols(), &constraints)
    }

    /// Vectors completing `self` to `sup`, chosen greedily from `sup`'s echelon basis.
    /// Requires `self ⊆ sup`.
    pub fn complement_in(&self, sup: &LinSpace) -> Vec<Vec<Scalar>> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for b in &sup.basis {
            if !acc.contains(b) {
                out.push(b.clone());
                acc = LinSpace::from_vectors(self.ambient, acc.basis.iter().cloned().chain([b.clone()]));
            }
        }
        out
    }

    /// Embeds into a larger ambient space through a coordinate map `old index -> new index`.
    pub fn reindex(&self, new_ambient: usize, index_map: &[usize]) -> LinSpace {
        LinSpace::from_vectors(
            new_ambient,
            self.basis.iter().map(|b| {
                let mut v = vec![Scalar::zero(); new_ambient];
                for (i, x) in b.iter().enumerate() {
                    v[index_map[i]] = x.clone();
                }
                v
            }),
        )
    }
}

/// Greatest absolute numerator in a vector; used for sizing random data in tests.
pub fn max_abs(v: &[Scalar]) -> Scalar {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Scalar::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_identity_unchanged() {
        let m = Matrix::identity(2);
        let (rank, ech, _) = m.rref();
        assert_eq!(rank, 2);
        assert_eq!(ech, m);
    }

    #[test]
    fn rref_dependent_rows() {
        assert_eq!(Matrix::from_i64(&[&[1, 1], &[2, 2]]).rank(), 1);
    }

    #[test]
    fn rref_full_rank_2x2() {
        // det [[1,2],[3,4]] = -2
        let (rank, ech, _) = Matrix::from_i64(&[&[1, 2], &[3, 4]]).rref();
        assert_eq!(rank, 2);
        assert_eq!(ech, Matrix::identity(2));
    }

    #[test]
    fn rref_is_idempotent() {
        let m = Matrix::from_i64(&[&[2, 4, 1], &[1, 2, 0], &[0, 0, 3]]);
        let (_, e1, _) = m.rref();
        let (_, e2, _) = e1.rref();
        assert_eq!(e1, e2);
    }

    #[test]
    fn kernel_single_row() {
        let k = Matrix::from_i64(&[&[1, 1]]).kernel();
        assert_eq!(k, vec![vec![q(-1), q(1)]]);
        let m = Matrix::from_i64(&[&[1, 1]]);
        assert!(is_zero_vec(&m.mul_vec(&k[0])));
    }

    #[test]
    fn kernel_identity_empty() {
        assert!(Matrix::identity(3).kernel().is_empty());
    }

    #[test]
    fn kernel_rank_nullity() {
        let m = Matrix::from_i64(&[&[1, 2, 3]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&m.mul_vec(v)));
        }
    }

    #[test]
    fn solve_underdetermined() {
        let m = Matrix::from_i64(&[&[1, 1]]);
        let x = m.solve(&[q(1)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), vec![q(1)]);
    }

    #[test]
    fn solve_inconsistent() {
        let m = Matrix::from_i64(&[&[1], &[1]]);
        assert_eq!(m.solve(&[q(1), q(2)]).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = Matrix::from_i64(&[&[1, 0]]);
        assert!(matches!(m.solve(&[q(1), q(2)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn solve_invertible_5x5() {
        let m = Matrix::from_i64(&[
            &[2, 1, 0, 0, 1],
            &[0, 3, 1, 0, 0],
            &[1, 0, 4, 1, 0],
            &[0, 0, 1, 5, 2],
            &[1, 1, 0, 0, 6],
        ]);
        let b: Vec<Scalar> = [1, -2, 3, 0, 7].iter().map(|&x| q(x)).collect();
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert!(m.kernel().is_empty());
    }

    #[test]
    fn linspace_intersection_and_sum() {
        let a = LinSpace::from_vectors(3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let b = LinSpace::from_vectors(3, vec![vec![q(0), q(1), q(1)], vec![q(0), q(0), q(1)]]);
        assert_eq!(a.intersect(&b), LinSpace::from_vectors(3, vec![vec![q(0), q(1), q(0)]]));
        assert_eq!(a.sum(&b), LinSpace::full(3));
    }

    #[test]
    fn linspace_preimage() {
        // map (x,y) -> x+y ; preimage of 0 is the antidiagonal
        let m = Matrix::from_i64(&[&[1, 1]]);
        let pre = LinSpace::preimage(&m, &LinSpace::zero(1));
        assert_eq!(pre, LinSpace::from_vectors(2, vec![vec![q(1), q(-1)]]));
    }
}
