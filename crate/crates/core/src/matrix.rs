//! Dense matrices over an exact scalar ring.
//!
//! One generic container serves the whole crate: rational matrices for
//! representations and group elements, bivariate-polynomial matrices for
//! exact solution fields, fixed-point matrices for the numeric mode.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Minimal ring bound shared by all scalar types used in matrices.
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Add<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = Self>
        + Sub<Output = Self>
        + Add<Output = Self>
        + Mul<Output = Self>
{
}

/// Ring with exact division; scalars the residual functionals run over.
pub trait Scalar: Ring + std::ops::Div<Output = Self> {}

impl<T> Scalar for T where T: Ring + std::ops::Div<Output = Self> {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data =
            self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data =
            self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = t;
                }
            }
        }
        out
    }

    /// AB − BA.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Column `j` as a vector.
    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact determinant by Gaussian elimination with rational pivots.
pub fn det(m: &Mat<BigRational>) -> BigRational {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            for j in 0..n {
                let tmp = a[(piv, j)].clone();
                a[(piv, j)] = a[(col, j)].clone();
                a[(col, j)] = tmp;
            }
            det = -det;
        }
        let p = a[(col, col)].clone();
        det *= &p;
        for r in col + 1..n {
            if a[(r, col)].is_zero() {
                continue;
            }
            let f = &a[(r, col)] / &p;
            for j in col..n {
                let s = &a[(col, j)] * &f;
                a[(r, j)] -= s;
            }
        }
    }
    det
}

/// Exact inverse; errors when the matrix is singular.
pub fn inverse(m: &Mat<BigRational>) -> Result<Mat<BigRational>> {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = Mat::<BigRational>::identity(n);
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[(r, col)].is_zero())
            .ok_or_else(|| Error::InternalInconsistency("singular matrix in inverse".into()))?;
        if piv != col {
            for j in 0..n {
                let t = a[(piv, j)].clone();
                a[(piv, j)] = a[(col, j)].clone();
                a[(col, j)] = t;
                let t = inv[(piv, j)].clone();
                inv[(piv, j)] = inv[(col, j)].clone();
                inv[(col, j)] = t;
            }
        }
        let p = a[(col, col)].clone();
        for j in 0..n {
            a[(col, j)] /= &p;
            inv[(col, j)] /= &p;
        }
        for r in 0..n {
            if r == col || a[(r, col)].is_zero() {
                continue;
            }
            let f = a[(r, col)].clone();
            for j in 0..n {
                let s = &a[(col, j)] * &f;
                a[(r, j)] -= s;
                let s = &inv[(col, j)] * &f;
                inv[(r, j)] -= s;
            }
        }
    }
    Ok(inv)
}

/// Rank of a rational matrix (exact elimination).
pub fn rank(m: &Mat<BigRational>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                let t = a[(piv, j)].clone();
                a[(piv, j)] = a[(rank, j)].clone();
                a[(rank, j)] = t;
            }
        }
        let p = a[(rank, col)].clone();
        for r in rank + 1..rows {
            if a[(r, col)].is_zero() {
                continue;
            }
            let f = &a[(r, col)] / &p;
            for j in col..cols {
                let s = &a[(rank, j)] * &f;
                a[(r, j)] -= s;
            }
        }
        rank += 1;
    }
    rank
}

/// Solves A·x = b exactly; errors when A is singular.
pub fn solve(a: &Mat<BigRational>, b: &[BigRational]) -> Result<Vec<BigRational>> {
    assert!(a.is_square());
    assert_eq!(a.rows(), b.len());
    let inv = inverse(a)?;
    let n = b.len();
    Ok((0..n)
        .map(|i| (0..n).map(|j| &inv[(i, j)] * &b[j]).fold(BigRational::zero(), |s, t| s + t))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn m2(a: i64, b: i64, c: i64, d: i64) -> Mat<BigRational> {
        Mat::from_rows(vec![vec![rat_int(a), rat_int(b)], vec![rat_int(c), rat_int(d)]])
    }

    #[test]
    fn det_and_inverse_agree() {
        let m = m2(2, -1, -3, 2);
        assert_eq!(det(&m), rat_int(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert_eq!(inv.mul(&m), Mat::identity(2));
    }

    #[test]
    fn singular_matrix_has_zero_det_and_no_inverse() {
        let m = m2(1, 2, 2, 4);
        assert_eq!(det(&m), rat_int(0));
        assert!(inverse(&m).is_err());
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn solve_small_system() {
        let a = m2(1, 1, 1, -1);
        let x = solve(&a, &[rat_int(3), rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
    }

    #[test]
    fn commutator_of_commuting_matrices_vanishes() {
        let a = m2(1, 0, 0, 2);
        let b = m2(3, 0, 0, 4);
        assert!(a.commutator(&b).is_zero());
        let n = m2(0, 1, 0, 0);
        assert_eq!(a.commutator(&n), m2(0, -1, 0, 0));
    }

    #[test]
    fn rational_entries_stay_exact() {
        let m = Mat::from_rows(vec![
            vec![rat(1, 3), rat(1, 6)],
            vec![rat(1, 2), rat(2, 3)],
        ]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
    }
}
