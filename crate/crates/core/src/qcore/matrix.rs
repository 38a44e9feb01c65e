//! Dense complex matrices, row-major.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance on `max |A - A^dagger|` used throughout for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Domain(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch {
                expected: n_cols,
                found: bad.len(),
            });
        }
        Self::new(n_rows, n_cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { diag[r] } else { ZERO })
    }

    /// `|u><v|`
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|k| self[(k, k)])
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`; `inf` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|A_rc - conj(A_cr)|` with its location.
    pub fn hermiticity_defect(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for r in 0..self.rows {
            for c in r..self.cols {
                let d = (self[(r, c)] - self[(c, r)].conj()).norm();
                if d > worst.0 {
                    worst = (d, r, c);
                }
            }
        }
        worst
    }

    pub fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        self.ensure_square()?;
        let (deviation, row, col) = self.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation,
            });
        }
        Ok(())
    }

    /// `(A + A^dagger) / 2`
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        Self::from_fn(n, n, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }

    /// Largest deviation of `A^dagger A` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        gram.max_abs_diff(&Self::identity(self.cols))
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = vec![ZERO; self.rows * rhs.cols];
        for r in 0..self.rows {
            let out_row = &mut out[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `A B A^dagger`
    pub fn conjugate(&self, inner: &Self) -> Self {
        self.matmul(inner).matmul(&self.adjoint())
    }

    /// `tr(A B)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> C64 {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.rows, rhs.cols);
        let mut acc = ZERO;
        for r in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(r, k)] * rhs[(k, r)];
            }
        }
        acc
    }

    /// `<u|A|v>`
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let av = self.mul_vec(v);
        u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Euclidean norm of a state vector.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<u|v>`
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn basis_vector(dim: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[k] = ONE;
    v
}
