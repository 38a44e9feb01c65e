//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Jacobi is slow compared with tridiagonal QR but gives eigenvectors that are
//! orthonormal to working precision, which the witness bounds rely on. The
//! matrices handled here are at most a few hundred rows.

use crate::error::Result;

use super::matrix::{ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `V f(diag(lambda)) V^dagger`
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * weights[k] * v[(c, k)].conj())
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|l| C64::new(l, 0.0))
    }

    /// Projector onto the span of the eigenvectors selected by `keep`.
    pub fn spectral_projector(&self, keep: impl Fn(usize, f64) -> bool) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let selected: Vec<usize> = (0..n).filter(|&k| keep(k, self.eigenvalues[k])).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            selected.iter().map(|&k| v[(r, k)] * v[(c, k)].conj()).sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with [`crate::Error::NotSquare`] or [`crate::Error::NotHermitian`]
/// (carrying the worst entry) when the input is outside the domain.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    a.ensure_hermitian()?;
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let scale = m.frobenius_norm();
    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&m) <= 1e-18 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|k| m[(k, k)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += m[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation annihilating `m[(p, q)]`; accumulates into `v`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let magnitude = apq.norm();
    if magnitude == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Skip rotations that cannot change the diagonal at working precision.
    if magnitude <= 1e-18 * (app.abs() + aqq.abs()) {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = apq / magnitude;

    // Real rotation for [[app, |apq|], [|apq|, aqq]], then undo the phase on q.
    let theta = (aqq - app) / (2.0 * magnitude);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let r_pp = C64::new(c, 0.0);
    let r_pq = C64::new(s, 0.0);
    let r_qp = -phase.conj() * s;
    let r_qq = phase.conj() * c;

    let n = m.rows();
    // m <- m R
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * r_pp + mkq * r_qp;
        m[(k, q)] = mkp * r_pq + mkq * r_qq;
    }
    // m <- R^dagger m
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = r_pp.conj() * mpk + r_qp.conj() * mqk;
        m[(q, k)] = r_pq.conj() * mpk + r_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * r_pp + vkq * r_qp;
        v[(k, q)] = vkp * r_pq + vkq * r_qq;
    }
}
