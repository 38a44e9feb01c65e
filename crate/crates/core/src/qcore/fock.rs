//! Truncated single-mode Fock space.

use crate::error::{Error, Result};

use super::expm::unitary_evolution;
use super::matrix::{ComplexMatrix, C64, I, ZERO};

/// Annihilation operator `a` on `span{|0>, ..., |n_trunc - 1>}`.
pub fn annihilation(n_trunc: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n_trunc, n_trunc, |r, c| {
        if c == r + 1 {
            C64::new((c as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// Smallest cutoff for which the truncated displacement reproduces the
/// coherent-state amplitudes to well below `1e-10`.
pub fn recommended_cutoff(alpha: C64) -> usize {
    (16.0 * (1.0 + alpha.norm_sqr())).ceil() as usize
}

/// `exp(alpha a^dagger - conj(alpha) a)` on the truncated space.
///
/// The anti-Hermitian generator `G` is exponentiated as `exp(-i H)` with the
/// Hermitian `H = i G`.
pub fn displacement_operator(alpha: C64, n_trunc: usize) -> Result<ComplexMatrix> {
    if n_trunc < 2 {
        return Err(Error::Domain(format!(
            "Fock cutoff must be at least 2, got {n_trunc}"
        )));
    }
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::Domain(format!(
            "displacement must be finite, got {alpha}"
        )));
    }
    let a = annihilation(n_trunc);
    let generator = &a.adjoint().scale(alpha) - &a.scale(alpha.conj());
    unitary_evolution(&generator.scale(I), 1.0)
}

/// `<n|D(alpha)|0> = alpha^n exp(-|alpha|^2 / 2) / sqrt(n!)` for `n < n_trunc`.
pub fn coherent_amplitudes(alpha: C64, n_trunc: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n_trunc);
    let mut amp = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..n_trunc {
        if n > 0 {
            amp = amp * alpha / (n as f64).sqrt();
        }
        out.push(amp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn zero_displacement_is_identity() {
        let d = displacement_operator(ZERO, 8).unwrap();
        assert!(d.max_abs_diff(&ComplexMatrix::identity(8)) < 1e-15);
    }

    #[test]
    fn first_column_matches_closed_form() {
        let alpha = C64::new(1.0, 0.0);
        let d = displacement_operator(alpha, 64).unwrap();
        let mut worst: f64 = 0.0;
        for n in 0..64u32 {
            // alpha^n e^{-|alpha|^2/2} / sqrt(n!), evaluated directly
            let closed = alpha.powu(n) * (-0.5f64).exp() / factorial(n).sqrt();
            worst = worst.max((d[(n as usize, 0)] - closed).norm());
        }
        assert!(worst < 1e-10, "max deviation {worst:e}");
    }

    #[test]
    fn complex_alpha_column_and_inverse() {
        let alpha = C64::new(0.8, -1.1);
        let n = recommended_cutoff(alpha);
        let d = displacement_operator(alpha, n).unwrap();
        let amps = coherent_amplitudes(alpha, n);
        for k in 0..n {
            assert!((d[(k, 0)] - amps[k]).norm() < 1e-10);
        }
        let back = displacement_operator(-alpha, n).unwrap();
        let prod = d.matmul(&back);
        let half = n / 2;
        for r in 0..half {
            for c in 0..half {
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((prod[(r, c)] - C64::new(want, 0.0)).norm() < 1e-8);
            }
        }
        assert!(d.adjoint().max_abs_diff(&back) < 1e-12);
    }

    #[test]
    fn rejects_tiny_cutoff() {
        assert!(displacement_operator(C64::new(1.0, 0.0), 1).is_err());
    }
}
