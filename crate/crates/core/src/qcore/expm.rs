//! Exponentials of Hermitian generators.

use crate::error::Result;

use super::eig::hermitian_eig;
use super::matrix::{ComplexMatrix, C64};

/// `exp(-i H t)` with `hbar = 1`, through the eigendecomposition of `H`.
pub fn unitary_evolution(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(crate::Error::Domain(format!(
            "evolution time must be finite, got {t}"
        )));
    }
    let eig = hermitian_eig(h)?;
    Ok(eig.apply_fn(|l| C64::from_polar(1.0, -l * t)))
}
