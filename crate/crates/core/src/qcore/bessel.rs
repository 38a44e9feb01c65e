//! Modified Bessel function of the first kind, order zero.
//!
//! For `z < SERIES_LIMIT` the ascending series `sum (z^2/4)^k / (k!)^2` is
//! summed directly; all terms are positive so there is no cancellation. Above
//! it the Hankel asymptotic expansion
//! `I0(z) ~ e^z / sqrt(2 pi z) * sum ((2k-1)!!)^2 / (k! (8z)^k)` is summed until
//! its terms stop decreasing, which at `z >= 30` leaves a truncation error far
//! below `1e-16`.

use crate::error::{Error, Result};

pub const SERIES_LIMIT: f64 = 30.0;

fn check_argument(z: f64) -> Result<()> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::Domain(format!(
            "I0 argument must be finite and non-negative, got {z}"
        )));
    }
    Ok(())
}

fn ascending_series(z: f64) -> f64 {
    let q = z * z / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term < sum * 1e-17 {
            return sum;
        }
        k += 1.0;
    }
}

/// `sqrt(2 pi z) e^{-z} I0(z)` from the asymptotic expansion.
fn asymptotic_factor(z: f64) -> f64 {
    let mut term: f64 = 1.0;
    let mut sum = 1.0;
    let mut k: f64 = 1.0;
    loop {
        let next = term * (2.0 * k - 1.0).powi(2) / (8.0 * k * z);
        if next >= term || next < sum * 1e-17 {
            return sum + if next < term { next } else { 0.0 };
        }
        term = next;
        sum += term;
        k += 1.0;
    }
}

/// `I0(z)`; overflows to `inf` above `z ~ 713`.
pub fn bessel_i0(z: f64) -> Result<f64> {
    check_argument(z)?;
    if z < SERIES_LIMIT {
        Ok(ascending_series(z))
    } else {
        // Split the exponential so e^z / sqrt(.) does not overflow early.
        let half = (z / 2.0).exp();
        Ok(half * (half / (2.0 * std::f64::consts::PI * z).sqrt()) * asymptotic_factor(z))
    }
}

/// Exponentially scaled `e^{-z} I0(z)`, finite for every admissible `z`.
pub fn bessel_i0_scaled(z: f64) -> Result<f64> {
    check_argument(z)?;
    if z < SERIES_LIMIT {
        Ok(ascending_series(z) * (-z).exp())
    } else {
        Ok(asymptotic_factor(z) / (2.0 * std::f64::consts::PI * z).sqrt())
    }
}
