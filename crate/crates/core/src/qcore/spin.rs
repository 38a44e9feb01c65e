//! Angular-momentum matrices in the `|j; m>` basis, ordered `m = +j, ..., -j`.

use crate::error::{Error, Result};

use super::matrix::{ComplexMatrix, C64, I, ZERO};

/// Spin length stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinLength(u32);

impl SpinLength {
    pub fn from_twice(twice_j: u32) -> Self {
        Self(twice_j)
    }

    /// Accepts `j` when `2j` is a non-negative integer.
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 0.0 || (twice - twice.round()).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "spin length must be a non-negative half-integer, got {j}"
            )));
        }
        if twice.round() > u32::MAX as f64 {
            return Err(Error::Domain(format!("spin length {j} is too large")));
        }
        Ok(Self(twice.round() as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Hilbert-space dimension `2j + 1`.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m_of_index(self, k: usize) -> f64 {
        self.value() - k as f64
    }

    /// Basis index of `|j; -j>`.
    pub fn lowest_index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub j: SpinLength,
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
}

impl SpinOperators {
    pub fn for_length(j: SpinLength) -> Self {
        let n = j.dim();
        let jv = j.value();
        // <m+1| J+ |m> sits at (k-1, k) when index k carries m.
        let raise = ComplexMatrix::from_fn(n, n, |r, c| {
            if c >= 1 && r == c - 1 {
                let m = j.m_of_index(c);
                C64::new((jv * (jv + 1.0) - m * (m + 1.0)).sqrt(), 0.0)
            } else {
                ZERO
            }
        });
        let lower = raise.adjoint();
        let jx = (&raise + &lower).scale_real(0.5);
        let jy = (&raise - &lower).scale(-I * 0.5);
        let jz = ComplexMatrix::from_fn(n, n, |r, c| {
            if r == c {
                C64::new(j.m_of_index(r), 0.0)
            } else {
                ZERO
            }
        });
        Self { j, jx, jy, jz }
    }

    /// `Jx^2 + Jy^2 + Jz^2`
    pub fn casimir(&self) -> ComplexMatrix {
        let sq = |a: &ComplexMatrix| a.matmul(a);
        &(&sq(&self.jx) + &sq(&self.jy)) + &sq(&self.jz)
    }
}

pub fn spin_operators(j: f64) -> Result<SpinOperators> {
    Ok(SpinOperators::for_length(SpinLength::new(j)?))
}
