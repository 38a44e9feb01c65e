use crate::error::{Error, Result};
use crate::qcore::{unitary_evolution, ComplexMatrix};

use super::state::DensityMatrix;

pub const UNITARITY_TOL: f64 = 1e-12;

/// Trace-preserving completely positive map.
#[derive(Debug, Clone, PartialEq)]
pub enum Channel {
    Identity,
    Unitary(ComplexMatrix),
    /// `exp(-i H t)`; the propagator is computed once on construction.
    Hamiltonian {
        hamiltonian: ComplexMatrix,
        time: f64,
        propagator: ComplexMatrix,
    },
    OperatorSum(Vec<ComplexMatrix>),
}

impl Channel {
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        u.ensure_square()?;
        let defect = u.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(Error::Invariant(format!(
                "channel matrix is not unitary: max |U^dagger U - 1| = {defect:e}"
            )));
        }
        Ok(Self::Unitary(u))
    }

    pub fn hamiltonian(hamiltonian: ComplexMatrix, time: f64) -> Result<Self> {
        let propagator = unitary_evolution(&hamiltonian, time)?;
        Ok(Self::Hamiltonian {
            hamiltonian,
            time,
            propagator,
        })
    }

    pub fn operator_sum(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| {
            Error::Domain("operator-sum channel needs at least one Kraus operator".into())
        })?;
        first.ensure_square()?;
        let n = first.rows();
        let mut sum = ComplexMatrix::zeros(n, n);
        for k in &kraus {
            if k.rows() != n || k.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: k.rows().max(k.cols()),
                });
            }
            sum = &sum + &k.adjoint().matmul(k);
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(n));
        if defect > UNITARITY_TOL {
            return Err(Error::Invariant(format!(
                "Kraus operators are not trace preserving: max |sum K^dagger K - 1| = {defect:e}"
            )));
        }
        Ok(Self::OperatorSum(kraus))
    }

    /// Dimension the channel acts on; `None` for the identity.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Identity => None,
            Self::Unitary(u) => Some(u.rows()),
            Self::Hamiltonian { propagator, .. } => Some(propagator.rows()),
            Self::OperatorSum(k) => Some(k[0].rows()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Unitary(_) => "unitary",
            Self::Hamiltonian { .. } => "hamiltonian",
            Self::OperatorSum(_) => "kraus",
        }
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        match self.dim() {
            Some(d) if d != dim => Err(Error::DimensionMismatch {
                expected: dim,
                found: d,
            }),
            _ => Ok(()),
        }
    }

    /// Image of an arbitrary square matrix under the map.
    pub fn apply_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Self::Identity => m.clone(),
            Self::Unitary(u) => u.conjugate(m),
            Self::Hamiltonian { propagator, .. } => propagator.conjugate(m),
            Self::OperatorSum(kraus) => {
                let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
                for k in kraus {
                    out = &out + &k.conjugate(m);
                }
                out
            }
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.ensure_dim(rho.dim())?;
        Ok(DensityMatrix::from_channel_output(
            self.apply_matrix(rho.matrix()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::C64;
    use crate::qcore::spin_operators;

    #[test]
    fn rejects_non_unitary() {
        let m = ComplexMatrix::identity(2).scale_real(1.1);
        assert!(Channel::unitary(m).is_err());
        let k = vec![ComplexMatrix::identity(2).scale_real(0.5)];
        assert!(Channel::operator_sum(k).is_err());
        assert!(Channel::operator_sum(vec![]).is_err());
    }

    #[test]
    fn dephasing_kraus_pair() {
        let p: f64 = 0.3;
        let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let channel = Channel::operator_sum(vec![
            ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
            z.scale_real(p.sqrt()),
        ])
        .unwrap();
        let plus =
            DensityMatrix::pure_normalized(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let out = channel.apply(&plus).unwrap();
        assert!((out.matrix()[(0, 1)].re - 0.5 * (1.0 - 2.0 * p)).abs() < 1e-15);
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_matches_unitary_and_checks_dim() {
        let ops = spin_operators(1.0).unwrap();
        let ch = Channel::hamiltonian(ops.jx.clone(), 0.7).unwrap();
        let u = unitary_evolution(&ops.jx, 0.7).unwrap();
        let rho = DensityMatrix::maximally_mixed(3);
        let a = ch.apply(&rho).unwrap();
        let b = Channel::unitary(u).unwrap().apply(&rho).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
        assert!(ch.apply(&DensityMatrix::maximally_mixed(2)).is_err());
        assert_eq!(Channel::Identity.dim(), None);
    }
}
