//! Spin of length `j` precessing in a static field, measured in the `Jz` basis.

use crate::error::{Error, Result};
use crate::qcore::matrix::basis_vector;
use crate::qcore::{unitary_evolution, ComplexMatrix, SpinLength, SpinOperators};
use crate::witness::{Channel, DensityMatrix, MeasurementSet, Projector, WitnessScenario};

/// Field `H = Omega (cos(chi) (cos(theta) Jx + sin(theta) Jz) + sin(chi) Jy)`
/// applied for `tau` before the blind measurement and for `second_duration`
/// (default `tau`) after it. `chi = 0` is the field in the x-z plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecessingSpinParams {
    pub j: SpinLength,
    pub theta: f64,
    pub omega: f64,
    pub tau: f64,
    pub second_duration: Option<f64>,
    pub y_tilt: f64,
}

impl PrecessingSpinParams {
    pub fn new(j: f64, theta: f64, omega: f64, tau: f64) -> Result<Self> {
        let j = SpinLength::new(j)?;
        if j.twice() == 0 {
            return Err(Error::Domain("spin length must be at least 1/2".into()));
        }
        for (name, v) in [("theta", theta), ("omega", omega), ("tau", tau)] {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(Self {
            j,
            theta,
            omega,
            tau,
            second_duration: None,
            y_tilt: 0.0,
        })
    }

    pub fn with_second_duration(mut self, duration: f64) -> Self {
        self.second_duration = Some(duration);
        self
    }

    pub fn with_y_tilt(mut self, chi: f64) -> Self {
        self.y_tilt = chi;
        self
    }

    pub fn second(&self) -> f64 {
        self.second_duration.unwrap_or(self.tau)
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        let ops = SpinOperators::for_length(self.j);
        let (st, ct) = self.theta.sin_cos();
        let (sc, cc) = self.y_tilt.sin_cos();
        let h =
            &(&ops.jx.scale_real(cc * ct) + &ops.jz.scale_real(cc * st)) + &ops.jy.scale_real(sc);
        h.scale_real(self.omega)
    }
}

/// Which `Jz` eigenstates the blind measurement lumps together.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BlindGrouping {
    /// One projector per `m` (M = 2j + 1).
    #[default]
    VonNeumann,
    /// Groups of basis indices; index `k` carries `m = j - k`.
    Groups(Vec<Vec<usize>>),
}

impl BlindGrouping {
    fn measurement(&self, dim: usize) -> Result<MeasurementSet> {
        match self {
            Self::VonNeumann => MeasurementSet::von_neumann(dim),
            Self::Groups(groups) => {
                let mut seen = vec![false; dim];
                for &k in groups.iter().flatten() {
                    if k >= dim || seen[k] {
                        return Err(Error::Domain(format!(
                            "blind grouping is not a partition of the {dim} m values (index {k})"
                        )));
                    }
                    seen[k] = true;
                }
                if seen.iter().any(|s| !s) {
                    return Err(Error::Domain(format!(
                        "blind grouping does not cover all {dim} m values"
                    )));
                }
                MeasurementSet::from_basis_groups(dim, groups)
            }
        }
    }
}

/// Prepared in `|-j>` at `-tau`, blind `Jz` measurement at `0`, final
/// projector `|-j><-j|`.
pub fn precessing_spin_scenario(
    p: &PrecessingSpinParams,
    grouping: &BlindGrouping,
) -> Result<WitnessScenario> {
    let dim = p.j.dim();
    let h = p.hamiltonian();
    let lowest = basis_vector(dim, p.j.lowest_index());
    let before = unitary_evolution(&h, p.tau)?;
    let after = unitary_evolution(&h, p.second())?;
    WitnessScenario::new(
        DensityMatrix::pure_normalized(&before.mul_vec(&lowest))?,
        grouping.measurement(dim)?,
        Channel::Unitary(after),
        Projector::onto_state(&lowest)?,
    )
}

/// `(1/2) sin^2(Omega t)` for the spin-1/2 with the field along x.
pub fn qubit_closed_form(omega: f64, t: f64) -> f64 {
    0.5 * (omega * t).sin().powi(2)
}
