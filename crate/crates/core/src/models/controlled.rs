//! Spin-1 with a freely chosen evolution `U` before the blind measurement and
//! its inverse after it.

use crate::error::{Error, Result};
use crate::qcore::matrix::basis_vector;
use crate::qcore::ComplexMatrix;
use crate::witness::{Channel, DensityMatrix, MeasurementSet, Projector, WitnessScenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlledEvolutionParams {
    pub theta: f64,
    pub phi: f64,
}

impl ControlledEvolutionParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::Domain(format!(
                "angles must be finite, got theta = {theta}, phi = {phi}"
            )));
        }
        Ok(Self { theta, phi })
    }
}

/// Real orthogonal 3x3 evolution parametrized by `(theta, phi)`.
pub fn controlled_unitary(p: &ControlledEvolutionParams) -> ComplexMatrix {
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    ComplexMatrix::from_real_rows(&[
        &[ct, 0.0, st],
        &[st * sp, cp, -ct * sp],
        &[-st * cp, sp, ct * cp],
    ])
    .expect("3x3 literal")
}

/// `|-1> -> U|-1>`, blind `Jz` measurement, `U^dagger`, then `|-1><-1|`. The
/// direct probability is 1, so `W = 1 - sum_m |<m|U|-1>|^4`.
pub fn controlled_scenario(p: &ControlledEvolutionParams) -> Result<WitnessScenario> {
    let u = controlled_unitary(p);
    let lowest = basis_vector(3, 2);
    WitnessScenario::new(
        DensityMatrix::pure_normalized(&u.mul_vec(&lowest))?,
        MeasurementSet::von_neumann(3)?,
        Channel::unitary(u.adjoint())?,
        Projector::onto_state(&lowest)?,
    )
}

/// `|1 - (3 + cos 4 phi) cos^4(theta) / 4 - sin^4(theta)|`
pub fn controlled_closed_form(p: &ControlledEvolutionParams) -> f64 {
    let c4 = p.theta.cos().powi(4);
    let s4 = p.theta.sin().powi(4);
    (1.0 - 0.25 * (3.0 + (4.0 * p.phi).cos()) * c4 - s4).abs()
}
