//! The three worked example systems, each with a full simulation and a
//! closed form.

pub mod bosonic;
pub mod controlled;
pub mod spin;

pub use bosonic::{
    bosonic_asymptotic, bosonic_closed_form, bosonic_scenario, poisson_tail, spin_to_boson_alpha,
    BosonicParams, BosonicScenario,
};
pub use controlled::{
    controlled_closed_form, controlled_scenario, controlled_unitary, ControlledEvolutionParams,
};
pub use spin::{precessing_spin_scenario, qubit_closed_form, BlindGrouping, PrecessingSpinParams};

use crate::error::Result;
use crate::qcore::SpinLength;
use crate::witness::witness_only;

/// Distance between the precessing-spin witness (field along x, von Neumann
/// blind measurement, second segment reversed) and the bosonic closed form
/// at the displacement `alpha = sqrt(j/2) Omega tau`.
pub fn large_spin_gap(j: f64, alpha: f64) -> Result<f64> {
    let length = SpinLength::new(j)?;
    let tau = alpha / (length.value() / 2.0).sqrt();
    let p = PrecessingSpinParams::new(j, 0.0, 1.0, tau)?.with_second_duration(-tau);
    let spin = witness_only(&precessing_spin_scenario(&p, &BlindGrouping::VonNeumann)?)?;
    let boson = bosonic_closed_form(spin_to_boson_alpha(length, 1.0, tau));
    Ok((spin - boson).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_spin_gap_shrinks() {
        let gaps: Vec<f64> = [10.0, 20.0, 40.0]
            .iter()
            .map(|&j| large_spin_gap(j, 1.0).unwrap())
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
        // roughly halving per doubling of j
        assert!(gaps[2] < 0.6 * gaps[1] && gaps[1] < 0.6 * gaps[0]);
    }

    #[test]
    fn large_spin_gap_vanishes_without_displacement() {
        assert!(large_spin_gap(10.0, 0.0).unwrap() < 1e-12);
    }
}
