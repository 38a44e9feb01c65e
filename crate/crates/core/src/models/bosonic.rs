//! Displaced vacuum in a truncated Fock space: `D(alpha)` before the blind
//! number measurement, `D(-alpha)` after it.

use crate::error::{Error, Result};
use crate::qcore::matrix::basis_vector;
use crate::qcore::{bessel_i0_scaled, displacement_operator, recommended_cutoff, SpinLength, C64};
use crate::witness::{Channel, DensityMatrix, MeasurementSet, Projector, WitnessScenario};

/// Poisson tail beyond which the cutoff is reported as too small.
pub const TRUNCATION_WARN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonicParams {
    pub alpha: C64,
    pub n_trunc: usize,
}

impl BosonicParams {
    pub fn new(alpha: C64, n_trunc: usize) -> Result<Self> {
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
        Ok(Self { alpha, n_trunc })
    }
}

#[derive(Debug, Clone)]
pub struct BosonicScenario {
    pub scenario: WitnessScenario,
    /// Weight of the coherent state on Fock levels at or above the cutoff.
    pub truncation_deficit: f64,
    pub recommended_cutoff: usize,
}

impl BosonicScenario {
    pub fn warning(&self, n_trunc: usize) -> Option<String> {
        if self.truncation_deficit > TRUNCATION_WARN {
            Some(format!(
                "Fock cutoff {n_trunc} leaves coherent-state tail {:.3e} (recommended cutoff {})",
                self.truncation_deficit, self.recommended_cutoff
            ))
        } else {
            None
        }
    }
}

/// `sum_{n >= n_trunc} e^{-|alpha|^2} |alpha|^{2n} / n!`
pub fn poisson_tail(alpha: C64, n_trunc: usize) -> f64 {
    let lambda = alpha.norm_sqr();
    if lambda == 0.0 {
        return 0.0;
    }
    let n0 = n_trunc as f64;
    // log of the first omitted weight
    let log_first =
        -lambda + n0 * lambda.ln() - (1..=n_trunc).map(|k| (k as f64).ln()).sum::<f64>();
    let mut term = log_first.exp();
    let mut tail = 0.0;
    let mut n = n0;
    while term > 0.0 && (term > tail * 1e-17 || n < lambda) {
        tail += term;
        n += 1.0;
        term *= lambda / n;
        if n > n0 + 10_000.0 {
            break;
        }
    }
    tail.min(1.0)
}

pub fn bosonic_scenario(p: &BosonicParams) -> Result<BosonicScenario> {
    let n = p.n_trunc;
    let forward = displacement_operator(p.alpha, n)?;
    // the truncated generator is still anti-Hermitian, so D(-alpha) = D(alpha)^dagger
    let backward = forward.adjoint();
    let vacuum = basis_vector(n, 0);
    let scenario = WitnessScenario::new(
        DensityMatrix::pure_normalized(&forward.column(0))?,
        MeasurementSet::von_neumann(n)?,
        Channel::Unitary(backward),
        Projector::onto_state(&vacuum)?,
    )?;
    Ok(BosonicScenario {
        scenario,
        truncation_deficit: poisson_tail(p.alpha, n),
        recommended_cutoff: recommended_cutoff(p.alpha),
    })
}

/// `1 - e^{-2|alpha|^2} I0(2|alpha|^2)`
pub fn bosonic_closed_form(alpha: C64) -> f64 {
    let z = 2.0 * alpha.norm_sqr();
    1.0 - bessel_i0_scaled(z).expect("2|alpha|^2 is finite and non-negative")
}

/// Large-displacement form `1 - 1 / (2 sqrt(pi) |alpha|)`.
pub fn bosonic_asymptotic(alpha: C64) -> f64 {
    1.0 - 1.0 / (2.0 * std::f64::consts::PI.sqrt() * alpha.norm())
}

/// Displacement `sqrt(j/2) Omega t` matching a spin of length `j` near `|-j>`.
pub fn spin_to_boson_alpha(j: SpinLength, omega: f64, t: f64) -> C64 {
    C64::new((j.value() / 2.0).sqrt() * omega * t, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::witness_value;

    fn oracle_closed_form(lambda: f64) -> f64 {
        // e^{-2 lambda} sum_n lambda^{2n} / (n!)^2, i.e. the sum of squared
        // Poisson weights, with factorials carried explicitly
        let mut sum = 0.0;
        let mut fact = 1.0;
        for n in 0..120 {
            if n > 0 {
                fact *= n as f64;
            }
            sum += (lambda.powi(n) / fact).powi(2);
        }
        1.0 - (-2.0 * lambda).exp() * sum
    }

    fn simulate(alpha: C64, n: usize) -> f64 {
        let s = bosonic_scenario(&BosonicParams::new(alpha, n).unwrap()).unwrap();
        witness_value(&s.scenario).unwrap().witness
    }

    #[test]
    fn zero_displacement() {
        assert_eq!(bosonic_closed_form(C64::new(0.0, 0.0)), 0.0);
        assert!(simulate(C64::new(0.0, 0.0), 8) < 1e-15);
    }

    #[test]
    fn unit_displacement_matches_series() {
        let alpha = C64::new(1.0, 0.0);
        let oracle = oracle_closed_form(1.0);
        assert!((bosonic_closed_form(alpha) - oracle).abs() < 1e-14);
        assert!((simulate(alpha, 64) - oracle).abs() < 1e-8);
        // the phase of alpha does not matter
        assert!((simulate(C64::from_polar(1.0, 0.7), 64) - oracle).abs() < 1e-8);
    }

    #[test]
    fn large_displacement() {
        let alpha = C64::new(3.0, 0.0);
        let closed = bosonic_closed_form(alpha);
        assert!((closed - oracle_closed_form(9.0)).abs() < 1e-12);
        assert!((simulate(alpha, 64) - closed).abs() < 1e-6);
        assert!((closed - bosonic_asymptotic(alpha)).abs() < 0.1 / 9.0);
        assert!(1.0 - bosonic_closed_form(C64::new(40.0, 0.0)) < 0.01);
    }

    #[test]
    fn closed_form_is_nondecreasing() {
        let values: Vec<f64> = (0..=500)
            .map(|k| bosonic_closed_form(C64::new(k as f64 * 0.01, 0.0)))
            .collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn alpha_identification() {
        let a = spin_to_boson_alpha(SpinLength::new(2.0).unwrap(), 1.0, 1.0);
        assert_eq!(a, C64::new(1.0, 0.0));
        let a = spin_to_boson_alpha(SpinLength::new(50.0).unwrap(), 0.2, 1.0);
        assert!((a.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncation_warning() {
        let alpha = C64::new(3.0, 0.0);
        let small = bosonic_scenario(&BosonicParams::new(alpha, 12).unwrap()).unwrap();
        assert!(small.truncation_deficit > 0.1);
        assert!(small.warning(12).is_some());
        let big = bosonic_scenario(&BosonicParams::new(alpha, 160).unwrap()).unwrap();
        assert!(big.truncation_deficit < 1e-30);
        assert!(big.warning(160).is_none());
        // below the heuristic cutoff but with a negligible tail
        let ok = bosonic_scenario(&BosonicParams::new(alpha, 64).unwrap()).unwrap();
        assert!(ok.warning(64).is_none());
        assert!(BosonicParams::new(alpha, 1).is_err());
    }

    #[test]
    fn poisson_tail_matches_direct_sum() {
        let lambda: f64 = 4.0;
        let mut head = 0.0;
        let mut w = (-lambda).exp();
        for n in 0..10 {
            if n > 0 {
                w *= lambda / n as f64;
            }
            head += w;
        }
        let tail = poisson_tail(C64::new(2.0, 0.0), 10);
        assert!((tail - (1.0 - head)).abs() < 1e-14);
    }
}
