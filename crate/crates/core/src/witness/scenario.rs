use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::ComplexMatrix;

use super::bounds::{dimension_bound, theoretical_bound};
use super::channel::Channel;
use super::metrics::{linear_entropy, trace_distance};
use super::state::{DensityMatrix, MeasurementSet, Projector};

/// Initial state, blind measurement, channel and final projector.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessScenario {
    initial: DensityMatrix,
    blind: MeasurementSet,
    channel: Channel,
    final_projector: Projector,
}

impl WitnessScenario {
    pub fn new(
        initial: DensityMatrix,
        blind: MeasurementSet,
        channel: Channel,
        final_projector: Projector,
    ) -> Result<Self> {
        let n = initial.dim();
        if blind.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: blind.dim(),
            });
        }
        channel.ensure_dim(n)?;
        if final_projector.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: final_projector.dim(),
            });
        }
        if final_projector.rank() >= n {
            return Err(Error::Invariant(format!(
                "final projector rank must be at most N - 1 = {}, got {}",
                n - 1,
                final_projector.rank()
            )));
        }
        Ok(Self {
            initial,
            blind,
            channel,
            final_projector,
        })
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.initial
    }

    pub fn blind(&self) -> &MeasurementSet {
        &self.blind
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn final_projector(&self) -> &Projector {
        &self.final_projector
    }

    pub fn with_channel(&self, channel: Channel) -> Result<Self> {
        Self::new(
            self.initial.clone(),
            self.blind.clone(),
            channel,
            self.final_projector.clone(),
        )
    }
}

/// Everything computed for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub dim: usize,
    #[serde(rename = "M")]
    pub outcomes: usize,
    /// `|P(b) - P'(b)|`
    #[serde(rename = "W")]
    pub witness: f64,
    /// `P(b)` without the blind measurement.
    pub probability_direct: f64,
    /// `P'(b)` with the blind measurement.
    pub probability_blind: f64,
    #[serde(rename = "bound_M")]
    pub bound: f64,
    /// `D(rho, sigma)` at the blind measurement.
    pub trace_distance_t0: f64,
    /// `D(Phi[rho], Phi[sigma])` at the final measurement.
    pub trace_distance_t: f64,
    pub linear_entropy_sigma: f64,
    pub dimension_bound: usize,
}

impl WitnessReport {
    /// `W <= D_t <= D_0` and `W <= 1 - 1/M`, each with `slack`.
    pub fn invariants_hold(&self, slack: f64) -> bool {
        (0.0..=1.0).contains(&self.witness)
            && self.witness <= self.trace_distance_t + slack
            && self.trace_distance_t <= self.trace_distance_t0 + slack
            && self.witness <= self.bound + slack
    }
}

/// `sigma = sum_i P_i rho P_i`
pub fn blind_measure(rho: &DensityMatrix, a: &MeasurementSet) -> Result<DensityMatrix> {
    rho.ensure_dim(a.dim())?;
    let n = rho.dim();
    let mut sigma = ComplexMatrix::zeros(n, n);
    for p in a.projectors() {
        sigma = &sigma + &p.matrix().conjugate(rho.matrix());
    }
    Ok(DensityMatrix::from_channel_output(sigma))
}

/// `tr(P^b Phi[rho])`, clamped to `[0, 1]`.
pub fn outcome_probability(rho: &DensityMatrix, phi: &Channel, pb: &Projector) -> Result<f64> {
    rho.ensure_dim(pb.dim())?;
    let evolved = phi.apply(rho)?;
    Ok(pb.expectation(evolved.matrix()).clamp(0.0, 1.0))
}

pub fn witness_value(s: &WitnessScenario) -> Result<WitnessReport> {
    let sigma = blind_measure(&s.initial, &s.blind)?;
    let rho_t = s.channel.apply(&s.initial)?;
    let sigma_t = s.channel.apply(&sigma)?;
    let p_direct = s
        .final_projector
        .expectation(rho_t.matrix())
        .clamp(0.0, 1.0);
    let p_blind = s
        .final_projector
        .expectation(sigma_t.matrix())
        .clamp(0.0, 1.0);
    let witness = (p_direct - p_blind).abs();
    let outcomes = s.blind.len();
    Ok(WitnessReport {
        dim: s.dim(),
        outcomes,
        witness,
        probability_direct: p_direct,
        probability_blind: p_blind,
        bound: theoretical_bound(outcomes)?,
        trace_distance_t0: trace_distance(&s.initial, &sigma)?,
        trace_distance_t: trace_distance(&rho_t, &sigma_t)?,
        linear_entropy_sigma: linear_entropy(&sigma),
        dimension_bound: dimension_bound(witness)?,
    })
}

/// `W` alone, skipping the trace distances.
pub fn witness_only(s: &WitnessScenario) -> Result<f64> {
    let sigma = blind_measure(&s.initial, &s.blind)?;
    let p_direct = outcome_probability(&s.initial, &s.channel, &s.final_projector)?;
    let p_blind = outcome_probability(&sigma, &s.channel, &s.final_projector)?;
    Ok((p_direct - p_blind).abs())
}
