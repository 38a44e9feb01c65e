//! Numerical evidence for the 5/8 ceiling of the precessing spin-1 and for
//! saturation of the `1 - 1/M` bound.

use serde::Serialize;

use crate::error::Result;
use crate::models::{precessing_spin_scenario, BlindGrouping, PrecessingSpinParams};
use crate::qcore::matrix::{C64, ZERO};
use crate::witness::{
    balanced_partition, witness_only, Channel, DensityMatrix, MeasurementSet, Projector,
    WitnessScenario,
};

use super::simplex::{multi_restart, random_starts, OptResult};
use super::space::{Param, ParamSpace};

pub const SPIN1_CEILING: f64 = 0.625;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CeilingReport {
    /// Always `"evidence"`: a finite search cannot prove a supremum.
    pub grade: &'static str,
    pub restarts: usize,
    pub ceiling: f64,
    pub tol: f64,
    pub best_value: Option<f64>,
    /// `[theta, chi, omega_tau_before, omega_tau_after]`
    pub best_params: Option<Vec<f64>>,
    pub evaluations: usize,
    pub passed: bool,
}

/// Field direction `(theta, chi)` including a `Jy` component and independent
/// durations before and after the blind measurement, with `Omega = 1`.
pub fn spin1_space() -> ParamSpace {
    use std::f64::consts::{FRAC_PI_2, PI};
    ParamSpace::new(vec![
        Param::periodic("theta", 0.0, 2.0 * PI),
        Param::bounded("chi", -FRAC_PI_2, FRAC_PI_2),
        Param::bounded("omega_tau_before", 0.0, 2.0 * PI),
        Param::bounded("omega_tau_after", 0.0, 2.0 * PI),
    ])
    .expect("static bounds")
}

pub fn spin1_witness(x: &[f64]) -> f64 {
    let p = match PrecessingSpinParams::new(1.0, x[0], 1.0, x[2]) {
        Ok(p) => p.with_y_tilt(x[1]).with_second_duration(x[3]),
        Err(_) => return f64::NAN,
    };
    precessing_spin_scenario(&p, &BlindGrouping::VonNeumann)
        .and_then(|s| witness_only(&s))
        .unwrap_or(f64::NAN)
}

/// Multi-restart search over the spin-1 family. The first restart starts at
/// the known optimum `(pi/4, 0, pi, pi)`, the rest at seeded random points.
pub fn verify_spin1_ceiling(restarts: usize, tol: f64, seed: u64) -> Result<CeilingReport> {
    use std::f64::consts::{FRAC_PI_4, PI};
    let space = spin1_space();
    let mut starts = Vec::with_capacity(restarts);
    if restarts > 0 {
        starts.push(vec![FRAC_PI_4, 0.0, PI, PI]);
        starts.extend(random_starts(&space, restarts - 1, seed));
    }
    let runs = multi_restart(spin1_witness, &space, &starts, 1e-9, 20_000)?;
    let best: Option<&OptResult> = runs.first();
    let best_value = best.map(|r| r.best_value);
    Ok(CeilingReport {
        grade: "evidence",
        restarts,
        ceiling: SPIN1_CEILING,
        tol,
        best_value,
        best_params: best.map(|r| r.best_params.clone()),
        evaluations: runs.iter().map(|r| r.evaluations).sum(),
        passed: best_value.is_none_or(|v| v <= SPIN1_CEILING + tol),
    })
}

/// Witness of the bound-saturating family with free real amplitudes: one
/// amplitude per blind range, identity channel, `P^b = |phi><phi|`.
pub fn saturation_family(n: usize, m: usize) -> Result<impl Fn(&[f64]) -> f64 + Sync> {
    let groups = balanced_partition(n, m);
    let blind = MeasurementSet::from_basis_groups(n, &groups)?;
    Ok(move |x: &[f64]| {
        let mut phi = vec![ZERO; n];
        for (g, &a) in groups.iter().zip(x) {
            phi[g[0]] = C64::new(a, 0.0);
        }
        let build = || -> Result<f64> {
            let rho = DensityMatrix::pure_normalized(&phi)?;
            let pb = Projector::new(rho.matrix().clone())?;
            witness_only(&WitnessScenario::new(
                rho,
                blind.clone(),
                Channel::Identity,
                pb,
            )?)
        };
        build().unwrap_or(0.0)
    })
}

pub fn saturation_space(m: usize) -> ParamSpace {
    ParamSpace::new(
        (0..m)
            .map(|i| Param::bounded(&format!("amp{i}"), 0.0, 1.0))
            .collect(),
    )
    .expect("static bounds")
}
