//! Seeded property suites over random scenarios.
//!
//! Each suite draws its cases from independent ChaCha streams, so reports do
//! not depend on the thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::random::{
    haar_state, haar_unitary, random_density, random_kraus_scenario, random_measurement,
    random_scenario, task_rng,
};
use crate::qcore::matrix::C64;
use crate::qcore::ComplexMatrix;
use crate::witness::{
    blind_measure, linear_entropy, optimal_final_projector, trace_distance, witness_only,
    witness_value, Channel, DensityMatrix, Projector, WitnessScenario,
};

/// Absolute slack for every inequality checked here.
pub const SLACK: f64 = 1e-12;
/// Slack on the positivity of blind-measured states.
pub const POSITIVITY_SLACK: f64 = 1e-10;
const MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Bound,
    Contractivity,
    Convexity,
    Idempotence,
    Entropy,
    Projector,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Bound,
        Suite::Contractivity,
        Suite::Convexity,
        Suite::Idempotence,
        Suite::Entropy,
        Suite::Projector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bound => "bound",
            Suite::Contractivity => "contractivity",
            Suite::Convexity => "convexity",
            Suite::Idempotence => "idempotence",
            Suite::Entropy => "entropy",
            Suite::Projector => "projector",
        }
    }

    /// Distinct ChaCha stream block per suite.
    fn stream_base(self) -> u64 {
        (self as u64 + 1) << 40
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bound" => Ok(Suite::Bound),
            "contractivity" | "chain" => Ok(Suite::Contractivity),
            "convexity" => Ok(Suite::Convexity),
            "idempotence" => Ok(Suite::Idempotence),
            "entropy" => Ok(Suite::Entropy),
            "projector" => Ok(Suite::Projector),
            other => Err(Error::Domain(format!(
                "unknown suite `{other}`; expected one of bound, contractivity, convexity, idempotence, entropy, projector"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub suites: Vec<Suite>,
    /// Cases per suite.
    pub n: usize,
    /// Additional operator-sum channel cases in the contractivity suite.
    pub kraus_cases: usize,
    pub seed: u64,
    /// Doubles every `D(Phi rho, Phi sigma)`; exists to prove the suites can fail.
    pub inject_trace_distance_bug: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            suites: Suite::ALL.to_vec(),
            n: 1000,
            kraus_cases: 200,
            seed: 0,
            inject_trace_distance_bug: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub count: usize,
    pub violations: usize,
    /// Smallest `allowed - observed` over all inequalities; negative on failure.
    pub worst_margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

/// Per-case outcome: the margins of each inequality checked.
struct Case {
    margins: Vec<f64>,
}

impl Case {
    fn of(margins: Vec<f64>) -> Self {
        Self { margins }
    }

    fn violated(&self) -> bool {
        self.margins.iter().any(|&m| m < 0.0 || m.is_nan())
    }

    fn worst(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn summarize(suite: Suite, cases: Vec<Case>) -> SuiteReport {
    let violations = cases.iter().filter(|c| c.violated()).count();
    let worst_margin = cases.iter().map(Case::worst).fold(f64::INFINITY, f64::min);
    SuiteReport {
        name: suite.name(),
        count: cases.len(),
        violations,
        worst_margin: if cases.is_empty() { 0.0 } else { worst_margin },
        passed: violations == 0,
    }
}

/// All `(N, M)` with `2 <= M <= N <= MAX_DIM`, cycled by case index.
pub fn dims_for_case(index: usize) -> (usize, usize) {
    let pairs: Vec<(usize, usize)> = (2..=MAX_DIM)
        .flat_map(|n| (2..=n).map(move |m| (n, m)))
        .collect();
    pairs[index % pairs.len()]
}

fn case_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index as u64)
}

/// Scenario `index` of the shared random suite (unitary channels).
pub fn suite_scenario(seed: u64, index: usize) -> Result<WitnessScenario> {
    let (n, m) = dims_for_case(index);
    random_scenario(n, m, case_seed(seed, index))
}

/// Scenario `index` of the operator-sum suite.
pub fn kraus_suite_scenario(seed: u64, index: usize) -> Result<WitnessScenario> {
    let (n, m) = dims_for_case(index);
    random_kraus_scenario(n, m, 2 + index % 3, case_seed(seed, index))
}

fn bound_case(seed: u64, i: usize) -> Result<Case> {
    let s = suite_scenario(seed, i)?;
    let r = witness_value(&s)?;
    Ok(Case::of(vec![r.bound + SLACK - r.witness, r.witness]))
}

fn chain_case(s: &WitnessScenario, inject: bool) -> Result<Case> {
    let r = witness_value(s)?;
    let d_t = if inject {
        2.0 * r.trace_distance_t
    } else {
        r.trace_distance_t
    };
    Ok(Case::of(vec![
        d_t + SLACK - r.witness,
        r.trace_distance_t0 + SLACK - d_t,
    ]))
}

/// Joint convexity: `D(sum p rho_k, sum p sigma_k) <= sum p D(rho_k, sigma_k)`
/// for pure `rho_k` and mixed `sigma_k`.
fn convexity_case(seed: u64, i: usize) -> Result<Case> {
    let mut rng = task_rng(seed, Suite::Convexity.stream_base() + i as u64);
    let (n, _) = dims_for_case(i);
    let k = 2 + i % 4;
    let raw: Vec<f64> = (0..k)
        .map(|_| rand::Rng::random_range(&mut rng, 0.05..1.0))
        .collect();
    let total: f64 = raw.iter().sum();
    let mut mix_rho = ComplexMatrix::zeros(n, n);
    let mut mix_sigma = ComplexMatrix::zeros(n, n);
    let mut rhs = 0.0;
    for w in raw {
        let p = w / total;
        let rho = DensityMatrix::pure(&haar_state(n, &mut rng))?;
        let sigma = random_density(n, &mut rng);
        rhs += p * trace_distance(&rho, &sigma)?;
        mix_rho = &mix_rho + &rho.matrix().scale_real(p);
        mix_sigma = &mix_sigma + &sigma.matrix().scale_real(p);
    }
    let lhs = trace_distance(
        &DensityMatrix::new(mix_rho.hermitian_part())?,
        &DensityMatrix::new(mix_sigma.hermitian_part())?,
    )?;
    Ok(Case::of(vec![rhs + SLACK - lhs]))
}

/// Blind measurement is idempotent, trace preserving, positive, and commutes
/// with every blind projector.
fn idempotence_case(seed: u64, i: usize) -> Result<Case> {
    let mut rng = task_rng(seed, Suite::Idempotence.stream_base() + i as u64);
    let (n, m) = dims_for_case(i);
    let rho = random_density(n, &mut rng);
    let a = random_measurement(n, m, &mut rng)?;
    let sigma = blind_measure(&rho, &a)?;
    let twice = blind_measure(&sigma, &a)?;
    let mut margins = vec![
        SLACK - twice.matrix().max_abs_diff(sigma.matrix()),
        SLACK - (sigma.matrix().trace() - C64::new(1.0, 0.0)).norm(),
        sigma.eig().eigenvalues[0] + POSITIVITY_SLACK,
    ];
    for p in a.projectors() {
        margins.push(SLACK - sigma.matrix().commutator(p.matrix()).max_abs());
    }
    Ok(Case::of(margins))
}

/// Pure `rho`, identity channel and `P^b = rho`: `W = 1 - tr(sigma^2)`.
fn entropy_case(seed: u64, i: usize) -> Result<Case> {
    let mut rng = task_rng(seed, Suite::Entropy.stream_base() + i as u64);
    let (n, m) = dims_for_case(i);
    let psi = haar_state(n, &mut rng);
    let rho = DensityMatrix::pure(&psi)?;
    let a = random_measurement(n, m, &mut rng)?;
    let sigma = blind_measure(&rho, &a)?;
    let s = WitnessScenario::new(rho, a, Channel::Identity, Projector::onto_state(&psi)?)?;
    let w = witness_only(&s)?;
    Ok(Case::of(vec![SLACK - (w - linear_entropy(&sigma)).abs()]))
}

/// Random projectors sampled per case in the projector suite.
pub const PROJECTOR_SAMPLES: usize = 50;

/// The positive-eigenspace projector attains the trace distance, and random
/// projectors never beat it.
fn projector_case(seed: u64, i: usize) -> Result<Case> {
    let mut rng = task_rng(seed, Suite::Projector.stream_base() + i as u64);
    let n = 2 + i % 5;
    let rho = random_density(n, &mut rng);
    let sigma = random_density(n, &mut rng);
    let d = trace_distance(&rho, &sigma)?;
    let (_, value) = optimal_final_projector(&rho, &sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let mut sampled = f64::NEG_INFINITY;
    for k in 0..PROJECTOR_SAMPLES {
        let u = haar_unitary(n, &mut rng);
        let rank = 1 + k % (n - 1);
        let cols: Vec<Vec<C64>> = (0..rank).map(|c| u.column(c)).collect();
        let p = Projector::onto_vectors(&cols)?;
        sampled = sampled.max(p.matrix().trace_product(&diff).re);
    }
    Ok(Case::of(vec![
        SLACK - (value - d).abs(),
        value + SLACK - sampled,
    ]))
}

fn collect(
    range: std::ops::Range<usize>,
    f: impl Fn(usize) -> Result<Case> + Sync + Send,
) -> Result<Vec<Case>> {
    range.into_par_iter().map(f).collect()
}

pub fn run_suite(suite: Suite, opts: &CheckOptions) -> Result<SuiteReport> {
    let seed = opts.seed;
    let n = opts.n;
    let cases = match suite {
        Suite::Bound => collect(0..n, |i| bound_case(seed, i))?,
        Suite::Contractivity => {
            let inject = opts.inject_trace_distance_bug;
            let mut cases = collect(0..n, |i| chain_case(&suite_scenario(seed, i)?, inject))?;
            cases.extend(collect(0..opts.kraus_cases, |i| {
                chain_case(&kraus_suite_scenario(seed, i)?, inject)
            })?);
            cases
        }
        Suite::Convexity => collect(0..n, |i| convexity_case(seed, i))?,
        Suite::Idempotence => collect(0..n, |i| idempotence_case(seed, i))?,
        Suite::Entropy => collect(0..n, |i| entropy_case(seed, i))?,
        Suite::Projector => collect(0..n, |i| projector_case(seed, i))?,
    };
    Ok(summarize(suite, cases))
}

pub fn run_checks(opts: &CheckOptions) -> Result<CheckReport> {
    let suites = opts
        .suites
        .iter()
        .map(|&s| run_suite(s, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport {
        seed: opts.seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}
