//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints its own PASS/FAIL line; exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::{Duration, Instant};

use qwitness::checks::{kraus_suite_scenario, run_suite, suite_scenario, CheckOptions, Suite};
use qwitness::models::{
    bosonic_asymptotic, bosonic_closed_form, bosonic_scenario, controlled_closed_form,
    controlled_scenario, large_spin_gap, precessing_spin_scenario, qubit_closed_form,
    BlindGrouping, BosonicParams, ControlledEvolutionParams, PrecessingSpinParams,
};
use qwitness::optimize::{
    grid_scan, grid_value, local_search, verify_spin1_ceiling, Param, ParamSpace,
};
use qwitness::qcore::C64;
use qwitness::witness::{dimension_bound, saturating_scenario, witness_value};

type Check = Result<String, String>;

struct Criterion {
    id: &'static str,
    title: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn spin_witness(j: f64, theta: f64, tau: f64) -> f64 {
    let p = PrecessingSpinParams::new(j, theta, 1.0, tau).unwrap();
    witness_value(&precessing_spin_scenario(&p, &BlindGrouping::VonNeumann).unwrap())
        .unwrap()
        .witness
}

fn qubit_closed_form_agreement() -> Check {
    let mut worst = 0.0f64;
    let mut peak = 0.0f64;
    for k in 0..1000 {
        let t = grid_value(0.0, 2.0 * PI, 1000, k);
        let w = spin_witness(0.5, 0.0, t);
        worst = worst.max((w - qubit_closed_form(1.0, t)).abs());
        peak = peak.max(w);
    }
    let at_quarter = spin_witness(0.5, 0.0, FRAC_PI_2);
    ensure(
        worst < 1e-12 && peak <= 0.5 + 1e-12 && (at_quarter - 0.5).abs() < 1e-12,
        format!("max deviation {worst:.2e}, sampled max {peak:.15}, W(pi/2) = {at_quarter:.15}"),
    )
}

fn fig1_reproduction() -> Check {
    let thetas = [0.0, PI / 8.0, FRAC_PI_4, 3.0 * PI / 8.0, FRAC_PI_2];
    let space = ParamSpace::new(vec![Param::bounded("omega_tau", 0.0, 2.0 * PI)]).unwrap();
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    let mut overall = f64::NEG_INFINITY;
    for theta in thetas {
        let scan = grid_scan(|x| spin_witness(1.0, theta, x[0]), &space, &[401]).unwrap();
        let b = scan.best();
        overall = overall.max(b.value);
        if b.value > best.2 {
            best = (theta, b.params[0], b.value);
        }
    }
    let (theta, tau, w) = best;
    ensure(
        (w - 0.625).abs() <= 1e-9
            && (theta - FRAC_PI_4).abs() < 1e-15
            && (tau - PI).abs() < 1e-12
            && overall <= 2.0 / 3.0,
        format!("max W = {w:.15} at theta = {theta:.6}, omega_tau = {tau:.6}"),
    )
}

/// Distance from `phi` to the nearest of `3pi/4 + k pi/2`; the closed form is
/// invariant under `phi -> phi + pi/2`.
fn phi_offset(phi: f64) -> f64 {
    let r = (phi - 3.0 * FRAC_PI_4).rem_euclid(FRAC_PI_2);
    r.min(FRAC_PI_2 - r)
}

fn fig2_reproduction() -> Check {
    let space = ParamSpace::new(vec![
        Param::bounded("theta", 0.0, PI),
        Param::bounded("phi", 0.0, PI),
    ])
    .unwrap();
    let params = |x: &[f64]| ControlledEvolutionParams {
        theta: x[0],
        phi: x[1],
    };
    let diff = grid_scan(
        |x| {
            let p = params(x);
            let sim = witness_value(&controlled_scenario(&p).unwrap())
                .unwrap()
                .witness;
            (sim - controlled_closed_form(&p)).abs()
        },
        &space,
        &[400, 400],
    )
    .unwrap();
    let max_diff = diff.best().value;

    let closed = |x: &[f64]| controlled_closed_form(&params(x));
    let scan = grid_scan(closed, &space, &[400, 400]).unwrap();
    let grid_best = scan.best().clone();
    let refined = local_search(closed, &space, &grid_best.params, 1e-12, 10_000).unwrap();
    let (theta, phi) = (refined.best_params[0], refined.best_params[1]);
    let theta_star = (2.0f64 / 3.0).sqrt().acos();
    let cell = PI / 399.0;
    ensure(
        max_diff < 1e-12
            && (refined.best_value - 2.0 / 3.0).abs() <= 1e-6
            && grid_best.value <= 2.0 / 3.0 + 1e-15
            && (theta - theta_star).abs() < 1e-4
            && phi_offset(phi) < 1e-4
            && (grid_best.params[0] - theta_star).abs() < cell
            && phi_offset(grid_best.params[1]) < cell,
        format!(
            "max |sim - closed| = {max_diff:.2e}; grid max {:.10} at ({:.4}, {:.4}); refined {:.15} at ({theta:.6}, {phi:.6})",
            grid_best.value, grid_best.params[0], grid_best.params[1], refined.best_value
        ),
    )
}

fn bosonic_curve() -> Check {
    let mut worst_sim = 0.0f64;
    for k in 0..61 {
        let a = C64::new(grid_value(0.0, 3.0, 61, k), 0.0);
        let s = bosonic_scenario(&BosonicParams::new(a, 64).unwrap()).unwrap();
        let w = witness_value(&s.scenario).unwrap().witness;
        worst_sim = worst_sim.max((w - bosonic_closed_form(a)).abs());
    }
    let mut worst_ratio = 0.0f64;
    for k in 0..61 {
        let r = grid_value(3.0, 6.0, 61, k);
        let a = C64::new(r, 0.0);
        let gap = (bosonic_asymptotic(a) - bosonic_closed_form(a)).abs();
        worst_ratio = worst_ratio.max(gap * r * r / 0.1);
    }
    ensure(
        worst_sim < 1e-6 && worst_ratio <= 1.0,
        format!(
            "max |sim - closed| = {worst_sim:.2e} on [0, 3]; max asymptotic gap = {worst_ratio:.3} x 0.1/|alpha|^2 on [3, 6]"
        ),
    )
}

fn bound_saturation() -> Check {
    let mut worst = 0.0f64;
    for (n, m) in [(2, 2), (3, 3), (4, 2), (4, 4), (8, 8), (12, 12)] {
        let w = witness_value(&saturating_scenario(n, m).unwrap())
            .unwrap()
            .witness;
        worst = worst.max((w - (1.0 - 1.0 / m as f64)).abs());
    }
    ensure(worst < 1e-12, format!("max |W - (1 - 1/M)| = {worst:.2e}"))
}

const SUITE_SEED: u64 = 0;
const SUITE_SIZE: usize = 1000;
const KRAUS_SIZE: usize = 200;

fn bound_suite() -> Check {
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut dims = std::collections::BTreeSet::new();
    for i in 0..SUITE_SIZE {
        let s = suite_scenario(SUITE_SEED, i).unwrap();
        let r = witness_value(&s).unwrap();
        dims.insert((r.dim, r.outcomes));
        let margin = r.bound + 1e-12 - r.witness;
        worst = worst.min(margin);
        if margin < 0.0 {
            violations += 1;
        }
    }
    ensure(
        violations == 0 && dims.len() == 28,
        format!("{SUITE_SIZE} scenarios over {} (N, M) pairs, {violations} violations, smallest margin {worst:.3e}", dims.len()),
    )
}

fn trace_distance_chain() -> Check {
    let mut violations = 0;
    let mut count = 0;
    let mut check = |s: qwitness::witness::WitnessScenario| {
        let r = witness_value(&s).unwrap();
        count += 1;
        if r.witness > r.trace_distance_t + 1e-12
            || r.trace_distance_t > r.trace_distance_t0 + 1e-12
        {
            violations += 1;
        }
    };
    for i in 0..SUITE_SIZE {
        check(suite_scenario(SUITE_SEED, i).unwrap());
    }
    for i in 0..KRAUS_SIZE {
        check(kraus_suite_scenario(SUITE_SEED, i).unwrap());
    }
    ensure(
        violations == 0,
        format!("{count} scenarios ({KRAUS_SIZE} operator-sum), {violations} violations"),
    )
}

fn suite_check(suite: Suite, n: usize) -> Check {
    let opts = CheckOptions {
        suites: vec![suite],
        n,
        seed: SUITE_SEED,
        ..CheckOptions::default()
    };
    let r = run_suite(suite, &opts).unwrap();
    ensure(
        r.passed && r.count == n,
        format!(
            "{} cases, {} violations, smallest margin {:.3e}",
            r.count, r.violations, r.worst_margin
        ),
    )
}

fn entropy_identity() -> Check {
    suite_check(Suite::Entropy, 100)
}

fn optimal_projector() -> Check {
    suite_check(Suite::Projector, 200)
}

fn dimension_witness() -> Check {
    let wrong: Vec<usize> = (2..=12)
        .filter(|&n| {
            let w = witness_value(&saturating_scenario(n, n).unwrap())
                .unwrap()
                .witness;
            dimension_bound(w).unwrap() != n
        })
        .collect();
    ensure(
        wrong.is_empty(),
        format!("N = 2..=12, mismatches at {wrong:?}"),
    )
}

fn large_spin_trend() -> Check {
    let gaps: Vec<f64> = [10.0, 20.0, 40.0]
        .iter()
        .map(|&j| large_spin_gap(j, 1.0).unwrap())
        .collect();
    ensure(
        gaps[0] > gaps[1] && gaps[1] > gaps[2],
        format!(
            "gap at alpha = 1 for j = 10, 20, 40: {:.3e}, {:.3e}, {:.3e}",
            gaps[0], gaps[1], gaps[2]
        ),
    )
}

fn spin1_ceiling() -> Check {
    let r = verify_spin1_ceiling(50, 1e-6, 0).unwrap();
    let best = r.best_value.unwrap_or(f64::NAN);
    ensure(
        r.passed && (best - 0.625).abs() < 1e-6,
        format!(
            "[{}] best over {} restarts = {best:.15} ({} evaluations)",
            r.grade, r.restarts, r.evaluations
        ),
    )
}

fn main() {
    let criteria = [
        Criterion {
            id: "1",
            title: "qubit closed form",
            limit: Duration::from_secs(1),
            run: qubit_closed_form_agreement,
        },
        Criterion {
            id: "2",
            title: "spin-1 scan peak",
            limit: Duration::from_secs(10),
            run: fig1_reproduction,
        },
        Criterion {
            id: "3",
            title: "controlled evolution grid",
            limit: Duration::from_secs(30),
            run: fig2_reproduction,
        },
        Criterion {
            id: "4",
            title: "bosonic curve",
            limit: Duration::from_secs(20),
            run: bosonic_curve,
        },
        Criterion {
            id: "5",
            title: "bound saturation",
            limit: Duration::from_secs(1),
            run: bound_saturation,
        },
        Criterion {
            id: "6",
            title: "bound property suite",
            limit: Duration::from_secs(60),
            run: bound_suite,
        },
        Criterion {
            id: "7",
            title: "trace-distance chain",
            limit: Duration::from_secs(60),
            run: trace_distance_chain,
        },
        Criterion {
            id: "8",
            title: "linear entropy identity",
            limit: Duration::from_secs(5),
            run: entropy_identity,
        },
        Criterion {
            id: "9",
            title: "optimal projector",
            limit: Duration::from_secs(30),
            run: optimal_projector,
        },
        Criterion {
            id: "10",
            title: "dimension witness",
            limit: Duration::from_secs(1),
            run: dimension_witness,
        },
        Criterion {
            id: "11",
            title: "large-spin trend",
            limit: Duration::from_secs(60),
            run: large_spin_trend,
        },
        Criterion {
            id: "ceiling",
            title: "spin-1 ceiling search",
            limit: Duration::from_secs(60),
            run: spin1_ceiling,
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; runtime over {:?}", c.limit)),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>7} {:<26} {:>9.3}s  {detail}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            elapsed.as_secs_f64(),
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
