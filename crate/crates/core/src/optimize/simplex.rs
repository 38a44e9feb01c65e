//! Bounded Nelder-Mead maximization with deterministic multi-restart.

use std::cmp::Ordering;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::random::task_rng;
use super::space::ParamSpace;

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
/// Initial simplex edge as a fraction of each parameter's range.
const INITIAL_STEP: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    /// Every improvement of the best vertex, in order.
    pub trace: Vec<(Vec<f64>, f64)>,
}

#[derive(Clone)]
struct Vertex {
    /// Unwrapped coordinates the simplex moves in.
    x: Vec<f64>,
    /// Projected point that was evaluated.
    at: Vec<f64>,
    value: f64,
}

struct Objective<'a, F> {
    evaluator: &'a F,
    space: &'a ParamSpace,
    evaluations: usize,
}

impl<F: Fn(&[f64]) -> f64> Objective<'_, F> {
    fn vertex(&mut self, x: Vec<f64>) -> Vertex {
        // bounded coordinates are clamped in place; periodic ones only when
        // evaluated, so the simplex does not tear across the period boundary
        let x: Vec<f64> = self
            .space
            .params()
            .iter()
            .zip(x)
            .map(|(p, v)| {
                if p.periodic {
                    v
                } else {
                    v.clamp(p.lower, p.upper)
                }
            })
            .collect();
        let at = self.space.project(&x);
        let mut value = (self.evaluator)(&at);
        if value.is_nan() {
            value = f64::NEG_INFINITY;
        }
        self.evaluations += 1;
        Vertex { x, at, value }
    }
}

/// Higher value first, then the earlier vertex.
fn by_value_desc(a: &Vertex, b: &Vertex) -> Ordering {
    b.value.partial_cmp(&a.value).unwrap_or(Ordering::Equal)
}

fn diameter(simplex: &[Vertex]) -> f64 {
    let best = &simplex[0].x;
    simplex[1..]
        .iter()
        .map(|v| {
            v.x.iter()
                .zip(best)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

fn affine(from: &[f64], to: &[f64], t: f64) -> Vec<f64> {
    from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
}

/// Maximizes `evaluator` from `start` until the simplex diameter falls below
/// `tol` or `max_iter` iterations have run. The best value never decreases
/// from one iteration to the next.
pub fn local_search<F>(
    evaluator: F,
    space: &ParamSpace,
    start: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64,
{
    if !space.contains(start) {
        return Err(Error::Domain(format!(
            "start {start:?} lies outside the parameter space"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut obj = Objective {
        evaluator: &evaluator,
        space,
        evaluations: 0,
    };
    let n = space.dim();
    let mut simplex = Vec::with_capacity(n + 1);
    simplex.push(obj.vertex(start.to_vec()));
    for (i, p) in space.params().iter().enumerate() {
        let step = INITIAL_STEP * p.width();
        let mut x = start.to_vec();
        x[i] += if p.periodic || x[i] + step <= p.upper {
            step
        } else {
            -step
        };
        simplex.push(obj.vertex(x));
    }
    simplex.sort_by(by_value_desc);

    let mut trace = vec![(simplex[0].at.clone(), simplex[0].value)];
    let mut iterations = 0;
    while iterations < max_iter && diameter(&simplex) >= tol {
        iterations += 1;
        let worst = simplex[n].clone();
        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|v| v.x[d]).sum::<f64>() / n as f64)
            .collect();

        let reflected = obj.vertex(affine(&centroid, &worst.x, -REFLECT));
        let replacement = if reflected.value > simplex[0].value {
            let expanded = obj.vertex(affine(&centroid, &reflected.x, EXPAND));
            Some(if expanded.value > reflected.value {
                expanded
            } else {
                reflected
            })
        } else if reflected.value > simplex[n - 1].value {
            Some(reflected)
        } else if reflected.value > worst.value {
            let outside = obj.vertex(affine(&centroid, &reflected.x, CONTRACT));
            (outside.value >= reflected.value).then_some(outside)
        } else {
            let inside = obj.vertex(affine(&centroid, &worst.x, CONTRACT));
            (inside.value > worst.value).then_some(inside)
        };

        match replacement {
            Some(v) => simplex[n] = v,
            None => {
                let best = simplex[0].x.clone();
                for v in simplex.iter_mut().skip(1) {
                    *v = obj.vertex(affine(&best, &v.x, SHRINK));
                }
            }
        }
        simplex.sort_by(by_value_desc);
        if simplex[0].value > trace.last().map_or(f64::NEG_INFINITY, |t| t.1) {
            trace.push((simplex[0].at.clone(), simplex[0].value));
        }
    }

    let best = &simplex[0];
    Ok(OptResult {
        best_params: best.at.clone(),
        best_value: best.value,
        evaluations: obj.evaluations,
        iterations,
        trace,
    })
}

/// Larger value first; equal values ordered by the lexicographically smaller
/// parameter vector.
pub fn better(a: &OptResult, b: &OptResult) -> Ordering {
    b.best_value
        .partial_cmp(&a.best_value)
        .unwrap_or(Ordering::Equal)
        .then_with(|| {
            a.best_params
                .iter()
                .zip(&b.best_params)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

/// Uniform starting points, one ChaCha stream per restart.
pub fn random_starts(space: &ParamSpace, count: usize, seed: u64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|k| {
            let mut rng = task_rng(seed, k as u64);
            space
                .params()
                .iter()
                .map(|p| {
                    if p.width() > 0.0 {
                        rng.random_range(p.lower..=p.upper)
                    } else {
                        p.lower
                    }
                })
                .collect()
        })
        .collect()
}

/// Runs [`local_search`] from every start (in parallel) and returns all runs
/// sorted best first. Serial and parallel execution give the same order.
pub fn multi_restart<F>(
    evaluator: F,
    space: &ParamSpace,
    starts: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<OptResult>>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mut runs = starts
        .par_iter()
        .map(|s| local_search(&evaluator, space, s, tol, max_iter))
        .collect::<Result<Vec<_>>>()?;
    runs.sort_by(better);
    Ok(runs)
}
