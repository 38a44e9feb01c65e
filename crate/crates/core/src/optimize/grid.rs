use rayon::prelude::*;

use crate::error::{Error, Result};

use super::space::ParamSpace;

pub const MAX_GRID_POINTS: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub params: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridScan {
    /// Row-major over the parameters: the last parameter varies fastest.
    pub points: Vec<GridPoint>,
    pub argmax: usize,
}

impl GridScan {
    pub fn best(&self) -> &GridPoint {
        &self.points[self.argmax]
    }
}

/// `k`-th of `steps` evenly spaced values covering `[lower, upper]`.
pub fn grid_value(lower: f64, upper: f64, steps: usize, k: usize) -> f64 {
    if steps <= 1 {
        lower
    } else if k + 1 == steps {
        upper
    } else {
        lower + (upper - lower) * k as f64 / (steps - 1) as f64
    }
}

/// Evaluates on the full tensor grid, both endpoints included.
///
/// Ties for the maximum go to the lexicographically smallest parameter
/// vector, which for ascending axes is the first in scan order.
pub fn grid_scan<F>(evaluator: F, space: &ParamSpace, steps: &[usize]) -> Result<GridScan>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if steps.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: steps.len(),
        });
    }
    if steps.contains(&0) {
        return Err(Error::Domain(
            "grid needs at least one step per axis".into(),
        ));
    }
    let total = steps
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .filter(|&t| t <= MAX_GRID_POINTS)
        .ok_or_else(|| Error::Domain(format!("grid {steps:?} exceeds {MAX_GRID_POINTS} points")))?;

    let axes: Vec<Vec<f64>> = space
        .params()
        .iter()
        .zip(steps)
        .map(|(p, &s)| (0..s).map(|k| grid_value(p.lower, p.upper, s, k)).collect())
        .collect();

    let points: Vec<GridPoint> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rem = flat;
            let mut params = vec![0.0; axes.len()];
            for d in (0..axes.len()).rev() {
                params[d] = axes[d][rem % steps[d]];
                rem /= steps[d];
            }
            let value = evaluator(&params);
            GridPoint { params, value }
        })
        .collect();

    let mut argmax = 0;
    for (i, p) in points.iter().enumerate() {
        if p.value > points[argmax].value || points[argmax].value.is_nan() {
            argmax = i;
        }
    }
    Ok(GridScan { points, argmax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{controlled_closed_form, qubit_closed_form, ControlledEvolutionParams};
    use crate::optimize::space::Param;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn qubit_scan_peaks_at_quarter_period() {
        let space = ParamSpace::new(vec![Param::bounded("omega_t", 0.0, 2.0 * PI)]).unwrap();
        let scan = grid_scan(|x| qubit_closed_form(1.0, x[0]), &space, &[1000]).unwrap();
        let best = scan.best();
        // spacing 2 pi / 999 puts a node within half a step of pi/2
        let h = 2.0 * PI / 999.0;
        assert!((best.params[0] - FRAC_PI_2).abs() <= h / 2.0);
        assert!(0.5 - best.value < 0.5 * (h / 2.0).powi(2) + 1e-15);
        assert_eq!(scan.points.len(), 1000);
        assert_eq!(scan.points[999].params[0], 2.0 * PI);
    }

    #[test]
    fn controlled_scan_close_to_two_thirds() {
        let space = ParamSpace::new(vec![
            Param::bounded("theta", 0.0, PI),
            Param::bounded("phi", 0.0, PI),
        ])
        .unwrap();
        let scan = grid_scan(
            |x| {
                controlled_closed_form(&ControlledEvolutionParams {
                    theta: x[0],
                    phi: x[1],
                })
            },
            &space,
            &[400, 400],
        )
        .unwrap();
        let best = scan.best().value;
        assert!(best <= 2.0 / 3.0 + 1e-12);
        assert!(2.0 / 3.0 - best < 1e-5, "grid max {best}");
    }

    #[test]
    fn constant_evaluator_picks_first_point() {
        let space = ParamSpace::new(vec![
            Param::bounded("a", -1.0, 1.0),
            Param::bounded("b", 2.0, 3.0),
        ])
        .unwrap();
        let scan = grid_scan(|_| 7.0, &space, &[5, 3]).unwrap();
        assert_eq!(scan.argmax, 0);
        assert_eq!(scan.best().params, vec![-1.0, 2.0]);
        assert_eq!(scan.points[1].params, vec![-1.0, 2.5]);
    }

    #[test]
    fn oversized_or_malformed_grids() {
        let space = ParamSpace::new(vec![
            Param::bounded("a", 0.0, 1.0),
            Param::bounded("b", 0.0, 1.0),
        ])
        .unwrap();
        assert!(grid_scan(|_| 0.0, &space, &[100_000, 10_000]).is_err());
        assert!(grid_scan(|_| 0.0, &space, &[10]).is_err());
        assert!(grid_scan(|_| 0.0, &space, &[0, 3]).is_err());
    }
}
