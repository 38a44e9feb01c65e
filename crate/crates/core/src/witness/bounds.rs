use crate::error::{Error, Result};
use crate::qcore::matrix::{C64, ZERO};

use super::channel::Channel;
use super::scenario::WitnessScenario;
use super::state::{DensityMatrix, MeasurementSet, Projector};

/// Relative amount `W` is lowered by before inferring a dimension, so that an
/// exact bound overshot by rounding does not inflate the result.
pub const DIMENSION_GUARD: f64 = 1e-9;

/// Largest quantum value `1 - 1/M` of the witness with `M` blind outcomes.
pub fn theoretical_bound(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!(
            "a blind measurement needs at least 2 outcomes, got {m}"
        )));
    }
    Ok(1.0 - 1.0 / m as f64)
}

/// Smallest Hilbert-space dimension compatible with an observed witness:
/// `ceil(1 / (1 - W))`.
pub fn dimension_bound(w: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&w) {
        return Err(Error::Domain(format!(
            "dimension bound needs 0 <= W < 1, got {w}"
        )));
    }
    let guarded = w * (1.0 - DIMENSION_GUARD);
    Ok((1.0 / (1.0 - guarded)).ceil() as usize)
}

/// Contiguous split of `0..n` into `m` ranges whose sizes differ by at most one.
pub fn balanced_partition(n: usize, m: usize) -> Vec<Vec<usize>> {
    let base = n / m;
    let extra = n % m;
    let mut start = 0;
    (0..m)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let group = (start..start + len).collect();
            start += len;
            group
        })
        .collect()
}

/// Identity channel, `M` blind projectors with balanced ranks, and the pure
/// state `|phi> = M^{-1/2} sum_i |e_i>` (one basis vector from each range)
/// measured by `|phi><phi|`. Its witness is exactly `1 - 1/M`.
pub fn saturating_scenario(n: usize, m: usize) -> Result<WitnessScenario> {
    if m < 2 || m > n {
        return Err(Error::Domain(format!(
            "saturating scenario needs 2 <= M <= N, got N = {n}, M = {m}"
        )));
    }
    let groups = balanced_partition(n, m);
    let amp = C64::new(1.0 / (m as f64).sqrt(), 0.0);
    let mut phi = vec![ZERO; n];
    for g in &groups {
        phi[g[0]] = amp;
    }
    WitnessScenario::new(
        DensityMatrix::pure_normalized(&phi)?,
        MeasurementSet::from_basis_groups(n, &groups)?,
        Channel::Identity,
        Projector::onto_state(&phi)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::scenario::witness_value;

    #[test]
    fn bound_values() {
        assert_eq!(theoretical_bound(2).unwrap(), 0.5);
        assert!((theoretical_bound(3).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(1.0 - theoretical_bound(1 << 30).unwrap() < 1e-8);
        assert!(theoretical_bound(1).is_err());
    }

    #[test]
    fn dimension_bound_values() {
        assert_eq!(dimension_bound(0.0).unwrap(), 1);
        assert_eq!(dimension_bound(0.5).unwrap(), 2);
        assert_eq!(dimension_bound(2.0 / 3.0).unwrap(), 3);
        // one ulp above 2/3 still infers 3
        assert_eq!(
            dimension_bound(f64::from_bits((2.0f64 / 3.0).to_bits() + 1)).unwrap(),
            3
        );
        assert_eq!(dimension_bound(0.51).unwrap(), 3);
        assert!(dimension_bound(1.0).is_err());
        assert!(dimension_bound(-0.1).is_err());
        assert!(dimension_bound(f64::NAN).is_err());
    }

    #[test]
    fn partition_is_balanced() {
        assert_eq!(balanced_partition(5, 2), vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(balanced_partition(3, 3), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn saturating_reaches_bound() {
        for (n, m) in [(2, 2), (3, 3), (4, 2), (7, 3), (9, 9)] {
            let r = witness_value(&saturating_scenario(n, m).unwrap()).unwrap();
            assert!(
                (r.witness - (1.0 - 1.0 / m as f64)).abs() < 1e-12,
                "({n},{m})"
            );
            // the linear entropy identity holds for this family
            assert!((r.witness - r.linear_entropy_sigma).abs() < 1e-12);
        }
        assert!(saturating_scenario(3, 4).is_err());
        assert!(saturating_scenario(3, 1).is_err());
    }

    #[test]
    fn dimension_witness_for_von_neumann_family() {
        for n in 2..=12 {
            let r = witness_value(&saturating_scenario(n, n).unwrap()).unwrap();
            assert_eq!(dimension_bound(r.witness).unwrap(), n);
        }
    }
}
