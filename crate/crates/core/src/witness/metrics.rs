use crate::error::Result;
use crate::qcore::hermitian_eig;

use super::channel::Channel;
use super::scenario::blind_measure;
use super::state::{DensityMatrix, MeasurementSet, Projector};

fn difference_eig(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<crate::qcore::HermitianEig> {
    sigma.ensure_dim(rho.dim())?;
    hermitian_eig(&(rho.matrix() - sigma.matrix()))
}

/// `D = (1/2) sum |Lambda_i|` over the eigenvalues of `rho - sigma`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let eig = difference_eig(rho, sigma)?;
    let d = 0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

/// Projector onto the positive eigenspace of `rho_t - sigma_t`, together with
/// `tr(P (rho_t - sigma_t))`.
///
/// With no positive eigenvalue (`rho_t = sigma_t`), the rank-1 projector onto
/// the eigenvector of the largest eigenvalue is returned instead.
pub fn optimal_final_projector(
    rho_t: &DensityMatrix,
    sigma_t: &DensityMatrix,
) -> Result<(Projector, f64)> {
    let eig = difference_eig(rho_t, sigma_t)?;
    let n = eig.dim();
    let matrix = if eig.eigenvalues.iter().any(|&l| l > 0.0) {
        eig.spectral_projector(|_, l| l > 0.0)
    } else {
        eig.spectral_projector(|k, _| k == n - 1)
    };
    let projector = Projector::new(matrix)?;
    let diff = rho_t.matrix() - sigma_t.matrix();
    let value = projector.matrix().trace_product(&diff).re;
    Ok((projector, value))
}

/// `1 - tr(rho^2)`
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    (1.0 - rho.purity()).max(0.0)
}

/// `-sum p ln p` in nats; zero and rounding-negative entries contribute 0.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// `|H'(B) - H(B)|` over all outcomes of the complete measurement `b`.
pub fn entropic_witness(
    rho: &DensityMatrix,
    a: &MeasurementSet,
    phi: &Channel,
    b: &MeasurementSet,
) -> Result<f64> {
    rho.ensure_dim(b.dim())?;
    let sigma = blind_measure(rho, a)?;
    let direct = b.probabilities(&phi.apply(rho)?);
    let blind = b.probabilities(&phi.apply(&sigma)?);
    Ok((shannon_entropy(&blind) - shannon_entropy(&direct)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::random::{haar_state, haar_unitary, random_density, task_rng};
    use crate::qcore::matrix::{ComplexMatrix, C64, ONE, ZERO};

    #[test]
    fn trace_distance_cases() {
        let zero = DensityMatrix::pure(&[ONE, ZERO]).unwrap();
        let one = DensityMatrix::pure(&[ZERO, ONE]).unwrap();
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        // eigenvalues of |0><0| - 1/2 are +-1/2
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((trace_distance(&zero, &mixed).unwrap() - 0.5).abs() < 1e-15);
        assert!(trace_distance(&zero, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn optimal_projector_cases() {
        let zero = DensityMatrix::pure(&[ONE, ZERO]).unwrap();
        let one = DensityMatrix::pure(&[ZERO, ONE]).unwrap();
        let (p, v) = optimal_final_projector(&zero, &one).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert!(p.matrix().max_abs_diff(zero.matrix()) < 1e-15);

        let (p, v) = optimal_final_projector(&zero, &zero).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn optimal_projector_beats_random_projectors() {
        let mut rng = task_rng(7, 0);
        let rho = random_density(4, &mut rng);
        let sigma = random_density(4, &mut rng);
        let d = trace_distance(&rho, &sigma).unwrap();
        let (_, value) = optimal_final_projector(&rho, &sigma).unwrap();
        assert!((value - d).abs() < 1e-12);

        let diff = rho.matrix() - sigma.matrix();
        let mut best = f64::NEG_INFINITY;
        for k in 0..10_000 {
            let rank = 1 + k % 3;
            let u = haar_unitary(4, &mut rng);
            let cols: Vec<Vec<C64>> = (0..rank).map(|c| u.column(c)).collect();
            let p = Projector::onto_vectors(&cols).unwrap();
            best = best.max(p.matrix().trace_product(&diff).re);
        }
        assert!(
            best <= value + 1e-12,
            "random {best} exceeds optimum {value}"
        );
        assert!(best > 0.5 * value);
    }

    #[test]
    fn linear_entropy_cases() {
        let psi = haar_state(5, &mut task_rng(3, 1));
        assert!(linear_entropy(&DensityMatrix::pure(&psi).unwrap()) < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(5);
        assert!((linear_entropy(&mixed) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn entropic_witness_cases() {
        let plus = DensityMatrix::pure_normalized(&[ONE, ONE]).unwrap();
        let z = MeasurementSet::von_neumann(2).unwrap();
        // H(B) over {1/2, 1/2} minus H(B) over {1/2, 1/2}
        assert!(entropic_witness(&plus, &z, &Channel::Identity, &z).unwrap() < 1e-15);

        // Same state measured in the x basis: H(B) = 0, H'(B) = ln 2.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = ComplexMatrix::from_real_rows(&[&[s, s], &[s, -s]]).unwrap();
        let x = MeasurementSet::from_partition(&hadamard, &[vec![0], vec![1]]).unwrap();
        let w = entropic_witness(&plus, &z, &Channel::Identity, &x).unwrap();
        assert!((w - std::f64::consts::LN_2).abs() < 1e-12);

        let diag = DensityMatrix::new(ComplexMatrix::from_diagonal(&[
            C64::new(0.3, 0.0),
            C64::new(0.7, 0.0),
        ]))
        .unwrap();
        assert!(entropic_witness(&diag, &z, &Channel::Identity, &x).unwrap() < 1e-15);
    }

    #[test]
    fn shannon_skips_zero_and_negative() {
        assert_eq!(shannon_entropy(&[1.0, 0.0, -1e-17]), 0.0);
        assert!((shannon_entropy(&[0.25; 4]) - 4f64.ln()).abs() < 1e-15);
    }
}
