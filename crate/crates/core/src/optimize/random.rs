//! Seeded random states, unitaries, channels and scenarios.
//!
//! Every task draws from its own ChaCha stream selected by `(seed, task)`, so
//! a suite gives the same scenarios whether it runs serially or in parallel.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::qcore::matrix::{inner, vec_norm};
use crate::qcore::{hermitian_eig, ComplexMatrix, C64};
use crate::witness::{Channel, DensityMatrix, MeasurementSet, Projector, WitnessScenario};

pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Standard complex normal sample, `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-random unit vector.
pub fn haar_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random unitary: Gram-Schmidt on the columns of a complex Gaussian
/// matrix. The triangular factor comes out with a positive real diagonal,
/// which is the phase fixing that makes the result Haar distributed.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v = g.column(c);
        // two passes keep the columns orthonormal to working precision
        for _ in 0..2 {
            for q in &cols {
                let overlap = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= overlap * qi;
                }
            }
        }
        let norm = vec_norm(&v);
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}

/// Hilbert-Schmidt random mixed state `G G^dagger / tr(G G^dagger)`.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(n, n, rng);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).expect("Wishart matrices are valid states")
}

/// Random split of the indices `0..n` into `m` non-empty groups.
pub fn random_partition<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(m - 1).collect();
    cuts.sort_unstable();
    let mut groups = Vec::with_capacity(m);
    let mut start = 0;
    for end in cuts.into_iter().chain(std::iter::once(n)) {
        groups.push(order[start..end].to_vec());
        start = end;
    }
    groups
}

/// Random complete projective measurement with `m` outcomes in a Haar basis.
pub fn random_measurement<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<MeasurementSet> {
    let basis = haar_unitary(n, rng);
    MeasurementSet::from_partition(&basis, &random_partition(n, m, rng))
}

/// `count` Gaussian Kraus operators `G_k`, made trace preserving as
/// `K_k = G_k S^{-1/2}` with `S = sum G_k^dagger G_k`.
pub fn random_kraus_channel<R: Rng + ?Sized>(
    n: usize,
    count: usize,
    rng: &mut R,
) -> Result<Channel> {
    let raw: Vec<ComplexMatrix> = (0..count.max(1)).map(|_| ginibre(n, n, rng)).collect();
    let mut s = ComplexMatrix::zeros(n, n);
    for g in &raw {
        s = &s + &g.adjoint().matmul(g);
    }
    let eig = hermitian_eig(&s.hermitian_part())?;
    let inv_sqrt = eig.apply_fn(|l| C64::new(1.0 / l.sqrt(), 0.0));
    Channel::operator_sum(raw.iter().map(|g| g.matmul(&inv_sqrt)).collect())
}

fn check_outcomes(n: usize, m: usize) -> Result<()> {
    if m < 2 || m > n {
        return Err(Error::Domain(format!(
            "random scenario needs 2 <= M <= N, got N = {n}, M = {m}"
        )));
    }
    Ok(())
}

fn random_parts(
    n: usize,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(DensityMatrix, MeasurementSet, Projector)> {
    let initial = DensityMatrix::pure(&haar_state(n, rng))?;
    let blind = random_measurement(n, m, rng)?;
    let final_projector = Projector::onto_state(&haar_state(n, rng))?;
    Ok((initial, blind, final_projector))
}

/// Haar pure state, Haar unitary channel, random `m`-outcome blind
/// measurement and random rank-1 final projector.
pub fn random_scenario(n: usize, m: usize, seed: u64) -> Result<WitnessScenario> {
    check_outcomes(n, m)?;
    let mut rng = task_rng(seed, 0);
    let (initial, blind, final_projector) = random_parts(n, m, &mut rng)?;
    let channel = Channel::unitary(haar_unitary(n, &mut rng))?;
    WitnessScenario::new(initial, blind, channel, final_projector)
}

/// As [`random_scenario`] but with a random operator-sum channel.
pub fn random_kraus_scenario(
    n: usize,
    m: usize,
    kraus_count: usize,
    seed: u64,
) -> Result<WitnessScenario> {
    check_outcomes(n, m)?;
    let mut rng = task_rng(seed, 1);
    let (initial, blind, final_projector) = random_parts(n, m, &mut rng)?;
    let channel = random_kraus_channel(n, kraus_count, &mut rng)?;
    WitnessScenario::new(initial, blind, channel, final_projector)
}
