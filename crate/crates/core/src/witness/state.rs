use crate::error::{Error, Result};
use crate::qcore::matrix::{vec_norm, ComplexMatrix, C64, HERMITIAN_TOL};
use crate::qcore::{hermitian_eig, HermitianEig};

pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue admitted in a density matrix.
pub const POSITIVITY_TOL: f64 = -1e-10;

/// Unit-trace positive-semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.ensure_hermitian()?;
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::Invariant(format!(
                "density matrix trace must be 1, got {:.15}{:+.3e}i",
                trace.re, trace.im
            )));
        }
        let matrix = matrix.hermitian_part();
        let min_eig = hermitian_eig(&matrix)?.eigenvalues[0];
        if min_eig < POSITIVITY_TOL {
            return Err(Error::Invariant(format!(
                "density matrix must be positive semidefinite, smallest eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// For outputs of trace-preserving completely positive maps applied to
    /// valid states; only Hermiticity is re-imposed.
    pub(crate) fn from_channel_output(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    /// `|psi><psi|` for a unit vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        if psi.is_empty() {
            return Err(Error::Domain("state vector is empty".into()));
        }
        let norm = vec_norm(psi);
        if !norm.is_finite() || (norm * norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::Invariant(format!(
                "state vector must have unit norm, got squared norm {:.15}",
                norm * norm
            )));
        }
        Ok(Self::from_channel_output(ComplexMatrix::outer(psi, psi)))
    }

    /// `|psi><psi| / <psi|psi>`
    pub fn pure_normalized(psi: &[C64]) -> Result<Self> {
        let norm = vec_norm(psi);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero state vector".into()));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::from_channel_output(ComplexMatrix::outer(
            &unit, &unit,
        )))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `tr(rho^2)`
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eig(&self) -> HermitianEig {
        hermitian_eig(&self.matrix).expect("density matrices are Hermitian")
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

/// Tolerance used for `P^2 = P = P^dagger`, orthogonality and completeness.
pub const PROJECTOR_TOL: f64 = 1e-12;

/// Non-zero orthogonal projector.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl Projector {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.ensure_square()?;
        let (herm, row, col) = matrix.hermiticity_defect();
        if herm > HERMITIAN_TOL {
            return Err(Error::Invariant(format!(
                "projector is not Hermitian: deviation {herm:e} at ({row}, {col})"
            )));
        }
        let idem = matrix.matmul(&matrix).max_abs_diff(&matrix);
        if idem > PROJECTOR_TOL {
            return Err(Error::Invariant(format!(
                "projector is not idempotent: max |P^2 - P| = {idem:e}"
            )));
        }
        let trace = matrix.trace().re;
        let rank = trace.round();
        if (trace - rank).abs() > 1e-9 {
            return Err(Error::Invariant(format!(
                "projector trace {trace} is not an integer rank"
            )));
        }
        if rank < 1.0 {
            return Err(Error::Invariant("projector has rank zero".into()));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
            rank: rank as usize,
        })
    }

    /// Diagonal projector onto the listed computational basis states.
    pub fn from_basis_indices(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut seen = vec![false; dim];
        for &k in indices {
            if k >= dim {
                return Err(Error::Domain(format!(
                    "basis index {k} out of range for dimension {dim}"
                )));
            }
            if seen[k] {
                return Err(Error::Domain(format!("basis index {k} listed twice")));
            }
            seen[k] = true;
        }
        Self::new(ComplexMatrix::from_fn(dim, dim, |r, c| {
            if r == c && seen[r] {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// Projector onto the span of orthonormal vectors.
    pub fn onto_vectors(vectors: &[Vec<C64>]) -> Result<Self> {
        let dim = vectors.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::Domain("no vectors given for projector".into()));
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        for v in vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            m = &m + &ComplexMatrix::outer(v, v);
        }
        Self::new(m)
    }

    /// `|psi><psi|` for a unit vector.
    pub fn onto_state(psi: &[C64]) -> Result<Self> {
        Self::onto_vectors(&[psi.to_vec()])
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `tr(P rho)`
    pub fn expectation(&self, rho: &ComplexMatrix) -> f64 {
        self.matrix.trace_product(rho).re
    }
}

/// Complete family of mutually orthogonal projectors with `2 <= M <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    projectors: Vec<Projector>,
    labels: Vec<String>,
}

impl MeasurementSet {
    pub fn new(projectors: Vec<Projector>) -> Result<Self> {
        let labels = (0..projectors.len()).map(|i| format!("a{i}")).collect();
        Self::with_labels(projectors, labels)
    }

    pub fn with_labels(projectors: Vec<Projector>, labels: Vec<String>) -> Result<Self> {
        let m = projectors.len();
        let n = projectors.first().map_or(0, Projector::dim);
        if labels.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: labels.len(),
            });
        }
        if let Some(p) = projectors.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
        if m < 2 || m > n {
            return Err(Error::Invariant(format!(
                "measurement must have 2 <= M <= N outcomes, got M = {m}, N = {n}"
            )));
        }
        for i in 0..m {
            for j in i + 1..m {
                let overlap = projectors[i]
                    .matrix()
                    .matmul(projectors[j].matrix())
                    .max_abs();
                if overlap > PROJECTOR_TOL {
                    return Err(Error::Invariant(format!(
                        "projectors {i} and {j} are not orthogonal: max |P_i P_j| = {overlap:e}"
                    )));
                }
            }
        }
        let mut sum = ComplexMatrix::zeros(n, n);
        for p in &projectors {
            sum = &sum + p.matrix();
        }
        let gap = sum.max_abs_diff(&ComplexMatrix::identity(n));
        if gap > PROJECTOR_TOL {
            return Err(Error::Invariant(format!(
                "measurement is not complete: max |sum P_i - 1| = {gap:e}"
            )));
        }
        Ok(Self { projectors, labels })
    }

    /// Rank-1 projectors onto every computational basis state.
    pub fn von_neumann(dim: usize) -> Result<Self> {
        let groups: Vec<Vec<usize>> = (0..dim).map(|k| vec![k]).collect();
        Self::from_basis_groups(dim, &groups)
    }

    /// Computational-basis projectors, one per group of indices.
    pub fn from_basis_groups(dim: usize, groups: &[Vec<usize>]) -> Result<Self> {
        let projectors = groups
            .iter()
            .map(|g| Projector::from_basis_indices(dim, g))
            .collect::<Result<Vec<_>>>()?;
        Self::new(projectors)
    }

    /// Projectors onto groups of columns of a unitary `basis`.
    pub fn from_partition(basis: &ComplexMatrix, groups: &[Vec<usize>]) -> Result<Self> {
        let projectors = groups
            .iter()
            .map(|g| {
                let vectors: Vec<Vec<C64>> = g.iter().map(|&c| basis.column(c)).collect();
                Projector::onto_vectors(&vectors)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(projectors)
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    /// Number of outcomes `M`.
    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Born-rule outcome probabilities for `rho`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Vec<f64> {
        self.projectors
            .iter()
            .map(|p| p.expectation(rho.matrix()))
            .collect()
    }
}
