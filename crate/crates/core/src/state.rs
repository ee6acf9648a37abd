//! Validated density matrices, entropies and state constructors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{DiscordError, Result};
use crate::linalg::{
    hermitian_eigenvalues, partial_trace_a, partial_trace_s, tensor_product, ComplexMatrix, C64,
    ZERO,
};
use crate::measurement::MeasurementBasis;

/// Tolerance for Hermiticity, unit trace and the PSD floor.
pub const STATE_TOL: f64 = 1e-9;
/// Eigenvalues and probabilities below this count as exactly zero in entropies.
pub const ENTROPY_FLOOR: f64 = 1e-12;

/// Dimensions of the S (left) and A (right) factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub m: usize,
    pub n: usize,
}

impl Split {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub fn swapped(self) -> Self {
        Self {
            m: self.n,
            n: self.m,
        }
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix, optionally with a
/// bipartite split.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    split: Option<Split>,
}

impl DensityMatrix {
    /// Checks every state invariant and reports the first one violated.
    pub fn validate(matrix: ComplexMatrix, split: Option<Split>) -> Result<Self> {
        if let Some(Split { m, n }) = split {
            if m == 0 || n == 0 || m * n != matrix.dim() {
                return Err(DiscordError::BadSplit {
                    m,
                    n,
                    dim: matrix.dim(),
                });
            }
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > STATE_TOL {
            return Err(DiscordError::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(DiscordError::Trace {
                trace,
                deviation: (trace - 1.0).abs(),
            });
        }
        let smallest = hermitian_eigenvalues(&matrix)?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if smallest < -STATE_TOL {
            return Err(DiscordError::NegativeEigenvalue { value: smallest });
        }
        Ok(Self { matrix, split })
    }

    pub(crate) fn trusted(matrix: ComplexMatrix, split: Option<Split>) -> Self {
        debug_assert!(matrix.hermitian_deviation() < 1e-8);
        Self { matrix, split }
    }

    pub fn bipartite(matrix: ComplexMatrix, m: usize, n: usize) -> Result<Self> {
        Self::validate(matrix, Some(Split::new(m, n)))
    }

    /// Pure state `|psi><psi|` of a normalized or unnormalized vector.
    pub fn pure(psi: &[C64], split: Option<Split>) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(DiscordError::InvalidParameter("zero state vector".into()));
        }
        Self::validate(ComplexMatrix::outer(psi).scale_real(1.0 / norm), split)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::trusted(
            ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            None,
        )
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn split(&self) -> Option<Split> {
        self.split
    }

    pub fn require_split(&self) -> Result<Split> {
        self.split.ok_or(DiscordError::MissingSplit)
    }

    pub fn with_split(self, m: usize, n: usize) -> Result<Self> {
        if m * n != self.dim() {
            return Err(DiscordError::BadSplit {
                m,
                n,
                dim: self.dim(),
            });
        }
        Ok(Self {
            split: Some(Split::new(m, n)),
            ..self
        })
    }

    /// Reduced state of S.
    pub fn reduced_s(&self) -> Result<Self> {
        let Split { m, n } = self.require_split()?;
        Ok(Self::trusted(partial_trace_a(&self.matrix, m, n)?, None))
    }

    /// Reduced state of A.
    pub fn reduced_a(&self) -> Result<Self> {
        let Split { m, n } = self.require_split()?;
        Ok(Self::trusted(partial_trace_s(&self.matrix, m, n)?, None))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix).expect("validated state is Hermitian")
    }
}

/// Shannon entropy in bits, treating entries below [`ENTROPY_FLOOR`] as 0.
/// Round-off around a single unit entry is clamped to 0.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > ENTROPY_FLOOR)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy `-Σ λ log2 λ` in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.eigenvalues())
}

/// Binary entropy `h2(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_entropy(&[p, 1.0 - p])
}

/// Mixing weights and product components of `Σ p_i ρ_S^i ⊗ ρ_A^i`.
#[derive(Debug, Clone)]
pub struct SeparableSpec {
    weights: Vec<f64>,
    components: Vec<(DensityMatrix, DensityMatrix)>,
}

impl SeparableSpec {
    pub fn new(weights: Vec<f64>, components: Vec<(DensityMatrix, DensityMatrix)>) -> Result<Self> {
        if weights.is_empty() || weights.len() != components.len() {
            return Err(DiscordError::InvalidParameter(format!(
                "{} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        check_probabilities(&weights, 1e-12)?;
        let (m, n) = (components[0].0.dim(), components[0].1.dim());
        for (s, a) in &components {
            if s.dim() != m {
                return Err(DiscordError::Dimension {
                    expected: m,
                    found: s.dim(),
                });
            }
            if a.dim() != n {
                return Err(DiscordError::Dimension {
                    expected: n,
                    found: a.dim(),
                });
            }
        }
        Ok(Self {
            weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[(DensityMatrix, DensityMatrix)] {
        &self.components
    }

    pub fn split(&self) -> Split {
        Split::new(self.components[0].0.dim(), self.components[0].1.dim())
    }
}

fn check_probabilities(p: &[f64], sum_tol: f64) -> Result<()> {
    if let Some(bad) = p.iter().find(|&&x| !x.is_finite() || x < 0.0) {
        return Err(DiscordError::InvalidProbability(format!(
            "entry {bad} is not a nonnegative number"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > sum_tol {
        return Err(DiscordError::InvalidProbability(format!(
            "entries sum to {total}, not 1"
        )));
    }
    Ok(())
}

/// `Σ p_i ρ_S^i ⊗ ρ_A^i` with split `(m, n)`.
pub fn assemble_separable(spec: &SeparableSpec) -> Result<DensityMatrix> {
    let Split { m, n } = spec.split();
    let mut acc = ComplexMatrix::zeros(m * n);
    for (w, (s, a)) in spec.weights.iter().zip(&spec.components) {
        acc = &acc + &tensor_product(s.matrix(), a.matrix()).scale_real(*w);
    }
    DensityMatrix::validate(acc, Some(Split::new(m, n)))
        .map_err(|e| DiscordError::Consistency(format!("separable mixture failed validation: {e}")))
}

/// `Σ_ij p_ij Π^S_i ⊗ Π^A_j` for an `m x n` probability table.
pub fn classical_classical(
    p: &[Vec<f64>],
    basis_s: &MeasurementBasis,
    basis_a: &MeasurementBasis,
) -> Result<DensityMatrix> {
    let (m, n) = (basis_s.dim(), basis_a.dim());
    if p.len() != m || p.iter().any(|row| row.len() != n) {
        return Err(DiscordError::InvalidProbability(format!(
            "table must be {m} x {n} to match the bases"
        )));
    }
    let flat: Vec<f64> = p.iter().flatten().copied().collect();
    check_probabilities(&flat, 1e-12)?;
    let mut acc = ComplexMatrix::zeros(m * n);
    for (i, u) in basis_s.vectors().iter().enumerate() {
        let pi = ComplexMatrix::outer(u);
        for (j, v) in basis_a.vectors().iter().enumerate() {
            if p[i][j] == 0.0 {
                continue;
            }
            acc = &acc + &tensor_product(&pi, &ComplexMatrix::outer(v)).scale_real(p[i][j]);
        }
    }
    DensityMatrix::validate(acc, Some(Split::new(m, n)))
}

/// Deterministic generator used for every seeded construction.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G G† / Tr(G G†)` for a `dim x rank` complex Gaussian `G`.
pub fn random_density_with<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
) -> Result<DensityMatrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(DiscordError::InvalidParameter(format!(
            "rank {rank} must lie in 1..={dim}"
        )));
    }
    let g: Vec<C64> = (0..dim * rank)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let mut gg = ComplexMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let mut acc = ZERO;
            for k in 0..rank {
                acc += g[r * rank + k] * g[c * rank + k].conj();
            }
            gg[(r, c)] = acc;
        }
    }
    let tr = gg.trace().re;
    DensityMatrix::validate(gg.scale_real(1.0 / tr).hermitian_part(), None)
}

pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(&mut seeded_rng(seed), dim, rank)
}

/// Symmetric Dirichlet(1) weights and full-rank random components.
pub fn random_separable_with<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: usize,
    k_components: usize,
) -> Result<SeparableSpec> {
    if k_components == 0 {
        return Err(DiscordError::InvalidParameter(
            "need at least one component".into(),
        ));
    }
    let raw: Vec<f64> = (0..k_components)
        .map(|_| rng.sample::<f64, _>(Exp1))
        .collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let components = (0..k_components)
        .map(|_| {
            Ok((
                random_density_with(rng, m, m)?,
                random_density_with(rng, n, n)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    SeparableSpec::new(weights, components)
}

pub fn random_separable(
    m: usize,
    n: usize,
    k_components: usize,
    seed: u64,
) -> Result<SeparableSpec> {
    random_separable_with(&mut seeded_rng(seed), m, n, k_components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    #[test]
    fn maximally_mixed_two_qubits_is_valid() {
        let rho =
            DensityMatrix::bipartite(ComplexMatrix::identity(4).scale_real(0.25), 2, 2).unwrap();
        assert_eq!(rho.split(), Some(Split::new(2, 2)));
    }

    #[test]
    fn negative_eigenvalue_is_rejected() {
        let m = ComplexMatrix::from_diagonal(&[0.6, 0.6, -0.1, -0.1]);
        match DensityMatrix::validate(m, None) {
            Err(DiscordError::NegativeEigenvalue { value }) => assert!((value + 0.1).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trace_deviation_is_reported() {
        let m = ComplexMatrix::from_diagonal(&[0.5, 0.4]);
        match DensityMatrix::validate(m, None) {
            Err(DiscordError::Trace { deviation, .. }) => assert!((deviation - 0.1).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_split_is_rejected() {
        let err = DensityMatrix::bipartite(ComplexMatrix::identity(4).scale_real(0.25), 3, 2);
        assert!(matches!(err, Err(DiscordError::BadSplit { .. })));
    }

    #[test]
    fn entropy_examples() {
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(2)) - 1.0).abs() < 1e-14);
        let pure = DensityMatrix::pure(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)], None).unwrap();
        assert!(von_neumann_entropy(&pure).abs() < 1e-12);
        assert!((binary_entropy(0.75) - 0.811_278_124_459_132_9).abs() < 1e-14);
    }

    #[test]
    fn single_component_is_product() {
        let s = random_density(2, 2, 1).unwrap();
        let a = random_density(3, 2, 2).unwrap();
        let spec = SeparableSpec::new(vec![1.0], vec![(s.clone(), a.clone())]).unwrap();
        let rho = assemble_separable(&spec).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&tensor_product(s.matrix(), a.matrix()))
                < 1e-15
        );
        assert_eq!(rho.split(), Some(Split::new(2, 3)));
    }

    #[test]
    fn classical_mixture_is_diagonal() {
        let zero = DensityMatrix::pure(&[ONE, ZERO], None).unwrap();
        let one = DensityMatrix::pure(&[ZERO, ONE], None).unwrap();
        let spec = SeparableSpec::new(
            vec![0.5, 0.5],
            vec![(zero.clone(), zero), (one.clone(), one)],
        )
        .unwrap();
        let rho = assemble_separable(&spec).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[0.5, 0.0, 0.0, 0.5]))
                < 1e-15
        );
    }

    #[test]
    fn seeded_mixture_matches_direct_sum() {
        let spec = random_separable(2, 3, 4, 9).unwrap();
        let rho = assemble_separable(&spec).unwrap();
        // Direct loop over joint indices, independent of tensor_product.
        for r in 0..6 {
            for c in 0..6 {
                let mut expected = ZERO;
                for (w, (s, a)) in spec.weights().iter().zip(spec.components()) {
                    expected += s.matrix()[(r / 3, c / 3)] * a.matrix()[(r % 3, c % 3)] * *w;
                }
                assert!((rho.matrix()[(r, c)] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn uniform_table_in_computational_bases_is_maximally_mixed() {
        let b = MeasurementBasis::computational(2);
        let rho = classical_classical(&[vec![0.25; 2], vec![0.25; 2]], &b, &b).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25))
                < 1e-15
        );
        let diag = classical_classical(&[vec![0.7, 0.0], vec![0.0, 0.3]], &b, &b).unwrap();
        assert!(
            diag.matrix()
                .max_abs_diff(&ComplexMatrix::from_diagonal(&[0.7, 0.0, 0.0, 0.3]))
                < 1e-15
        );
    }

    #[test]
    fn classical_table_is_checked() {
        let b = MeasurementBasis::computational(2);
        assert!(matches!(
            classical_classical(&[vec![0.5, 0.5], vec![0.5, 0.5]], &b, &b),
            Err(DiscordError::InvalidProbability(_))
        ));
        assert!(matches!(
            classical_classical(&[vec![1.2, -0.2], vec![0.0, 0.0]], &b, &b),
            Err(DiscordError::InvalidProbability(_))
        ));
    }

    #[test]
    fn random_states() {
        let pure = random_density(2, 1, 7).unwrap();
        assert!(von_neumann_entropy(&pure).abs() < 1e-10);
        assert_eq!(
            random_density(3, 3, 1).unwrap(),
            random_density(3, 3, 1).unwrap()
        );
        assert!(random_density(2, 3, 1).is_err());
        let spec = random_separable(2, 2, 4, 3).unwrap();
        assert!(assemble_separable(&spec).is_ok());
        assert!(random_separable(2, 2, 0, 3).is_err());
    }

    #[test]
    fn entropy_needs_no_split_but_reduction_does() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert_eq!(rho.reduced_a().unwrap_err(), DiscordError::MissingSplit);
    }
}
