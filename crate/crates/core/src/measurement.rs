//! Rank-1 projective measurements and the charts used to search over them.

use std::f64::consts::PI;
use std::ops::Range;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{DiscordError, Result};
use crate::linalg::{
    hermitian_eigendecomposition, tensor_product, tensor_vector, ComplexMatrix, C64, ONE, ZERO,
};
use crate::state::{shannon_entropy, DensityMatrix, Split};

const BASIS_TOL: f64 = 1e-10;
/// Eigenvalue gap below which two eigenvalues count as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;
const PROBABILITY_CLIP: f64 = -1e-12;

/// A complete set of orthogonal rank-1 projectors, stored as the unit
/// vectors they project onto.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    vectors: Vec<Vec<C64>>,
}

impl MeasurementBasis {
    /// Accepts `dim` vectors of length `dim` that are orthonormal within 1e-10.
    pub fn from_vectors(vectors: Vec<Vec<C64>>) -> Result<Self> {
        let dim = vectors.len();
        if dim == 0 {
            return Err(DiscordError::InvalidBasis("empty basis".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(DiscordError::InvalidBasis(format!(
                "vector of length {} in a {dim}-dimensional basis",
                v.len()
            )));
        }
        for a in 0..dim {
            for b in a..dim {
                let ip = inner(&vectors[a], &vectors[b]);
                let target = if a == b { ONE } else { ZERO };
                let err = (ip - target).norm();
                if err > BASIS_TOL {
                    return Err(DiscordError::InvalidBasis(format!(
                        "vectors {a} and {b} violate orthonormality by {err:.3e}"
                    )));
                }
            }
        }
        Ok(Self { vectors })
    }

    /// Accepts explicit projector matrices and checks idempotence, unit
    /// trace, mutual orthogonality and completeness.
    pub fn from_projectors(projectors: &[ComplexMatrix]) -> Result<Self> {
        let dim = projectors.len();
        if dim == 0 {
            return Err(DiscordError::InvalidBasis("empty basis".into()));
        }
        let mut sum = ComplexMatrix::zeros(dim);
        for (j, p) in projectors.iter().enumerate() {
            if p.dim() != dim {
                return Err(DiscordError::Dimension {
                    expected: dim,
                    found: p.dim(),
                });
            }
            let herm = p.hermitian_deviation();
            let idem = (&(p * p) - p).max_abs();
            let tr = (p.trace() - ONE).norm();
            if herm > BASIS_TOL || idem > BASIS_TOL || tr > BASIS_TOL {
                return Err(DiscordError::InvalidBasis(format!(
                    "projector {j}: hermitian dev {herm:.3e}, P^2-P {idem:.3e}, trace dev {tr:.3e}"
                )));
            }
            for (k, q) in projectors.iter().enumerate().skip(j + 1) {
                let overlap = (p * q).max_abs();
                if overlap > BASIS_TOL {
                    return Err(DiscordError::InvalidBasis(format!(
                        "projectors {j} and {k} overlap by {overlap:.3e}"
                    )));
                }
            }
            sum = &sum + p;
        }
        let completeness = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if completeness > BASIS_TOL {
            return Err(DiscordError::InvalidBasis(format!(
                "projectors sum to identity only within {completeness:.3e}"
            )));
        }
        // A rank-1 projector's largest column is proportional to its range vector.
        let vectors = projectors
            .iter()
            .map(|p| {
                let col = (0..dim)
                    .max_by(|&a, &b| p[(a, a)].re.total_cmp(&p[(b, b)].re))
                    .expect("nonempty");
                let scale = 1.0 / p[(col, col)].re.sqrt();
                (0..dim).map(|r| p[(r, col)] * scale).collect()
            })
            .collect();
        Self::from_vectors(vectors)
    }

    pub fn computational(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|k| (0..dim).map(|r| if r == k { ONE } else { ZERO }).collect())
            .collect();
        Self { vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        self.vectors
            .iter()
            .map(|v| ComplexMatrix::outer(v))
            .collect()
    }

    /// `Σ_j weight_j Π_j`.
    pub fn observable(&self, weights: &[f64]) -> ComplexMatrix {
        assert_eq!(weights.len(), self.dim());
        let mut out = ComplexMatrix::zeros(self.dim());
        for (w, p) in weights.iter().zip(self.projectors()) {
            out = &out + &p.scale_real(*w);
        }
        out
    }

    /// Bloch angles of the first projector, for qubit bases.
    pub fn bloch_angles(&self) -> Option<QubitBasisAngles> {
        if self.dim() != 2 {
            return None;
        }
        let v = &self.vectors[0];
        let theta = 2.0 * v[0].norm().clamp(0.0, 1.0).acos();
        let phi = if v[0].norm() < 1e-12 || v[1].norm() < 1e-12 {
            0.0
        } else {
            (v[1].arg() - v[0].arg()).rem_euclid(2.0 * PI)
        };
        Some(QubitBasisAngles { theta, phi })
    }

    /// Max-abs distance between the projector sets, matched in order.
    pub fn projector_distance(&self, other: &Self) -> f64 {
        self.projectors()
            .iter()
            .zip(other.projectors())
            .map(|(a, b)| a.max_abs_diff(&b))
            .fold(0.0, f64::max)
    }
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Bloch-sphere chart `(theta, phi)` for qubit bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitBasisAngles {
    pub theta: f64,
    pub phi: f64,
}

impl QubitBasisAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(DiscordError::InvalidParameter(format!(
                "angles (theta={theta}, phi={phi}) outside [0, pi] x [0, 2pi)"
            )));
        }
        Ok(Self { theta, phi })
    }
}

/// Projectors onto `(cos(θ/2), e^{iφ} sin(θ/2))` and its orthogonal complement.
pub fn qubit_basis(angles: QubitBasisAngles) -> MeasurementBasis {
    MeasurementBasis {
        vectors: givens_columns(2, &[angles.theta, angles.phi]),
    }
}

/// A basis of eigenvectors of a state, plus the blocks of (numerically)
/// equal eigenvalues inside which the basis is not unique.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    pub basis: MeasurementBasis,
    pub eigenvalues: Vec<f64>,
    /// Index ranges into `eigenvalues` of size > 1 with gaps below 1e-8.
    pub degenerate_blocks: Vec<Range<usize>>,
}

impl EigenBasis {
    pub fn is_degenerate(&self) -> bool {
        !self.degenerate_blocks.is_empty()
    }
}

pub fn basis_from_eigendecomposition(rho: &DensityMatrix) -> EigenBasis {
    let spec = hermitian_eigendecomposition(rho.matrix()).expect("validated state is Hermitian");
    let mut blocks = Vec::new();
    let mut start = 0;
    for k in 1..=spec.eigenvalues.len() {
        let split_here = k == spec.eigenvalues.len()
            || spec.eigenvalues[k - 1] - spec.eigenvalues[k] >= DEGENERACY_GAP;
        if split_here {
            if k - start > 1 {
                blocks.push(start..k);
            }
            start = k;
        }
    }
    EigenBasis {
        basis: MeasurementBasis {
            vectors: spec.eigenvectors,
        },
        eigenvalues: spec.eigenvalues,
        degenerate_blocks: blocks,
    }
}

/// All `m·n` products `u_i ⊗ v_j`, ordered by joint index `i·n + j`.
pub fn product_basis(basis_s: &MeasurementBasis, basis_a: &MeasurementBasis) -> MeasurementBasis {
    let mut vectors = Vec::with_capacity(basis_s.dim() * basis_a.dim());
    for u in &basis_s.vectors {
        for v in &basis_a.vectors {
            vectors.push(tensor_vector(u, v));
        }
    }
    MeasurementBasis { vectors }
}

/// Which factor of a bipartite state a local measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    S,
    A,
}

fn check_basis_dim(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<()> {
    if basis.dim() != rho.dim() {
        return Err(DiscordError::Dimension {
            expected: rho.dim(),
            found: basis.dim(),
        });
    }
    Ok(())
}

/// `p_j = <v_j|ρ|v_j>`, with round-off negatives clipped to zero.
pub fn outcome_distribution(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<Vec<f64>> {
    check_basis_dim(rho, basis)?;
    Ok(basis
        .vectors
        .iter()
        .map(|v| {
            let p = rho.matrix().expectation(v);
            debug_assert!(
                p >= PROBABILITY_CLIP - 1e-9,
                "probability {p} far below zero"
            );
            p.max(0.0)
        })
        .collect())
}

/// Shannon entropy of the outcome distribution; equals the von Neumann
/// entropy of the dephased state for rank-1 bases.
pub fn projected_entropy(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<f64> {
    Ok(shannon_entropy(&outcome_distribution(rho, basis)?))
}

/// `Σ_j Π_j ρ Π_j` with a full-space basis.
pub fn measure_channel(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<DensityMatrix> {
    check_basis_dim(rho, basis)?;
    let projectors = basis.projectors();
    Ok(DensityMatrix::trusted(
        dephase(rho.matrix(), &projectors),
        rho.split(),
    ))
}

/// Local measurement channel: `Σ_j (Π_j ⊗ I) ρ (Π_j ⊗ I)` on S, or
/// `Σ_j (I ⊗ Π_j) ρ (I ⊗ Π_j)` on A.
pub fn measure_channel_on(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    side: Side,
) -> Result<DensityMatrix> {
    let Split { m, n } = rho.require_split()?;
    let projectors = local_projectors(basis, side, m, n)?;
    Ok(DensityMatrix::trusted(
        dephase(rho.matrix(), &projectors),
        rho.split(),
    ))
}

pub(crate) fn local_projectors(
    basis: &MeasurementBasis,
    side: Side,
    m: usize,
    n: usize,
) -> Result<Vec<ComplexMatrix>> {
    let expected = match side {
        Side::S => m,
        Side::A => n,
    };
    if basis.dim() != expected {
        return Err(DiscordError::Dimension {
            expected,
            found: basis.dim(),
        });
    }
    Ok(basis
        .projectors()
        .iter()
        .map(|p| match side {
            Side::S => tensor_product(p, &ComplexMatrix::identity(n)),
            Side::A => tensor_product(&ComplexMatrix::identity(m), p),
        })
        .collect())
}

fn dephase(rho: &ComplexMatrix, projectors: &[ComplexMatrix]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rho.dim());
    for p in projectors {
        out = &out + &(&(p * rho) * p);
    }
    out.hermitian_part()
}

/// Haar-like random orthonormal basis via Gram-Schmidt on complex Gaussians.
pub fn random_basis<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> MeasurementBasis {
    loop {
        let mut vectors: Vec<Vec<C64>> = Vec::with_capacity(dim);
        let mut ok = true;
        for _ in 0..dim {
            let mut v: Vec<C64> = (0..dim)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            // Two passes of modified Gram-Schmidt.
            for _ in 0..2 {
                for u in &vectors {
                    let ip = inner(u, &v);
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= ip * y;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|z| *z /= norm);
            vectors.push(v);
        }
        if ok {
            return MeasurementBasis { vectors };
        }
    }
}

/// Role of one chart parameter, which fixes its grid range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleKind {
    /// Rotation angle, gridded over `[0, π]`.
    Theta,
    /// Relative phase, gridded over `[0, 2π)`.
    Phi,
    /// Phase of a two-dimensional block, where `[0, π)` already reaches
    /// every basis because `(θ, φ)` and `(π - θ, φ + π)` coincide.
    HalfPhi,
}

impl AngleKind {
    pub fn range(self) -> (f64, f64, bool) {
        match self {
            AngleKind::Theta => (0.0, PI, true),
            AngleKind::Phi => (0.0, 2.0 * PI, false),
            AngleKind::HalfPhi => (0.0, PI, false),
        }
    }
}

/// Columns of `Π_{p<q} G_pq(θ, φ)` where `G_pq` acts on coordinates `p, q`
/// as `[[cos θ/2, -e^{-iφ} sin θ/2], [e^{iφ} sin θ/2, cos θ/2]]`.
pub fn givens_columns(dim: usize, params: &[f64]) -> Vec<Vec<C64>> {
    assert_eq!(
        params.len(),
        dim * (dim - 1),
        "givens chart needs d(d-1) angles"
    );
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|k| (0..dim).map(|r| if r == k { ONE } else { ZERO }).collect())
        .collect();
    let mut k = 0;
    for p in 0..dim {
        for q in (p + 1)..dim {
            let (theta, phi) = (params[k], params[k + 1]);
            k += 2;
            let (s, c) = (0.5 * theta).sin_cos();
            let e = C64::from_polar(1.0, phi);
            let (g00, g01, g10, g11) = (C64::new(c, 0.0), -e.conj() * s, e * s, C64::new(c, 0.0));
            for r in 0..dim {
                let (xp, xq) = (cols[p][r], cols[q][r]);
                cols[p][r] = xp * g00 + xq * g10;
                cols[q][r] = xp * g01 + xq * g11;
            }
        }
    }
    cols
}

/// A family of bases obtained by rotating an anchor basis inside fixed
/// blocks of its vectors. The full chart on `C^d` is one block over the
/// computational basis; the eigenbasis family of a degenerate state has one
/// block per degenerate eigenspace.
#[derive(Debug, Clone)]
pub struct BasisFamily {
    anchor: Vec<Vec<C64>>,
    blocks: Vec<Range<usize>>,
}

impl BasisFamily {
    /// Every basis of `C^dim`.
    pub fn full(dim: usize) -> Self {
        Self {
            anchor: MeasurementBasis::computational(dim).vectors,
            blocks: (dim > 1).then_some(0..dim).into_iter().collect(),
        }
    }

    /// All eigenbases of a state: rotations within degenerate eigenspaces.
    pub fn eigenbases(eig: &EigenBasis) -> Self {
        Self {
            anchor: eig.basis.vectors.clone(),
            blocks: eig.degenerate_blocks.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    pub fn param_kinds(&self) -> Vec<AngleKind> {
        let mut kinds = Vec::new();
        for b in &self.blocks {
            let d = b.len();
            let phi = if d == 2 {
                AngleKind::HalfPhi
            } else {
                AngleKind::Phi
            };
            for _ in 0..d * (d - 1) / 2 {
                kinds.push(AngleKind::Theta);
                kinds.push(phi);
            }
        }
        kinds
    }

    pub fn n_params(&self) -> usize {
        self.blocks.iter().map(|b| b.len() * (b.len() - 1)).sum()
    }

    pub fn vectors(&self, params: &[f64]) -> Vec<Vec<C64>> {
        debug_assert_eq!(params.len(), self.n_params());
        let mut out = self.anchor.clone();
        let mut offset = 0;
        for b in &self.blocks {
            let d = b.len();
            let w = givens_columns(d, &params[offset..offset + d * (d - 1)]);
            offset += d * (d - 1);
            for (c, wc) in w.iter().enumerate() {
                let mut v = vec![ZERO; self.dim()];
                for (r, coeff) in wc.iter().enumerate() {
                    for (x, a) in v.iter_mut().zip(&self.anchor[b.start + r]) {
                        *x += coeff * a;
                    }
                }
                out[b.start + c] = v;
            }
        }
        out
    }

    pub fn basis(&self, params: &[f64]) -> MeasurementBasis {
        MeasurementBasis {
            vectors: self.vectors(params),
        }
    }
}
