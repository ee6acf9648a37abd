//! Mutual information, one- and two-sided discord, their optimizers, the
//! eigenbasis closed form of the symmetric discord and the zero-discord test.
//!
//! All quantities are in bits. `S` is the left tensor factor and `A` the
//! right one; the one-sided discord measures A.

use std::f64::consts::PI;

use crate::error::{DiscordError, Result};
use crate::linalg::{
    commutator, hermitian_eigenvalues, partial_transpose_a, swap_subsystems, tensor_product,
    ComplexMatrix, C64, ZERO,
};
use crate::measurement::{
    basis_from_eigendecomposition, product_basis, projected_entropy, BasisFamily, EigenBasis,
    MeasurementBasis,
};
use crate::optimize::{for_each_grid_point, grid_best_k, polish, BestK, Candidate, SearchConfig};
use crate::state::{shannon_entropy, von_neumann_entropy, DensityMatrix, Split, ENTROPY_FLOOR};

/// Agreement required between the two forms of the two-sided conditional entropy.
pub const TWO_SIDED_TOL: f64 = 1e-9;
/// Largest factor dimension the brute-force oracle accepts by default.
pub const ORACLE_DIM_LIMIT: usize = 4;
/// Default α threshold for the zero-discord verdict.
pub const ZERO_DISCORD_TOL: f64 = 1e-9;
/// Commutator bound a zero-discord witness has to meet.
pub const WITNESS_TOL: f64 = 1e-8;
const STRONGNESS_SLACK: f64 = 1e-7;

/// `I(S:A) = H(S) + H(A) - H(S,A)`.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    Ok(
        von_neumann_entropy(&rho.reduced_s()?) + von_neumann_entropy(&rho.reduced_a()?)
            - von_neumann_entropy(rho),
    )
}

fn check_side_dim(expected: usize, basis: &MeasurementBasis) -> Result<()> {
    if basis.dim() != expected {
        return Err(DiscordError::Dimension {
            expected,
            found: basis.dim(),
        });
    }
    Ok(())
}

/// `<v|_A ρ |v>_A`: the unnormalized state of S after outcome `v` on A.
fn a_conditioned(rho: &ComplexMatrix, split: Split, v: &[C64]) -> ComplexMatrix {
    let Split { m, n } = split;
    let mut out = ComplexMatrix::zeros(m);
    let data = rho.as_slice();
    let dim = m * n;
    for i in 0..m {
        for k in 0..m {
            let mut acc = ZERO;
            for a in 0..n {
                let row = (i * n + a) * dim + k * n;
                let mut inner = ZERO;
                for b in 0..n {
                    inner += data[row + b] * v[b];
                }
                acc += v[a].conj() * inner;
            }
            out[(i, k)] = acc;
        }
    }
    out
}

/// `<u|_S ρ |u>_S`: the unnormalized state of A after outcome `u` on S,
/// row-major `n x n`.
fn s_conditioned(rho: &ComplexMatrix, split: Split, u: &[C64], out: &mut [C64]) {
    let Split { m, n } = split;
    let data = rho.as_slice();
    let dim = m * n;
    out.iter_mut().for_each(|z| *z = ZERO);
    for i in 0..m {
        let ui = u[i].conj();
        if ui == ZERO {
            continue;
        }
        for k in 0..m {
            let w = ui * u[k];
            if w == ZERO {
                continue;
            }
            for a in 0..n {
                let row = (i * n + a) * dim + k * n;
                for b in 0..n {
                    out[a * n + b] += w * data[row + b];
                }
            }
        }
    }
}

#[inline]
fn quad_form(mat: &[C64], v: &[C64]) -> f64 {
    let n = v.len();
    let mut acc = ZERO;
    for r in 0..n {
        let mut row = ZERO;
        for c in 0..n {
            row += mat[r * n + c] * v[c];
        }
        acc += v[r].conj() * row;
    }
    acc.re
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p > ENTROPY_FLOOR {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Σ_j p_j H(ρ_{S|j}) for A-outcome vectors; outcomes below the entropy
/// floor are skipped.
fn one_sided_conditional(rho: &ComplexMatrix, split: Split, vectors: &[Vec<C64>]) -> f64 {
    let mut total = 0.0;
    for v in vectors {
        let block = a_conditioned(rho, split, v);
        let p = block.trace().re;
        if p < ENTROPY_FLOOR {
            continue;
        }
        let eig = hermitian_eigenvalues(&block.hermitian_part()).expect("Hermitian block");
        total += p * eig.iter().map(|&l| plogp((l / p).max(0.0))).sum::<f64>();
    }
    total
}

/// `H(S|A)` conditioned on a projective measurement of A.
pub fn conditional_entropy_one_sided(
    rho: &DensityMatrix,
    basis_a: &MeasurementBasis,
) -> Result<f64> {
    let split = rho.require_split()?;
    check_side_dim(split.n, basis_a)?;
    Ok(one_sided_conditional(
        rho.matrix(),
        split,
        basis_a.vectors(),
    ))
}

/// `δ(S:A)` for a fixed measurement on A.
pub fn delta_given(rho: &DensityMatrix, basis_a: &MeasurementBasis) -> Result<f64> {
    let cond = conditional_entropy_one_sided(rho, basis_a)?;
    Ok(von_neumann_entropy(&rho.reduced_a()?) + cond - von_neumann_entropy(rho))
}

/// Result of minimizing the one-sided discord over bases of A.
#[derive(Debug, Clone)]
pub struct DeltaOptimum {
    pub value: f64,
    pub basis_a: MeasurementBasis,
    /// Chart parameters of the argmin on the full basis chart of A.
    pub params: Vec<f64>,
    pub evaluations: usize,
}

/// `δ(S:A) = min_B δ(S:A)_B`, searched by grid plus Nelder-Mead. The
/// result is an upper bound on the true minimum.
pub fn delta_opt(rho: &DensityMatrix, search: &SearchConfig) -> Result<DeltaOptimum> {
    let split = rho.require_split()?;
    let family = BasisFamily::full(split.n);
    let axes = search.axes(&family.param_kinds());
    let mut evaluations = 0usize;
    let mut objective = |p: &[f64]| {
        evaluations += 1;
        one_sided_conditional(rho.matrix(), split, &family.vectors(p))
    };
    let starts = grid_best_k(&axes, search.starts, &mut objective);
    let best = if family.n_params() == 0 {
        starts.into_iter().next().unwrap_or(Candidate {
            value: objective(&[]),
            params: Vec::new(),
        })
    } else {
        polish(&mut objective, &starts, step_for(&axes), search)
    };
    let h_a = von_neumann_entropy(&rho.reduced_a()?);
    let h_sa = von_neumann_entropy(rho);
    Ok(DeltaOptimum {
        value: h_a + best.value - h_sa,
        basis_a: family.basis(&best.params),
        params: best.params,
        evaluations,
    })
}

fn step_for(axes: &[Vec<f64>]) -> f64 {
    let longest = axes.iter().map(Vec::len).max().unwrap_or(1).max(2);
    PI / longest as f64
}

/// Both computations of `H(S|A)` under measurements on A then S: the
/// sequential average of projected conditional entropies, and the
/// difference `H(ρ^D_SA) - H(ρ^D_A)` of projected entropies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSidedForms {
    pub sequential: f64,
    pub difference: f64,
}

impl TwoSidedForms {
    pub fn gap(&self) -> f64 {
        (self.sequential - self.difference).abs()
    }
}

pub fn two_sided_forms(
    rho: &DensityMatrix,
    basis_a: &MeasurementBasis,
    basis_s: &MeasurementBasis,
) -> Result<TwoSidedForms> {
    let split = rho.require_split()?;
    check_side_dim(split.n, basis_a)?;
    check_side_dim(split.m, basis_s)?;

    let mut sequential = 0.0;
    for v in basis_a.vectors() {
        let block = a_conditioned(rho.matrix(), split, v);
        let p = block.trace().re;
        if p < ENTROPY_FLOOR {
            continue;
        }
        let q: Vec<f64> = basis_s
            .vectors()
            .iter()
            .map(|u| (block.expectation(u) / p).max(0.0))
            .collect();
        sequential += p * shannon_entropy(&q);
    }

    let joint = projected_entropy(rho, &product_basis(basis_s, basis_a))?;
    let marginal = projected_entropy(&rho.reduced_a()?, basis_a)?;
    Ok(TwoSidedForms {
        sequential,
        difference: joint - marginal,
    })
}

/// `H(S|A)` under a measurement of A followed by one of S; fails if the two
/// forms disagree by more than 1e-9.
pub fn conditional_entropy_two_sided(
    rho: &DensityMatrix,
    basis_a: &MeasurementBasis,
    basis_s: &MeasurementBasis,
) -> Result<f64> {
    let forms = two_sided_forms(rho, basis_a, basis_s)?;
    if forms.gap() > TWO_SIDED_TOL {
        return Err(DiscordError::Consistency(format!(
            "two-sided conditional entropy forms differ: sequential {} vs difference {}",
            forms.sequential, forms.difference
        )));
    }
    Ok(forms.difference)
}

/// `α(S:A)` for a fixed pair of measurements.
pub fn alpha_given(
    rho: &DensityMatrix,
    basis_a: &MeasurementBasis,
    basis_s: &MeasurementBasis,
) -> Result<f64> {
    let cond = conditional_entropy_two_sided(rho, basis_a, basis_s)?;
    Ok(von_neumann_entropy(&rho.reduced_a()?) + cond - von_neumann_entropy(rho))
}

/// A minimizing product basis for the projected joint entropy.
#[derive(Debug, Clone)]
pub struct ProductOptimum {
    /// `H(ρ^D) - H(ρ)` at the optimum, in bits.
    pub value: f64,
    /// `H(ρ^D)` at the optimum.
    pub projected_entropy: f64,
    pub basis_s: MeasurementBasis,
    pub basis_a: MeasurementBasis,
    /// Chart parameters, S block first.
    pub params: Vec<f64>,
    pub evaluations: usize,
}

/// Closed-form α together with the marginal spectra it was built from.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    pub optimum: ProductOptimum,
    pub eigen_s: EigenBasis,
    pub eigen_a: EigenBasis,
}

impl ClosedForm {
    pub fn value(&self) -> f64 {
        self.optimum.value
    }
}

/// Minimizes `H(ρ^D)` over `family_s × family_a` by a grid scan (S outer,
/// A inner, lexicographic) and Nelder-Mead polishing.
fn minimize_projected_entropy(
    rho: &DensityMatrix,
    family_s: &BasisFamily,
    family_a: &BasisFamily,
    search: &SearchConfig,
) -> Result<ProductOptimum> {
    let split = rho.require_split()?;
    let Split { m, n } = split;
    let h_joint = von_neumann_entropy(rho);
    let ks = family_s.n_params();

    let objective = |p: &[f64]| -> f64 {
        let us = family_s.vectors(&p[..ks]);
        let va = family_a.vectors(&p[ks..]);
        let mut cond = vec![ZERO; n * n];
        let mut h = 0.0;
        for u in &us {
            s_conditioned(rho.matrix(), split, u, &mut cond);
            for v in &va {
                h += plogp(quad_form(&cond, v).max(0.0));
            }
        }
        h
    };

    let mut kinds = family_s.param_kinds();
    kinds.extend(family_a.param_kinds());
    let axes = search.axes(&kinds);
    let (axes_s, axes_a) = axes.split_at(ks);

    let mut a_points: Vec<(Vec<f64>, Vec<Vec<C64>>)> = Vec::new();
    for_each_grid_point(axes_a, |p| a_points.push((p.to_vec(), family_a.vectors(p))));
    if a_points.is_empty() {
        a_points.push((Vec::new(), family_a.vectors(&[])));
    }

    let mut best = BestK::new(search.starts);
    let mut evaluations = 0usize;
    let mut cond: Vec<Vec<C64>> = vec![vec![ZERO; n * n]; m];
    let mut params = Vec::with_capacity(kinds.len());
    let mut visit_s = |ps: &[f64]| {
        let us = family_s.vectors(ps);
        for (u, c) in us.iter().zip(cond.iter_mut()) {
            s_conditioned(rho.matrix(), split, u, c);
        }
        for (pa, va) in &a_points {
            let mut h = 0.0;
            for c in &cond {
                for v in va {
                    h += plogp(quad_form(c, v).max(0.0));
                }
            }
            evaluations += 1;
            if best.would_accept(h) {
                params.clear();
                params.extend_from_slice(ps);
                params.extend_from_slice(pa);
                best.offer(h, &params);
            }
        }
    };
    if axes_s.is_empty() {
        visit_s(&[]);
    } else {
        for_each_grid_point(axes_s, &mut visit_s);
    }
    let starts = best.into_vec();

    let best = if kinds.is_empty() {
        starts.into_iter().next().expect("single evaluation")
    } else {
        let mut counted = |p: &[f64]| {
            evaluations += 1;
            objective(p)
        };
        polish(&mut counted, &starts, step_for(&axes), search)
    };

    Ok(ProductOptimum {
        value: best.value - h_joint,
        projected_entropy: best.value,
        basis_s: family_s.basis(&best.params[..ks]),
        basis_a: family_a.basis(&best.params[ks..]),
        params: best.params,
        evaluations,
    })
}

/// `α(S:A) = H(ρ^D) - H(ρ)` with ρ^D dephased in the product of the
/// marginals' eigenbases, using the default degenerate-block search.
pub fn alpha_closed_form(rho: &DensityMatrix) -> Result<ClosedForm> {
    alpha_closed_form_with(rho, &SearchConfig::degenerate_default())
}

/// Closed-form α. When a marginal has degenerate eigenvalues its eigenbasis
/// is not unique; the projected entropy is then minimized over all
/// eigenbases (rotations inside each degenerate eigenspace).
pub fn alpha_closed_form_with(rho: &DensityMatrix, search: &SearchConfig) -> Result<ClosedForm> {
    rho.require_split()?;
    let eigen_s = basis_from_eigendecomposition(&rho.reduced_s()?);
    let eigen_a = basis_from_eigendecomposition(&rho.reduced_a()?);
    let optimum = minimize_projected_entropy(
        rho,
        &BasisFamily::eigenbases(&eigen_s),
        &BasisFamily::eigenbases(&eigen_a),
        search,
    )?;
    Ok(ClosedForm {
        optimum,
        eigen_s,
        eigen_a,
    })
}

/// `α(S:A) = min over all product bases of H(ρ^D) - H(ρ)`, by brute force.
/// Independent of the marginal eigenbases; used to check the closed form.
pub fn alpha_oracle(rho: &DensityMatrix, search: &SearchConfig) -> Result<ProductOptimum> {
    alpha_oracle_guarded(rho, search, Some(ORACLE_DIM_LIMIT))
}

/// [`alpha_oracle`] with an explicit factor-dimension guard (`None` disables it).
pub fn alpha_oracle_guarded(
    rho: &DensityMatrix,
    search: &SearchConfig,
    limit: Option<usize>,
) -> Result<ProductOptimum> {
    let Split { m, n } = rho.require_split()?;
    if let Some(limit) = limit {
        if m > limit || n > limit {
            return Err(DiscordError::CostGuard { m, n, limit });
        }
    }
    minimize_projected_entropy(rho, &BasisFamily::full(m), &BasisFamily::full(n), search)
}

/// The state with the roles of S and A exchanged.
pub fn swap_roles(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let split = rho.require_split()?;
    let swapped = swap_subsystems(rho.matrix(), split.m, split.n)?;
    Ok(DensityMatrix::trusted(swapped, Some(split.swapped())))
}

/// `α(A:S)`: the closed form evaluated with the subsystems exchanged.
pub fn alpha_swapped(rho: &DensityMatrix) -> Result<f64> {
    Ok(alpha_closed_form(&swap_roles(rho)?)?.value())
}

pub fn alpha_swapped_with(rho: &DensityMatrix, search: &SearchConfig) -> Result<f64> {
    Ok(alpha_closed_form_with(&swap_roles(rho)?, search)?.value())
}

/// Commuting product observable `N ⊗ K` certifying a zero-discord state.
#[derive(Debug, Clone)]
pub struct Witness {
    pub observable_s: ComplexMatrix,
    pub observable_a: ComplexMatrix,
    /// `max |[ρ, N ⊗ K]|`.
    pub commutator_norm: f64,
}

#[derive(Debug, Clone)]
pub struct ZeroDiscordVerdict {
    pub alpha: f64,
    pub is_zero: bool,
    pub witness: Option<Witness>,
}

/// Builds the verdict from an already computed closed form.
pub fn zero_discord_from(
    rho: &DensityMatrix,
    closed: &ClosedForm,
    tol: f64,
) -> Result<ZeroDiscordVerdict> {
    let alpha = closed.value();
    if alpha >= tol {
        return Ok(ZeroDiscordVerdict {
            alpha,
            is_zero: false,
            witness: None,
        });
    }
    let labels = |d: usize| (1..=d).map(|k| k as f64).collect::<Vec<_>>();
    let basis_s = &closed.optimum.basis_s;
    let basis_a = &closed.optimum.basis_a;
    let observable_s = basis_s.observable(&labels(basis_s.dim()));
    let observable_a = basis_a.observable(&labels(basis_a.dim()));
    let product = tensor_product(&observable_s, &observable_a);
    let commutator_norm = commutator(rho.matrix(), &product)?.max_abs();
    if commutator_norm >= WITNESS_TOL {
        return Err(DiscordError::Consistency(format!(
            "alpha = {alpha:.3e} is below {tol:.1e} but the witness commutator is {commutator_norm:.3e}"
        )));
    }
    Ok(ZeroDiscordVerdict {
        alpha,
        is_zero: true,
        witness: Some(Witness {
            observable_s,
            observable_a,
            commutator_norm,
        }),
    })
}

/// Zero-discord test: α below `tol`, confirmed by a commuting product
/// observable built from the minimizing bases.
pub fn zero_discord_check(rho: &DensityMatrix, tol: f64) -> Result<ZeroDiscordVerdict> {
    let closed = alpha_closed_form(rho)?;
    zero_discord_from(rho, &closed, tol)
}

/// Entanglement status from the partial-transpose test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separability {
    /// Positive partial transpose on a 2x2 or 2x3 system, which is exact.
    Separable,
    /// Negative partial transpose.
    Entangled,
    /// Positive partial transpose in dimensions where that is inconclusive.
    Undetermined,
}

pub fn classify_separability(rho: &DensityMatrix) -> Result<Separability> {
    let Split { m, n } = rho.require_split()?;
    let pt = partial_transpose_a(rho.matrix(), m, n)?;
    let min = hermitian_eigenvalues(&pt)?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(if min < -1e-10 {
        Separability::Entangled
    } else if m * n <= 6 {
        Separability::Separable
    } else {
        Separability::Undetermined
    })
}

/// Settings for [`analyze`].
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub delta_search: SearchConfig,
    pub alpha_search: SearchConfig,
    /// Run the brute-force oracle (skipped on entangled input unless
    /// `allow_entangled_oracle`).
    pub oracle: Option<SearchConfig>,
    pub allow_entangled_oracle: bool,
    /// Also report δ for this fixed basis on A.
    pub delta_basis: Option<MeasurementBasis>,
    pub zero_tol: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            delta_search: SearchConfig::delta_default(),
            alpha_search: SearchConfig::degenerate_default(),
            oracle: None,
            allow_entangled_oracle: false,
            delta_basis: None,
            zero_tol: ZERO_DISCORD_TOL,
        }
    }
}

/// Every measure for one bipartite state.
#[derive(Debug, Clone)]
pub struct DiscordReport {
    pub split: Split,
    pub mutual_information: f64,
    pub delta_given: Option<(f64, MeasurementBasis)>,
    pub delta_opt: DeltaOptimum,
    pub alpha_closed: ClosedForm,
    pub alpha_oracle: Option<ProductOptimum>,
    pub alpha_swapped: f64,
    /// `|α(S:A) - α(A:S)|`.
    pub symmetry_gap: f64,
    pub separability: Separability,
    pub zero_discord: ZeroDiscordVerdict,
    pub notes: Vec<String>,
}

impl DiscordReport {
    pub fn degenerate_s(&self) -> bool {
        self.alpha_closed.eigen_s.is_degenerate()
    }

    pub fn degenerate_a(&self) -> bool {
        self.alpha_closed.eigen_a.is_degenerate()
    }
}

pub fn analyze(rho: &DensityMatrix, options: &AnalysisOptions) -> Result<DiscordReport> {
    let split = rho.require_split()?;
    let mut notes = Vec::new();
    let separability = classify_separability(rho)?;
    let mutual_information = mutual_information(rho)?;
    let delta_given = match &options.delta_basis {
        Some(b) => Some((delta_given(rho, b)?, b.clone())),
        None => None,
    };
    let delta_opt = delta_opt(rho, &options.delta_search)?;
    let alpha_closed = alpha_closed_form_with(rho, &options.alpha_search)?;
    let alpha_swapped = alpha_swapped_with(rho, &options.alpha_search)?;
    let symmetry_gap = (alpha_closed.value() - alpha_swapped).abs();

    if alpha_closed.value() < delta_opt.value - STRONGNESS_SLACK {
        return Err(DiscordError::Consistency(format!(
            "closed-form alpha {} fell below optimized delta {}",
            alpha_closed.value(),
            delta_opt.value
        )));
    }

    if separability != Separability::Separable {
        notes.push(
            "closed form is established only for separable states; oracle comparison recommended"
                .to_string(),
        );
    }

    let alpha_oracle = match &options.oracle {
        Some(cfg) if separability != Separability::Entangled || options.allow_entangled_oracle => {
            let found = alpha_oracle(rho, cfg)?;
            if found.value < alpha_closed.value() - 1e-5 {
                notes.push(format!(
                    "oracle found a product basis {:.3e} bits below the closed form",
                    alpha_closed.value() - found.value
                ));
            }
            Some(found)
        }
        Some(_) => {
            notes
                .push("oracle skipped on entangled input (pass --entangled to run it)".to_string());
            None
        }
        None => None,
    };

    let zero_discord = zero_discord_from(rho, &alpha_closed, options.zero_tol)?;
    Ok(DiscordReport {
        split,
        mutual_information,
        delta_given,
        delta_opt,
        alpha_closed,
        alpha_oracle,
        alpha_swapped,
        symmetry_gap,
        separability,
        zero_discord,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{alpha_zurek_reference, werner, zurek};
    use crate::linalg::ONE;
    use crate::measurement::{qubit_basis, QubitBasisAngles};
    use crate::state::{
        assemble_separable, binary_entropy, classical_classical, random_density, random_separable,
        SeparableSpec,
    };

    fn product_state() -> DensityMatrix {
        let s = random_density(2, 2, 21).unwrap();
        let a = random_density(2, 2, 22).unwrap();
        DensityMatrix::bipartite(tensor_product(s.matrix(), a.matrix()), 2, 2).unwrap()
    }

    fn comp() -> MeasurementBasis {
        MeasurementBasis::computational(2)
    }

    fn x_basis() -> MeasurementBasis {
        qubit_basis(QubitBasisAngles::new(PI / 2.0, 0.0).unwrap())
    }

    fn classical_diag() -> DensityMatrix {
        DensityMatrix::bipartite(ComplexMatrix::from_diagonal(&[0.5, 0.0, 0.0, 0.5]), 2, 2).unwrap()
    }

    #[test]
    fn mutual_information_examples() {
        assert!(mutual_information(&product_state()).unwrap().abs() < 1e-12);
        assert!((mutual_information(&zurek(1.0).unwrap()).unwrap() - 2.0).abs() < 1e-12);
        let w = mutual_information(&werner(1.0 / 3.0).unwrap()).unwrap();
        assert!((w - (2.0 - 3f64.log2())).abs() < 1e-12);
        assert_eq!(
            mutual_information(&DensityMatrix::maximally_mixed(4)).unwrap_err(),
            DiscordError::MissingSplit
        );
    }

    #[test]
    fn one_sided_conditional_examples() {
        let rho = product_state();
        let h_s = von_neumann_entropy(&rho.reduced_s().unwrap());
        assert!((conditional_entropy_one_sided(&rho, &x_basis()).unwrap() - h_s).abs() < 1e-12);
        assert!(
            conditional_entropy_one_sided(&classical_diag(), &comp())
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!(
            conditional_entropy_one_sided(&zurek(1.0).unwrap(), &comp())
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!(conditional_entropy_one_sided(&rho, &MeasurementBasis::computational(3)).is_err());
    }

    #[test]
    fn delta_given_examples() {
        assert!(delta_given(&classical_diag(), &comp()).unwrap().abs() < 1e-12);
        assert!((delta_given(&zurek(1.0).unwrap(), &comp()).unwrap() - 1.0).abs() < 1e-12);
        let d = delta_given(&zurek(0.5).unwrap(), &comp()).unwrap();
        assert!((d - (1.0 - binary_entropy(0.75))).abs() < 1e-12);
        assert!((d - 0.188_721_875_540_867).abs() < 1e-9);
    }

    #[test]
    fn delta_opt_examples() {
        let cfg = SearchConfig::delta_default();
        assert!(delta_opt(&product_state(), &cfg).unwrap().value.abs() < 1e-10);
        let bell = delta_opt(&zurek(1.0).unwrap(), &cfg).unwrap();
        assert!((bell.value - 1.0).abs() < 1e-9);
        let w = delta_opt(&werner(1.0 / 3.0).unwrap(), &cfg).unwrap();
        assert!((w.value - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn delta_opt_on_qutrit_a() {
        let spec = random_separable(2, 3, 3, 17).unwrap();
        let rho = assemble_separable(&spec).unwrap();
        let cfg = SearchConfig::delta_default().with_grid(4);
        let best = delta_opt(&rho, &cfg).unwrap();
        assert!(best.value >= -1e-9);
        // Never above the value at the computational basis.
        assert!(
            best.value <= delta_given(&rho, &MeasurementBasis::computational(3)).unwrap() + 1e-12
        );
    }

    #[test]
    fn two_sided_examples() {
        let rho = product_state();
        let h = conditional_entropy_two_sided(&rho, &comp(), &x_basis()).unwrap();
        let expected = projected_entropy(&rho.reduced_s().unwrap(), &x_basis()).unwrap();
        assert!((h - expected).abs() < 1e-12);
        assert!(
            conditional_entropy_two_sided(&classical_diag(), &comp(), &comp())
                .unwrap()
                .abs()
                < 1e-12
        );
        let z = two_sided_forms(&zurek(0.5).unwrap(), &comp(), &comp()).unwrap();
        assert!(z.sequential.abs() < 1e-12 && z.difference.abs() < 1e-12);
    }

    #[test]
    fn alpha_given_examples() {
        assert!(
            alpha_given(&classical_diag(), &comp(), &comp())
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!((alpha_given(&zurek(1.0).unwrap(), &comp(), &comp()).unwrap() - 1.0).abs() < 1e-12);
        let rho = assemble_separable(&random_separable(2, 2, 3, 5).unwrap()).unwrap();
        let b_a = qubit_basis(QubitBasisAngles::new(0.4, 1.0).unwrap());
        let b_s = qubit_basis(QubitBasisAngles::new(2.0, 5.0).unwrap());
        assert!(alpha_given(&rho, &b_a, &b_s).unwrap() >= delta_given(&rho, &b_a).unwrap() - 1e-10);
    }

    #[test]
    fn closed_form_examples() {
        assert!(alpha_closed_form(&product_state()).unwrap().value().abs() < 1e-12);
        let z1 = alpha_closed_form(&zurek(1.0).unwrap()).unwrap();
        assert!((z1.value() - 1.0).abs() < 1e-12);
        assert!(z1.eigen_s.is_degenerate() && z1.eigen_a.is_degenerate());
        for z in [0.1, 0.5, 0.9] {
            let got = alpha_closed_form(&zurek(z).unwrap()).unwrap().value();
            assert!(
                (got - alpha_zurek_reference(z)).abs() < 1e-9,
                "z={z}: {got}"
            );
        }
        let w = alpha_closed_form(&werner(1.0 / 3.0).unwrap())
            .unwrap()
            .value();
        assert!((w - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn closed_form_on_rotated_classical_state() {
        // p = [[.5, 0], [0, .5]] in bases rotated by θ = π/4: both marginals
        // are I/2, so the minimizing eigenbasis has to be found by search.
        let b = qubit_basis(QubitBasisAngles::new(PI / 4.0, 0.0).unwrap());
        let rho = classical_classical(&[vec![0.5, 0.0], vec![0.0, 0.5]], &b, &b).unwrap();
        let alpha = alpha_closed_form(&rho).unwrap().value();
        assert!(alpha.abs() < 1e-10, "alpha = {alpha}");
    }

    #[test]
    fn oracle_examples() {
        let cfg = SearchConfig::oracle_default().with_grid(12);
        assert!(alpha_oracle(&product_state(), &cfg).unwrap().value.abs() < 1e-9);
        let rho = zurek(0.6).unwrap();
        let oracle = alpha_oracle(&rho, &cfg).unwrap();
        let closed = alpha_closed_form(&rho).unwrap();
        assert!((oracle.value - closed.value()).abs() < 1e-5);
    }

    #[test]
    fn oracle_cost_guard() {
        let rho = DensityMatrix::maximally_mixed(10).with_split(2, 5).unwrap();
        assert!(matches!(
            alpha_oracle(&rho, &SearchConfig::oracle_default()),
            Err(DiscordError::CostGuard {
                m: 2,
                n: 5,
                limit: 4
            })
        ));
    }

    #[test]
    fn swapped_examples() {
        let w = werner(0.2).unwrap();
        let direct = alpha_closed_form(&w).unwrap().value();
        assert!((alpha_swapped(&w).unwrap() - direct).abs() < 1e-12);
        assert!(alpha_swapped(&product_state()).unwrap().abs() < 1e-12);
        let rho = assemble_separable(&random_separable(2, 3, 4, 5).unwrap()).unwrap();
        let gap = (alpha_closed_form(&rho).unwrap().value() - alpha_swapped(&rho).unwrap()).abs();
        assert!(gap < 1e-7);
    }

    #[test]
    fn zero_discord_examples() {
        let bs = qubit_basis(QubitBasisAngles::new(0.8, 1.3).unwrap());
        let ba = qubit_basis(QubitBasisAngles::new(2.1, 0.4).unwrap());
        let rho = classical_classical(&[vec![0.4, 0.1], vec![0.2, 0.3]], &bs, &ba).unwrap();
        let v = zero_discord_check(&rho, ZERO_DISCORD_TOL).unwrap();
        assert!(v.is_zero);
        assert!(v.witness.unwrap().commutator_norm < WITNESS_TOL);

        let v = zero_discord_check(&zurek(0.5).unwrap(), ZERO_DISCORD_TOL).unwrap();
        assert!(!v.is_zero && v.witness.is_none());
        assert!((v.alpha - 0.188_721_875_540_867).abs() < 1e-9);

        assert!(
            zero_discord_check(&werner(0.0).unwrap(), ZERO_DISCORD_TOL)
                .unwrap()
                .is_zero
        );
    }

    #[test]
    fn separability_classes() {
        assert_eq!(
            classify_separability(&zurek(1.0).unwrap()).unwrap(),
            Separability::Entangled
        );
        assert_eq!(
            classify_separability(&zurek(0.0).unwrap()).unwrap(),
            Separability::Separable
        );
        assert_eq!(
            classify_separability(&werner(-1.0 / 3.0).unwrap()).unwrap(),
            Separability::Separable
        );
        let big = DensityMatrix::maximally_mixed(9).with_split(3, 3).unwrap();
        assert_eq!(
            classify_separability(&big).unwrap(),
            Separability::Undetermined
        );
    }

    #[test]
    fn report_for_bell_state() {
        let opts = AnalysisOptions {
            delta_basis: Some(comp()),
            ..AnalysisOptions::default()
        };
        let r = analyze(&zurek(1.0).unwrap(), &opts).unwrap();
        assert!((r.mutual_information - 2.0).abs() < 1e-12);
        assert!((r.delta_opt.value - 1.0).abs() < 1e-9);
        assert!((r.alpha_closed.value() - 1.0).abs() < 1e-12);
        assert!((r.delta_given.as_ref().unwrap().0 - 1.0).abs() < 1e-12);
        assert_eq!(r.separability, Separability::Entangled);
        assert!(r.degenerate_s() && r.degenerate_a());
        assert!(!r.notes.is_empty());
        assert!(!r.zero_discord.is_zero);
    }

    #[test]
    fn report_skips_oracle_on_entangled_input_unless_asked() {
        let mut opts = AnalysisOptions {
            oracle: Some(SearchConfig::oracle_default().with_grid(6)),
            ..AnalysisOptions::default()
        };
        let rho = zurek(0.9).unwrap();
        assert!(analyze(&rho, &opts).unwrap().alpha_oracle.is_none());
        opts.allow_entangled_oracle = true;
        assert!(analyze(&rho, &opts).unwrap().alpha_oracle.is_some());
    }

    #[test]
    fn separable_spec_components_feed_the_report() {
        let zero = DensityMatrix::pure(&[ONE, ZERO], None).unwrap();
        let spec = SeparableSpec::new(vec![1.0], vec![(zero.clone(), zero)]).unwrap();
        let r = analyze(
            &assemble_separable(&spec).unwrap(),
            &AnalysisOptions::default(),
        )
        .unwrap();
        assert!(r.mutual_information.abs() < 1e-12);
        assert!(r.zero_discord.is_zero);
    }
}
