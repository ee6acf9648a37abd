//! Seeded property suites checking the entropy identities and inequalities
//! the measures are built on. Each property reports its worst-case margin;
//! a property passes when that margin is at least `-tolerance`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::discord::{
    alpha_closed_form_with, alpha_oracle, alpha_swapped_with, classify_separability, delta_opt,
    two_sided_forms, Separability,
};
use crate::error::{DiscordError, Result};
use crate::families::zurek;
use crate::linalg::commutator;
use crate::linalg::tensor_product;
use crate::measurement::{basis_from_eigendecomposition, projected_entropy, random_basis};
use crate::optimize::SearchConfig;
use crate::state::{
    assemble_separable, classical_classical, random_density_with, random_separable_with,
    seeded_rng, von_neumann_entropy, DensityMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma1,
    Lemma2,
    Theorem1,
    Theorem2,
    Strongness,
    ZeroDiscord,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Strongness,
        Suite::ZeroDiscord,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Strongness => "strongness",
            Suite::ZeroDiscord => "zerodiscord",
        }
    }

    /// Tolerance of the suite's headline property.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Lemma1 => 1e-9,
            Suite::Lemma2 => 1e-10,
            Suite::Theorem1 => 1e-5,
            Suite::Theorem2 => 1e-7,
            Suite::Strongness => 1e-6,
            Suite::ZeroDiscord => 1e-9,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = DiscordError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                DiscordError::InvalidParameter(format!(
                    "unknown suite '{s}' (expected lemma1, lemma2, theorem1, theorem2, strongness, zerodiscord or all)"
                ))
            })
    }
}

/// Parameters shared by every suite.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    /// Replaces the headline tolerance of the suite when set.
    pub tolerance: Option<f64>,
    pub delta_search: SearchConfig,
    pub alpha_search: SearchConfig,
    pub oracle_search: SearchConfig,
}

impl VerifyConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            tolerance: None,
            delta_search: SearchConfig::delta_default(),
            alpha_search: SearchConfig::degenerate_default(),
            oracle_search: SearchConfig::oracle_default(),
        }
    }
}

/// Worst case of one property over a suite's trials.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub name: String,
    pub trials: usize,
    pub tolerance: f64,
    /// Smallest observed slack; negative values are violations.
    pub worst_margin: f64,
    /// Trial index where the worst margin occurred.
    pub worst_trial: usize,
    pub failures: usize,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub properties: Vec<PropertyOutcome>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }
}

struct Tracker {
    outcome: PropertyOutcome,
}

impl Tracker {
    fn new(name: &str, tolerance: f64) -> Self {
        Self {
            outcome: PropertyOutcome {
                name: name.to_string(),
                trials: 0,
                tolerance,
                worst_margin: f64::INFINITY,
                worst_trial: 0,
                failures: 0,
            },
        }
    }

    fn record(&mut self, trial: usize, margin: f64) {
        let o = &mut self.outcome;
        o.trials += 1;
        if margin < o.worst_margin || margin.is_nan() {
            o.worst_margin = margin;
            o.worst_trial = trial;
        }
        if margin.is_nan() || margin < -o.tolerance {
            o.failures += 1;
        }
    }

    fn finish(self) -> PropertyOutcome {
        self.outcome
    }
}

fn random_rank<R: Rng>(rng: &mut R, dim: usize) -> usize {
    rng.random_range(1..=dim)
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteOutcome> {
    let tol = cfg.tolerance.unwrap_or(suite.default_tolerance());
    let mut rng = seeded_rng(cfg.seed);
    let properties = match suite {
        Suite::Lemma1 => lemma1(&mut rng, cfg.trials, tol)?,
        Suite::Lemma2 => lemma2(&mut rng, cfg.trials, tol)?,
        Suite::Theorem1 => theorem1(&mut rng, cfg, tol)?,
        Suite::Theorem2 => theorem2(&mut rng, cfg, tol)?,
        Suite::Strongness => strongness(&mut rng, cfg, tol)?,
        Suite::ZeroDiscord => zero_discord(&mut rng, cfg, tol)?,
    };
    Ok(SuiteOutcome { suite, properties })
}

/// Two forms of the two-sided conditional entropy agree (dims up to 3x3).
fn lemma1(rng: &mut ChaCha8Rng, trials: usize, tol: f64) -> Result<Vec<PropertyOutcome>> {
    let mut agree = Tracker::new("sequential and difference forms agree", tol);
    for t in 0..trials {
        let (m, n) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let rank = random_rank(rng, m * n);
        let rho = random_density_with(rng, m * n, rank)?.with_split(m, n)?;
        let basis_a = random_basis(rng, n);
        let basis_s = random_basis(rng, m);
        let forms = two_sided_forms(&rho, &basis_a, &basis_s)?;
        agree.record(t, -forms.gap());
    }
    Ok(vec![agree.finish()])
}

/// Dephasing never lowers entropy, and leaves it unchanged in the eigenbasis.
fn lemma2(rng: &mut ChaCha8Rng, trials: usize, tol: f64) -> Result<Vec<PropertyOutcome>> {
    let mut increase = Tracker::new("projected entropy >= von Neumann entropy", tol);
    let mut equality = Tracker::new("equality in the state's own eigenbasis", tol);
    for t in 0..trials {
        let dim = rng.random_range(2..=4);
        let rank = random_rank(rng, dim);
        let rho = random_density_with(rng, dim, rank)?;
        let h = von_neumann_entropy(&rho);
        let basis = random_basis(rng, dim);
        increase.record(t, projected_entropy(&rho, &basis)? - h);
        let own = basis_from_eigendecomposition(&rho).basis;
        equality.record(t, -(projected_entropy(&rho, &own)? - h).abs());
    }
    Ok(vec![increase.finish(), equality.finish()])
}

fn random_separable_state(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Result<DensityMatrix> {
    let k = rng.random_range(1..=4);
    assemble_separable(&random_separable_with(rng, m, n, k)?)
}

/// Brute force over all product bases against the eigenbasis closed form.
fn theorem1(rng: &mut ChaCha8Rng, cfg: &VerifyConfig, tol: f64) -> Result<Vec<PropertyOutcome>> {
    let mut no_undershoot = Tracker::new("oracle >= closed form", tol);
    let mut agreement = Tracker::new("oracle agrees with closed form within 1e-4", 1e-4);
    for t in 0..cfg.trials {
        let rho = random_separable_state(rng, 2, 2)?;
        let closed = alpha_closed_form_with(&rho, &cfg.alpha_search)?.value();
        let oracle = alpha_oracle(&rho, &cfg.oracle_search)?.value;
        no_undershoot.record(t, oracle - closed);
        agreement.record(t, -(oracle - closed).abs());
    }
    Ok(vec![no_undershoot.finish(), agreement.finish()])
}

/// Exchanging the subsystems leaves the closed form unchanged.
fn theorem2(rng: &mut ChaCha8Rng, cfg: &VerifyConfig, tol: f64) -> Result<Vec<PropertyOutcome>> {
    let mut symmetric = Tracker::new("|alpha(S:A) - alpha(A:S)| on 2x2 and 2x3", tol);
    for t in 0..cfg.trials {
        let n = if t % 2 == 0 { 2 } else { 3 };
        let rho = random_separable_state(rng, 2, n)?;
        let direct = alpha_closed_form_with(&rho, &cfg.alpha_search)?.value();
        let swapped = alpha_swapped_with(&rho, &cfg.alpha_search)?;
        symmetric.record(t, -(direct - swapped).abs());
    }
    Ok(vec![symmetric.finish()])
}

/// The symmetric discord dominates the optimized one-sided discord.
fn strongness(rng: &mut ChaCha8Rng, cfg: &VerifyConfig, tol: f64) -> Result<Vec<PropertyOutcome>> {
    let mut separable = Tracker::new("alpha >= delta on separable states", tol);
    let mut entangled = Tracker::new("alpha >= delta on entangled states", tol);
    for t in 0..cfg.trials {
        let rho = if t % 2 == 0 {
            random_separable_state(rng, 2, 2)?
        } else {
            let rank = random_rank(rng, 4);
            random_density_with(rng, 4, rank)?.with_split(2, 2)?
        };
        let margin = alpha_closed_form_with(&rho, &cfg.alpha_search)?.value()
            - delta_opt(&rho, &cfg.delta_search)?.value;
        match classify_separability(&rho)? {
            Separability::Entangled => entangled.record(t, margin),
            _ => separable.record(t, margin),
        }
    }
    Ok(vec![separable.finish(), entangled.finish()])
}

/// Classical-classical states in rotated bases have zero α and a commuting
/// product witness; the Zurek family away from z = 0 does not.
fn zero_discord(
    rng: &mut ChaCha8Rng,
    cfg: &VerifyConfig,
    tol: f64,
) -> Result<Vec<PropertyOutcome>> {
    let mut vanishes = Tracker::new("alpha of classical-classical states", tol);
    let mut witness = Tracker::new("witness commutator max-abs", crate::discord::WITNESS_TOL);
    for t in 0..cfg.trials {
        let (m, n) = (2, if t % 2 == 0 { 2 } else { 3 });
        let raw: Vec<f64> = (0..m * n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = raw.iter().sum();
        let table: Vec<Vec<f64>> = raw
            .chunks(n)
            .map(|row| row.iter().map(|p| p / total).collect())
            .collect();
        let basis_s = random_basis(rng, m);
        let basis_a = random_basis(rng, n);
        let rho = classical_classical(&table, &basis_s, &basis_a)?;
        let closed = alpha_closed_form_with(&rho, &cfg.alpha_search)?;
        vanishes.record(t, -closed.value());
        let labels = |d: usize| (1..=d).map(|k| k as f64).collect::<Vec<_>>();
        let obs = tensor_product(
            &closed.optimum.basis_s.observable(&labels(m)),
            &closed.optimum.basis_a.observable(&labels(n)),
        );
        witness.record(t, -commutator(rho.matrix(), &obs)?.max_abs());
    }
    let mut nonzero = Tracker::new("alpha(zurek z) > 0.01 for z in {0.25, 0.5, 0.75}", 0.0);
    for (t, z) in [0.25, 0.5, 0.75].into_iter().enumerate() {
        let alpha = alpha_closed_form_with(&zurek(z)?, &cfg.alpha_search)?.value();
        nonzero.record(t, alpha - 0.01);
    }
    Ok(vec![vanishes.finish(), witness.finish(), nonzero.finish()])
}
