//! Quantum discord measures for bipartite density matrices.
//!
//! The crate computes the one-sided discord δ(S:A) by optimizing over
//! projective measurements on A, and the symmetric discord α(S:A), which
//! measures the entropy gained when both subsystems are measured in a
//! product basis. α has a closed form built from the eigenbases of the two
//! reduced states; a brute-force oracle over all product bases is provided
//! to check it.
//!
//! Entropies are in bits. In every bipartite operator S is the left tensor
//! factor and A the right one.

pub mod discord;
pub mod error;
pub mod families;
pub mod linalg;
pub mod measurement;
pub mod optimize;
#[cfg(test)]
mod proptests;
pub mod state;
pub mod suites;

pub use discord::{
    alpha_closed_form, alpha_closed_form_with, alpha_given, alpha_oracle, alpha_oracle_guarded,
    alpha_swapped, analyze, conditional_entropy_one_sided, conditional_entropy_two_sided,
    delta_given, delta_opt, mutual_information, two_sided_forms, zero_discord_check,
    AnalysisOptions, ClosedForm, DeltaOptimum, DiscordReport, ProductOptimum, Separability,
    ZeroDiscordVerdict,
};
pub use error::{DiscordError, Result};
pub use families::{werner, zurek, Family, FamilyPoint, SweepRow};
pub use linalg::{ComplexMatrix, SpectralDecomposition, C64};
pub use measurement::{MeasurementBasis, QubitBasisAngles, Side};
pub use optimize::SearchConfig;
pub use state::{DensityMatrix, SeparableSpec, Split};
