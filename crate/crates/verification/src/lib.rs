//! Measurement layer: every inequality, scaling law and support claim the
//! construction rests on is turned into a named check that measures both
//! sides on concrete fields and reports slack ratios, fitted exponents and a
//! verdict. The discontinuity experiment drives the full pipeline (data,
//! ladder, solver) over a parameter sweep and audits the lower bound.
//!
//! Conventions shared by every check:
//! - a measurement records `(parameters, lhs, rhs, slack_ratio)` where
//!   `slack_ratio >= 1` means the claim holds with room to spare;
//! - a report passes iff every slack ratio is `>= 1 - tolerance` and every
//!   fitted exponent sits inside its stated band with a small enough
//!   standard error;
//! - random corpora are seeded and summation orders fixed, so reports are
//!   bitwise reproducible.

pub mod checks;
pub mod corpus;
pub mod emit;
pub mod experiment;
pub mod report;

pub use checks::bernstein::{check_bernstein, BernsteinConfig};
pub use checks::block_identity::{broken_plateau_bundle, check_block_identity};
pub use checks::heat_regularity::{check_heat_regularity, HeatRegularityConfig};
pub use checks::k1_k2::check_k1_k2;
pub use checks::lp_scaling::{check_lp_scaling, LpScalingConfig};
pub use checks::product_laws::{check_product_laws, ProductLaw, ProductLawsConfig};
pub use checks::spectral_vanishing::check_spectral_vanishing;
pub use emit::{emit_report, Report};
pub use experiment::{
    run_discontinuity_experiment, run_discontinuity_experiment_with, ExperimentConfig,
    ExperimentReport, RunRecord,
};
pub use report::{CheckReport, ExponentFit, Measurement, Verdict};
