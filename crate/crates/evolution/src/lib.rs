//! Time evolution for the parabolic-hyperbolic chemotaxis system
//!
//! ```text
//! dt u - Lap u = div(u v),      u(0) = u0,
//! dt v         = grad u,        v(0) = v0,
//! ```
//!
//! on the periodic box. Three layers:
//!
//! * [`duhamel`] — exact heat-semigroup quadrature operators,
//! * [`solver`] — the full pseudo-spectral integrating-factor solver,
//! * [`ladder`] — the perturbation decomposition u = U1 + U21 + U22 + U3,
//!   v = V1 + V2 + V3, where each rung solves a linear heat problem whose
//!   source collects the products of lower rungs, plus the norm ledger
//!   that tabulates every inequality of the continuity argument.
//!
//! Everything is deterministic: no randomness, no adaptivity.

pub mod duhamel;
pub mod ladder;
pub mod ledger;
pub mod presets;
pub mod solver;
pub mod timegrid;

pub use duhamel::{duhamel_gl, duhamel_trapezoid};
pub use ladder::{
    build_ladder, build_u1_v1, build_u2, build_u3, sample_times, DefectSample, LowerRungs,
    PerturbationLadder, PicardReport,
};
pub use ledger::{ladder_norm_ledger, LedgerRow, NormLedger};
pub use solver::{sharp_low_pass, solve_chemotaxis, solve_forced, SolutionTrace};
pub use timegrid::{Integrator, SolverConfig, TimeGrid};
