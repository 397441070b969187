//! Numerical laboratory for dyadic frequency analysis of a coupled
//! parabolic-hyperbolic aggregation system on the d-torus.
//!
//! The crate provides, in layers:
//! spectral infrastructure (grids, FFT, Littlewood-Paley blocks, Lebesgue /
//! Besov / time-resolved Besov norms, Fourier multipliers), a family of
//! frequency-localised initial data built from modulated atoms at dyadic
//! scales, heat-semigroup evolution tools including a pseudo-spectral solver
//! and a perturbation ladder, and a verification layer that measures the
//! inequalities and scaling laws the construction rests on.

pub mod construction;
pub mod cutoff;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod lp;
pub mod multiplier;
pub mod norms;
pub mod quadrature;

pub use error::{Error, Result};
pub use field::{Field, VectorField};
pub use grid::GridSpec;
