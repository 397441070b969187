//! The named measurement checks. Each submodule owns one check: it freezes
//! its gate constants, measures both sides of every claim on concrete
//! fields, and assembles a [`crate::report::CheckReport`].

pub mod bernstein;
pub mod block_identity;
pub mod heat_regularity;
pub mod k1_k2;
pub mod lp_scaling;
pub mod product_laws;
pub mod spectral_vanishing;
