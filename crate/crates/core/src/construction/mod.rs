//! Construction of the oscillating multi-scale initial data.
//!
//! The data is a superposition of modulated atoms: a smooth envelope
//! `theta` (band-limited, plateau-shaped spectrum) carried on two
//! frequencies — an inner modulation on the last axis that doubles under
//! squaring into the dyadic inspection shells, and an outer carrier on the
//! first axis that places the data itself on a single high shell.  The
//! modules here build the atoms and families spectrally (exact lattice
//! synthesis), compute continuum reference values by quadrature, and split
//! the squared data into its resonant and non-resonant parts.

pub mod atom;
pub mod family;
pub mod oracle;
pub mod presets;
pub mod split;
pub mod window;

pub use atom::{build_atom, theta_profile, AtomProfile, AtomSpec};
pub use family::{
    build_f, build_initial_data, support_report, ConstructionParams, DataPair, FrequencyRegion,
};
pub use split::{product_split, ProductSplit};
