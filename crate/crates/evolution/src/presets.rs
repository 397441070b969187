//! Ready-made data bundles sized for evolution studies.
//!
//! The construction presets in the core crate target norm measurements on
//! large grids; the bundles here trade atom-profile resolution for speed so
//! that full ladder builds run in seconds (toy) or a couple of minutes
//! (probe), while keeping every validity constraint satisfied: carrier
//! frequencies on the lattice, humps spanning at least the minimum number
//! of lattice points, family spectrum inside its shell annulus, and the
//! whole band strictly below the 2/3 dealias cutoff.

use besovlab::construction::presets::{broad_spec, sweep_spec, Bundle};
use besovlab::construction::ConstructionParams;
use besovlab::GridSpec;

/// Smallest valid bundle: 256^2 grid, box 12*pi, one atom on shell 2.
/// Full ladder builds take about a second; used by unit tests.
pub fn toy_bundle() -> Bundle {
    let grid = GridSpec::new(2, 256, 12.0 * std::f64::consts::PI).expect("grid");
    let len = grid.box_length;
    Bundle {
        grid,
        spec: broad_spec(),
        params: ConstructionParams {
            dim: 2,
            besov_r: 1.0,
            shell_index: 2,
            scales: vec![2],
            offsets: vec![0.5 * len],
            modulation_outer: 17.0 / 12.0,
            count_factor: 1.0,
        },
    }
}

/// Mid-size probe: 1024^2 grid, box 24*pi, one atom on scale 2 under shell
/// index 4 — the same family shape as the default evolution bundle at a
/// quarter of the grid cost. Used by the amplitude- and epsilon-scaling
/// studies, where several full ladder builds must fit in a few minutes.
pub fn probe_bundle() -> Bundle {
    let grid = GridSpec::new(2, 1024, 24.0 * std::f64::consts::PI).expect("grid");
    let len = grid.box_length;
    Bundle {
        grid,
        spec: sweep_spec(),
        params: ConstructionParams {
            dim: 2,
            besov_r: 1.0,
            shell_index: 4,
            scales: vec![2],
            offsets: vec![0.5 * len],
            modulation_outer: 17.0 / 12.0,
            count_factor: 1.0,
        },
    }
}
