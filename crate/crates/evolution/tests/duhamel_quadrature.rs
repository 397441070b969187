//! The closed-form Duhamel multiplier against high-order quadrature, and
//! the semigroup law of the heat propagator, on seeded random data.

use besovlab::multiplier::{duhamel_const_source, heat_propagate};
use besovlab::norms::l2_norm;
use besovlab::{Field, GridSpec};
use evolution::{duhamel_gl, sharp_low_pass};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

fn seeded_band_limited(seed: u64) -> Field {
    let grid = GridSpec::new(2, 64, TAU).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vals: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    sharp_low_pass(&Field::from_physical(grid, vals), 8.0)
}

fn rel(a: &Field, b: &Field) -> f64 {
    l2_norm(&a.sub(b)) / l2_norm(b).max(f64::MIN_POSITIVE)
}

#[test]
fn closed_form_matches_64_node_quadrature_on_twenty_seeded_sources() {
    for seed in 0..20u64 {
        let g = seeded_band_limited(seed);
        let t = 0.05 + 0.05 * seed as f64; // spreads horizons over [0.05, 1]
        let closed = duhamel_const_source(&g, t).unwrap();
        let quad = duhamel_gl(t, 64, |_| Ok(g.clone())).unwrap();
        let defect = rel(&quad, &closed);
        assert!(defect <= 1e-10, "seed {seed}: defect {defect}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn heat_propagation_obeys_the_semigroup_law(
        seed in 0u64..1000,
        t in 1e-4f64..0.5,
        s in 1e-4f64..0.5,
    ) {
        let u = seeded_band_limited(seed);
        let two_leg = heat_propagate(&heat_propagate(&u, t).unwrap(), s).unwrap();
        let one_leg = heat_propagate(&u, t + s).unwrap();
        let defect = rel(&two_leg, &one_leg);
        prop_assert!(defect <= 1e-12, "defect {defect}");
    }

    #[test]
    fn duhamel_of_a_zero_horizon_is_zero(seed in 0u64..1000) {
        let g = seeded_band_limited(seed);
        let out = duhamel_gl(0.0, 16, |_| Ok(g.clone())).unwrap();
        prop_assert_eq!(out.max_abs(), 0.0);
    }
}
