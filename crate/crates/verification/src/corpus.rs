//! Seeded random field corpora. Every generator takes an explicit RNG so a
//! check's corpus is a pure function of its seed; summation orders inside
//! the norms are fixed, which makes whole reports reproducible bit for bit.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use besovlab::cutoff::CutoffProfile;
use besovlab::error::Result;
use besovlab::lp::{low_pass, project_block};
use besovlab::{Field, GridSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// White field: i.i.d. uniform [-1, 1] samples at the grid points.
pub fn random_field(grid: &GridSpec, rng: &mut ChaCha8Rng) -> Field {
    let vals: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    Field::from_physical(*grid, vals)
}

/// Random field with spectrum sharply truncated to |xi| <= cutoff and the
/// mean removed. Sharp truncation of a real field stays real because the
/// retained set is symmetric under xi -> -xi.
pub fn band_limited_field(grid: &GridSpec, rng: &mut ChaCha8Rng, cutoff: f64) -> Field {
    let raw = random_field(grid, rng);
    let spec = raw.spectral();
    let out: Vec<_> = spec
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let rho2 = grid.freq_norm_sq(i);
            if rho2 > cutoff * cutoff || rho2 == 0.0 {
                num_complex::Complex64::default()
            } else {
                *c
            }
        })
        .collect();
    Field::from_spectral(*grid, out).expect("symmetric truncation preserves reality")
}

/// Random field supported on the dyadic annulus of shell j.
pub fn shell_field(
    grid: &GridSpec,
    rng: &mut ChaCha8Rng,
    j: i32,
    profile: &CutoffProfile,
) -> Result<Field> {
    let raw = random_field(grid, rng);
    project_block(&raw, j, profile)
}

/// Random field with spectrum in the dyadic ball of shell j (low-pass).
pub fn ball_field(grid: &GridSpec, rng: &mut ChaCha8Rng, j: i32, profile: &CutoffProfile) -> Field {
    let raw = random_field(grid, rng);
    low_pass(&raw, j, profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use besovlab::cutoff::{build_cutoffs, DEFAULT_ORDER};
    use besovlab::norms::l2_norm;
    use std::f64::consts::TAU;

    fn grid() -> GridSpec {
        GridSpec::new(2, 64, TAU).unwrap()
    }

    #[test]
    fn same_seed_reproduces_the_same_field() {
        let g = grid();
        let a = random_field(&g, &mut rng(11));
        let b = random_field(&g, &mut rng(11));
        assert_eq!(a.physical(), b.physical());
        let c = random_field(&g, &mut rng(12));
        assert_ne!(a.physical(), c.physical());
    }

    #[test]
    fn band_limited_field_has_no_mass_beyond_the_cutoff_or_at_zero() {
        let g = grid();
        let f = band_limited_field(&g, &mut rng(3), 9.0);
        let spec = f.spectral();
        for (i, c) in spec.iter().enumerate() {
            let rho2 = g.freq_norm_sq(i);
            if rho2 > 81.0 || rho2 == 0.0 {
                assert_eq!(c.norm(), 0.0, "mass at rho^2 = {rho2}");
            }
        }
        assert!(l2_norm(&f) > 0.0);
        assert!(f.mean().abs() < 1e-15);
    }

    #[test]
    fn shell_field_lives_on_its_annulus() {
        let g = grid();
        let profile = build_cutoffs(DEFAULT_ORDER);
        let f = shell_field(&g, &mut rng(5), 3, &profile).unwrap();
        let spec = f.spectral();
        for (i, c) in spec.iter().enumerate() {
            let rho = g.freq_norm_sq(i).sqrt();
            if !(6.0 < rho && rho < 64.0 / 3.0) && c.norm() > 0.0 {
                panic!("mass at rho = {rho} outside shell 3 support");
            }
        }
        assert!(l2_norm(&f) > 0.0);
    }
}
