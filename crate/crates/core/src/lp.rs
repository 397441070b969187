//! Dyadic frequency decomposition.
//!
//! A block projection multiplies the spectrum by the annulus profile
//! phi(2^-j |xi|); the low-pass companion uses chi(2^-j |xi|). Because the
//! dyadic family telescopes, a field whose spectrum lives between the lowest
//! and highest fully resolved annuli is reconstructed exactly (to rounding)
//! by summing its blocks and the low-pass remainder.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::cutoff::CutoffProfile;
use crate::error::Result;
use crate::field::Field;

/// Frequency-side L2 norm via Parseval. Spectra hold Fourier-series
/// coefficients, so the norm is (L^d * sum |c|^2)^(1/2).
pub(crate) fn l2_from_spectrum(field: &Field) -> f64 {
    let grid = field.grid();
    let vol = grid.box_length.powi(grid.dim as i32);
    let sum: f64 = field.spectral().iter().map(|c| c.norm_sqr()).sum();
    (vol * sum).sqrt()
}

/// Single dyadic block: spectrum weighted by phi(2^-j |xi|).
/// Fails if the annulus of shell j is not fully inside the grid's band.
pub fn project_block(field: &Field, j: i32, profile: &CutoffProfile) -> Result<Field> {
    let grid = *field.grid();
    grid.require_shell(j)?;
    let spec = field.spectral();
    let out: Vec<Complex64> = spec
        .iter()
        .enumerate()
        .map(|(i, c)| c * profile.phi_shell(grid.freq_norm_sq(i).sqrt(), j))
        .collect();
    Ok(Field::from_spectral_unchecked(grid, out))
}

/// Low-pass part: spectrum weighted by chi(2^-j |xi|).
pub fn low_pass(field: &Field, j: i32, profile: &CutoffProfile) -> Field {
    let grid = *field.grid();
    let spec = field.spectral();
    let out: Vec<Complex64> = spec
        .iter()
        .enumerate()
        .map(|(i, c)| c * profile.chi_shell(grid.freq_norm_sq(i).sqrt(), j))
        .collect();
    Field::from_spectral_unchecked(grid, out)
}

/// A truncated dyadic decomposition of one field.
#[derive(Debug)]
pub struct DyadicDecomposition {
    /// Inclusive shell range (a, b) that was projected.
    pub range: (i32, i32),
    /// Annulus blocks keyed by shell index.
    pub blocks: BTreeMap<i32, Field>,
    /// Low-pass remainder below the first annulus (chi at shell `range.0`).
    pub low: Field,
    /// L2 norm of the low-pass remainder.
    pub low_mass: f64,
    /// L2 norm of the part of the field missed by low + blocks
    /// (spectrum above the unity zone of the truncated partition).
    pub truncation_residual: f64,
}

impl DyadicDecomposition {
    /// Sum of low-pass part and all blocks.
    pub fn reconstruct(&self) -> Field {
        let mut acc = self.low.clone();
        for block in self.blocks.values() {
            acc = acc.add(block);
        }
        acc
    }
}

/// Decompose over an explicit shell range, or over every fully resolved
/// shell of the grid when `range` is None.
pub fn decompose(
    field: &Field,
    range: Option<(i32, i32)>,
    profile: &CutoffProfile,
) -> Result<DyadicDecomposition> {
    let grid = *field.grid();
    let (a, b) = match range {
        Some(r) => r,
        None => grid.resolvable_shells(),
    };
    grid.require_shell(a)?;
    grid.require_shell(b)?;
    let spec = field.spectral();
    let len = grid.len();

    let mut blocks = BTreeMap::new();
    for j in a..=b {
        let out: Vec<Complex64> = (0..len)
            .map(|i| spec[i] * profile.phi_shell(grid.freq_norm_sq(i).sqrt(), j))
            .collect();
        blocks.insert(j, Field::from_spectral_unchecked(grid, out));
    }
    let low = low_pass(field, a, profile);
    let low_mass = l2_from_spectrum(&low);

    // telescoping: low + sum blocks has total weight chi(2^-(b+1) |xi|);
    // the residual is the mass weighted by 1 - chi at shell b+1
    let vol = grid.box_length.powi(grid.dim as i32);
    let mut res_sq = 0.0;
    for (i, c) in spec.iter().enumerate() {
        let w = 1.0 - profile.chi_shell(grid.freq_norm_sq(i).sqrt(), b + 1);
        res_sq += (w * c.norm()).powi(2);
    }
    let truncation_residual = (vol * res_sq).sqrt();

    Ok(DyadicDecomposition {
        range: (a, b),
        blocks,
        low,
        low_mass,
        truncation_residual,
    })
}
