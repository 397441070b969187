//! Real scalar fields on a periodic grid with dual physical/spectral storage.
//!
//! Either representation is computed on first use and cached; both stay
//! consistent because fields are immutable after construction. Products are
//! taken pointwise in physical space, linear operations in whichever
//! representation is already materialised.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::GridSpec;

pub struct Field {
    grid: GridSpec,
    physical: OnceLock<Vec<f64>>,
    spectral: OnceLock<Vec<Complex64>>,
}

impl Clone for Field {
    fn clone(&self) -> Self {
        let f = Field::empty(self.grid);
        if let Some(p) = self.physical.get() {
            let _ = f.physical.set(p.clone());
        }
        if let Some(s) = self.spectral.get() {
            let _ = f.spectral.set(s.clone());
        }
        f
    }
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("grid", &self.grid)
            .field("has_physical", &self.physical.get().is_some())
            .field("has_spectral", &self.spectral.get().is_some())
            .finish()
    }
}

/// Relative Hermitian-symmetry tolerance accepted by `from_spectral`.
pub const HERMITIAN_TOL: f64 = 1e-10;

impl Field {
    fn empty(grid: GridSpec) -> Self {
        Field {
            grid,
            physical: OnceLock::new(),
            spectral: OnceLock::new(),
        }
    }

    pub fn zero(grid: GridSpec) -> Self {
        let f = Field::empty(grid);
        f.physical.set(vec![0.0; grid.len()]).ok();
        f.spectral.set(vec![Complex64::default(); grid.len()]).ok();
        f
    }

    pub fn from_physical(grid: GridSpec, samples: Vec<f64>) -> Self {
        assert_eq!(samples.len(), grid.len(), "sample count mismatch");
        let f = Field::empty(grid);
        f.physical.set(samples).ok();
        f
    }

    /// Build from Fourier coefficients, validating Hermitian symmetry so the
    /// physical samples are real.
    pub fn from_spectral(grid: GridSpec, coefficients: Vec<Complex64>) -> Result<Self> {
        assert_eq!(coefficients.len(), grid.len(), "coefficient count mismatch");
        let scale = coefficients
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        for (flat, c) in coefficients.iter().enumerate() {
            let partner = grid.conjugate_index(flat);
            if partner < flat {
                continue;
            }
            let defect = (c - coefficients[partner].conj()).norm();
            if defect > HERMITIAN_TOL * scale {
                let mut idx = vec![0usize; grid.dim];
                grid.unravel(flat, &mut idx);
                let mode = idx.iter().map(|&i| grid.signed_mode(i)).collect();
                return Err(Error::NonHermitianSpectrum {
                    mode,
                    defect: defect / scale,
                });
            }
        }
        Ok(Field::from_spectral_unchecked(grid, coefficients))
    }

    /// Trusted constructor for spectra that are Hermitian by construction.
    pub(crate) fn from_spectral_unchecked(grid: GridSpec, coefficients: Vec<Complex64>) -> Self {
        let f = Field::empty(grid);
        f.spectral.set(coefficients).ok();
        f
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn physical(&self) -> &[f64] {
        self.physical.get_or_init(|| {
            let spec = self
                .spectral
                .get()
                .expect("field holds at least one representation");
            let mut work = spec.clone();
            fft::inverse(&self.grid, &mut work);
            work.iter().map(|c| c.re).collect()
        })
    }

    pub fn spectral(&self) -> &[Complex64] {
        self.spectral.get_or_init(|| {
            let phys = self
                .physical
                .get()
                .expect("field holds at least one representation");
            let mut work: Vec<Complex64> =
                phys.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            fft::forward(&self.grid, &mut work);
            work
        })
    }

    /// Mean value over the torus (the zero-mode coefficient).
    pub fn mean(&self) -> f64 {
        if let Some(s) = self.spectral.get() {
            s[0].re
        } else {
            let p = self.physical();
            p.iter().sum::<f64>() / p.len() as f64
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.physical().iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    /// a + scale * b
    pub fn add_scaled(&self, other: &Field, scale: f64) -> Field {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        if self.physical.get().is_some()
            && other.physical.get().is_some()
            && self.spectral.get().is_none()
        {
            let data = self
                .physical()
                .iter()
                .zip(other.physical())
                .map(|(a, b)| a + scale * b)
                .collect();
            Field::from_physical(self.grid, data)
        } else {
            let data = self
                .spectral()
                .iter()
                .zip(other.spectral())
                .map(|(a, b)| a + scale * b)
                .collect();
            Field::from_spectral_unchecked(self.grid, data)
        }
    }

    pub fn add(&self, other: &Field) -> Field {
        self.add_scaled(other, 1.0)
    }

    pub fn sub(&self, other: &Field) -> Field {
        self.add_scaled(other, -1.0)
    }

    pub fn scale(&self, factor: f64) -> Field {
        if let Some(s) = self.spectral.get() {
            Field::from_spectral_unchecked(self.grid, s.iter().map(|c| c * factor).collect())
        } else {
            Field::from_physical(
                self.grid,
                self.physical().iter().map(|x| x * factor).collect(),
            )
        }
    }

    /// Pointwise product on the sample lattice.
    pub fn product(&self, other: &Field) -> Field {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        let data = self
            .physical()
            .iter()
            .zip(other.physical())
            .map(|(a, b)| a * b)
            .collect();
        Field::from_physical(self.grid, data)
    }
}

/// d-component vector field (all components share one grid).
#[derive(Clone, Debug)]
pub struct VectorField {
    pub components: Vec<Field>,
}

impl VectorField {
    pub fn new(components: Vec<Field>) -> Self {
        assert!(!components.is_empty());
        let g = *components[0].grid();
        assert!(components.iter().all(|c| *c.grid() == g));
        VectorField { components }
    }

    pub fn zero(grid: GridSpec) -> Self {
        VectorField {
            components: (0..grid.dim).map(|_| Field::zero(grid)).collect(),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn add_scaled(&self, other: &VectorField, scale: f64) -> VectorField {
        VectorField::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add_scaled(b, scale))
                .collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> VectorField {
        VectorField::new(self.components.iter().map(|c| c.scale(factor)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(2, 16, 2.0 * std::f64::consts::PI).unwrap()
    }

    #[test]
    fn physical_spectral_roundtrip() {
        let g = grid();
        let samples: Vec<f64> = (0..g.len()).map(|i| (0.13 * i as f64).cos()).collect();
        let f = Field::from_physical(g, samples.clone());
        let _ = f.spectral();
        let g2 = Field::from_spectral(g, f.spectral().to_vec()).unwrap();
        let worst = g2
            .physical()
            .iter()
            .zip(&samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-12);
    }

    #[test]
    fn from_spectral_rejects_non_hermitian() {
        let g = grid();
        let mut coeffs = vec![Complex64::default(); g.len()];
        coeffs[1] = Complex64::new(1.0, 0.5); // partner at index n-1 stays zero
        assert!(matches!(
            Field::from_spectral(g, coeffs),
            Err(Error::NonHermitianSpectrum { .. })
        ));
    }

    #[test]
    fn mean_is_zero_mode() {
        let g = grid();
        let samples: Vec<f64> = (0..g.len()).map(|i| 2.5 + (i as f64 * 0.4).sin()).collect();
        let f = Field::from_physical(g, samples);
        let direct = f.physical().iter().sum::<f64>() / g.len() as f64;
        let _ = f.spectral();
        assert!((f.mean() - direct).abs() < 1e-12);
    }

    #[test]
    fn product_is_pointwise() {
        let g = grid();
        let a = Field::from_physical(g, vec![2.0; g.len()]);
        let b = Field::from_physical(g, vec![-1.5; g.len()]);
        let p = a.product(&b);
        assert!(p.physical().iter().all(|&x| (x + 3.0).abs() < 1e-15));
    }
}
