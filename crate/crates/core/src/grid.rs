//! Uniform periodic grids and their frequency lattices.
//!
//! A field lives on the torus [0, L)^d sampled at `points` equispaced nodes
//! per axis. Spectral coefficients are indexed by integer modes k in
//! [-points/2, points/2) per axis; the physical frequency of a mode is
//! 2*pi*k/L, so the lattice spacing is delta_xi = 2*pi/L and the Nyquist
//! frequency is pi*points/L.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Space dimension d >= 1.
    pub dim: usize,
    /// Sample count per axis, identical on every axis. Power of two.
    pub points: usize,
    /// Torus circumference per axis.
    pub box_length: f64,
}

impl GridSpec {
    pub fn new(dim: usize, points: usize, box_length: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if dim == 0 {
            problems.push("grid.dim: must be >= 1".to_string());
        }
        if points < 8 || !points.is_power_of_two() {
            problems.push(format!(
                "grid.points: must be a power of two >= 8 (got {points})"
            ));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            problems.push(format!(
                "grid.box_length: must be positive and finite (got {box_length})"
            ));
        }
        if problems.is_empty() {
            Ok(GridSpec {
                dim,
                points,
                box_length,
            })
        } else {
            Err(Error::ValidationError(problems))
        }
    }

    /// Total number of lattice sites, points^dim.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical mesh width.
    pub fn dx(&self) -> f64 {
        self.box_length / self.points as f64
    }

    /// Quadrature weight of one sample in the rectangle rule, dx^d.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Frequency lattice spacing 2*pi/L.
    pub fn delta_xi(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.box_length
    }

    /// Largest representable frequency magnitude per axis.
    pub fn nyquist(&self) -> f64 {
        self.delta_xi() * (self.points as f64) / 2.0
    }

    /// Signed integer mode for a storage index along one axis.
    #[inline]
    pub fn signed_mode(&self, i: usize) -> i64 {
        let n = self.points;
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Decompose a flat storage index into per-axis indices (row-major,
    /// last axis contiguous).
    #[inline]
    pub fn unravel(&self, flat: usize, out: &mut [usize]) {
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            out[a] = rest % self.points;
            rest /= self.points;
        }
    }

    #[inline]
    pub fn ravel(&self, idx: &[usize]) -> usize {
        let mut flat = 0usize;
        for &i in idx {
            flat = flat * self.points + i;
        }
        flat
    }

    /// Physical frequency vector of the mode at a flat spectral index.
    pub fn frequency(&self, flat: usize, out: &mut [f64]) {
        let dxi = self.delta_xi();
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            let i = rest % self.points;
            rest /= self.points;
            out[a] = dxi * self.signed_mode(i) as f64;
        }
    }

    /// |xi|^2 of the mode at a flat spectral index.
    #[inline]
    pub fn freq_norm_sq(&self, flat: usize) -> f64 {
        let dxi = self.delta_xi();
        let mut rest = flat;
        let mut s = 0.0;
        for _ in 0..self.dim {
            let i = rest % self.points;
            rest /= self.points;
            let k = self.signed_mode(i) as f64;
            s += k * k;
        }
        s * dxi * dxi
    }

    /// Physical coordinates of the sample at a flat physical index.
    pub fn coordinates(&self, flat: usize, out: &mut [f64]) {
        let dx = self.dx();
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            let i = rest % self.points;
            rest /= self.points;
            out[a] = dx * i as f64;
        }
    }

    /// Flat index of the Hermitian partner mode (-k mod points per axis).
    #[inline]
    pub fn conjugate_index(&self, flat: usize) -> usize {
        let n = self.points;
        let mut rest = flat;
        let mut out = 0usize;
        let mut scale = 1usize;
        for _ in 0..self.dim {
            let i = rest % n;
            rest /= n;
            let j = if i == 0 { 0 } else { n - i };
            out += j * scale;
            scale *= n;
        }
        out
    }

    /// Inclusive range [j_min, j_max] of dyadic shells whose annulus
    /// {3/4 * 2^j <= |xi| <= 8/3 * 2^j} both contains lattice points and
    /// fits below the Nyquist frequency.
    pub fn resolvable_shells(&self) -> (i32, i32) {
        let j_min = (3.0 * self.delta_xi() / 8.0).log2().ceil() as i32;
        let j_max = (3.0 * self.nyquist() / 8.0).log2().floor() as i32;
        (j_min, j_max)
    }

    /// Error if a shell's annulus is not representable on this grid.
    pub fn require_shell(&self, shell: i32) -> Result<()> {
        let (lo, hi) = self.resolvable_shells();
        if shell < lo || shell > hi {
            Err(Error::ShellNotResolvable {
                shell,
                delta_xi: self.delta_xi(),
                nyquist: self.nyquist(),
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_modes_cover_symmetric_range() {
        let g = GridSpec::new(1, 8, 2.0 * std::f64::consts::PI).unwrap();
        let modes: Vec<i64> = (0..8).map(|i| g.signed_mode(i)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, 4, -3, -2, -1]);
    }

    #[test]
    fn conjugate_index_involutive_off_axes() {
        let g = GridSpec::new(2, 16, 1.0).unwrap();
        for flat in [17usize, 40, 200, 255] {
            assert_eq!(g.conjugate_index(g.conjugate_index(flat)), flat);
        }
    }

    #[test]
    fn frequency_matches_signed_mode() {
        let g = GridSpec::new(2, 16, 4.0 * std::f64::consts::PI).unwrap();
        let mut f = [0.0; 2];
        // mode (1, 15) -> signed (1, -1), delta_xi = 0.5
        g.frequency(16 + 15, &mut f);
        assert!((f[0] - 0.5).abs() < 1e-14);
        assert!((f[1] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn shell_range_rejects_out_of_band() {
        let g = GridSpec::new(2, 64, 2.0 * std::f64::consts::PI).unwrap();
        let (lo, hi) = g.resolvable_shells();
        assert!(g.require_shell(lo).is_ok());
        assert!(g.require_shell(hi).is_ok());
        assert!(matches!(
            g.require_shell(hi + 1),
            Err(Error::ShellNotResolvable { .. })
        ));
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(GridSpec::new(2, 100, 1.0).is_err());
    }
}
