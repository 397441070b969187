//! Band-limited tensor atoms.
//!
//! The scalar profile θ is defined through its Fourier transform: θ̂ equals 1
//! on a central plateau, falls to 0 at radius beta through a smooth
//! transition, and vanishes beyond. Atoms are tensor products of θ across
//! axes with a sine modulation on the last axis; they are synthesized
//! directly in frequency space (sparse, exact on the lattice), never by
//! sampling θ pointwise.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::GridSpec;
use crate::cutoff::Smoothstep;

/// Minimum number of frequency-lattice points inside [0, beta·2^k] for an
/// atom at scale k to be considered resolvable.
pub const MIN_HUMP_POINTS: f64 = 4.0;

/// Tolerance shaving for the hump-point count, so that exact boundary
/// configurations (count == 4 up to rounding) are accepted.
const HUMP_POINT_SLACK: f64 = 1e-9;

/// Shape of the transition region of θ̂.
#[derive(Clone, Debug, PartialEq)]
pub enum AtomProfile {
    /// Polynomial smoothstep of the given smoothness order (C^order at the
    /// plateau and support junctions). Compactly supported, exact plateau.
    SmoothstepPoly { order: u32 },
    /// The classical C^∞ bump exp(1 - 1/(1 - t²)) on |t| < 1. No plateau
    /// (plateau_fraction is ignored); trades the exact plateau for infinite
    /// smoothness.
    Bump,
}

impl Default for AtomProfile {
    fn default() -> Self {
        AtomProfile::SmoothstepPoly { order: 8 }
    }
}

/// Parameters of the scalar profile θ and the inner modulation.
#[derive(Clone, Debug)]
pub struct AtomSpec {
    /// Support radius of θ̂.
    pub beta: f64,
    /// θ̂ == 1 for |ξ| ≤ plateau_fraction·beta (smoothstep profile only).
    pub plateau_fraction: f64,
    /// Frequency of the sine modulation on the last axis.
    pub modulation_inner: f64,
    /// Transition shape.
    pub profile: AtomProfile,
}

impl AtomSpec {
    /// Historical reference values: beta = 1/(100 d), plateau 1/2, inner
    /// modulation 17/24.
    pub fn reference(dim: usize) -> Self {
        AtomSpec {
            beta: 1.0 / (100.0 * dim as f64),
            plateau_fraction: 0.5,
            modulation_inner: 17.0 / 24.0,
            profile: AtomProfile::default(),
        }
    }

    /// Collect parameter problems (empty = valid).
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            out.push(format!("atom.beta must be positive, got {}", self.beta));
        }
        if !(self.plateau_fraction > 0.0 && self.plateau_fraction < 1.0) {
            out.push(format!(
                "atom.plateau_fraction must lie in (0,1), got {}",
                self.plateau_fraction
            ));
        }
        if !(self.modulation_inner > 0.0) {
            out.push(format!(
                "atom.modulation_inner must be positive, got {}",
                self.modulation_inner
            ));
        }
        if let AtomProfile::SmoothstepPoly { order } = self.profile {
            if !(1..=24).contains(&order) {
                out.push(format!("atom.profile order must be in 1..=24, got {order}"));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::ValidationError(problems))
        }
    }

    /// θ̂ at frequency xi (unit scale).
    pub fn theta_hat(&self, xi: f64) -> f64 {
        let t = xi.abs() / self.beta;
        match &self.profile {
            AtomProfile::SmoothstepPoly { order } => {
                let pf = self.plateau_fraction;
                if t <= pf {
                    1.0
                } else if t >= 1.0 {
                    0.0
                } else {
                    1.0 - Smoothstep::new(*order).eval((t - pf) / (1.0 - pf))
                }
            }
            AtomProfile::Bump => {
                if t >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - t * t)).exp()
                }
            }
        }
    }

    /// Check that an atom dilated to scale 2^k resolves on a frequency
    /// lattice with spacing delta_xi.
    pub fn require_resolvable(&self, delta_xi: f64, scale: i32) -> Result<()> {
        let points = self.beta * (scale as f64).exp2() / delta_xi;
        if points + HUMP_POINT_SLACK < MIN_HUMP_POINTS {
            return Err(Error::BetaUnresolvable(format!(
                "theta hump at scale 2^{scale} spans {points:.3} frequency-lattice \
                 points, need at least {MIN_HUMP_POINTS}"
            )));
        }
        Ok(())
    }
}

/// A carrier: the atom axis factor is multiplied by sum_c amp_c e^(i freq_c x).
#[derive(Clone, Copy, Debug)]
pub struct Carrier {
    pub freq: f64,
    pub amp: Complex64,
}

/// Carriers representing sin(freq·x).
pub fn sine_carriers(freq: f64) -> [Carrier; 2] {
    [
        Carrier {
            freq,
            amp: Complex64::new(0.0, -0.5),
        },
        Carrier {
            freq: -freq,
            amp: Complex64::new(0.0, 0.5),
        },
    ]
}

/// The trivial carrier (no modulation).
pub fn unit_carrier() -> [Carrier; 1] {
    [Carrier {
        freq: 0.0,
        amp: Complex64::new(1.0, 0.0),
    }]
}

/// One-axis Fourier-series coefficients of θ(2^k(x − offset)) multiplied by
/// the given carriers, on an n-point axis of a box with side `box_length`.
///
/// Returns the nonzero entries as (wrapped lattice index, coefficient).
/// Frequencies beyond the Nyquist wrap modulo the lattice, which is exactly
/// what pointwise sampling of the continuum factor produces.
pub fn axis_spectrum(
    n: usize,
    box_length: f64,
    spec: &AtomSpec,
    scale: i32,
    offset: f64,
    carriers: &[Carrier],
) -> Vec<(usize, Complex64)> {
    let delta_xi = std::f64::consts::TAU / box_length;
    let scale_f = (scale as f64).exp2();
    let radius = spec.beta * scale_f;
    let amp_scale = 1.0 / (scale_f * box_length);
    let mut out: Vec<(usize, Complex64)> = Vec::new();
    for c in carriers {
        let lo = ((c.freq - radius) / delta_xi).floor() as i64;
        let hi = ((c.freq + radius) / delta_xi).ceil() as i64;
        for kappa in lo..=hi {
            let xi = kappa as f64 * delta_xi;
            let w = spec.theta_hat((xi - c.freq) / scale_f);
            if w == 0.0 {
                continue;
            }
            let phase = -(xi - c.freq) * offset;
            let coeff = c.amp * w * amp_scale * Complex64::new(phase.cos(), phase.sin());
            let idx = (kappa.rem_euclid(n as i64)) as usize;
            out.push((idx, coeff));
        }
    }
    // merge duplicate indices (wrapping or overlapping carriers)
    out.sort_by_key(|e| e.0);
    let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(out.len());
    for (idx, val) in out {
        match merged.last_mut() {
            Some((last, acc)) if *last == idx => *acc += val,
            _ => merged.push((idx, val)),
        }
    }
    merged
}

/// Tensor-assemble a d-axis sparse spectrum into a full grid spectrum,
/// adding `prefactor` times the product of axis coefficients.
pub fn accumulate_tensor(
    grid: &GridSpec,
    axes: &[Vec<(usize, Complex64)>],
    prefactor: Complex64,
    target: &mut [Complex64],
) {
    assert_eq!(axes.len(), grid.dim);
    let n = grid.points;
    // iterate the cartesian product of nonzero axis entries
    let mut cursor = vec![0usize; grid.dim];
    'outer: loop {
        let mut flat = 0usize;
        let mut val = prefactor;
        for (a, axis) in axes.iter().enumerate() {
            let (idx, coeff) = axis[cursor[a]];
            flat = flat * n + idx;
            val *= coeff;
        }
        target[flat] += val;
        // advance the cartesian cursor
        for a in (0..grid.dim).rev() {
            cursor[a] += 1;
            if cursor[a] < axes[a].len() {
                continue 'outer;
            }
            cursor[a] = 0;
        }
        break;
    }
}

/// Realize θ itself on a grid (varying along the first axis only).
pub fn theta_profile(spec: &AtomSpec, grid: &GridSpec) -> Result<Field> {
    spec.validate()?;
    spec.require_resolvable(grid.delta_xi(), 0)?;
    if spec.beta >= grid.nyquist() {
        return Err(Error::BetaUnresolvable(format!(
            "theta support radius {} exceeds the grid Nyquist {}",
            spec.beta,
            grid.nyquist()
        )));
    }
    let axis0 = axis_spectrum(grid.points, grid.box_length, spec, 0, 0.0, &unit_carrier());
    let rest: Vec<Vec<(usize, Complex64)>> = (1..grid.dim)
        .map(|_| vec![(0usize, Complex64::new(1.0, 0.0))])
        .collect();
    let mut axes = vec![axis0];
    axes.extend(rest);
    let mut spectrum = vec![Complex64::default(); grid.len()];
    accumulate_tensor(grid, &axes, Complex64::new(1.0, 0.0), &mut spectrum);
    Field::from_spectral(*grid, spectrum)
}

/// Build the unit-scale atom a(x) = θ(x_1)⋯θ(x_d)·sin(modulation_inner·x_d).
pub fn build_atom(spec: &AtomSpec, grid: &GridSpec) -> Result<Field> {
    spec.validate()?;
    spec.require_resolvable(grid.delta_xi(), 0)?;
    let delta_xi = grid.delta_xi();
    let mu_ratio = spec.modulation_inner / delta_xi;
    if (mu_ratio - mu_ratio.round()).abs() > 1e-9 {
        return Err(Error::ConstraintViolation(format!(
            "modulation_inner {} is not a frequency-lattice point (spacing {})",
            spec.modulation_inner, delta_xi
        )));
    }
    if spec.modulation_inner + spec.beta >= grid.nyquist() {
        return Err(Error::BetaUnresolvable(format!(
            "atom spectrum reaches {} beyond the grid Nyquist {}",
            spec.modulation_inner + spec.beta,
            grid.nyquist()
        )));
    }
    let mut axes: Vec<Vec<(usize, Complex64)>> = Vec::with_capacity(grid.dim);
    for axis in 0..grid.dim {
        let carriers: Vec<Carrier> = if axis + 1 == grid.dim {
            sine_carriers(spec.modulation_inner).to_vec()
        } else {
            unit_carrier().to_vec()
        };
        axes.push(axis_spectrum(
            grid.points,
            grid.box_length,
            spec,
            0,
            0.0,
            &carriers,
        ));
    }
    let mut spectrum = vec![Complex64::default(); grid.len()];
    accumulate_tensor(grid, &axes, Complex64::new(1.0, 0.0), &mut spectrum);
    Field::from_spectral(*grid, spectrum)
}
