//! Support window of two-scale products.
//!
//! When two atoms at scales `2^k > 2^j` multiply, the carrier-free part of
//! the product concentrates — on the modulated axis — on the difference and
//! sum frequencies `mu·(2^k ∓ 2^j)`, smeared by the envelope bandwidth
//! `W = beta·(2^k + 2^j)`.  For a large enough scale gap (and small enough
//! `beta`) the whole product spectrum then fits inside the reference window
//! `[33/48, 35/48]·2^k`, which is disjoint from every dyadic shell support
//! `(3/4, 8/3)·2^ℓ`: below the shell at the large scale, above every shell
//! at much smaller scales.  That disjointness is what makes the projected
//! cross terms vanish exactly rather than merely decay.
//!
//! This module states the window as closed intervals (corner-exact in the
//! ambient dimension), decides containment and shell disjointness, and
//! measures the actual lattice support by sparse circular convolution of
//! the per-axis spectra — no full grid is involved, so reference-regime
//! scale gaps (ratio 2^8) and bandwidths (beta ~ 1/200) are directly
//! checkable.

use super::atom::{axis_spectrum, sine_carriers, AtomSpec, MIN_HUMP_POINTS};
use super::split::circular_conv;
use crate::error::{Error, Result};

/// Geometric slack for boundary comparisons, matching the family module.
const GEOM_SLACK: f64 = 1e-9;

/// Reference window bounds, relative to the larger scale.
pub const WINDOW_LO: f64 = 33.0 / 48.0;
pub const WINDOW_HI: f64 = 35.0 / 48.0;

/// Dyadic shell support bounds relative to 2^ℓ (where the shell symbol is
/// nonzero): the open interval (3/4, 8/3).
const SHELL_SUPPORT_LO: f64 = 0.75;
const SHELL_SUPPORT_HI: f64 = 8.0 / 3.0;

/// Closed |ξ|-interval covering the carrier-free part of a two-scale
/// product spectrum, together with the scales that produced it.
#[derive(Clone, Copy, Debug)]
pub struct PairWindow {
    pub scale_hi: i32,
    pub scale_lo: i32,
    /// Smallest |ξ| in the support (difference hump, inner edge).
    pub lo: f64,
    /// Largest |ξ| in the support (sum hump, outer corner).
    pub hi: f64,
}

impl PairWindow {
    /// Both edges inside the reference window `[33/48, 35/48]·2^{scale_hi}`.
    pub fn inside_reference(&self) -> bool {
        let unit = (self.scale_hi as f64).exp2();
        self.lo + GEOM_SLACK * unit >= WINDOW_LO * unit
            && self.hi <= (WINDOW_HI + GEOM_SLACK) * unit
    }

    /// Disjoint from the support of the dyadic shell at level `shell`.
    pub fn shell_disjoint(&self, shell: i32) -> bool {
        let unit = (shell as f64).exp2();
        self.hi <= SHELL_SUPPORT_LO * unit + GEOM_SLACK * unit
            || self.lo + GEOM_SLACK * unit >= SHELL_SUPPORT_HI * unit
    }
}

/// Envelope bandwidth of the pair product: each factor contributes its own
/// spectral radius `beta·2^scale` per axis.
fn pair_bandwidth(spec: &AtomSpec, scale_hi: i32, scale_lo: i32) -> f64 {
    spec.beta * ((scale_hi as f64).exp2() + (scale_lo as f64).exp2())
}

/// Exact |ξ|-interval of the carrier-free part of the product of atoms at
/// scales `2^scale_hi` and `2^scale_lo` in dimension `dim`.
///
/// On the modulated axis the support is `±mu(2^k ∓ 2^j) + [−W, W]`; every
/// other axis contributes at most `W`.  The minimum of |ξ| is attained on
/// the modulated axis alone, the maximum at the full corner.
pub fn pair_window(spec: &AtomSpec, dim: usize, scale_hi: i32, scale_lo: i32) -> PairWindow {
    assert!(scale_hi > scale_lo, "scales must be ordered");
    let (hi, lo) = ((scale_hi as f64).exp2(), (scale_lo as f64).exp2());
    let w = pair_bandwidth(spec, scale_hi, scale_lo);
    let mu = spec.modulation_inner;
    let axis_lo = (mu * (hi - lo) - w).max(0.0);
    let axis_hi = mu * (hi + lo) + w;
    let corner = (axis_hi * axis_hi + (dim as f64 - 1.0) * w * w).sqrt();
    PairWindow {
        scale_hi,
        scale_lo,
        lo: axis_lo,
        hi: corner,
    }
}

/// Exact |ξ|-interval of the part of the pair product carrying the doubled
/// outer carrier `2·omega` on the first axis.
pub fn carrier_window(
    spec: &AtomSpec,
    dim: usize,
    omega: f64,
    scale_hi: i32,
    scale_lo: i32,
) -> PairWindow {
    let (hi, lo) = ((scale_hi as f64).exp2(), (scale_lo as f64).exp2());
    let w = pair_bandwidth(spec, scale_hi, scale_lo);
    let mu = spec.modulation_inner;
    let axis1_hi = 2.0 * omega + w;
    let axisd_hi = mu * (hi + lo) + w;
    let corner =
        (axis1_hi * axis1_hi + axisd_hi * axisd_hi + (dim as f64 - 2.0).max(0.0) * w * w).sqrt();
    PairWindow {
        scale_hi,
        scale_lo,
        lo: (2.0 * omega - w).max(0.0),
        hi: corner,
    }
}

/// Smallest scale gap for which the window containment inequalities hold at
/// the given bandwidth, if any gap up to 16 works.
///
/// The two inequalities (difference hump above the window floor, sum-hump
/// corner below the window ceiling, with `g = 2^{−gap}`):
///   mu(1−g) − beta(1+g) ≥ 33/48
///   sqrt((mu+beta)² + (dim−1)beta²)·(1+g) ≤ 35/48
pub fn minimal_window_gap(spec: &AtomSpec, dim: usize) -> Option<u32> {
    (1..=16).find(|&gap| {
        let g = (-(gap as f64)).exp2();
        let mu = spec.modulation_inner;
        let beta = spec.beta;
        let floor_ok = mu * (1.0 - g) - beta * (1.0 + g) + GEOM_SLACK >= WINDOW_LO;
        let corner = ((mu + beta) * (mu + beta) + (dim as f64 - 1.0) * beta * beta).sqrt();
        let ceil_ok = corner * (1.0 + g) <= WINDOW_HI + GEOM_SLACK;
        floor_ok && ceil_ok
    })
}

/// Measured lattice support of the modulated-axis factor product.
#[derive(Clone, Debug)]
pub struct AxisWindowReport {
    /// Fraction of spectral mass outside the predicted band (expected 0).
    pub leakage: f64,
    /// Total spectral mass of the product on the axis.
    pub total_mass: f64,
    /// Measured support edges in frequency units (min and max |ζ| over
    /// nonzero entries).
    pub support: (f64, f64),
    /// Predicted band in frequency units.
    pub predicted: (f64, f64),
    /// Lattice resolution used for the measurement.
    pub delta_xi: f64,
}

/// Build the modulated-axis spectra of two atoms, convolve them on a sparse
/// one-axis lattice, and measure how much product mass falls outside the
/// predicted window band.
///
/// The lattice spacing resolves the smaller hump with the standard minimum
/// point count and the extent is chosen so nothing wraps; both factors'
/// supports are hard-compact, so the expected leakage is exactly zero.
pub fn axis_pair_leakage(spec: &AtomSpec, scale_hi: i32, scale_lo: i32) -> Result<AxisWindowReport> {
    assert!(scale_hi > scale_lo, "scales must be ordered");
    spec.validate()?;
    let (hi, lo) = ((scale_hi as f64).exp2(), (scale_lo as f64).exp2());
    let w = pair_bandwidth(spec, scale_hi, scale_lo);
    let mu = spec.modulation_inner;
    let axis_lo = (mu * (hi - lo) - w).max(0.0);
    let axis_hi = mu * (hi + lo) + w;

    // Resolve the smaller hump with exactly the minimum point count; finer
    // is free but unnecessary since supports are exact on any lattice.
    let delta_xi = spec.beta * lo / MIN_HUMP_POINTS;
    let needed = (2.2 * axis_hi / delta_xi).ceil() as usize;
    let n = needed.next_power_of_two();
    // the lattice is purely symbolic (sparse indices, no allocation of
    // size n); the cap only guards against absurd scale spreads
    if n > 1 << 28 {
        return Err(Error::ConstraintViolation(format!(
            "axis window lattice would need {n} points"
        )));
    }
    let box_length = std::f64::consts::TAU / delta_xi;

    let factor_hi = axis_spectrum(
        n,
        box_length,
        spec,
        scale_hi,
        0.0,
        &sine_carriers(mu * hi),
    );
    let factor_lo = axis_spectrum(
        n,
        box_length,
        spec,
        scale_lo,
        0.0,
        &sine_carriers(mu * lo),
    );
    let product = circular_conv(&factor_hi, &factor_lo, n);

    let half = n / 2;
    let mut total = 0.0;
    let mut outside = 0.0;
    let mut seen_lo = f64::INFINITY;
    let mut seen_hi = 0.0f64;
    for &(idx, coef) in &product {
        let mass = coef.norm_sqr();
        if mass == 0.0 {
            continue;
        }
        let signed = if idx <= half {
            idx as i64
        } else {
            idx as i64 - n as i64
        };
        let freq = (signed as f64 * delta_xi).abs();
        total += mass;
        seen_lo = seen_lo.min(freq);
        seen_hi = seen_hi.max(freq);
        if freq + GEOM_SLACK < axis_lo || freq > axis_hi + GEOM_SLACK {
            outside += mass;
        }
    }
    Ok(AxisWindowReport {
        leakage: if total > 0.0 { outside / total } else { 0.0 },
        total_mass: total,
        support: (seen_lo, seen_hi),
        predicted: (axis_lo, axis_hi),
        delta_xi,
    })
}

/// Combined verdict for one scale pair: geometry containment, disjointness
/// from every inspected shell (for both the carrier-free and the doubled-
/// carrier parts), and the measured axis leakage.
#[derive(Clone, Debug)]
pub struct PairVerdict {
    pub scale_hi: i32,
    pub scale_lo: i32,
    pub window: PairWindow,
    pub inside_reference: bool,
    pub shells_disjoint: bool,
    pub carrier_clear: bool,
    pub axis: AxisWindowReport,
}

impl PairVerdict {
    pub fn holds(&self) -> bool {
        self.inside_reference && self.shells_disjoint && self.carrier_clear && self.axis.leakage == 0.0
    }
}

/// Run the full window verification for every ordered pair in `scales`,
/// against the inspected `shells`, with outer carrier `omega`.
pub fn verify_pair_windows(
    spec: &AtomSpec,
    dim: usize,
    omega: f64,
    scales: &[i32],
    shells: &[i32],
) -> Result<Vec<PairVerdict>> {
    let mut verdicts = Vec::new();
    for (a, &hi) in scales.iter().enumerate() {
        for &lo in &scales[..a] {
            let window = pair_window(spec, dim, hi, lo);
            let carrier = carrier_window(spec, dim, omega, hi, lo);
            let axis = axis_pair_leakage(spec, hi, lo)?;
            verdicts.push(PairVerdict {
                scale_hi: hi,
                scale_lo: lo,
                inside_reference: window.inside_reference(),
                shells_disjoint: shells.iter().all(|&l| window.shell_disjoint(l)),
                carrier_clear: shells.iter().all(|&l| carrier.shell_disjoint(l)),
                window,
                axis,
            });
        }
    }
    Ok(verdicts)
}
