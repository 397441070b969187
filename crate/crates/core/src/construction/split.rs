//! Exact decomposition of the squared family.
//!
//! With f = count_factor Σ_k 2^{k/2} a_k sin(ω x_1), the normalized square
//! (f / count_factor)^2 splits into
//!
//!   dc    = (1/2) Σ_k 2^k a_k^2                       (no outer carrier)
//!   osc   = -(1/2) cos(2 ω x_1) Σ_k 2^k a_k^2          (carrier doubled)
//!   cross = everything mixing two different scales.
//!
//! dc and osc are assembled exactly by sparse circular convolution of the
//! per-axis atom spectra; cross is the pointwise remainder against the
//! FFT square and can itself be predicted sparsely. The per-atom diagonal
//! pieces expose the derivative blocks: applying ∂_1 and the shell-ℓ
//! projector to the scale-ℓ (resp. other-scale) diagonal part yields the
//! leading kernel and its cross-scale contamination.

use num_complex::Complex64;
use std::collections::HashMap;

use crate::construction::atom::AtomSpec;
use crate::construction::family::{atom_axes, build_f, ConstructionParams};
use crate::cutoff::{build_cutoffs, CutoffProfile, DEFAULT_ORDER};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::GridSpec;

/// Circular convolution of two sparse spectra on an n-point axis.
pub(crate) fn circular_conv(
    a: &[(usize, Complex64)],
    b: &[(usize, Complex64)],
    n: usize,
) -> Vec<(usize, Complex64)> {
    let mut acc: HashMap<usize, Complex64> = HashMap::with_capacity(a.len() + b.len());
    for &(i, ci) in a {
        for &(j, cj) in b {
            let idx = (i + j) % n;
            *acc.entry(idx).or_insert(Complex64::default()) += ci * cj;
        }
    }
    let mut out: Vec<(usize, Complex64)> = acc.into_iter().collect();
    out.sort_by_key(|e| e.0);
    out
}

/// Split a convolved first-axis spectrum into the zero-frequency band and
/// the doubled-carrier band. Both bands must be disjoint.
fn classify_axis(
    entries: &[(usize, Complex64)],
    n: usize,
    band_halfwidth: i64,
    carrier_index: i64,
) -> Result<(Vec<(usize, Complex64)>, Vec<(usize, Complex64)>)> {
    let signed = |idx: usize| -> i64 {
        if idx <= n / 2 {
            idx as i64
        } else {
            idx as i64 - n as i64
        }
    };
    let wrapped_carrier = {
        let w = carrier_index.rem_euclid(n as i64);
        if w <= n as i64 / 2 {
            w
        } else {
            w - n as i64
        }
    };
    if wrapped_carrier.abs() <= 2 * band_halfwidth + 1 {
        return Err(Error::ConstraintViolation(format!(
            "doubled carrier at wrapped index {wrapped_carrier} collides with the \
             zero-frequency band of halfwidth {band_halfwidth}"
        )));
    }
    let mut dc = Vec::new();
    let mut osc = Vec::new();
    for &(idx, c) in entries {
        let s = signed(idx);
        if s.abs() <= band_halfwidth {
            dc.push((idx, c));
        } else if (s - wrapped_carrier).abs() <= band_halfwidth
            || (s + wrapped_carrier).abs() <= band_halfwidth
            || (s - wrapped_carrier).abs() >= n as i64 - band_halfwidth
            || (s + wrapped_carrier).abs() >= n as i64 - band_halfwidth
        {
            osc.push((idx, c));
        } else {
            return Err(Error::ConstraintViolation(format!(
                "convolution entry at signed index {s} belongs to neither the \
                 zero band nor the doubled carrier at {wrapped_carrier}"
            )));
        }
    }
    Ok((dc, osc))
}

/// Tensor a set of sparse axis spectra into flat (index, coefficient) pairs.
fn tensor_entries(
    grid: &GridSpec,
    axes: &[&[(usize, Complex64)]],
    amp: f64,
) -> Vec<(usize, Complex64)> {
    let n = grid.points;
    let mut out = Vec::new();
    let mut cursor = vec![0usize; grid.dim];
    if axes.iter().any(|a| a.is_empty()) {
        return out;
    }
    'outer: loop {
        let mut flat = 0usize;
        let mut val = Complex64::new(amp, 0.0);
        for (a, axis) in axes.iter().enumerate() {
            let (idx, coeff) = axis[cursor[a]];
            flat = flat * n + idx;
            val *= coeff;
        }
        out.push((flat, val));
        for a in (0..grid.dim).rev() {
            cursor[a] += 1;
            if cursor[a] < axes[a].len() {
                continue 'outer;
            }
            cursor[a] = 0;
        }
        break;
    }
    out
}

/// The decomposition and its per-atom diagonal pieces.
pub struct ProductSplit {
    grid: GridSpec,
    profile: CutoffProfile,
    scales: Vec<i32>,
    /// The synthesized family itself.
    pub f: Field,
    /// (f / count_factor)^2, pointwise.
    pub square: Field,
    pub dc: Field,
    pub osc: Field,
    pub cross: Field,
    /// Per-atom diagonal spectra (scale factor 2^k included).
    atom_dc: Vec<Vec<(usize, Complex64)>>,
}

/// Build the split from the family parameters (the family is synthesized
/// internally so the sparse bookkeeping always matches the field).
pub fn product_split(
    params: &ConstructionParams,
    spec: &AtomSpec,
    grid: &GridSpec,
) -> Result<ProductSplit> {
    let f = build_f(params, spec, grid)?;
    let inv_cf = 1.0 / params.count_factor;
    let square = f.product(&f).scale(inv_cf * inv_cf);

    let n = grid.points;
    let delta_xi = grid.delta_xi();
    let two_omega_index = {
        let ratio = 2.0 * params.omega() / delta_xi;
        ratio.round() as i64
    };

    let mut dc_total = vec![Complex64::default(); grid.len()];
    let mut osc_total = vec![Complex64::default(); grid.len()];
    let mut atom_dc = Vec::with_capacity(params.count());
    for which in 0..params.count() {
        let k = params.scales[which];
        let axes = atom_axes(params, spec, grid, which);
        let sq_axes: Vec<Vec<(usize, Complex64)>> = axes
            .iter()
            .map(|a| circular_conv(a, a, n))
            .collect();
        let band = (spec.beta * (k as f64).exp2() / delta_xi).ceil() as i64 * 2;
        let (ax1_dc, ax1_osc) = classify_axis(&sq_axes[0], n, band, two_omega_index)?;
        let amp = (k as f64).exp2();
        let mut dc_axes: Vec<&[(usize, Complex64)]> = vec![&ax1_dc];
        let mut osc_axes: Vec<&[(usize, Complex64)]> = vec![&ax1_osc];
        for rest in &sq_axes[1..] {
            dc_axes.push(rest);
            osc_axes.push(rest);
        }
        let dc_entries = tensor_entries(grid, &dc_axes, amp);
        for &(flat, c) in &dc_entries {
            dc_total[flat] += c;
        }
        for (flat, c) in tensor_entries(grid, &osc_axes, amp) {
            osc_total[flat] += c;
        }
        atom_dc.push(dc_entries);
    }
    let dc = Field::from_spectral(*grid, dc_total)?;
    let osc = Field::from_spectral(*grid, osc_total)?;
    let cross = square.sub(&dc).sub(&osc);
    Ok(ProductSplit {
        grid: *grid,
        profile: build_cutoffs(DEFAULT_ORDER),
        scales: params.scales.clone(),
        f,
        square,
        dc,
        osc,
        cross,
        atom_dc,
    })
}

impl ProductSplit {
    fn atom_index(&self, shell: i32) -> Result<usize> {
        self.scales
            .iter()
            .position(|&k| k == shell)
            .ok_or_else(|| {
                Error::ConstraintViolation(format!(
                    "shell {shell} is not one of the family scales {:?}",
                    self.scales
                ))
            })
    }

    /// Apply ∂_1 Δ̇_shell to a sparse spectrum.
    fn derivative_block(&self, entries: &[&[(usize, Complex64)]], shell: i32) -> Result<Field> {
        self.grid.require_shell(shell)?;
        let n = self.grid.points;
        let dxi = self.grid.delta_xi();
        let mut spectrum = vec![Complex64::default(); self.grid.len()];
        let mut idx = vec![0usize; self.grid.dim];
        for part in entries {
            for &(flat, c) in *part {
                self.grid.unravel(flat, &mut idx);
                let m1 = self.grid.signed_mode(idx[0]);
                // the lone Nyquist mode has no conjugate partner: treat the
                // derivative there as zero, matching the dense operator
                let xi1 = if m1.unsigned_abs() as usize * 2 == n {
                    0.0
                } else {
                    m1 as f64 * dxi
                };
                let rho = self.grid.freq_norm_sq(flat).sqrt();
                let w = self.profile.phi_shell(rho, shell);
                if w == 0.0 || xi1 == 0.0 {
                    continue;
                }
                spectrum[flat] += c * Complex64::new(0.0, xi1 * w);
            }
        }
        Field::from_spectral(self.grid, spectrum)
    }

    /// ∂_1 Δ̇_shell of the scale-`shell` diagonal piece (the leading kernel).
    pub fn k1_block(&self, shell: i32) -> Result<Field> {
        let which = self.atom_index(shell)?;
        self.derivative_block(&[&self.atom_dc[which]], shell)
    }

    /// ∂_1 Δ̇_shell of the diagonal pieces of every other scale.
    pub fn k2_block(&self, shell: i32) -> Result<Field> {
        let which = self.atom_index(shell)?;
        let parts: Vec<&[(usize, Complex64)]> = self
            .atom_dc
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != which)
            .map(|(_, e)| e.as_slice())
            .collect();
        if parts.is_empty() {
            return Ok(Field::zero(self.grid));
        }
        self.derivative_block(&parts, shell)
    }
}

/// Independent sparse prediction of the cross component (every ordered pair
/// of distinct scales, carriers included). Quadratic in the atom count; used
/// by tests and checks to validate the FFT remainder.
pub fn cross_prediction(
    params: &ConstructionParams,
    spec: &AtomSpec,
    grid: &GridSpec,
) -> Result<Field> {
    let n = grid.points;
    let mut total = vec![Complex64::default(); grid.len()];
    let axes: Vec<Vec<Vec<(usize, Complex64)>>> = (0..params.count())
        .map(|w| atom_axes(params, spec, grid, w))
        .collect();
    for a in 0..params.count() {
        for b in (a + 1)..params.count() {
            let conv: Vec<Vec<(usize, Complex64)>> = (0..grid.dim)
                .map(|axis| circular_conv(&axes[a][axis], &axes[b][axis], n))
                .collect();
            let views: Vec<&[(usize, Complex64)]> = conv.iter().map(|v| v.as_slice()).collect();
            let amp = 2.0 * ((params.scales[a] + params.scales[b]) as f64 / 2.0).exp2();
            for (flat, c) in tensor_entries(grid, &views, amp) {
                total[flat] += c;
            }
        }
    }
    Field::from_spectral(*grid, total)
}
