//! Fourier multipliers: derivatives, the heat semigroup, and the stable
//! evaluation of the entire functions phi1, phi2 behind Duhamel formulas.
//!
//! Real fields must stay real, so a general symbol is validated against the
//! Hermitian constraint s(-xi) = conj(s(xi)) before it is applied. The
//! built-in derivative symbols zero the unpaired Nyquist plane so that the
//! constraint holds structurally on even grids.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, VectorField};
use crate::grid::GridSpec;

/// Relative tolerance for the Hermitian-symbol validation.
pub const SYMBOL_TOL: f64 = 1e-12;

/// Apply a general symbol xi -> s(xi), validating Hermitian symmetry.
pub fn apply_multiplier(
    field: &Field,
    symbol: impl Fn(&[f64]) -> Complex64,
) -> Result<Field> {
    let grid = *field.grid();
    let table = tabulate_symbol(&grid, symbol)?;
    let spec = field.spectral();
    let out: Vec<Complex64> = spec.iter().zip(&table).map(|(c, s)| c * s).collect();
    Ok(Field::from_spectral_unchecked(grid, out))
}

/// Evaluate a symbol on every lattice frequency and verify s(-xi) = conj(s(xi)).
fn tabulate_symbol(
    grid: &GridSpec,
    symbol: impl Fn(&[f64]) -> Complex64,
) -> Result<Vec<Complex64>> {
    let len = grid.len();
    let mut table = vec![Complex64::default(); len];
    let mut freq = vec![0.0; grid.dim];
    let mut max_abs = 0.0f64;
    for (i, slot) in table.iter_mut().enumerate() {
        grid.frequency(i, &mut freq);
        let s = symbol(&freq);
        max_abs = max_abs.max(s.norm());
        *slot = s;
    }
    let scale = if max_abs > 0.0 { max_abs } else { 1.0 };
    let mut idx = vec![0usize; grid.dim];
    for i in 0..len {
        let j = grid.conjugate_index(i);
        if j < i {
            continue;
        }
        let defect = (table[j] - table[i].conj()).norm();
        if defect > SYMBOL_TOL * scale {
            grid.unravel(i, &mut idx);
            let mode: Vec<i64> = idx.iter().map(|&k| grid.signed_mode(k)).collect();
            return Err(Error::NonHermitianSymbol {
                mode,
                defect: defect / scale,
            });
        }
    }
    Ok(table)
}

/// Apply a radial symbol rho -> g(rho) of the frequency magnitude.
/// Radial real symbols are Hermitian by construction; no validation needed.
pub fn apply_radial(field: &Field, g: impl Fn(f64) -> f64) -> Field {
    let grid = *field.grid();
    let spec = field.spectral();
    let out: Vec<Complex64> = spec
        .iter()
        .enumerate()
        .map(|(i, c)| c * g(grid.freq_norm_sq(i).sqrt()))
        .collect();
    Field::from_spectral_unchecked(grid, out)
}

/// Signed mode along one axis with the Nyquist plane zeroed, times delta_xi:
/// the coefficient of the first-derivative symbol i*xi_axis.
fn derivative_frequency(grid: &GridSpec, idx: &[usize], axis: usize) -> f64 {
    let m = grid.signed_mode(idx[axis]);
    if 2 * (m as i128) == grid.points as i128 {
        0.0
    } else {
        m as f64 * grid.delta_xi()
    }
}

/// Partial derivative along one axis.
pub fn partial(field: &Field, axis: usize) -> Field {
    let grid = *field.grid();
    assert!(axis < grid.dim, "axis {axis} out of range");
    let spec = field.spectral();
    let mut idx = vec![0usize; grid.dim];
    let out: Vec<Complex64> = spec
        .iter()
        .enumerate()
        .map(|(i, c)| {
            grid.unravel(i, &mut idx);
            c * Complex64::new(0.0, derivative_frequency(&grid, &idx, axis))
        })
        .collect();
    Field::from_spectral_unchecked(grid, out)
}

/// Full gradient.
pub fn gradient(field: &Field) -> VectorField {
    let comps = (0..field.grid().dim)
        .map(|a| partial(field, a))
        .collect();
    VectorField::new(comps)
}

/// Divergence of a vector field.
pub fn divergence(v: &VectorField) -> Field {
    let grid = *v.grid();
    let mut idx = vec![0usize; grid.dim];
    let mut out = vec![Complex64::default(); grid.len()];
    for (a, comp) in v.components.iter().enumerate() {
        let spec = comp.spectral();
        for (i, slot) in out.iter_mut().enumerate() {
            grid.unravel(i, &mut idx);
            *slot += spec[i] * Complex64::new(0.0, derivative_frequency(&grid, &idx, a));
        }
    }
    Field::from_spectral_unchecked(grid, out)
}

/// Laplacian (multiplier -|xi|^2).
pub fn laplacian(field: &Field) -> Field {
    let grid = *field.grid();
    let spec = field.spectral();
    let out: Vec<Complex64> = spec
        .iter()
        .enumerate()
        .map(|(i, c)| c * (-grid.freq_norm_sq(i)))
        .collect();
    Field::from_spectral_unchecked(grid, out)
}

/// Heat semigroup e^(t Laplacian) for t >= 0.
pub fn heat_propagate(field: &Field, t: f64) -> Result<Field> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let grid = *field.grid();
    let spec = field.spectral();
    let out: Vec<Complex64> = spec
        .iter()
        .enumerate()
        .map(|(i, c)| c * (-t * grid.freq_norm_sq(i)).exp())
        .collect();
    Ok(Field::from_spectral_unchecked(grid, out))
}

/// phi1(z) = (e^z - 1)/z, extended by phi1(0) = 1; stable for all real z.
pub fn phi1(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        z.exp_m1() / z
    }
}

/// phi2(z) = (e^z - 1 - z)/z^2, extended by phi2(0) = 1/2.
/// A short Taylor series avoids the cancellation for small |z|.
pub fn phi2(z: f64) -> f64 {
    if z.abs() < 1e-3 {
        // sum_{k>=0} z^k / (k+2)!
        let mut term = 0.5;
        let mut acc = term;
        for k in 1..=8u32 {
            term *= z / (k as f64 + 2.0);
            acc += term;
        }
        acc
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

/// Time integral of the heat semigroup applied to a fixed source:
/// int_0^t e^((t-s) Laplacian) g ds, i.e. the multiplier t*phi1(-t|xi|^2).
pub fn duhamel_const_source(g: &Field, t: f64) -> Result<Field> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(apply_radial(g, |rho| t * phi1(-t * rho * rho)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use std::f64::consts::TAU;

    fn wave_field(n: usize, len: f64) -> Field {
        // f(x, y) = sin(3 kx x) cos(2 ky y) on a box of side len
        let grid = GridSpec::new(2, n, len).unwrap();
        let k = TAU / len;
        let mut vals = vec![0.0; grid.len()];
        let mut x = vec![0.0; 2];
        for (i, v) in vals.iter_mut().enumerate() {
            grid.coordinates(i, &mut x);
            *v = (3.0 * k * x[0]).sin() * (2.0 * k * x[1]).cos();
        }
        Field::from_physical(grid, vals)
    }

    #[test]
    fn partial_derivative_matches_closed_form() {
        let f = wave_field(32, TAU);
        let dx = partial(&f, 0);
        let grid = *f.grid();
        let mut x = vec![0.0; 2];
        for (i, v) in dx.physical().iter().enumerate() {
            grid.coordinates(i, &mut x);
            let expect = 3.0 * (3.0 * x[0]).cos() * (2.0 * x[1]).cos();
            assert!((v - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn divergence_of_gradient_is_laplacian() {
        let f = wave_field(32, 5.0);
        let lap1 = divergence(&gradient(&f));
        let lap2 = laplacian(&f);
        let diff: f64 = lap1
            .physical()
            .iter()
            .zip(lap2.physical())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10);
    }

    #[test]
    fn heat_semigroup_damps_single_mode() {
        let f = wave_field(32, TAU);
        let t = 0.37;
        let g = heat_propagate(&f, t).unwrap();
        // mode magnitudes are |(3, +-2)|^2 = 13
        let expect = (-13.0 * t).exp();
        let ratio = g.max_abs() / f.max_abs();
        assert!((ratio - expect).abs() < 1e-12);
        assert!(heat_propagate(&f, -1.0).is_err());
    }

    #[test]
    fn semigroup_property() {
        let f = wave_field(32, 3.0);
        let a = heat_propagate(&heat_propagate(&f, 0.2).unwrap(), 0.3).unwrap();
        let b = heat_propagate(&f, 0.5).unwrap();
        let diff: f64 = a
            .spectral()
            .iter()
            .zip(b.spectral())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-14);
    }

    #[test]
    fn non_hermitian_symbol_is_rejected() {
        let f = wave_field(16, TAU);
        // a real even symbol is Hermitian everywhere, including the
        // self-conjugate Nyquist planes
        let ok =
            apply_multiplier(&f, |xi| Complex64::new((xi[0] * xi[0] + xi[1] * xi[1]).cos(), 0.0));
        assert!(ok.is_ok());
        // a constant imaginary symbol violates s(-xi) = conj(s(xi))
        let bad = apply_multiplier(&f, |_| Complex64::new(0.0, 1.0));
        assert!(matches!(bad, Err(Error::NonHermitianSymbol { .. })));
        // an odd imaginary symbol that is not zeroed on the Nyquist plane is
        // rejected too: those modes are their own conjugate partner
        let nyq = apply_multiplier(&f, |xi| Complex64::new(0.0, xi[0]));
        assert!(matches!(nyq, Err(Error::NonHermitianSymbol { .. })));
    }

    #[test]
    fn phi_functions_match_definitions() {
        for z in [-30.0, -2.0, -1e-2, -1e-9, 0.0, 1e-9, 0.5, 3.0] {
            let p1 = phi1(z);
            let p2 = phi2(z);
            // compare against the naive formulas only where those are stable
            if z.abs() > 1e-4 {
                assert!((p1 - (z.exp() - 1.0) / z).abs() < 1e-12 * p1.abs().max(1.0));
                assert!(((p1 - 1.0) / z - p2).abs() < 1e-10);
            }
            // series region: check smooth limits
            assert!(p1 > 0.0 && p2 > 0.0);
            assert!((p1 - 1.0).abs() <= z.abs().exp() - 1.0 + 1e-15);
        }
        assert_eq!(phi1(0.0), 1.0);
        assert!((phi2(0.0) - 0.5).abs() < 1e-16);
    }

    #[test]
    fn duhamel_const_source_zero_mode_grows_linearly() {
        let grid = GridSpec::new(1, 16, TAU).unwrap();
        let f = Field::from_physical(grid, vec![1.0; 16]);
        let g = duhamel_const_source(&f, 2.5).unwrap();
        assert!((g.mean() - 2.5).abs() < 1e-13);
    }
}
