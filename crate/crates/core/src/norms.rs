//! Lebesgue, dyadic-Besov, and time-integrated dyadic norms, plus a sparse
//! spectral evaluator for Lp norms over balls much smaller than a grid cell
//! can resolve with rectangle quadrature.

use num_complex::Complex64;

use crate::cutoff::CutoffProfile;
use crate::error::{Error, Result};
use crate::field::{Field, VectorField};
use crate::lp::project_block;
use crate::quadrature::GaussLegendre;

/// An integrability exponent: a finite p >= 1 or infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::ValidationError(vec![format!(
                "exponent must be finite and >= 1, got {p}"
            )]))
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Finite(p) => *p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// Integration region inside the periodic box.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    /// The whole box.
    Full,
    /// Periodic ball: all points within `radius` of `center` in the
    /// coordinate-wise wrapped Euclidean metric.
    Ball { center: Vec<f64>, radius: f64 },
    /// Axis-aligned box [lo_a, hi_a] per axis, no wrap-around.
    SubBox { lo: Vec<f64>, hi: Vec<f64> },
}

impl Region {
    fn contains(&self, x: &[f64], box_length: f64) -> bool {
        match self {
            Region::Full => true,
            Region::Ball { center, radius } => {
                let mut d2 = 0.0;
                for (xa, ca) in x.iter().zip(center) {
                    let mut d = (xa - ca).abs() % box_length;
                    if d > 0.5 * box_length {
                        d = box_length - d;
                    }
                    d2 += d * d;
                }
                d2 <= radius * radius
            }
            Region::SubBox { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(xa, (l, h))| *l <= *xa && *xa <= *h),
        }
    }
}

/// Rectangle-rule Lp norm of a scalar field over a region.
/// For band-limited fields and p = 2 this coincides with Parseval.
pub fn lebesgue_norm(field: &Field, p: Exponent, region: &Region) -> f64 {
    let grid = field.grid();
    let vals = field.physical();
    let cell = grid.cell_volume();
    let mut x = vec![0.0; grid.dim];
    match p {
        Exponent::Infinity => {
            let mut best = 0.0f64;
            for (i, v) in vals.iter().enumerate() {
                if !matches!(region, Region::Full) {
                    grid.coordinates(i, &mut x);
                    if !region.contains(&x, grid.box_length) {
                        continue;
                    }
                }
                best = best.max(v.abs());
            }
            best
        }
        Exponent::Finite(p) => {
            let mut acc = 0.0;
            for (i, v) in vals.iter().enumerate() {
                if !matches!(region, Region::Full) {
                    grid.coordinates(i, &mut x);
                    if !region.contains(&x, grid.box_length) {
                        continue;
                    }
                }
                acc += v.abs().powf(p);
            }
            (acc * cell).powf(1.0 / p)
        }
    }
}

/// Lp norm of the pointwise Euclidean magnitude of a vector field.
pub fn lebesgue_norm_vector(v: &VectorField, p: Exponent, region: &Region) -> f64 {
    let grid = v.grid();
    let comps: Vec<&[f64]> = v.components.iter().map(|c| c.physical()).collect();
    let cell = grid.cell_volume();
    let mut x = vec![0.0; grid.dim];
    let magnitude = |i: usize| -> f64 {
        comps
            .iter()
            .map(|c| c[i] * c[i])
            .sum::<f64>()
            .sqrt()
    };
    match p {
        Exponent::Infinity => {
            let mut best = 0.0f64;
            for i in 0..grid.len() {
                if !matches!(region, Region::Full) {
                    grid.coordinates(i, &mut x);
                    if !region.contains(&x, grid.box_length) {
                        continue;
                    }
                }
                best = best.max(magnitude(i));
            }
            best
        }
        Exponent::Finite(p) => {
            let mut acc = 0.0;
            for i in 0..grid.len() {
                if !matches!(region, Region::Full) {
                    grid.coordinates(i, &mut x);
                    if !region.contains(&x, grid.box_length) {
                        continue;
                    }
                }
                acc += magnitude(i).powf(p);
            }
            (acc * cell).powf(1.0 / p)
        }
    }
}

/// L2 norm straight from the spectrum (Parseval), no transform needed when
/// the field is spectrum-resident.
pub fn l2_norm(field: &Field) -> f64 {
    crate::lp::l2_from_spectrum(field)
}

/// Per-shell block Lp norms over an inclusive shell range.
pub fn block_profile(
    field: &Field,
    p: Exponent,
    range: (i32, i32),
    profile: &CutoffProfile,
) -> Result<Vec<(i32, f64)>> {
    let mut out = Vec::new();
    for j in range.0..=range.1 {
        let block = project_block(field, j, profile)?;
        // an empty block needs no physical-space transform
        let norm = if block.spectral().iter().all(|c| c.norm_sqr() == 0.0) {
            0.0
        } else {
            match p {
                Exponent::Finite(q) if q == 2.0 => l2_norm(&block),
                _ => lebesgue_norm(&block, p, &Region::Full),
            }
        };
        out.push((j, norm));
    }
    Ok(out)
}

/// Weighted shell summation (sum_j (2^(j s) a_j)^r)^(1/r), sup for r = inf.
pub fn shell_sum(entries: &[(i32, f64)], s: f64, r: Exponent) -> f64 {
    match r {
        Exponent::Infinity => entries
            .iter()
            .map(|(j, a)| (*j as f64 * s).exp2() * a)
            .fold(0.0, f64::max),
        Exponent::Finite(r) => entries
            .iter()
            .map(|(j, a)| ((*j as f64 * s).exp2() * a).powf(r))
            .sum::<f64>()
            .powf(1.0 / r),
    }
}

/// Homogeneous dyadic-Besov norm with regularity s, integrability p,
/// summation r, truncated to a shell range (all resolved shells if None).
pub fn besov_norm(
    field: &Field,
    s: f64,
    p: Exponent,
    r: Exponent,
    range: Option<(i32, i32)>,
    profile: &CutoffProfile,
) -> Result<f64> {
    let range = range.unwrap_or_else(|| field.grid().resolvable_shells());
    let entries = block_profile(field, p, range, profile)?;
    Ok(shell_sum(&entries, s, r))
}

/// Same norm, restricted to an explicit set of shells.
pub fn besov_norm_on_shells(
    field: &Field,
    s: f64,
    p: Exponent,
    r: Exponent,
    shells: &[i32],
    profile: &CutoffProfile,
) -> Result<f64> {
    let mut entries = Vec::with_capacity(shells.len());
    for &j in shells {
        let block = project_block(field, j, profile)?;
        entries.push((j, lebesgue_norm(&block, p, &Region::Full)));
    }
    Ok(shell_sum(&entries, s, r))
}

/// Vector-field Besov norm: per shell, Lp of the Euclidean magnitude of the
/// blockwise-projected components.
pub fn besov_norm_vector(
    v: &VectorField,
    s: f64,
    p: Exponent,
    r: Exponent,
    range: Option<(i32, i32)>,
    profile: &CutoffProfile,
) -> Result<f64> {
    let range = range.unwrap_or_else(|| v.grid().resolvable_shells());
    let mut entries = Vec::new();
    for j in range.0..=range.1 {
        let comps = v
            .components
            .iter()
            .map(|c| project_block(c, j, profile))
            .collect::<Result<Vec<_>>>()?;
        let empty = comps
            .iter()
            .all(|c| c.spectral().iter().all(|x| x.norm_sqr() == 0.0));
        let norm = if empty {
            0.0
        } else {
            lebesgue_norm_vector(&VectorField::new(comps), p, &Region::Full)
        };
        entries.push((j, norm));
    }
    Ok(shell_sum(&entries, s, r))
}

/// Time-integrated dyadic norm of a sampled trace t -> u(t):
/// per shell j, the L^rho norm in time of t -> ||block_j u(t)||_p
/// (trapezoid rule on the sample times, max for rho = inf), then the
/// weighted shell summation. Times must be strictly increasing.
#[allow(clippy::too_many_arguments)]
pub fn chemin_lerner_norm(
    times: &[f64],
    fields: &[Field],
    rho: Exponent,
    s: f64,
    p: Exponent,
    r: Exponent,
    range: (i32, i32),
    profile: &CutoffProfile,
) -> Result<f64> {
    if times.is_empty() || fields.is_empty() {
        return Err(Error::EmptyTrace("time-integrated norm needs samples"));
    }
    if times.len() != fields.len() {
        return Err(Error::ValidationError(vec![format!(
            "trace has {} times but {} fields",
            times.len(),
            fields.len()
        )]));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ValidationError(vec![
            "trace times must be strictly increasing".into(),
        ]));
    }
    // per-sample block norms: a[j][i] for shell j, time index i
    let shells: Vec<i32> = (range.0..=range.1).collect();
    let mut per_shell: Vec<Vec<f64>> = vec![Vec::with_capacity(times.len()); shells.len()];
    for field in fields {
        for (sj, &j) in shells.iter().enumerate() {
            let block = project_block(field, j, profile)?;
            per_shell[sj].push(lebesgue_norm(&block, p, &Region::Full));
        }
    }
    let entries: Vec<(i32, f64)> = shells
        .iter()
        .zip(&per_shell)
        .map(|(&j, series)| {
            let t_norm = match rho {
                Exponent::Infinity => series.iter().copied().fold(0.0, f64::max),
                Exponent::Finite(rho) => {
                    // trapezoid in time on series^rho
                    let mut acc = 0.0;
                    for i in 1..series.len() {
                        let dt = times[i] - times[i - 1];
                        acc += 0.5 * dt * (series[i].powf(rho) + series[i - 1].powf(rho));
                    }
                    acc.powf(1.0 / rho)
                }
            };
            (j, t_norm)
        })
        .collect();
    Ok(shell_sum(&entries, s, r))
}

/// Sparse spectral Lp norm over a periodic ball (two-dimensional grids).
///
/// The field is evaluated off-lattice as a trigonometric polynomial using
/// only coefficients above `coeff_threshold` (relative to the largest), and
/// the ball integral uses a Gauss-Legendre radial rule crossed with a
/// uniform angular rule. This resolves balls whose radius is comparable to
/// a few grid cells, where rectangle quadrature is meaningless.
pub fn ball_norm_spectral(
    field: &Field,
    p: f64,
    center: &[f64],
    radius: f64,
    radial_nodes: usize,
    angular_nodes: usize,
    coeff_threshold: f64,
) -> f64 {
    let grid = field.grid();
    assert_eq!(grid.dim, 2, "spectral ball quadrature is two-dimensional");
    assert!(p >= 1.0 && radius > 0.0);
    let spec = field.spectral();
    let max_c = spec.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max_c == 0.0 {
        return 0.0;
    }
    let cut = coeff_threshold * max_c;
    // gather significant modes as (xi_x, xi_y, coeff)
    let mut modes: Vec<(f64, f64, Complex64)> = Vec::new();
    let mut freq = vec![0.0; 2];
    for (i, c) in spec.iter().enumerate() {
        if c.norm() > cut {
            grid.frequency(i, &mut freq);
            modes.push((freq[0], freq[1], *c));
        }
    }
    let rule = GaussLegendre::rule(radial_nodes);
    let dtheta = std::f64::consts::TAU / angular_nodes as f64;
    let mut acc = 0.0;
    for (rr, wr) in rule.mapped(0.0, radius) {
        for it in 0..angular_nodes {
            let th = it as f64 * dtheta;
            let x = center[0] + rr * th.cos();
            let y = center[1] + rr * th.sin();
            // evaluate sum c * exp(i xi . x); field is real so take Re
            let mut v = 0.0;
            for &(fx, fy, c) in &modes {
                let phase = fx * x + fy * y;
                v += c.re * phase.cos() - c.im * phase.sin();
            }
            acc += wr * rr * dtheta * v.abs().powf(p);
        }
    }
    acc.powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutoff::{build_cutoffs, DEFAULT_ORDER};
    use crate::grid::GridSpec;
    use std::f64::consts::TAU;

    fn cosine(grid: GridSpec, k: i64) -> Field {
        let kk = TAU / grid.box_length * k as f64;
        let mut vals = vec![0.0; grid.len()];
        let mut x = vec![0.0; grid.dim];
        for (i, v) in vals.iter_mut().enumerate() {
            grid.coordinates(i, &mut x);
            *v = (kk * x[0]).cos();
        }
        Field::from_physical(grid, vals)
    }

    #[test]
    fn lp_norms_of_cosine() {
        let grid = GridSpec::new(2, 64, TAU).unwrap();
        let f = cosine(grid, 3);
        let vol = TAU * TAU;
        // ||cos||_2^2 = vol/2, ||cos||_4^4 = vol * 3/8, ||cos||_inf = 1
        let n2 = lebesgue_norm(&f, Exponent::Finite(2.0), &Region::Full);
        assert!((n2 - (vol / 2.0).sqrt()).abs() < 1e-12);
        let n4 = lebesgue_norm(&f, Exponent::Finite(4.0), &Region::Full);
        assert!((n4 - (vol * 3.0 / 8.0).powf(0.25)).abs() < 1e-12);
        let ni = lebesgue_norm(&f, Exponent::Infinity, &Region::Full);
        assert!((ni - 1.0).abs() < 1e-12);
        assert!((l2_norm(&f) - n2).abs() < 1e-10);
    }

    #[test]
    fn region_masks_select_expected_volume() {
        let grid = GridSpec::new(2, 128, 4.0).unwrap();
        let f = Field::from_physical(grid, vec![1.0; grid.len()]);
        // unit field: Lp norm over region = volume^(1/p)
        let b = lebesgue_norm(
            &f,
            Exponent::Finite(1.0),
            &Region::Ball {
                center: vec![2.0, 2.0],
                radius: 1.0,
            },
        );
        assert!((b - std::f64::consts::PI).abs() < 0.05);
        // wrapped ball across the boundary has the same volume
        let bw = lebesgue_norm(
            &f,
            Exponent::Finite(1.0),
            &Region::Ball {
                center: vec![0.0, 0.0],
                radius: 1.0,
            },
        );
        assert!((bw - std::f64::consts::PI).abs() < 0.05);
        let sb = lebesgue_norm(
            &f,
            Exponent::Finite(1.0),
            &Region::SubBox {
                lo: vec![0.5, 0.5],
                hi: vec![1.5, 2.5],
            },
        );
        assert!((sb - 2.0).abs() < 0.1);
    }

    #[test]
    fn besov_norm_of_single_shell_wave() {
        let grid = GridSpec::new(2, 64, TAU).unwrap();
        let profile = build_cutoffs(DEFAULT_ORDER);
        // |xi| = 12 sits in phi's unity zone at shell 3 (12/8 = 1.5)
        let f = cosine(grid, 12);
        let n2 = lebesgue_norm(&f, Exponent::Finite(2.0), &Region::Full);
        for r in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
            let b = besov_norm(&f, -1.5, Exponent::Finite(2.0), r, None, &profile).unwrap();
            let expect = (3.0f64 * -1.5).exp2() * n2;
            assert!(
                (b - expect).abs() < 1e-10 * expect,
                "besov {b} vs {expect} (r = {r})"
            );
        }
    }

    #[test]
    fn chemin_lerner_reduces_to_time_quadrature() {
        let grid = GridSpec::new(2, 32, TAU).unwrap();
        let profile = build_cutoffs(DEFAULT_ORDER);
        let base = cosine(grid, 6); // shell 2 pure
        let times: Vec<f64> = (0..5).map(|i| i as f64 * 0.25).collect();
        let fields: Vec<Field> = times.iter().map(|t| base.scale(1.0 + t)).collect();
        // rho = inf: sup_t (1+t) * 2^(2s) ||base||_2
        let n2 = l2_norm(&base);
        let s = -0.5;
        let got = chemin_lerner_norm(
            &times,
            &fields,
            Exponent::Infinity,
            s,
            Exponent::Finite(2.0),
            Exponent::Finite(1.0),
            (2, 2),
            &profile,
        )
        .unwrap();
        let expect = 2.0 * (2.0f64 * s).exp2() * n2;
        assert!((got - expect).abs() < 1e-10 * expect);
        // rho = 1: integral of (1+t) over [0,1] = 1.5 (trapezoid exact)
        let got1 = chemin_lerner_norm(
            &times,
            &fields,
            Exponent::Finite(1.0),
            s,
            Exponent::Finite(2.0),
            Exponent::Finite(1.0),
            (2, 2),
            &profile,
        )
        .unwrap();
        let expect1 = 1.5 * (2.0f64 * s).exp2() * n2;
        assert!((got1 - expect1).abs() < 1e-10 * expect1);
        // degenerate traces are rejected
        assert!(chemin_lerner_norm(
            &[],
            &[],
            Exponent::Infinity,
            s,
            Exponent::Finite(2.0),
            Exponent::Finite(1.0),
            (2, 2),
            &profile
        )
        .is_err());
    }

    #[test]
    fn spectral_ball_norm_matches_exact_integral() {
        // f = cos(3x): int over ball |f|^2 computed against dense reference
        let grid = GridSpec::new(2, 64, TAU).unwrap();
        let f = cosine(grid, 3);
        let center = [3.0, 2.0];
        let radius = 0.8;
        let got = ball_norm_spectral(&f, 2.0, &center, radius, 32, 64, 1e-13);
        // dense polar quadrature reference with the closed-form integrand
        let rule = GaussLegendre::rule(64);
        let mut acc = 0.0;
        let m = 256;
        for (rr, wr) in rule.mapped(0.0, radius) {
            for it in 0..m {
                let th = TAU * it as f64 / m as f64;
                let x = center[0] + rr * th.cos();
                let v = (3.0 * x).cos();
                acc += wr * rr * (TAU / m as f64) * v * v;
            }
        }
        let expect = acc.sqrt();
        assert!(
            (got - expect).abs() < 1e-10 * expect,
            "{got} vs {expect}"
        );
    }
}
