//! Quadrature of the Duhamel integral  ∫₀ᵗ e^{(t−s)Δ} g(s) ds.
//!
//! Each quadrature node is propagated by the exact heat multiplier, so the
//! only error is the time-quadrature error of the node rule; for a source
//! that is constant in time both paths below reproduce the closed form
//! `besovlab::multiplier::duhamel_const_source` to roundoff.

use besovlab::error::{Error, Result};
use besovlab::multiplier::heat_propagate;
use besovlab::quadrature::GaussLegendre;
use besovlab::Field;

/// Gauss–Legendre Duhamel quadrature with a callable source.
///
/// The source is evaluated at the `nodes` Gauss–Legendre points of [0, t];
/// accuracy is that of the node rule (exact for sources whose propagated
/// integrand is a polynomial of degree < 2·nodes in s).
pub fn duhamel_gl(
    t: f64,
    nodes: usize,
    mut source: impl FnMut(f64) -> Result<Field>,
) -> Result<Field> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if nodes == 0 {
        return Err(Error::EmptyTrace("gauss-legendre duhamel quadrature"));
    }
    let rule = GaussLegendre::rule(nodes);
    let mapped = rule.mapped(0.0, t);
    let mut acc: Option<Field> = None;
    for (s, w) in mapped {
        let g = source(s)?;
        if t == 0.0 {
            // zero-length interval: the weights are all zero, keep the grid
            acc = Some(Field::zero(*g.grid()));
            break;
        }
        let propagated = heat_propagate(&g, t - s)?;
        acc = Some(match acc {
            None => propagated.scale(w),
            Some(a) => a.add_scaled(&propagated, w),
        });
    }
    acc.ok_or(Error::EmptyTrace("gauss-legendre duhamel quadrature"))
}

/// Trapezoid Duhamel quadrature over an already-sampled source trace.
///
/// `times` must be strictly increasing, start at 0 and end at `t` (within
/// roundoff); `sources[i]` is the source at `times[i]`. Second-order
/// accurate in the sample spacing.
pub fn duhamel_trapezoid(times: &[f64], sources: &[Field], t: f64) -> Result<Field> {
    if times.is_empty() || sources.is_empty() {
        return Err(Error::EmptyTrace("trapezoid duhamel quadrature"));
    }
    if times.len() != sources.len() {
        return Err(Error::ValidationError(vec![format!(
            "source trace has {} times but {} fields",
            times.len(),
            sources.len()
        )]));
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let grid = *sources[0].grid();
    if times.len() == 1 {
        // a single sample can only describe the empty integral at t = 0
        if t.abs() > 1e-12 * t.abs().max(1.0) {
            return Err(Error::ValidationError(vec![format!(
                "a one-sample trace cannot cover [0, {t}]"
            )]));
        }
        return Ok(Field::zero(grid));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::ValidationError(vec![
            "source trace times must be strictly increasing".into(),
        ]));
    }
    let span_tol = 1e-12 * t.abs().max(1.0);
    if times[0].abs() > span_tol || (times[times.len() - 1] - t).abs() > span_tol {
        return Err(Error::ValidationError(vec![format!(
            "source trace spans [{}, {}], expected [0, {t}]",
            times[0],
            times[times.len() - 1]
        )]));
    }
    let mut acc = Field::zero(grid);
    for i in 0..times.len() {
        let w = match i {
            0 => 0.5 * (times[1] - times[0]),
            i if i == times.len() - 1 => 0.5 * (times[i] - times[i - 1]),
            i => 0.5 * (times[i + 1] - times[i - 1]),
        };
        let propagated = heat_propagate(&sources[i], t - times[i])?;
        acc = acc.add_scaled(&propagated, w);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use besovlab::multiplier::{duhamel_const_source, laplacian};
    use besovlab::norms::l2_norm;
    use besovlab::GridSpec;
    use std::f64::consts::TAU;

    fn test_field() -> Field {
        let grid = GridSpec::new(2, 32, TAU).unwrap();
        let mut vals = vec![0.0; grid.len()];
        let mut x = vec![0.0; 2];
        for (i, v) in vals.iter_mut().enumerate() {
            grid.coordinates(i, &mut x);
            *v = (2.0 * x[0]).sin() + 0.5 * (3.0 * x[1]).cos() + (x[0] + x[1]).cos();
        }
        Field::from_physical(grid, vals)
    }

    fn rel_l2(a: &Field, b: &Field) -> f64 {
        l2_norm(&a.sub(b)) / l2_norm(b).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn constant_source_matches_the_closed_form() {
        let g = test_field();
        let t = 0.37;
        let closed = duhamel_const_source(&g, t).unwrap();
        let gl = duhamel_gl(t, 24, |_| Ok(g.clone())).unwrap();
        assert!(rel_l2(&gl, &closed) < 1e-12, "gl defect {}", rel_l2(&gl, &closed));

        // trapezoid converges at second order to the same closed form
        let sample = |n: usize| {
            let times: Vec<f64> = (0..=n).map(|i| t * i as f64 / n as f64).collect();
            let sources: Vec<Field> = times.iter().map(|_| g.clone()).collect();
            rel_l2(&duhamel_trapezoid(&times, &sources, t).unwrap(), &closed)
        };
        let (e8, e16) = (sample(8), sample(16));
        let order = (e8 / e16).log2();
        assert!((order - 2.0).abs() < 0.2, "trapezoid order {order} (errors {e8:.3e}, {e16:.3e})");
    }

    #[test]
    fn zero_source_gives_the_zero_field() {
        let grid = GridSpec::new(2, 16, TAU).unwrap();
        let z = Field::zero(grid);
        let gl = duhamel_gl(0.5, 8, |_| Ok(z.clone())).unwrap();
        assert_eq!(gl.max_abs(), 0.0);
        let times = [0.0, 0.25, 0.5];
        let sources = vec![z.clone(), z.clone(), z.clone()];
        let tr = duhamel_trapezoid(&times, &sources, 0.5).unwrap();
        assert_eq!(tr.max_abs(), 0.0);
    }

    #[test]
    fn manufactured_forced_solution_is_reproduced() {
        // w(s) = (1 - e^{-lam s}) h solves dt w - Lap w = g with w(0) = 0
        // for g(s) = lam e^{-lam s} h - (1 - e^{-lam s}) Lap h, so the
        // Duhamel integral of g must land exactly on w(t).
        let h = test_field();
        let lam = 3.0;
        let t = 0.21;
        let result = duhamel_gl(t, 32, |s| {
            let decay = (-lam * s).exp();
            Ok(h.scale(lam * decay).sub(&laplacian(&h).scale(1.0 - decay)))
        })
        .unwrap();
        let expect = h.scale(1.0 - (-lam * t).exp());
        assert!(rel_l2(&result, &expect) < 1e-12, "defect {}", rel_l2(&result, &expect));
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let g = test_field();
        assert!(matches!(
            duhamel_gl(0.5, 0, |_| Ok(g.clone())),
            Err(Error::EmptyTrace(_))
        ));
        assert!(matches!(duhamel_gl(-0.5, 8, |_| Ok(g.clone())), Err(Error::NegativeTime(_))));
        assert!(matches!(duhamel_trapezoid(&[], &[], 0.5), Err(Error::EmptyTrace(_))));
        let times = [0.0, 0.2];
        assert!(duhamel_trapezoid(&times, &[g.clone(), g.clone()], 0.5).is_err());
        let backwards = [0.2, 0.0];
        assert!(duhamel_trapezoid(&backwards, &[g.clone(), g.clone()], 0.2).is_err());
    }

    #[test]
    fn zero_horizon_integrals_vanish() {
        let g = test_field();
        let gl = duhamel_gl(0.0, 8, |_| Ok(g.clone())).unwrap();
        assert_eq!(gl.max_abs(), 0.0);
        let tr = duhamel_trapezoid(&[0.0], &[g.clone()], 0.0).unwrap();
        assert_eq!(tr.max_abs(), 0.0);
    }
}
