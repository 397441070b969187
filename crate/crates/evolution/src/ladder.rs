//! The perturbation decomposition
//!
//! ```text
//! u = U1 + U21 + U22 + U3,          v = V1 + V2 + V3,
//! ```
//!
//! where every rung solves a linear heat problem with sources built from
//! the rungs below it:
//!
//! * U1: free heat flow of u0; V1 = v0 + ∫ grad U1 (closed multipliers).
//! * U21: Duhamel of the constant source div(u0 v0) (closed multiplier);
//!   U22: Duhamel of div(U1 (V1 − v0) + (U1 − u0) v0) by Gauss–Legendre
//!   quadrature; V2 = ∫ grad (U21 + U22), where the U21 part integrates to
//!   the exact phi2 multiplier and the U22 part reuses the same quadrature
//!   nodes with the kernel (1 − e^{−(t−s)|xi|^2})/|xi|^2 exchanged in.
//! * U3: the full remainder, a fixed-point (Picard) iteration on the
//!   Duhamel form of dt U3 − Lap U3 = div F with
//!   F = U3 V3 + U3 (V2 + V1) + V3 (U1 + U2) + U1 V2 + U2 (V1 + V2);
//!   V3 = ∫ grad U3. The decomposition is exact, so the converged ladder
//!   reconstructs the nonlinear solution to quadrature accuracy.
//!
//! All products are dealiased with the same sharp cutoff as the solver.

use besovlab::construction::DataPair;
use besovlab::error::{Error, Result};
use besovlab::multiplier::{
    apply_radial, divergence, duhamel_const_source, gradient, heat_propagate, phi1, phi2,
};
use besovlab::norms::l2_norm;
use besovlab::quadrature::GaussLegendre;
use besovlab::{Field, VectorField};
use serde::{Deserialize, Serialize};

use crate::duhamel::duhamel_trapezoid;
use crate::solver::{sharp_low_pass, SolutionTrace};
use crate::timegrid::{SolverConfig, TimeGrid};

/// Uniform rung sample times covering [0, t_final] with both endpoints.
pub fn sample_times(tgrid: &TimeGrid, samples: usize) -> Vec<f64> {
    let n = samples.max(2);
    let mut out: Vec<f64> = (0..n)
        .map(|i| tgrid.t_final * i as f64 / (n - 1) as f64)
        .collect();
    out[0] = 0.0;
    out[n - 1] = tgrid.t_final;
    out
}

/// Convergence certificate of the U3 fixed-point iteration.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PicardReport {
    pub iterations: usize,
    /// Final relative update size in sup-over-samples of L2.
    pub residual: f64,
    pub tolerance: f64,
}

/// Time-sampled rungs of the decomposition, all on the same sample times.
#[derive(Debug)]
pub struct PerturbationLadder {
    pub times: Vec<f64>,
    pub u1: Vec<Field>,
    pub u21: Vec<Field>,
    pub u22: Vec<Field>,
    pub u3: Vec<Field>,
    pub v1: Vec<VectorField>,
    pub v2: Vec<VectorField>,
    pub v3: Vec<VectorField>,
    pub u0: Field,
    pub v0: VectorField,
    pub picard: PicardReport,
}

/// Relative reconstruction defect of the ladder against a solver trace at
/// one shared sample time.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DefectSample {
    pub t: f64,
    pub u_absolute: f64,
    pub u_relative: f64,
    pub v_absolute: f64,
    pub v_relative: f64,
}

impl PerturbationLadder {
    /// U2 = U21 + U22 at one sample index.
    pub fn u2_at(&self, i: usize) -> Field {
        self.u21[i].add(&self.u22[i])
    }

    /// Ladder reconstruction of u at one sample index.
    pub fn u_at(&self, i: usize) -> Field {
        self.u1[i].add(&self.u21[i]).add(&self.u22[i]).add(&self.u3[i])
    }

    /// Ladder reconstruction of v at one sample index.
    pub fn v_at(&self, i: usize) -> VectorField {
        self.v1[i].add_scaled(&self.v2[i], 1.0).add_scaled(&self.v3[i], 1.0)
    }

    /// The U3 source F assembled from the final rungs at one sample index.
    pub fn source_f_at(&self, i: usize, cutoff: f64) -> VectorField {
        let u2 = self.u2_at(i);
        f_source(
            &self.u1[i],
            &u2,
            &self.u3[i],
            &self.v1[i],
            &self.v2[i],
            &self.v3[i],
            cutoff,
        )
    }

    /// Compare the reconstruction against a solver trace on the common
    /// sample times (the trace must contain every ladder time).
    pub fn reconstruction_defect(&self, trace: &SolutionTrace) -> Result<Vec<DefectSample>> {
        let tol = 1e-12 * self.times.last().copied().unwrap_or(1.0).max(1e-300);
        let mut out = Vec::with_capacity(self.times.len());
        for (i, &t) in self.times.iter().enumerate() {
            let j = trace
                .times
                .iter()
                .position(|&s| (s - t).abs() <= tol)
                .ok_or_else(|| {
                    Error::ValidationError(vec![format!(
                        "solver trace holds no sample at ladder time {t}"
                    )])
                })?;
            let u_ref = &trace.u[j];
            let v_ref = &trace.v[j];
            let du = self.u_at(i).sub(u_ref);
            let dv = self.v_at(i).add_scaled(v_ref, -1.0);
            let u_scale = l2_norm(u_ref).max(f64::MIN_POSITIVE);
            let v_scale = vector_l2(v_ref).max(f64::MIN_POSITIVE);
            let u_abs = l2_norm(&du);
            let v_abs = vector_l2(&dv);
            out.push(DefectSample {
                t,
                u_absolute: u_abs,
                u_relative: u_abs / u_scale,
                v_absolute: v_abs,
                v_relative: v_abs / v_scale,
            });
        }
        Ok(out)
    }
}

fn vector_l2(v: &VectorField) -> f64 {
    v.components
        .iter()
        .map(|c| l2_norm(c).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Dealiased divergence of a vector of physical products.
fn div_dealiased(w: &VectorField, cutoff: f64) -> Field {
    sharp_low_pass(&divergence(w), cutoff)
}

/// V1(s) − v0 = grad ∫_0^s e^{tau Lap} u0 dtau, by the exact multiplier.
fn v1_increment(u0: &Field, s: f64) -> Result<VectorField> {
    Ok(gradient(&duhamel_const_source(u0, s)?))
}

/// U1(s) − u0 through the stable multiplier −s|xi|^2 phi1(−s|xi|^2).
fn u1_increment(u0: &Field, s: f64) -> Field {
    apply_radial(u0, |rho| {
        let z = s * rho * rho;
        -z * phi1(-z)
    })
}

/// Free heat flow U1 and its accumulated gradient companion V1.
pub fn build_u1_v1(
    data: &DataPair,
    times: &[f64],
) -> Result<(Vec<Field>, Vec<VectorField>)> {
    if times.is_empty() {
        return Err(Error::EmptyTrace("U1/V1 trace"));
    }
    let mut u1 = Vec::with_capacity(times.len());
    let mut v1 = Vec::with_capacity(times.len());
    for &s in times {
        u1.push(heat_propagate(&data.u, s)?);
        let incr = v1_increment(&data.u, s)?;
        v1.push(data.v.add_scaled(&incr, 1.0));
    }
    Ok((u1, v1))
}

/// The constant first-order source div(u0 v0), dealiased.
fn pair_flux(data: &DataPair, cutoff: f64) -> Field {
    let comps: Vec<Field> = data
        .v
        .components
        .iter()
        .map(|va| data.u.product(va))
        .collect();
    div_dealiased(&VectorField::new(comps), cutoff)
}

/// The U22 source at one time: div(U1 (V1 − v0) + (U1 − u0) v0), dealiased.
fn s22_source(data: &DataPair, s: f64, cutoff: f64) -> Result<Field> {
    let u1 = heat_propagate(&data.u, s)?;
    let dv1 = v1_increment(&data.u, s)?;
    let du1 = u1_increment(&data.u, s);
    let comps: Vec<Field> = dv1
        .components
        .iter()
        .zip(&data.v.components)
        .map(|(dva, v0a)| u1.product(dva).add(&du1.product(v0a)))
        .collect();
    Ok(div_dealiased(&VectorField::new(comps), cutoff))
}

/// Second-rung traces U21, U22 and the companion V2 = ∫ grad (U21 + U22).
pub fn build_u2(
    data: &DataPair,
    times: &[f64],
    cfg: &SolverConfig,
) -> Result<(Vec<Field>, Vec<Field>, Vec<VectorField>)> {
    if times.is_empty() {
        return Err(Error::EmptyTrace("U2 trace"));
    }
    let grid = *data.u.grid();
    let cutoff = cfg.dealias_cutoff(&grid);
    let g21 = pair_flux(data, cutoff);
    let rule = GaussLegendre::rule(cfg.quadrature_nodes);

    let mut u21 = Vec::with_capacity(times.len());
    let mut u22 = Vec::with_capacity(times.len());
    let mut v2 = Vec::with_capacity(times.len());
    for &t in times {
        if t == 0.0 {
            u21.push(Field::zero(grid));
            u22.push(Field::zero(grid));
            v2.push(VectorField::zero(grid));
            continue;
        }
        u21.push(duhamel_const_source(&g21, t)?);
        // Gauss–Legendre nodes on [0, t], shared between U22 and its V2 part
        let mut u22_acc = Field::zero(grid);
        let mut v2_acc = apply_radial(&g21, |rho| t * t * phi2(-t * rho * rho));
        for (s, w) in rule.mapped(0.0, t) {
            let src = s22_source(data, s, cutoff)?;
            u22_acc = u22_acc.add_scaled(&heat_propagate(&src, t - s)?, w);
            let sigma = t - s;
            v2_acc = v2_acc.add_scaled(
                &apply_radial(&src, |rho| sigma * phi1(-sigma * rho * rho)),
                w,
            );
        }
        u22.push(u22_acc);
        v2.push(gradient(&v2_acc));
    }
    Ok((u21, u22, v2))
}

/// The U3 source F from one set of rung values at a single time.
#[allow(clippy::too_many_arguments)]
fn f_source(
    u1: &Field,
    u2: &Field,
    u3: &Field,
    v1: &VectorField,
    v2: &VectorField,
    v3: &VectorField,
    cutoff: f64,
) -> VectorField {
    let comps: Vec<Field> = (0..v1.dim())
        .map(|a| {
            let v123 = v1.components[a].add(&v2.components[a]).add(&v3.components[a]);
            let v12 = v1.components[a].add(&v2.components[a]);
            let u12 = u1.add(u2);
            let t1 = u3.product(&v123);
            let t2 = u12.product(&v3.components[a]);
            let t3 = u1.product(&v2.components[a]);
            let t4 = u2.product(&v12);
            sharp_low_pass(&t1.add(&t2).add(&t3).add(&t4), cutoff)
        })
        .collect();
    VectorField::new(comps)
}

/// Lower rungs handed to the U3 iteration.
#[derive(Debug)]
pub struct LowerRungs<'a> {
    pub times: &'a [f64],
    pub u1: &'a [Field],
    pub v1: &'a [VectorField],
    pub u21: &'a [Field],
    pub u22: &'a [Field],
    pub v2: &'a [VectorField],
}

/// Picard iteration for the remainder rung U3 (and V3 = ∫ grad U3).
///
/// Starts from U3 ≡ 0 and iterates U3 ← Duhamel(div F(U3)) on the sample
/// times, stopping when successive iterates differ by at most
/// `cfg.picard_tol` relatively in sup-over-samples of L2. A diverging or
/// non-converging iteration reports NonContraction — data outside the
/// smallness regime is an honest failure, never silently truncated.
pub fn build_u3(
    lower: &LowerRungs<'_>,
    cfg: &SolverConfig,
) -> Result<(Vec<Field>, Vec<VectorField>, PicardReport)> {
    let times = lower.times;
    if times.is_empty() {
        return Err(Error::EmptyTrace("U3 trace"));
    }
    let grid = *lower.u1[0].grid();
    let cutoff = cfg.dealias_cutoff(&grid);
    let n = times.len();
    let u2: Vec<Field> = (0..n).map(|i| lower.u21[i].add(&lower.u22[i])).collect();

    let mut u3: Vec<Field> = (0..n).map(|_| Field::zero(grid)).collect();
    let mut v3: Vec<VectorField> = (0..n).map(|_| VectorField::zero(grid)).collect();
    let mut last_residual = f64::INFINITY;

    for iter in 1..=cfg.picard_max_iters {
        // div F sampled from the previous iterate
        let sources: Vec<Field> = (0..n)
            .map(|i| {
                let f = f_source(&lower.u1[i], &u2[i], &u3[i], &lower.v1[i], &lower.v2[i], &v3[i], cutoff);
                div_dealiased(&f, cutoff)
            })
            .collect();
        let mut u3_next = Vec::with_capacity(n);
        for (j, &t) in times.iter().enumerate() {
            u3_next.push(duhamel_trapezoid(&times[..=j], &sources[..=j], t)?);
        }
        // V3 by prefix trapezoid of U3, gradient applied spectrally
        let mut v3_next = Vec::with_capacity(n);
        let mut acc = Field::zero(grid);
        v3_next.push(VectorField::zero(grid));
        for j in 1..n {
            let dt = times[j] - times[j - 1];
            acc = acc
                .add_scaled(&u3_next[j - 1], 0.5 * dt)
                .add_scaled(&u3_next[j], 0.5 * dt);
            v3_next.push(gradient(&acc));
        }

        let diff = (0..n)
            .map(|i| l2_norm(&u3_next[i].sub(&u3[i])))
            .fold(0.0f64, f64::max);
        let scale = (0..n).map(|i| l2_norm(&u3_next[i])).fold(0.0f64, f64::max);
        let residual = if scale > 0.0 { diff / scale } else { diff };

        u3 = u3_next;
        v3 = v3_next;

        if residual <= cfg.picard_tol {
            return Ok((u3, v3, PicardReport {
                iterations: iter,
                residual,
                tolerance: cfg.picard_tol,
            }));
        }
        if !residual.is_finite() || (iter >= 3 && residual > last_residual) {
            return Err(Error::NonContraction {
                residual,
                iterations: iter,
                tolerance: cfg.picard_tol,
            });
        }
        last_residual = residual;
    }
    Err(Error::NonContraction {
        residual: last_residual,
        iterations: cfg.picard_max_iters,
        tolerance: cfg.picard_tol,
    })
}

/// Build the whole ladder for one data pair.
pub fn build_ladder(
    data: &DataPair,
    tgrid: &TimeGrid,
    cfg: &SolverConfig,
) -> Result<PerturbationLadder> {
    cfg.validate()?;
    let mut bandfields: Vec<&Field> = vec![&data.u];
    bandfields.extend(data.v.components.iter());
    cfg.require_band_limited(&bandfields)?;

    let times = sample_times(tgrid, cfg.ladder_samples);
    let (u1, v1) = build_u1_v1(data, &times)?;
    let (u21, u22, v2) = build_u2(data, &times, cfg)?;
    let lower = LowerRungs {
        times: &times,
        u1: &u1,
        v1: &v1,
        u21: &u21,
        u22: &u22,
        v2: &v2,
    };
    let (u3, v3, picard) = build_u3(&lower, cfg)?;
    Ok(PerturbationLadder {
        times,
        u1,
        u21,
        u22,
        u3,
        v1,
        v2,
        v3,
        u0: data.u.clone(),
        v0: data.v.clone(),
        picard,
    })
}
