//! Norm ledger for the perturbation ladder.
//!
//! Every estimate the smallness argument rests on is re-measured on the
//! computed rungs: each row records the measured left-hand side, the
//! measured right-hand side (without constant), a frozen multiplicative
//! constant, and the slack ratio `constant * rhs / lhs`. A healthy ladder
//! has every slack finite and at least 1; a slack below 1 means the
//! inequality failed at the frozen constant and is reported, not hidden.
//!
//! Time-Lebesgue-in-frequency (Chemin–Lerner) norms take the per-shell
//! time norm first and sum over shells afterwards; time integrals use the
//! trapezoid rule on the uniform ladder samples.

use besovlab::cutoff::{build_cutoffs, CutoffProfile};
use besovlab::error::{Error, Result};
use besovlab::lp::project_block;
use besovlab::norms::{
    besov_norm, besov_norm_vector, lebesgue_norm, lebesgue_norm_vector, shell_sum, Exponent,
    Region,
};
use besovlab::quadrature::trapezoid;
use besovlab::{Field, VectorField};
use serde::Serialize;

use crate::ladder::PerturbationLadder;
use crate::solver::sharp_low_pass;
use crate::timegrid::SolverConfig;

/// Smoothstep order of the dyadic cutoffs used for ledger norms.
const LEDGER_CUTOFF_ORDER: u32 = 8;

/// One measured inequality.
#[derive(Clone, Debug, Serialize)]
pub struct LedgerRow {
    pub id: &'static str,
    pub description: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub slack: f64,
}

/// The full ledger for one ladder.
#[derive(Clone, Debug, Serialize)]
pub struct NormLedger {
    pub dim: usize,
    pub besov_r: f64,
    pub p0: f64,
    pub q0: f64,
    pub t_final: f64,
    /// Remainder size: sup norm at low regularity plus integrated norm at
    /// full regularity, both at integrability p0.
    pub x_t: f64,
    /// Companion remainder size at integrability p0.
    pub y_t: f64,
    pub rows: Vec<LedgerRow>,
}

impl NormLedger {
    pub fn row(&self, id: &str) -> Option<&LedgerRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn min_slack(&self) -> f64 {
        self.rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min)
    }

    /// Every inequality holds at its frozen constant.
    pub fn all_pass(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.slack.is_finite() && r.slack >= 1.0)
    }

    /// Stable CSV rendering (fixed row order, fixed precision).
    pub fn csv(&self) -> String {
        let mut out = String::from("id,lhs,rhs,constant,slack\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.12e},{:.12e},{:.6},{:.6}\n",
                r.id, r.lhs, r.rhs, r.constant, r.slack
            ));
        }
        out
    }
}

/// Frozen row constants, calibrated once on the reference ladder family
/// and fixed; rows provable with constant 1 keep a bare safety epsilon.
fn frozen_constant(id: &str) -> f64 {
    match id {
        // sup over time includes t = 0, where lhs equals rhs exactly;
        // the epsilon covers lattice-level non-monotonicity of block
        // Lp norms under the discrete heat flow.
        "u1-critical-sup" => 1.05,
        "u1-smoothing" => 4.0,
        "u1-smoothing-wide" => 4.0,
        "v1-sup" => 1.05,
        "v1-mean-square-wide" => 1.05,
        "u2-sup" => 1.05,
        "u2-flux-hoelder" => 1.05,
        // the companion passes through a per-shell gradient, whose honest
        // per-block constant reaches the outer shell radius 8/3
        "u2-v2-integrated" => 4.0,
        "u2-mean-square" => 1.05,
        "u1v1-amplitude-split" => 1.05,
        "u1-maximum" => 1.05,
        "v1-maximum" => 1.05,
        "v1-integrated" => 1.05,
        "u2-v2-wide" => 4.0,
        "y-from-x" => 2.0,
        "x-source" => 2.0,
        "j-remainder-squared" => 1.05,
        "j-second-lower" => 1.05,
        "j-first-second" => 1.05,
        "j-remainder-lower-v" => 2.0,
        "j-remainder-lower-u" => 2.0,
        "x-bootstrap" => 4.0,
        _ => 1.0,
    }
}

/// Per-shell Lp norms of a field trace: `series[shell][time]`.
struct BlockTable {
    shells: Vec<i32>,
    series: Vec<Vec<f64>>,
}

fn scalar_table(fields: &[Field], p: Exponent, profile: &CutoffProfile) -> Result<BlockTable> {
    let range = fields[0].grid().resolvable_shells();
    let shells: Vec<i32> = (range.0..=range.1).collect();
    let mut series = vec![vec![0.0; fields.len()]; shells.len()];
    for (i, f) in fields.iter().enumerate() {
        let prof = besovlab::norms::block_profile(f, p, range, profile)?;
        for (k, (_, a)) in prof.iter().enumerate() {
            series[k][i] = *a;
        }
    }
    Ok(BlockTable { shells, series })
}

fn vector_table(
    fields: &[VectorField],
    p: Exponent,
    profile: &CutoffProfile,
) -> Result<BlockTable> {
    let grid = *fields[0].grid();
    let range = grid.resolvable_shells();
    let shells: Vec<i32> = (range.0..=range.1).collect();
    let mut series = vec![vec![0.0; fields.len()]; shells.len()];
    for (i, v) in fields.iter().enumerate() {
        for (k, &j) in shells.iter().enumerate() {
            let blocks: Vec<Field> = v
                .components
                .iter()
                .map(|c| project_block(c, j, profile))
                .collect::<Result<_>>()?;
            let mass: f64 = blocks
                .iter()
                .map(|b| b.spectral().iter().map(|c| c.norm_sqr()).sum::<f64>())
                .sum();
            series[k][i] = if mass == 0.0 {
                0.0
            } else if p == Exponent::Finite(2.0) {
                blocks
                    .iter()
                    .map(|b| besovlab::norms::l2_norm(b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            } else {
                lebesgue_norm_vector(&VectorField::new(blocks), p, &Region::Full)
            };
        }
    }
    Ok(BlockTable { shells, series })
}

/// Chemin–Lerner norm from a block table: time exponent rho, regularity s,
/// shell summation r.
fn cl(table: &BlockTable, dt: f64, rho: Exponent, s: f64, r: Exponent) -> f64 {
    let entries: Vec<(i32, f64)> = table
        .shells
        .iter()
        .zip(&table.series)
        .map(|(&j, series)| {
            let tn = match rho {
                Exponent::Infinity => series.iter().cloned().fold(0.0, f64::max),
                Exponent::Finite(rh) if rh == 1.0 => trapezoid(series, dt),
                Exponent::Finite(rh) => {
                    let powered: Vec<f64> = series.iter().map(|a| a.powf(rh)).collect();
                    trapezoid(&powered, dt).powf(1.0 / rh)
                }
            };
            (j, tn)
        })
        .collect();
    shell_sum(&entries, s, r)
}

fn slack(lhs: f64, rhs: f64, constant: f64) -> f64 {
    if lhs > 0.0 {
        constant * rhs / lhs
    } else if rhs == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

fn row(id: &'static str, description: &'static str, lhs: f64, rhs: f64) -> LedgerRow {
    let constant = frozen_constant(id);
    LedgerRow {
        id,
        description,
        lhs,
        rhs,
        constant,
        slack: slack(lhs, rhs, constant),
    }
}

/// Dealiased scalar-times-vector product trace.
fn product_trace(scalars: &[Field], vectors: &[VectorField], cutoff: f64) -> Vec<VectorField> {
    scalars
        .iter()
        .zip(vectors)
        .map(|(u, v)| {
            VectorField::new(
                v.components
                    .iter()
                    .map(|va| sharp_low_pass(&u.product(va), cutoff))
                    .collect(),
            )
        })
        .collect()
}

fn sup_amplitude(fields: &[Field]) -> f64 {
    fields.iter().map(|f| f.max_abs()).fold(0.0, f64::max)
}

fn sup_amplitude_vector(fields: &[VectorField]) -> f64 {
    fields
        .iter()
        .map(|v| lebesgue_norm_vector(v, Exponent::Infinity, &Region::Full))
        .fold(0.0, f64::max)
}

/// Measure every ladder inequality and return the ledger.
pub fn ladder_norm_ledger(
    ladder: &PerturbationLadder,
    cfg: &SolverConfig,
    besov_r: f64,
) -> Result<NormLedger> {
    let grid = *ladder.u0.grid();
    let d = grid.dim;
    let n = ladder.times.len();
    if n < 2 {
        return Err(Error::EmptyTrace("ladder sample times"));
    }
    let t_final = *ladder.times.last().unwrap();
    let dt = ladder.times[1] - ladder.times[0];
    for w in ladder.times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs().max(1e-300) {
            return Err(Error::ValidationError(vec![
                "ledger requires uniform ladder sample times".into(),
            ]));
        }
    }

    let p0 = 2.0 * d as f64 - 0.5;
    let q0 = 2.0 * d as f64;
    let sp = d as f64 / p0; // regularity matching integrability p0
    let sq = d as f64 / q0; // regularity matching integrability q0
    let ep0 = Exponent::finite(p0)?;
    let eq0 = Exponent::finite(q0)?;
    let e2d = Exponent::finite(2.0 * d as f64)?;
    let er = Exponent::finite(besov_r)?;
    let e1 = Exponent::finite(1.0)?;
    let e2 = Exponent::finite(2.0)?;
    let einf = Exponent::Infinity;
    let profile = build_cutoffs(LEDGER_CUTOFF_ORDER);
    let cutoff = cfg.dealias_cutoff(&grid);
    let crit = -(3.0) / 2.0; // critical regularity at integrability 2d

    // rung aggregates
    let u2: Vec<Field> = (0..n).map(|i| ladder.u2_at(i)).collect();
    let u12: Vec<Field> = (0..n).map(|i| ladder.u1[i].add(&u2[i])).collect();
    let v12: Vec<VectorField> = (0..n)
        .map(|i| ladder.v1[i].add_scaled(&ladder.v2[i], 1.0))
        .collect();

    // block tables (each built once, reused across rows)
    let u1_p0 = scalar_table(&ladder.u1, ep0, &profile)?;
    let u1_2d = scalar_table(&ladder.u1, e2d, &profile)?;
    let u1_q0 = scalar_table(&ladder.u1, eq0, &profile)?;
    let u2_p0 = scalar_table(&u2, ep0, &profile)?;
    let u2_q0 = scalar_table(&u2, eq0, &profile)?;
    let u3_p0 = scalar_table(&ladder.u3, ep0, &profile)?;
    let u12_q0 = scalar_table(&u12, eq0, &profile)?;
    let v1_p0 = vector_table(&ladder.v1, ep0, &profile)?;
    let v1_2d = vector_table(&ladder.v1, e2d, &profile)?;
    let v1_q0 = vector_table(&ladder.v1, eq0, &profile)?;
    let v2_p0 = vector_table(&ladder.v2, ep0, &profile)?;
    let v2_q0 = vector_table(&ladder.v2, eq0, &profile)?;
    let v3_p0 = vector_table(&ladder.v3, ep0, &profile)?;
    let v12_p0 = vector_table(&v12, ep0, &profile)?;
    let v12_q0 = vector_table(&v12, eq0, &profile)?;

    // datum norms
    let u0_crit_r = besov_norm(&ladder.u0, crit, e2d, er, None, &profile)?;
    let u0_crit_1 = besov_norm(&ladder.u0, crit, e2d, e1, None, &profile)?;
    let u0_low_p0 = besov_norm(&ladder.u0, sp - 2.0, ep0, e1, None, &profile)?;
    let u0_high_p0 = besov_norm(&ladder.u0, sp + 1.0, ep0, e1, None, &profile)?;
    let v0_low_p0 = besov_norm_vector(&ladder.v0, sp - 1.0, ep0, e1, None, &profile)?;
    let v0_mid_p0 = besov_norm_vector(&ladder.v0, sp, ep0, e1, None, &profile)?;
    let v0_half_2d = besov_norm_vector(&ladder.v0, 0.5, e2d, e1, None, &profile)?;
    let u0_sup = lebesgue_norm(&ladder.u0, einf, &Region::Full);
    let v0_sup = lebesgue_norm_vector(&ladder.v0, einf, &Region::Full);

    // amplitude (sup-in-space-and-time) norms
    let u1_amp = sup_amplitude(&ladder.u1);
    let v1_amp = sup_amplitude_vector(&ladder.v1);
    let grad_u1: Vec<VectorField> = ladder
        .u1
        .iter()
        .map(besovlab::multiplier::gradient)
        .collect();
    let grad_u1_amp = sup_amplitude_vector(&grad_u1);
    drop(grad_u1);

    // product tables (traces dropped once measured)
    let flux_u1v1 = vector_table(&product_trace(&ladder.u1, &ladder.v1, cutoff), ep0, &profile)?;
    let flux_u3v3 = vector_table(&product_trace(&ladder.u3, &ladder.v3, cutoff), ep0, &profile)?;
    let flux_u2v12 = vector_table(&product_trace(&u2, &v12, cutoff), ep0, &profile)?;
    let flux_u1v2 = vector_table(&product_trace(&ladder.u1, &ladder.v2, cutoff), ep0, &profile)?;
    let flux_u3v12 = vector_table(&product_trace(&ladder.u3, &v12, cutoff), ep0, &profile)?;
    let flux_v3u12 = vector_table(&product_trace(&u12, &ladder.v3, cutoff), ep0, &profile)?;
    let flux_f: Vec<VectorField> = (0..n).map(|i| ladder.source_f_at(i, cutoff)).collect();
    let flux_f_p0 = vector_table(&flux_f, ep0, &profile)?;
    drop(flux_f);

    // remainder sizes
    let x_t = cl(&u3_p0, dt, einf, sp - 2.0, e1) + cl(&u3_p0, dt, e1, sp, e1);
    let y_t = cl(&v3_p0, dt, einf, sp - 1.0, e1);

    let mut rows = Vec::new();

    rows.push(row(
        "u1-critical-sup",
        "free flow keeps the critical data norm",
        cl(&u1_2d, dt, einf, crit, er),
        u0_crit_r,
    ));
    rows.push(row(
        "u1-smoothing",
        "free flow: sup plus integrated smoothing from the datum",
        cl(&u1_p0, dt, einf, sp - 2.0, e1) + cl(&u1_p0, dt, e1, sp, e1),
        u0_low_p0,
    ));
    rows.push(row(
        "u1-smoothing-wide",
        "free-flow smoothing at the wide integrability",
        cl(&u1_2d, dt, einf, crit, e1) + cl(&u1_2d, dt, e1, 0.5, e1),
        u0_crit_1,
    ));
    rows.push(row(
        "v1-sup",
        "companion sup bound: datum plus integrated free flow",
        cl(&v1_p0, dt, einf, sp - 1.0, e1),
        v0_low_p0 + cl(&u1_p0, dt, e1, sp, e1),
    ));
    rows.push(row(
        "v1-mean-square-wide",
        "companion mean-square bound at the wide integrability",
        cl(&v1_2d, dt, e2, 0.5, e1),
        t_final.sqrt() * (v0_half_2d + cl(&u1_2d, dt, e1, 1.5, e1)),
    ));
    rows.push(row(
        "u2-sup",
        "second rung sup bound by the integrated first-order flux",
        cl(&u2_p0, dt, einf, sp - 2.0, e1),
        cl(&flux_u1v1, dt, e1, sp - 1.0, e1),
    ));
    rows.push(row(
        "u2-flux-hoelder",
        "first-order flux splits into integrated u1 times sup v1",
        cl(&flux_u1v1, dt, e1, sp - 1.0, e1),
        cl(&u1_p0, dt, e1, sp, e1) * cl(&v1_p0, dt, einf, sp - 1.0, e1),
    ));
    rows.push(row(
        "u2-v2-integrated",
        "integrated second rung and companion from the mean-square rung",
        cl(&u2_p0, dt, e1, sp, e1) + cl(&v2_p0, dt, einf, sp - 1.0, e1),
        t_final.sqrt() * cl(&u2_p0, dt, e2, sp, e1),
    ));
    rows.push(row(
        "u2-mean-square",
        "second-rung mean-square bound by the full-regularity flux",
        cl(&u2_p0, dt, e2, sp, e1),
        cl(&flux_u1v1, dt, e1, sp, e1),
    ));
    rows.push(row(
        "u1v1-amplitude-split",
        "full-regularity flux via amplitudes times integrated smoothing",
        cl(&flux_u1v1, dt, e1, sp, e1),
        u1_amp * cl(&v1_p0, dt, e1, sp, e1) + v1_amp * cl(&u1_p0, dt, e1, sp, e1),
    ));
    rows.push(row(
        "u1-maximum",
        "free flow never amplifies the amplitude",
        u1_amp,
        u0_sup,
    ));
    rows.push(row(
        "v1-maximum",
        "companion amplitude grows at most linearly in time",
        v1_amp,
        v0_sup + t_final * grad_u1_amp,
    ));
    rows.push(row(
        "v1-integrated",
        "integrated companion bound from the data",
        cl(&v1_p0, dt, e1, sp, e1),
        t_final * (v0_mid_p0 + t_final * u0_high_p0),
    ));
    rows.push(row(
        "u2-v2-wide",
        "second rung and companion at the wide integrability",
        cl(&u2_q0, dt, e1, sq, e1) + cl(&v2_q0, dt, e2, sq, e1),
        t_final.sqrt()
            * (u1_amp * cl(&v1_q0, dt, e1, sq, e1) + v1_amp * cl(&u1_q0, dt, e1, sq, e1)),
    ));
    rows.push(row(
        "y-from-x",
        "remainder companion controlled by the integrated remainder",
        y_t,
        cl(&u3_p0, dt, e1, sp, e1),
    ));
    rows.push(row(
        "x-source",
        "remainder controlled by its source flux",
        x_t,
        cl(&flux_f_p0, dt, e1, sp - 1.0, e1),
    ));
    rows.push(row(
        "j-remainder-squared",
        "remainder-times-companion flux is quadratic in the remainder",
        cl(&flux_u3v3, dt, e1, sp - 1.0, e1),
        cl(&u3_p0, dt, e1, sp, e1) * cl(&v3_p0, dt, einf, sp - 1.0, e1),
    ));
    rows.push(row(
        "j-second-lower",
        "second rung against the lower companions",
        cl(&flux_u2v12, dt, e1, sp - 1.0, e1),
        cl(&u2_p0, dt, e1, sp, e1) * cl(&v12_p0, dt, einf, sp - 1.0, e1),
    ));
    rows.push(row(
        "j-first-second",
        "first rung against the second companion",
        cl(&flux_u1v2, dt, e1, sp - 1.0, e1),
        cl(&u1_p0, dt, e1, sp, e1) * cl(&v2_p0, dt, einf, sp - 1.0, e1),
    ));
    rows.push(row(
        "j-remainder-lower-v",
        "remainder against the lower companions via interpolation",
        cl(&flux_u3v12, dt, e1, sp - 1.0, e1),
        cl(&u3_p0, dt, einf, sp - 2.0, e1).sqrt()
            * cl(&u3_p0, dt, e1, sp, e1).sqrt()
            * cl(&v12_q0, dt, e2, sq, e1),
    ));
    rows.push(row(
        "j-remainder-lower-u",
        "remainder companion against the lower rungs",
        cl(&flux_v3u12, dt, e1, sp - 1.0, e1),
        cl(&v3_p0, dt, einf, sp - 1.0, e1) * cl(&u12_q0, dt, e1, sq, e1),
    ));
    rows.push(row(
        "x-bootstrap",
        "closed inequality for the remainder size",
        x_t,
        x_t * x_t
            + x_t * (cl(&u12_q0, dt, e1, sq, e1) + cl(&v12_q0, dt, e2, sq, e1))
            + cl(&u2_p0, dt, e1, sp, e1) * cl(&v12_p0, dt, einf, sp - 1.0, e1)
            + cl(&u1_p0, dt, e1, sp, e1) * cl(&v2_p0, dt, einf, sp - 1.0, e1),
    ));

    Ok(NormLedger {
        dim: d,
        besov_r,
        p0,
        q0,
        t_final,
        x_t,
        y_t,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::build_ladder;
    use crate::presets::toy_bundle;
    use crate::timegrid::TimeGrid;
    use besovlab::construction::build_initial_data;

    fn toy_ledger(epsilon: f64) -> NormLedger {
        let b = toy_bundle();
        let data = build_initial_data(&b.params, &b.spec, &b.grid).unwrap();
        let tgrid = TimeGrid::experiment(epsilon, b.params.shell_index, 8).unwrap();
        let cfg = SolverConfig::default();
        let ladder = build_ladder(&data, &tgrid, &cfg).unwrap();
        ladder_norm_ledger(&ladder, &cfg, b.params.besov_r).unwrap()
    }

    #[test]
    fn every_inequality_holds_on_the_reference_ladder() {
        let ledger = toy_ledger(1.0 / 16.0);
        assert_eq!(ledger.rows.len(), 22);
        for r in &ledger.rows {
            assert!(
                r.slack.is_finite() && r.slack >= 1.0,
                "row {} failed: lhs {:.6e} rhs {:.6e} constant {} slack {:.4}\n{}",
                r.id,
                r.lhs,
                r.rhs,
                r.constant,
                r.slack,
                ledger.csv()
            );
        }
        assert!(ledger.all_pass());
        assert!(ledger.x_t > 0.0 && ledger.y_t > 0.0);
    }

    #[test]
    fn slacks_stay_healthy_across_the_horizon_sweep() {
        for &eps in &[1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0] {
            let ledger = toy_ledger(eps);
            assert!(
                ledger.all_pass(),
                "epsilon {eps}: min slack {:.4}\n{}",
                ledger.min_slack(),
                ledger.csv()
            );
        }
    }

    #[test]
    fn remainder_size_is_small_against_the_lower_rungs() {
        let ledger = toy_ledger(1.0 / 16.0);
        // the bootstrap inequality only closes when x_t is genuinely small
        let u2_int = ledger.row("u2-v2-integrated").unwrap().lhs;
        assert!(ledger.x_t < 0.5 * u2_int, "x_t {} vs {}", ledger.x_t, u2_int);
    }

    #[test]
    fn csv_is_stable_and_complete() {
        let ledger = toy_ledger(1.0 / 16.0);
        let csv = ledger.csv();
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), ledger.rows.len() + 1);
        assert_eq!(lines[0], "id,lhs,rhs,constant,slack");
        for (line, row) in lines[1..].iter().zip(&ledger.rows) {
            assert!(line.starts_with(row.id));
        }
    }
}
