//! Scaling audits of the perturbation ladder on the toy bundle:
//!
//! * the ladder reconstruction defect against the nonlinear solver decays
//!   at least quadratically when the data amplitude is scaled down, and is
//!   already small at full amplitude;
//! * the second rung's strength in the critical norm scales like the
//!   square of the horizon factor epsilon;
//! * amplified data outside the smallness regime makes the remainder
//!   iteration report non-contraction instead of returning garbage.

use besovlab::construction::{build_initial_data, DataPair};
use besovlab::cutoff::build_cutoffs;
use besovlab::error::Error;
use besovlab::norms::{besov_norm, Exponent};
use evolution::presets::toy_bundle;
use evolution::{build_ladder, solve_chemotaxis, SolverConfig, TimeGrid};

fn toy_data() -> DataPair {
    let b = toy_bundle();
    build_initial_data(&b.params, &b.spec, &b.grid).unwrap()
}

fn scaled(data: &DataPair, lambda: f64) -> DataPair {
    DataPair {
        u: data.u.scale(lambda),
        v: data.v.scale(lambda),
        norms: data.norms,
    }
}

fn toy_tgrid(epsilon: f64) -> TimeGrid {
    TimeGrid::experiment(epsilon, toy_bundle().params.shell_index, 8).unwrap()
}

#[test]
fn reconstruction_defect_decays_quadratically_in_the_amplitude() {
    let data = toy_data();
    let tgrid = toy_tgrid(1.0 / 16.0);
    let cfg = SolverConfig {
        // align the solver samples with the ladder samples
        store_stride: Some(tgrid.steps / (SolverConfig::default().ladder_samples - 1)),
        ..SolverConfig::default()
    };
    let mut defects = Vec::new();
    let mut relative_at_full = 0.0;
    for &lambda in &[1.0, 0.5, 0.25] {
        let d = scaled(&data, lambda);
        let ladder = build_ladder(&d, &tgrid, &cfg).unwrap();
        let trace = solve_chemotaxis(&d, &tgrid, &cfg).unwrap();
        let samples = ladder.reconstruction_defect(&trace).unwrap();
        let last = samples.last().unwrap();
        defects.push(last.u_absolute);
        if lambda == 1.0 {
            relative_at_full = last.u_relative;
        }
    }
    assert!(
        relative_at_full <= 1e-6,
        "full-amplitude relative defect {relative_at_full}"
    );
    for w in defects.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(
            order >= 1.8,
            "defect order {order} (defects {defects:?})"
        );
    }
}

#[test]
fn second_rung_strength_scales_like_epsilon_squared() {
    let b = toy_bundle();
    let data = toy_data();
    let cfg = SolverConfig::default();
    let profile = build_cutoffs(8);
    let p = Exponent::finite(2.0 * b.grid.dim as f64).unwrap();
    let r = Exponent::finite(b.params.besov_r).unwrap();
    let sweep = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0];
    let norms: Vec<f64> = sweep
        .iter()
        .map(|&eps| {
            let tgrid = toy_tgrid(eps);
            let ladder = build_ladder(&data, &tgrid, &cfg).unwrap();
            besov_norm(ladder.u22.last().unwrap(), -1.5, p, r, None, &profile).unwrap()
        })
        .collect();
    for w in norms.windows(2) {
        let slope = (w[0] / w[1]).log2();
        assert!(
            (slope - 2.0).abs() <= 0.2,
            "second-rung epsilon exponent {slope} (norms {norms:?})"
        );
    }
}

#[test]
fn amplified_data_reports_non_contraction() {
    let data = scaled(&toy_data(), 1.0e6);
    let tgrid = toy_tgrid(1.0 / 16.0);
    let result = build_ladder(&data, &tgrid, &SolverConfig::default());
    match result {
        Err(Error::NonContraction { residual, .. }) => {
            assert!(residual > SolverConfig::default().picard_tol);
        }
        other => panic!("expected non-contraction, got {other:?}"),
    }
}

#[test]
fn remainder_stays_an_order_below_the_closed_second_rung() {
    let data = toy_data();
    let tgrid = toy_tgrid(1.0 / 16.0);
    let ladder = build_ladder(&data, &tgrid, &SolverConfig::default()).unwrap();
    let last = ladder.times.len() - 1;
    let u21 = besovlab::norms::l2_norm(&ladder.u21[last]);
    let u3 = besovlab::norms::l2_norm(&ladder.u3[last]);
    assert!(u3 <= 0.1 * u21, "u3 {u3} vs u21 {u21}");
    // and the companion remainder is genuinely active
    let v3_mass: f64 = ladder.v3[last]
        .components
        .iter()
        .map(|c| besovlab::norms::l2_norm(c).powi(2))
        .sum();
    assert!(v3_mass > 0.0);
}
