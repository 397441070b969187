//! Time discretization and solver configuration.

use besovlab::error::{Error, Result};
use besovlab::grid::GridSpec;
use besovlab::Field;
use serde::{Deserialize, Serialize};

/// Minimum number of time steps accepted for a solve.
pub const MIN_STEPS: usize = 8;

/// Explicit-part stability bound: dt * (max active |xi|)^2 must not exceed it.
pub const STEP_STABILITY_LIMIT: f64 = 0.5;

/// Uniform time grid on [0, t_final].
///
/// `epsilon` is stored explicitly because the experiment harness always
/// drives the final time as `t_final = epsilon * 2^(-2 m)` where `m` is the
/// shell index of the data family; keeping it attached lets downstream
/// reports scale their gates by the same epsilon that shaped the horizon.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_final: f64,
    pub steps: usize,
    pub epsilon: f64,
}

impl TimeGrid {
    pub fn new(t_final: f64, steps: usize, epsilon: f64) -> Result<Self> {
        let mut problems = Vec::new();
        if !(t_final > 0.0 && t_final.is_finite()) {
            problems.push(format!("time grid needs t_final > 0, got {t_final}"));
        }
        if steps < MIN_STEPS {
            problems.push(format!("time grid needs at least {MIN_STEPS} steps, got {steps}"));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            problems.push(format!("time grid needs epsilon > 0, got {epsilon}"));
        }
        if problems.is_empty() {
            Ok(TimeGrid { t_final, steps, epsilon })
        } else {
            Err(Error::ValidationError(problems))
        }
    }

    /// Experiment-driven horizon t_final = epsilon * 2^(-2 m) for the data
    /// family concentrated on shell m.
    pub fn experiment(epsilon: f64, shell_index: i32, steps: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::ValidationError(vec![format!(
                "experiment horizon needs epsilon > 0, got {epsilon}"
            )]));
        }
        let t_final = epsilon * (-2.0 * shell_index as f64).exp2();
        TimeGrid::new(t_final, steps, epsilon)
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.steps as f64
    }

    /// The steps + 1 step-boundary times, first exactly 0, last exactly t_final.
    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        let mut out: Vec<f64> = (0..=self.steps).map(|i| i as f64 * dt).collect();
        out[self.steps] = self.t_final;
        out
    }

    /// Enforce the explicit-part stability rule dt * kmax^2 <= limit.
    pub fn require_stable(&self, kmax: f64) -> Result<()> {
        let product = self.dt() * kmax * kmax;
        if product > STEP_STABILITY_LIMIT {
            return Err(Error::CflViolation { product, limit: STEP_STABILITY_LIMIT });
        }
        Ok(())
    }
}

/// Time integrators for the stiff heat part plus the divergence coupling.
/// The heat semigroup is always applied through its exact multiplier; the
/// schemes differ only in how the nonlinear stages are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Integrator {
    /// Integrating-factor midpoint rule (second order).
    IfRk2,
    /// Integrating-factor classical Runge-Kutta (fourth order). Default.
    IfRk4,
    /// Exponential time differencing, two-stage (second order).
    Etd2,
}

impl Integrator {
    /// Formal convergence order of the scheme.
    pub fn order(&self) -> f64 {
        match self {
            Integrator::IfRk2 | Integrator::Etd2 => 2.0,
            Integrator::IfRk4 => 4.0,
        }
    }
}

/// Knobs of the evolution layer. All defaults are fixed, deterministic
/// choices; nothing here adapts at run time.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Sharp spectral cutoff for products, as a fraction of the Nyquist
    /// frequency. Must sit strictly above the band of the active data.
    pub dealias_fraction: f64,
    pub integrator: Integrator,
    /// Gauss-Legendre node count for Duhamel integrals of sampled sources.
    pub quadrature_nodes: usize,
    /// Number of stored time samples per rung trace (>= 3, includes both
    /// endpoints). The solver's step count must be a multiple of
    /// `ladder_samples - 1` when traces are compared.
    pub ladder_samples: usize,
    /// Relative stopping tolerance of the fixed-point iteration for U3,
    /// measured in sup-over-samples of L2.
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    /// Amplitude guard: a solve aborts with BlowupDetected when max|u| or
    /// max|v| exceeds guard * (1 + initial amplitude).
    pub blowup_guard: f64,
    /// Keep every `store_stride`-th step in the solution trace (None picks
    /// the smallest stride that stores at most 17 samples).
    pub store_stride: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dealias_fraction: 2.0 / 3.0,
            integrator: Integrator::IfRk4,
            quadrature_nodes: 8,
            ladder_samples: 5,
            picard_tol: 1e-10,
            picard_max_iters: 25,
            blowup_guard: 1e8,
            store_stride: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            problems.push(format!(
                "dealias_fraction must lie in (0, 1], got {}",
                self.dealias_fraction
            ));
        }
        if self.quadrature_nodes == 0 {
            problems.push("quadrature_nodes must be positive".into());
        }
        if self.ladder_samples < 3 {
            problems.push(format!("ladder_samples must be at least 3, got {}", self.ladder_samples));
        }
        if !(self.picard_tol > 0.0) {
            problems.push(format!("picard_tol must be positive, got {}", self.picard_tol));
        }
        if self.picard_max_iters == 0 {
            problems.push("picard_max_iters must be positive".into());
        }
        if !(self.blowup_guard > 1.0) {
            problems.push(format!("blowup_guard must exceed 1, got {}", self.blowup_guard));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::ValidationError(problems))
        }
    }

    /// The sharp dealiasing radius on a given grid.
    pub fn dealias_cutoff(&self, grid: &GridSpec) -> f64 {
        self.dealias_fraction * grid.nyquist()
    }

    /// Largest frequency magnitude carrying spectral mass above a relative
    /// threshold — the active band of a field.
    pub fn active_band(field: &Field) -> f64 {
        let grid = field.grid();
        let spec = field.spectral();
        let max_c = spec.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if max_c == 0.0 {
            return 0.0;
        }
        let cut = 1e-13 * max_c;
        let mut band: f64 = 0.0;
        for (i, c) in spec.iter().enumerate() {
            if c.norm() > cut {
                band = band.max(grid.freq_norm_sq(i).sqrt());
            }
        }
        band
    }

    /// Check that the dealias cutoff clears the active band of the data.
    pub fn require_band_limited(&self, fields: &[&Field]) -> Result<()> {
        let mut band: f64 = 0.0;
        let mut grid: Option<GridSpec> = None;
        for f in fields {
            band = band.max(Self::active_band(f));
            grid = Some(*f.grid());
        }
        let grid = grid.ok_or(Error::EmptyTrace("band-limit check"))?;
        let cutoff = self.dealias_cutoff(&grid);
        if band >= cutoff {
            return Err(Error::ConstraintViolation(format!(
                "data band {band:.4} reaches the dealias cutoff {cutoff:.4} \
                 (fraction {} of nyquist {:.4})",
                self.dealias_fraction,
                grid.nyquist()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_horizon_scales_like_inverse_square_shell() {
        let tg = TimeGrid::experiment(1.0 / 16.0, 4, 8).unwrap();
        assert_eq!(tg.t_final, (1.0 / 16.0) * 2f64.powi(-8));
        assert_eq!(tg.epsilon, 1.0 / 16.0);
        let tg2 = TimeGrid::experiment(1.0 / 16.0, 5, 8).unwrap();
        assert!((tg.t_final / tg2.t_final - 4.0).abs() < 1e-14);
    }

    #[test]
    fn step_floor_is_enforced() {
        assert!(TimeGrid::new(1.0, 7, 0.5).is_err());
        assert!(TimeGrid::new(1.0, 8, 0.5).is_ok());
        assert!(TimeGrid::new(0.0, 8, 0.5).is_err());
        assert!(TimeGrid::new(1.0, 8, 0.0).is_err());
    }

    #[test]
    fn times_cover_the_horizon_exactly() {
        let tg = TimeGrid::new(0.3, 9, 1.0).unwrap();
        let times = tg.times();
        assert_eq!(times.len(), 10);
        assert_eq!(times[0], 0.0);
        assert_eq!(times[9], 0.3);
        assert!(times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn stability_rule_rejects_coarse_steps() {
        let tg = TimeGrid::new(1.0, 8, 1.0).unwrap();
        // dt = 1/8, kmax = 3 -> product 1.125 > 0.5
        assert!(matches!(tg.require_stable(3.0), Err(Error::CflViolation { .. })));
        assert!(tg.require_stable(1.0).is_ok());
    }

    #[test]
    fn config_default_is_valid_and_rejections_are_listed() {
        SolverConfig::default().validate().unwrap();
        let bad = SolverConfig { dealias_fraction: 0.0, ladder_samples: 1, ..Default::default() };
        match bad.validate() {
            Err(Error::ValidationError(list)) => assert_eq!(list.len(), 2),
            other => panic!("expected a two-problem validation error, got {other:?}"),
        }
    }

    #[test]
    fn active_band_of_a_plane_wave_is_its_frequency() {
        let grid = GridSpec::new(2, 32, std::f64::consts::TAU).unwrap();
        let mut vals = vec![0.0; grid.len()];
        let mut x = vec![0.0; 2];
        for (i, v) in vals.iter_mut().enumerate() {
            grid.coordinates(i, &mut x);
            *v = (3.0 * x[0]).sin();
        }
        let f = Field::from_physical(grid, vals);
        let band = SolverConfig::active_band(&f);
        assert!((band - 3.0).abs() < 1e-9, "band {band}");
        assert_eq!(SolverConfig::active_band(&Field::zero(grid)), 0.0);
    }
}
