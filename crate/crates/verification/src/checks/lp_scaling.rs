//! Lebesgue-norm scaling of the atom family: diagonal sum vs cross terms.
//!
//! With well-separated atoms, `|f|_p^p` is a sum of per-atom contributions
//! `2^{(p/2-d)k}` times closed-form atom constants — the diagonal rows
//! test that identity per exponent. The cross mass (pair quartic mass
//! minus the two singleton masses, so every systematic cancels) lives on
//! envelope-tail overlap only, and must fall by a fixed factor each time
//! the torus separation doubles. The separation ladder is calibrated up to
//! three halvings of the maximal offset; asking for more is an error, not
//! an extrapolation.

use besovlab::construction::oracle::{atom_lp_pow, sine_power_average};
use besovlab::construction::presets::{lp_probe_bundle, Bundle};
use besovlab::construction::ConstructionParams;
use besovlab::error::{Error, Result};
use besovlab::norms::{lebesgue_norm, Exponent, Region};

use crate::report::{CheckReport, Measurement};

/// Relative tolerance on the diagonal-sum identity.
pub const DIAGONAL_TOLERANCE: f64 = 0.05;
/// Minimal cross-mass decay per doubling of the atom separation.
pub const CROSS_DECAY_FACTOR: f64 = 10.0;
/// At maximal separation the cross mass must be below this fraction of
/// the diagonal quartic mass.
pub const CROSS_FRACTION_LIMIT: f64 = 0.01;
/// The envelope-tail ladder has been calibrated for at most this many
/// halvings of the maximal torus separation; beyond it the envelopes
/// collide and the decay law no longer applies.
pub const MAX_CALIBRATED_HALVINGS: u32 = 3;

pub struct LpScalingConfig {
    /// Exponents for the diagonal-sum identity rows.
    pub exponents: Vec<f64>,
    /// Number of separation halvings in the cross-mass ladder.
    pub halvings: u32,
}

impl Default for LpScalingConfig {
    fn default() -> Self {
        LpScalingConfig {
            exponents: vec![2.0, 3.5, 4.0],
            halvings: MAX_CALIBRATED_HALVINGS,
        }
    }
}

fn quartic_mass(bundle: &Bundle, scales: Vec<i32>, offsets: Vec<f64>) -> Result<f64> {
    let params = ConstructionParams {
        scales,
        offsets,
        ..bundle.params.clone()
    };
    let f = besovlab::construction::build_f(&params, &bundle.spec, &bundle.grid)?;
    Ok(lebesgue_norm(&f, Exponent::finite(4.0)?, &Region::Full).powi(4))
}

pub fn check_lp_scaling(cfg: &LpScalingConfig) -> Result<CheckReport> {
    if cfg.halvings > MAX_CALIBRATED_HALVINGS {
        return Err(Error::SeparationNotCalibrated(format!(
            "cross-mass ladder is calibrated for at most {MAX_CALIBRATED_HALVINGS} \
             separation halvings, got {}",
            cfg.halvings
        )));
    }

    let mut measured = Vec::new();

    // Diagonal-sum identity at maximal separation.
    let bundle = lp_probe_bundle(0);
    let f = bundle.build()?;
    let d = bundle.grid.dim as f64;
    for &p in &cfg.exponents {
        let lhs = lebesgue_norm(&f, Exponent::finite(p)?, &Region::Full).powf(p);
        let atom = atom_lp_pow(&bundle.spec, bundle.grid.dim, p) * sine_power_average(p);
        let diag: f64 = bundle
            .params
            .scales
            .iter()
            .map(|&k| ((p / 2.0 - d) * k as f64).exp2() * atom)
            .sum::<f64>()
            * bundle.params.count_factor.powf(p);
        measured.push(Measurement::identity(format!("diagonal p={p}"), lhs, diag));
    }

    // Cross-mass ladder: pair minus singletons over the separation schedule.
    let mut masses = Vec::new();
    let mut diagonal_mass = 0.0;
    for h in 0..=cfg.halvings {
        let b = lp_probe_bundle(h);
        let pair = quartic_mass(&b, b.params.scales.clone(), b.params.offsets.clone())?;
        let first = quartic_mass(&b, vec![b.params.scales[0]], vec![b.params.offsets[0]])?;
        let second = quartic_mass(&b, vec![b.params.scales[1]], vec![b.params.offsets[1]])?;
        masses.push((pair - first - second).abs());
        if h == 0 {
            diagonal_mass = first + second;
        }
    }
    measured.push(Measurement::bound(
        "cross fraction halvings=0",
        masses[0],
        CROSS_FRACTION_LIMIT * diagonal_mass,
    ));
    for h in 1..masses.len() {
        measured.push(Measurement::bound(
            format!("cross decay halvings={h}"),
            CROSS_DECAY_FACTOR * masses[h - 1],
            masses[h],
        ));
    }

    Ok(CheckReport::evaluate(
        "lp-scaling",
        DIAGONAL_TOLERANCE,
        measured,
        vec![],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn beyond_the_calibrated_ladder_is_an_error_not_an_extrapolation() {
        let err = check_lp_scaling(&LpScalingConfig {
            halvings: MAX_CALIBRATED_HALVINGS + 1,
            ..LpScalingConfig::default()
        })
        .unwrap_err();
        assert!(matches!(err, Error::SeparationNotCalibrated(_)));
    }

    #[test]
    fn diagonal_identity_holds_at_maximal_separation() {
        let report = check_lp_scaling(&LpScalingConfig {
            halvings: 0,
            ..LpScalingConfig::default()
        })
        .unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "\n{}", report.summary());
    }
}
