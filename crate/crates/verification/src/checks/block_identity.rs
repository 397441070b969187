//! Single-shell collapse of the constructed family: the target dyadic block
//! retains essentially all of the L2 mass, every other shell is empty, and
//! the Besov norm degenerates to `2^{m sigma} * ||f||_{L^p}`.

use besovlab::construction::presets::{broad_spec, default_bundle, Bundle};
use besovlab::cutoff::{build_cutoffs, DEFAULT_ORDER};
use besovlab::error::Result;
use besovlab::lp::project_block;
use besovlab::norms::{besov_norm, l2_norm, lebesgue_norm, Exponent, Region};

use crate::report::{CheckReport, Measurement};

/// Relative mass tolerance for the retained block and the empty shells.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

/// Besov parameters whose collapse to the single-shell formula is measured.
const COLLAPSE_CASES: [(f64, f64, f64); 3] = [(-1.5, 4.0, 1.0), (0.0, 2.0, 2.0), (0.5, 4.0, 1.5)];

/// Measure the single-shell identity for one family bundle.
pub fn check_block_identity(bundle: &Bundle) -> Result<CheckReport> {
    let profile = build_cutoffs(DEFAULT_ORDER);
    let f = bundle.build()?;
    let m = bundle.params.shell_index;
    let total = l2_norm(&f);
    let mut measured = Vec::new();

    let (lo, hi) = bundle.grid.resolvable_shells();
    for j in lo..=hi {
        let mass = l2_norm(&project_block(&f, j, &profile)?);
        if j == m {
            // slack is the retained fraction itself: passing means
            // retained >= 1 - tolerance
            measured.push(Measurement {
                parameters: format!("retained shell={j}"),
                lhs: mass,
                rhs: total,
                slack_ratio: mass / total,
            });
        } else {
            // slack 1 - leak: passing means the relative leak <= tolerance
            measured.push(Measurement {
                parameters: format!("leak shell={j}"),
                lhs: mass,
                rhs: total,
                slack_ratio: 1.0 - mass / total,
            });
        }
    }

    for (sigma, p, r) in COLLAPSE_CASES {
        let pe = Exponent::finite(p)?;
        let re = Exponent::finite(r)?;
        let besov = besov_norm(&f, sigma, pe, re, None, &profile)?;
        let collapsed = (m as f64 * sigma).exp2() * lebesgue_norm(&f, pe, &Region::Full);
        measured.push(Measurement::identity(
            format!("besov collapse sigma={sigma} p={p} r={r}"),
            besov,
            collapsed,
        ));
    }

    Ok(CheckReport::evaluate(
        "block-identity",
        IDENTITY_TOLERANCE,
        measured,
        vec![],
    ))
}

/// A deliberately broken family: the atom envelope is widened (beta = 1/6)
/// and placed at the same scale as the target shell, so its spectrum spans
/// [40, 50.67] while the shell-5 plateau is [42.67, 48]. The construction
/// still satisfies every build constraint (the spectrum stays inside the
/// shell-5 annulus), but mass leaks into the neighbouring blocks and the
/// identity check must fail.
pub fn broken_plateau_bundle() -> Bundle {
    let mut bundle = default_bundle();
    bundle.spec = broad_spec();
    bundle.params.scales = vec![5];
    bundle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use evolution::presets::probe_bundle;

    #[test]
    fn probe_family_collapses_to_its_shell() {
        let report = check_block_identity(&probe_bundle()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "\n{}", report.summary());
        let retained = report
            .measured
            .iter()
            .find(|m| m.parameters.starts_with("retained"))
            .unwrap();
        assert!(retained.slack_ratio >= 1.0 - 1e-10);
    }

    #[test]
    fn widened_envelope_at_the_shell_scale_fails_the_identity() {
        let mut bundle = probe_bundle();
        bundle.spec.beta = 1.0 / 6.0;
        *bundle.params.scales.last_mut().unwrap() = bundle.params.shell_index;
        bundle.params.validate(&bundle.spec, &bundle.grid).unwrap();
        let report = check_block_identity(&bundle).unwrap();
        assert_eq!(report.verdict, Verdict::Fail, "\n{}", report.summary());
    }
}
