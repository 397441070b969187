//! Report types shared by all checks: measurements with slack ratios,
//! log-log exponent fits with standard errors, and the pass/fail rule.

use serde::Serialize;

use besovlab::error::{Error, Result};

/// Outcome of a check or experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
        }
    }
}

/// One measured claim instance. The slack ratio is normalised so that
/// `slack_ratio >= 1` means the claim holds: for a one-sided bound
/// `lhs <= rhs` the slack is `rhs / lhs`; for an identity `measured == reference`
/// the slack is `1 - |measured/reference - 1|`.
#[derive(Clone, Debug, Serialize)]
pub struct Measurement {
    pub parameters: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack_ratio: f64,
}

impl Measurement {
    /// A one-sided bound `lhs <= rhs`. Degenerate cases: both sides zero
    /// hold with slack 1; a zero left side against a positive right side
    /// holds with infinite slack.
    pub fn bound(parameters: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let slack_ratio = if lhs == 0.0 && rhs == 0.0 {
            1.0
        } else if lhs == 0.0 {
            f64::INFINITY
        } else {
            rhs / lhs
        };
        Measurement {
            parameters: parameters.into(),
            lhs,
            rhs,
            slack_ratio,
        }
    }

    /// An identity `measured == reference` up to the report tolerance.
    /// Slack is `1 - |measured/reference - 1|`, so the pass rule
    /// `slack >= 1 - tolerance` reads `|ratio - 1| <= tolerance`.
    pub fn identity(parameters: impl Into<String>, measured: f64, reference: f64) -> Self {
        let slack_ratio = if reference == 0.0 && measured == 0.0 {
            1.0
        } else if reference == 0.0 {
            0.0
        } else {
            1.0 - (measured / reference - 1.0).abs()
        };
        Measurement {
            parameters: parameters.into(),
            lhs: measured,
            rhs: reference,
            slack_ratio,
        }
    }

    /// A boolean claim: slack 1 when it holds, 0 when it does not.
    pub fn claim(parameters: impl Into<String>, holds: bool) -> Self {
        Measurement {
            parameters: parameters.into(),
            lhs: if holds { 1.0 } else { 0.0 },
            rhs: 1.0,
            slack_ratio: if holds { 1.0 } else { 0.0 },
        }
    }
}

/// Least-squares slope of y against x with the standard error of the slope.
/// Needs at least three points so the residual variance is defined.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::ValidationError(vec![format!(
            "trend fit needs at least 3 matched points, got {} x and {} y",
            xs.len(),
            ys.len()
        )]));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::ValidationError(vec![
            "trend fit needs at least two distinct x values".into(),
        ]));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let variance = ss_res / (n - 2.0);
    let stderr = (variance / sxx).sqrt();
    Ok((slope, stderr))
}

/// A fitted exponent: log2-log2 least squares over the raw series, with the
/// target exponent and the tolerance band it must land in. A fit whose
/// standard error exceeds half the band is a failure even if the slope is
/// inside the band.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentFit {
    pub label: String,
    /// log2 of the raw abscissae.
    pub xs: Vec<f64>,
    /// log2 of the raw ordinates.
    pub ys: Vec<f64>,
    pub slope: f64,
    pub stderr: f64,
    pub target: f64,
    pub band: f64,
}

impl ExponentFit {
    /// Fit log2(ys_raw) against log2(xs_raw). All raw values must be
    /// strictly positive.
    pub fn fit(
        label: impl Into<String>,
        xs_raw: &[f64],
        ys_raw: &[f64],
        target: f64,
        band: f64,
    ) -> Result<Self> {
        let label = label.into();
        if xs_raw.iter().chain(ys_raw).any(|&v| !(v > 0.0)) {
            return Err(Error::ValidationError(vec![format!(
                "fit '{label}': log-log fit needs strictly positive values"
            )]));
        }
        let xs: Vec<f64> = xs_raw.iter().map(|v| v.log2()).collect();
        let ys: Vec<f64> = ys_raw.iter().map(|v| v.log2()).collect();
        let (slope, stderr) = least_squares_slope(&xs, &ys)?;
        Ok(ExponentFit {
            label,
            xs,
            ys,
            slope,
            stderr,
            target,
            band,
        })
    }

    pub fn passes(&self) -> bool {
        (self.slope - self.target).abs() <= self.band && self.stderr <= 0.5 * self.band
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub measured: Vec<Measurement>,
    pub fitted_exponents: Vec<ExponentFit>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl CheckReport {
    /// Assemble a report; the verdict is pass iff every slack ratio is at
    /// least `1 - tolerance` and every fitted exponent is inside its band
    /// with an acceptable standard error.
    pub fn evaluate(
        check_id: impl Into<String>,
        tolerance: f64,
        measured: Vec<Measurement>,
        fitted_exponents: Vec<ExponentFit>,
    ) -> Self {
        let slacks_ok = measured
            .iter()
            .all(|m| m.slack_ratio >= 1.0 - tolerance && !m.slack_ratio.is_nan());
        let fits_ok = fitted_exponents.iter().all(|f| f.passes());
        CheckReport {
            check_id: check_id.into(),
            measured,
            fitted_exponents,
            tolerance,
            verdict: if slacks_ok && fits_ok {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        }
    }

    /// Merge partial reports produced by concurrent jobs: measurements are
    /// re-ordered by their parameter strings so the merged report does not
    /// depend on completion order.
    pub fn merge(
        check_id: impl Into<String>,
        tolerance: f64,
        parts: Vec<CheckReport>,
    ) -> CheckReport {
        let mut measured = Vec::new();
        let mut fits = Vec::new();
        for part in parts {
            measured.extend(part.measured);
            fits.extend(part.fitted_exponents);
        }
        measured.sort_by(|a, b| a.parameters.cmp(&b.parameters));
        fits.sort_by(|a, b| a.label.cmp(&b.label));
        CheckReport::evaluate(check_id, tolerance, measured, fits)
    }

    pub fn worst_slack(&self) -> f64 {
        self.measured
            .iter()
            .map(|m| m.slack_ratio)
            .fold(f64::INFINITY, f64::min)
    }

    /// CSV of raw measurements, one row per measurement, stable order.
    pub fn csv(&self) -> String {
        let mut out = String::from("check_id,parameters,lhs,rhs,slack_ratio\n");
        for m in &self.measured {
            out.push_str(&format!(
                "{},{},{:.12e},{:.12e},{:.12e}\n",
                self.check_id, m.parameters, m.lhs, m.rhs, m.slack_ratio
            ));
        }
        out
    }

    /// Structured-text summary: verdict, worst slack, every recorded
    /// constant (measurements whose parameters start with "constant"), and
    /// every fitted exponent.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("check: {}\n", self.check_id));
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out.push_str(&format!("tolerance: {:.3e}\n", self.tolerance));
        let worst = self.worst_slack();
        let worst_params = self
            .measured
            .iter()
            .min_by(|a, b| a.slack_ratio.total_cmp(&b.slack_ratio))
            .map(|m| m.parameters.clone())
            .unwrap_or_default();
        out.push_str(&format!(
            "measurements: {} (worst slack {:.6e} at '{}')\n",
            self.measured.len(),
            worst,
            worst_params
        ));
        for m in self
            .measured
            .iter()
            .filter(|m| m.parameters.starts_with("constant"))
        {
            out.push_str(&format!(
                "{}: measured {:.6e} bound {:.6e} slack {:.6e}\n",
                m.parameters, m.lhs, m.rhs, m.slack_ratio
            ));
        }
        for f in &self.fitted_exponents {
            out.push_str(&format!(
                "fit {}: slope {:.6} stderr {:.6} target {:.6} band {:.6} [{}]\n",
                f.label,
                f.slope,
                f.stderr,
                f.target,
                f.band,
                if f.passes() { "ok" } else { "FAIL" }
            ));
        }
        out
    }

    /// Plot data: one (x, y) series per fitted trend, in log2 coordinates.
    pub fn plot_data(&self) -> String {
        let mut out = String::new();
        for f in &self.fitted_exponents {
            out.push_str(&format!("# series: {}\n", f.label));
            out.push_str("x,y\n");
            for (x, y) in f.xs.iter().zip(&f.ys) {
                out.push_str(&format!("{x:.12e},{y:.12e}\n"));
            }
        }
        out
    }
}
