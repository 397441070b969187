//! Gauss-Legendre quadrature rules.
//!
//! Nodes and weights on [-1, 1] are generated by Newton iteration on the
//! Legendre recurrence and cached per point count. Helpers integrate over
//! arbitrary intervals and over uniform panel subdivisions, which is how the
//! smooth one-dimensional profile integrals and the time-integral reference
//! values are evaluated throughout the crate.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// A quadrature rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Generate the n-point rule (exact for polynomials of degree 2n-1).
    fn generate(n: usize) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess for the i-th positive root
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // evaluate P_n and P_n' at x by upward recurrence
                let mut p0 = 1.0;
                let mut p1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Cached rule lookup.
    pub fn rule(n: usize) -> GaussLegendre {
        static CACHE: OnceLock<Mutex<HashMap<usize, GaussLegendre>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("quadrature cache poisoned");
        guard.entry(n).or_insert_with(|| Self::generate(n)).clone()
    }

    /// Integrate f over [a, b] with this rule.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Node/weight pairs mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (mid + half * x, w * half))
            .collect()
    }
}

/// Integrate f over [a, b] split into `panels` equal panels with an n-point
/// rule on each; robust for integrands with moderate local structure.
pub fn panel_integrate(
    a: f64,
    b: f64,
    panels: usize,
    points_per_panel: usize,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    let rule = GaussLegendre::rule(points_per_panel);
    let width = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        acc += rule.integrate(lo, lo + width, &mut f);
    }
    acc
}

/// Composite trapezoid weights for a uniformly sampled trace.
pub fn trapezoid(values: &[f64], dt: f64) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => 0.0,
        _ => {
            let interior: f64 = values[1..values.len() - 1].iter().sum();
            dt * (0.5 * (values[0] + values[values.len() - 1]) + interior)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // n-point rule is exact through degree 2n-1
        let rule = GaussLegendre::rule(5);
        for deg in 0..=9usize {
            let exact = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            let got = rule.integrate(-1.0, 1.0, |x| x.powi(deg as i32));
            assert!(
                (got - exact).abs() < 1e-14,
                "degree {deg}: {got} vs {exact}"
            );
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1usize, 2, 16, 64] {
            let rule = GaussLegendre::rule(n);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn smooth_integral_reference() {
        // int_0^pi sin = 2
        let got = GaussLegendre::rule(24).integrate(0.0, std::f64::consts::PI, f64::sin);
        assert!((got - 2.0).abs() < 1e-14);
        let panelled = panel_integrate(0.0, std::f64::consts::PI, 8, 8, f64::sin);
        assert!((panelled - 2.0).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_linear_exact() {
        let dt = 0.25;
        let vals: Vec<f64> = (0..5).map(|i| 3.0 * (i as f64) * dt + 1.0).collect();
        // integral of 3t+1 over [0,1] = 2.5
        assert!((trapezoid(&vals, dt) - 2.5).abs() < 1e-14);
    }
}
