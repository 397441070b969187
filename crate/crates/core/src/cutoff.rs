//! Radial Littlewood-Paley cutoffs built from a polynomial smoothstep.
//!
//! chi is radial, identically 1 for rho <= 3/4 and 0 for rho >= 4/3; the
//! transition is the integrated-bump polynomial S_n, so chi is C^n and every
//! evaluation is exact, reproducible arithmetic. The annulus function
//! phi(rho) = chi(rho/2) - chi(rho) is supported in [3/4, 8/3] and equals 1
//! on [4/3, 3/2], and the family phi(2^-j rho) telescopes to a partition of
//! unity between the first and last resolved annulus.

use crate::quadrature::GaussLegendre;

/// chi == 1 on [0, CHI_INNER].
pub const CHI_INNER: f64 = 0.75;
/// chi == 0 on [CHI_OUTER, inf).
pub const CHI_OUTER: f64 = 4.0 / 3.0;
/// phi == 1 on [PHI_PLATEAU_LO, PHI_PLATEAU_HI].
pub const PHI_PLATEAU_LO: f64 = 4.0 / 3.0;
pub const PHI_PLATEAU_HI: f64 = 1.5;
/// supp phi = [PHI_SUPPORT_LO, PHI_SUPPORT_HI].
pub const PHI_SUPPORT_LO: f64 = 0.75;
pub const PHI_SUPPORT_HI: f64 = 8.0 / 3.0;

/// Smoothness order used when none is requested.
pub const DEFAULT_ORDER: u32 = 4;

/// Monotone C^n step from 0 at t=0 to 1 at t=1 with n vanishing
/// derivatives at both ends: the normalised integral of t^n (1-t)^n.
///
/// Evaluated by Gauss-Legendre quadrature of the defining integral. The
/// integrand is a positive polynomial of degree 2n, so an (n+1)-point rule
/// is exact and the sum is cancellation-free; expanding into the monomial
/// basis would lose ~8 digits by order 10.
#[derive(Clone, Debug)]
pub struct Smoothstep {
    order: u32,
    rule: GaussLegendre,
    /// Exact normaliser 1/B(n+1, n+1) = (2n+1) * binomial(2n, n).
    inv_beta: f64,
}

impl Smoothstep {
    pub fn new(order: u32) -> Self {
        assert!(order >= 1 && order <= 24, "step order out of range");
        let n = order as u64;
        let mut binom = 1.0f64; // binomial(2n, n), exact in f64 for n <= 24
        for j in 1..=n {
            binom *= (n + j) as f64 / j as f64;
        }
        Smoothstep {
            order,
            rule: GaussLegendre::rule(order as usize + 1),
            inv_beta: (2 * n + 1) as f64 * binom.round(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn bump_integral(&self, t: f64) -> f64 {
        let n = self.order as i32;
        self.rule.integrate(0.0, t, |u| (u * (1.0 - u)).powi(n))
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else if t <= 0.5 {
            self.bump_integral(t) * self.inv_beta
        } else {
            // symmetry of the bump about 1/2
            1.0 - self.bump_integral(1.0 - t) * self.inv_beta
        }
    }
}

/// The pair (chi, phi) at a fixed smoothness order.
#[derive(Clone, Debug)]
pub struct CutoffProfile {
    step: Smoothstep,
}

impl CutoffProfile {
    pub fn new(order: u32) -> Self {
        CutoffProfile {
            step: Smoothstep::new(order),
        }
    }

    pub fn order(&self) -> u32 {
        self.step.order()
    }

    /// Radial low-pass profile.
    pub fn chi(&self, rho: f64) -> f64 {
        let rho = rho.abs();
        if rho <= CHI_INNER {
            1.0
        } else if rho >= CHI_OUTER {
            0.0
        } else {
            1.0 - self
                .step
                .eval((rho - CHI_INNER) / (CHI_OUTER - CHI_INNER))
        }
    }

    /// Annulus profile phi(rho) = chi(rho/2) - chi(rho).
    pub fn phi(&self, rho: f64) -> f64 {
        self.chi(0.5 * rho) - self.chi(rho)
    }

    /// phi evaluated at shell j: phi(2^-j rho).
    pub fn phi_shell(&self, rho: f64, j: i32) -> f64 {
        self.phi(rho * (-j as f64).exp2())
    }

    /// chi evaluated at shell j: chi(2^-j rho).
    pub fn chi_shell(&self, rho: f64, j: i32) -> f64 {
        self.chi(rho * (-j as f64).exp2())
    }
}

/// Construct the standard dyadic cutoff pair at a given smoothness order.
pub fn build_cutoffs(order: u32) -> CutoffProfile {
    CutoffProfile::new(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothstep_endpoints_and_monotone() {
        for order in [1u32, 2, 4, 8, 10] {
            let s = Smoothstep::new(order);
            assert_eq!(s.eval(0.0), 0.0);
            assert_eq!(s.eval(1.0), 1.0);
            assert!((s.eval(0.5) - 0.5).abs() < 1e-12, "odd symmetry midpoint");
            let mut last = 0.0;
            for i in 0..=100 {
                let v = s.eval(i as f64 / 100.0);
                assert!(v + 1e-15 >= last);
                last = v;
            }
        }
    }

    #[test]
    fn chi_plateau_and_support_are_exact() {
        let c = build_cutoffs(DEFAULT_ORDER);
        assert_eq!(c.chi(0.0), 1.0);
        assert_eq!(c.chi(CHI_INNER), 1.0);
        assert_eq!(c.chi(CHI_OUTER), 0.0);
        assert_eq!(c.chi(10.0), 0.0);
        assert!(c.chi(1.0) > 0.0 && c.chi(1.0) < 1.0);
    }

    #[test]
    fn phi_plateau_and_support_are_exact() {
        let c = build_cutoffs(DEFAULT_ORDER);
        for rho in [PHI_PLATEAU_LO, 1.4, 17.0 / 12.0, PHI_PLATEAU_HI] {
            assert_eq!(c.phi(rho), 1.0, "phi must be 1 at rho = {rho}");
        }
        assert_eq!(c.phi(PHI_SUPPORT_LO), 0.0);
        assert_eq!(c.phi(PHI_SUPPORT_HI), 0.0);
        assert_eq!(c.phi(0.5), 0.0);
        assert_eq!(c.phi(3.0), 0.0);
        assert!(c.phi(1.0) > 0.0);
        assert!(c.phi(2.0) > 0.0);
    }

    #[test]
    fn dyadic_family_telescopes_to_one() {
        let c = build_cutoffs(DEFAULT_ORDER);
        let (a, b) = (-8, 8);
        // unity zone of the truncated partition
        let lo = PHI_PLATEAU_LO * (a as f64).exp2();
        let hi = PHI_SUPPORT_LO * ((b + 1) as f64).exp2();
        let mut rho = lo;
        while rho <= hi {
            let sum: f64 = (a..=b).map(|j| c.phi_shell(rho, j)).sum();
            assert!(
                (sum - 1.0).abs() < 1e-13,
                "partition defect {} at rho {}",
                (sum - 1.0).abs(),
                rho
            );
            rho *= 1.37;
        }
    }
}
