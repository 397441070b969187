//! Multi-scale modulated families: the superposition
//!
//!   f = count_factor · Σ_{k ∈ scales} 2^{k/2} a(2^k(x − offset_k e_1)) · sin(ω x_1)
//!
//! with ω = modulation_outer · 2^m, and the derived initial data
//! u = 2^{3m/2} f, v = 2^{m/2} f e_1. Everything is synthesized sparsely in
//! frequency space, so lattice realizations are exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::construction::atom::{
    accumulate_tensor, axis_spectrum, sine_carriers, unit_carrier, AtomSpec, Carrier,
};
use crate::cutoff::{build_cutoffs, DEFAULT_ORDER, PHI_PLATEAU_HI, PHI_PLATEAU_LO, PHI_SUPPORT_HI, PHI_SUPPORT_LO};
use crate::error::{Error, Result};
use crate::field::{Field, VectorField};
use crate::grid::GridSpec;
use crate::norms::{besov_norm, besov_norm_vector, Exponent};

/// Relative slack for exact-boundary frequency comparisons.
const GEOM_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstructionParams {
    /// Space dimension d >= 2.
    pub dim: usize,
    /// Besov summation index of the data space, 1 <= r < d.
    pub besov_r: f64,
    /// Target dyadic shell m of the data spectrum.
    pub shell_index: i32,
    /// Dyadic scales of the atoms (strictly increasing).
    pub scales: Vec<i32>,
    /// First-axis translation of each atom, same length as `scales`.
    pub offsets: Vec<f64>,
    /// Outer carrier frequency in units of 2^m.
    pub modulation_outer: f64,
    /// Overall amplitude, including any count-dependent normalisation.
    pub count_factor: f64,
}

impl ConstructionParams {
    /// Outer carrier frequency ω.
    pub fn omega(&self) -> f64 {
        self.modulation_outer * (self.shell_index as f64).exp2()
    }

    /// Lebesgue integrability of the data space, p = 2d.
    pub fn lebesgue_p(&self) -> f64 {
        2.0 * self.dim as f64
    }

    pub fn count(&self) -> usize {
        self.scales.len()
    }

    /// The same family viewed through the parabolic rescaling x -> x/2:
    /// shell index and scales shift up by one, offsets halve. Critical-space
    /// norms of the resulting data are invariant up to lattice effects.
    pub fn rescaled(&self) -> ConstructionParams {
        ConstructionParams {
            shell_index: self.shell_index + 1,
            scales: self.scales.iter().map(|k| k + 1).collect(),
            offsets: self.offsets.iter().map(|o| o / 2.0).collect(),
            ..self.clone()
        }
    }

    /// Minimum admissible wraparound distance between the offsets of two
    /// atoms: one envelope width of the coarser atom.
    pub fn min_separation(&self, spec: &AtomSpec, k_a: i32, k_b: i32) -> f64 {
        1.0 / (spec.beta * (k_a.min(k_b) as f64).exp2())
    }

    /// Exact frequency-support geometry of the family against shell m.
    pub fn shell_geometry(&self, spec: &AtomSpec) -> ShellGeometry {
        let omega = self.omega();
        let two = |k: i32| (k as f64).exp2();
        let mut min_freq = f64::INFINITY;
        let mut max_corner: f64 = 0.0;
        for &k in &self.scales {
            let radius = spec.beta * two(k);
            let lo = omega - radius;
            let mut corner_sq = (omega + radius).powi(2)
                + (spec.modulation_inner * two(k) + radius).powi(2);
            corner_sq += (self.dim as f64 - 2.0) * radius * radius;
            min_freq = min_freq.min(lo);
            max_corner = max_corner.max(corner_sq.sqrt());
        }
        let m = two(self.shell_index);
        ShellGeometry {
            min_freq,
            max_corner,
            support_lo: PHI_SUPPORT_LO * m,
            plateau_lo: PHI_PLATEAU_LO * m,
            plateau_hi: PHI_PLATEAU_HI * m,
            support_hi: PHI_SUPPORT_HI * m,
        }
    }

    /// Collect every violated construction constraint. Collision and
    /// resolvability problems are returned through their dedicated error
    /// variants by `validate`; everything else lands in the string list.
    fn constraint_problems(&self, spec: &AtomSpec, grid: &GridSpec) -> Vec<String> {
        let mut out = spec.problems();
        if self.dim != grid.dim {
            out.push(format!(
                "params.dim {} does not match grid dim {}",
                self.dim, grid.dim
            ));
        }
        if self.dim < 2 {
            out.push("params.dim must be >= 2".into());
        }
        if !(self.besov_r >= 1.0 && self.besov_r < self.dim as f64) {
            out.push(format!(
                "params.besov_r must satisfy 1 <= r < d, got r = {} at d = {}",
                self.besov_r, self.dim
            ));
        }
        if self.scales.is_empty() {
            out.push("params.scales must be nonempty".into());
        }
        if !self.scales.windows(2).all(|w| w[0] < w[1]) {
            out.push("params.scales must be strictly increasing".into());
        }
        if self.offsets.len() != self.scales.len() {
            out.push(format!(
                "params.offsets length {} != scales length {}",
                self.offsets.len(),
                self.scales.len()
            ));
        }
        for (i, &o) in self.offsets.iter().enumerate() {
            if !(0.0..grid.box_length).contains(&o) {
                out.push(format!(
                    "params.offsets[{i}] = {o} outside the box [0, {})",
                    grid.box_length
                ));
            }
        }
        if !(self.count_factor.is_finite() && self.count_factor > 0.0) {
            out.push(format!(
                "params.count_factor must be positive, got {}",
                self.count_factor
            ));
        }
        if !(self.modulation_outer > 0.0) {
            out.push(format!(
                "params.modulation_outer must be positive, got {}",
                self.modulation_outer
            ));
        }

        let dxi = grid.delta_xi();
        let on_lattice = |freq: f64| {
            let ratio = freq / dxi;
            (ratio - ratio.round()).abs() < 1e-9 * ratio.abs().max(1.0)
        };
        if !on_lattice(self.omega()) {
            out.push(format!(
                "outer carrier frequency {} is not a frequency-lattice point (spacing {dxi})",
                self.omega()
            ));
        }
        for &k in &self.scales {
            let mu_k = spec.modulation_inner * (k as f64).exp2();
            if !on_lattice(mu_k) {
                out.push(format!(
                    "inner carrier frequency {mu_k} at scale {k} is not a \
                     frequency-lattice point (spacing {dxi})"
                ));
            }
            // the widest single-axis excursion must stay below the last
            // representable mode
            let radius = spec.beta * (k as f64).exp2();
            let reach = (self.omega() + radius).max(mu_k + radius);
            if reach > grid.nyquist() - dxi * (1.0 - GEOM_SLACK) {
                out.push(format!(
                    "atom at scale {k} reaches frequency {reach:.4}, beyond the \
                     last representable mode {:.4}",
                    grid.nyquist() - dxi
                ));
            }
        }

        let geom = self.shell_geometry(spec);
        if !geom.within_annulus() {
            out.push(format!(
                "family spectrum [{:.4}, {:.4}] leaves the shell-{} annulus [{:.4}, {:.4}]",
                geom.min_freq, geom.max_corner, self.shell_index, geom.support_lo, geom.support_hi
            ));
        }
        out
    }

    /// Full validation: collision and resolvability checks first (dedicated
    /// error variants), then the named-constraint list.
    pub fn validate(&self, spec: &AtomSpec, grid: &GridSpec) -> Result<()> {
        for (i, (&ka, &oa)) in self.scales.iter().zip(&self.offsets).enumerate() {
            for (j, (&kb, &ob)) in self.scales.iter().zip(&self.offsets).enumerate() {
                if j <= i {
                    continue;
                }
                let raw = (oa - ob).abs() % grid.box_length;
                let distance = raw.min(grid.box_length - raw);
                let minimum = self.min_separation(spec, ka, kb);
                if distance < minimum * (1.0 - GEOM_SLACK) {
                    return Err(Error::OffsetCollision {
                        a: i,
                        b: j,
                        distance,
                        minimum,
                    });
                }
            }
        }
        for &k in &self.scales {
            spec.require_resolvable(grid.delta_xi(), k)?;
        }
        let problems = self.constraint_problems(spec, grid);
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::ConstraintViolation(problems.join("; ")))
        }
    }
}

/// Where the family spectrum sits relative to the dyadic shell m.
#[derive(Clone, Copy, Debug)]
pub struct ShellGeometry {
    /// Smallest |ξ| over the union of atom support boxes.
    pub min_freq: f64,
    /// Largest |ξ| (corner of the widest support box).
    pub max_corner: f64,
    /// Lower edge of the shell-m annulus, (3/4)·2^m.
    pub support_lo: f64,
    /// Lower edge of the φ ≡ 1 plateau, (4/3)·2^m.
    pub plateau_lo: f64,
    /// Upper edge of the φ ≡ 1 plateau, (3/2)·2^m.
    pub plateau_hi: f64,
    /// Upper edge of the shell-m annulus, (8/3)·2^m.
    pub support_hi: f64,
}

impl ShellGeometry {
    /// Spectrum inside the annulus where the shell-m projector is nonzero.
    pub fn within_annulus(&self) -> bool {
        self.min_freq >= self.support_lo * (1.0 - GEOM_SLACK)
            && self.max_corner <= self.support_hi * (1.0 + GEOM_SLACK)
    }

    /// Spectrum inside the plateau where the shell-m projector equals one
    /// (and every other projector vanishes): the single-shell-purity regime.
    pub fn strictly_contained(&self) -> bool {
        self.min_freq >= self.plateau_lo * (1.0 - GEOM_SLACK)
            && self.max_corner <= self.plateau_hi * (1.0 + GEOM_SLACK)
    }
}

/// Per-atom sparse axis spectra (used by both synthesis and the product
/// decomposition).
pub(crate) fn atom_axes(
    params: &ConstructionParams,
    spec: &AtomSpec,
    grid: &GridSpec,
    which: usize,
) -> Vec<Vec<(usize, Complex64)>> {
    let k = params.scales[which];
    let offset = params.offsets[which];
    let mut axes = Vec::with_capacity(grid.dim);
    for axis in 0..grid.dim {
        let (off, carriers): (f64, Vec<Carrier>) = if axis == 0 {
            (offset, sine_carriers(params.omega()).to_vec())
        } else if axis + 1 == grid.dim {
            (
                0.0,
                sine_carriers(spec.modulation_inner * (k as f64).exp2()).to_vec(),
            )
        } else {
            (0.0, unit_carrier().to_vec())
        };
        axes.push(axis_spectrum(
            grid.points,
            grid.box_length,
            spec,
            k,
            off,
            &carriers,
        ));
    }
    axes
}

/// Synthesize f on the grid (exact sparse spectral assembly).
pub fn build_f(params: &ConstructionParams, spec: &AtomSpec, grid: &GridSpec) -> Result<Field> {
    params.validate(spec, grid)?;
    let mut spectrum = vec![Complex64::default(); grid.len()];
    for which in 0..params.count() {
        let axes = atom_axes(params, spec, grid, which);
        let amp = params.count_factor * (params.scales[which] as f64 / 2.0).exp2();
        accumulate_tensor(grid, &axes, Complex64::new(amp, 0.0), &mut spectrum);
    }
    Field::from_spectral(*grid, spectrum)
}

/// Besov norms attached to a data pair at construction time.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DataNorms {
    /// Lebesgue index p = 2d of the data spaces.
    pub lebesgue_p: f64,
    /// Besov summation index r.
    pub besov_r: f64,
    /// Regularity of the u-space, d/p - 2 = -3/2.
    pub u_regularity: f64,
    /// Regularity of the v-space, d/p - 1 = -1/2.
    pub v_regularity: f64,
    pub u_norm: f64,
    pub v_norm: f64,
}

/// Initial data (u, v) derived from one family.
#[derive(Debug, Clone)]
pub struct DataPair {
    pub u: Field,
    pub v: VectorField,
    pub norms: DataNorms,
}

/// u = 2^{3m/2} f, v = 2^{m/2} f e_1, with critical-space norms attached.
pub fn build_initial_data(
    params: &ConstructionParams,
    spec: &AtomSpec,
    grid: &GridSpec,
) -> Result<DataPair> {
    let f = build_f(params, spec, grid)?;
    let m = params.shell_index as f64;
    let u = f.scale((1.5 * m).exp2());
    let mut comps = vec![f.scale((0.5 * m).exp2())];
    for _ in 1..grid.dim {
        comps.push(Field::zero(*grid));
    }
    let v = VectorField::new(comps);

    let profile = build_cutoffs(DEFAULT_ORDER);
    let p = Exponent::finite(params.lebesgue_p())?;
    let r = Exponent::finite(params.besov_r)?;
    let d = params.dim as f64;
    let u_regularity = d / params.lebesgue_p() - 2.0;
    let v_regularity = d / params.lebesgue_p() - 1.0;
    let u_norm = besov_norm(&u, u_regularity, p, r, None, &profile)?;
    let v_norm = besov_norm_vector(&v, v_regularity, p, r, None, &profile)?;
    Ok(DataPair {
        u,
        v,
        norms: DataNorms {
            lebesgue_p: params.lebesgue_p(),
            besov_r: params.besov_r,
            u_regularity,
            v_regularity,
            u_norm,
            v_norm,
        },
    })
}

/// A claimed frequency-support region.
#[derive(Clone, Debug)]
pub enum FrequencyRegion {
    /// lo <= |ξ| <= hi.
    Annulus { lo: f64, hi: f64 },
    /// The annulus where the shell-j projector is nonzero.
    Shell { j: i32 },
    /// lo <= |ξ_axis| <= hi.
    AxisBand { axis: usize, lo: f64, hi: f64 },
    Union(Vec<FrequencyRegion>),
}

impl FrequencyRegion {
    pub fn contains(&self, xi: &[f64]) -> bool {
        match self {
            FrequencyRegion::Annulus { lo, hi } => {
                let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
                (*lo..=*hi).contains(&r)
            }
            FrequencyRegion::Shell { j } => {
                let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
                let scale = (*j as f64).exp2();
                r >= PHI_SUPPORT_LO * scale && r <= PHI_SUPPORT_HI * scale
            }
            FrequencyRegion::AxisBand { axis, lo, hi } => {
                let r = xi[*axis].abs();
                (*lo..=*hi).contains(&r)
            }
            FrequencyRegion::Union(parts) => parts.iter().any(|p| p.contains(xi)),
        }
    }
}

/// Spectral-mass accounting of a claimed support region.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SupportReport {
    /// Squared-coefficient mass inside the claimed region.
    pub inside_mass: f64,
    pub total_mass: f64,
    /// (total - inside) / total; zero when the claim holds exactly.
    pub leakage: f64,
}

/// Measure how much spectral mass escapes a claimed frequency region.
pub fn support_report(field: &Field, claimed: &FrequencyRegion) -> SupportReport {
    let grid = field.grid();
    let spectrum = field.spectral();
    let mut xi = vec![0.0; grid.dim];
    let mut inside = 0.0;
    let mut total = 0.0;
    for (flat, c) in spectrum.iter().enumerate() {
        let mass = c.norm_sqr();
        if mass == 0.0 {
            continue;
        }
        total += mass;
        grid.frequency(flat, &mut xi);
        if claimed.contains(&xi) {
            inside += mass;
        }
    }
    let leakage = if total > 0.0 {
        (total - inside) / total
    } else {
        0.0
    };
    SupportReport {
        inside_mass: inside,
        total_mass: total,
        leakage,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::construction::atom::AtomProfile;
    use crate::norms::{l2_norm, lebesgue_norm, Region};

    /// Two-atom family on a 1024^2 grid with lattice spacing 1/12: scales
    /// {1, 2} in shell 4, exactly inside the shell annulus.
    pub(crate) fn small_params() -> (ConstructionParams, AtomSpec, GridSpec) {
        let grid = GridSpec::new(2, 1024, 24.0 * std::f64::consts::PI).unwrap();
        let params = ConstructionParams {
            dim: 2,
            besov_r: 1.0,
            shell_index: 4,
            scales: vec![1, 2],
            offsets: vec![6.0 * std::f64::consts::PI, 18.0 * std::f64::consts::PI],
            modulation_outer: 17.0 / 12.0,
            count_factor: 2.0f64.powf(-0.5),
        };
        let spec = AtomSpec {
            beta: 1.0 / 6.0,
            plateau_fraction: 0.5,
            modulation_inner: 17.0 / 24.0,
            profile: AtomProfile::SmoothstepPoly { order: 8 },
        };
        (params, spec, grid)
    }

    #[test]
    fn small_family_is_valid_and_annulus_contained() {
        let (params, spec, grid) = small_params();
        params.validate(&spec, &grid).unwrap();
        let geom = params.shell_geometry(&spec);
        assert!(geom.within_annulus());
        // corners: [22, 23.60] inside the plateau [21.33, 24]
        assert!(geom.strictly_contained());
        assert!((geom.min_freq - 22.0).abs() < 1e-12);
    }

    #[test]
    fn build_f_superposes_scaled_atoms() {
        let (params, spec, grid) = small_params();
        let f = build_f(&params, &spec, &grid).unwrap();
        // compare against the two single-atom families
        let mut single = Vec::new();
        for which in 0..2 {
            let p1 = ConstructionParams {
                scales: vec![params.scales[which]],
                offsets: vec![params.offsets[which]],
                ..params.clone()
            };
            single.push(build_f(&p1, &spec, &grid).unwrap());
        }
        let sum = single[0].add(&single[1]);
        let diff = f.sub(&sum);
        assert!(l2_norm(&diff) < 1e-12 * l2_norm(&f));
    }

    #[test]
    fn support_report_sees_exact_containment() {
        let (params, spec, grid) = small_params();
        let f = build_f(&params, &spec, &grid).unwrap();
        let geom = params.shell_geometry(&spec);
        let tight = FrequencyRegion::Annulus {
            lo: geom.min_freq * (1.0 - 1e-12),
            hi: geom.max_corner * (1.0 + 1e-12),
        };
        let report = support_report(&f, &tight);
        assert!(report.leakage <= 1e-15, "leakage {}", report.leakage);
        // shrink the annulus: leakage appears
        let broken = FrequencyRegion::Annulus {
            lo: geom.min_freq + 1.0,
            hi: geom.max_corner - 1.0,
        };
        assert!(support_report(&f, &broken).leakage > 1e-3);
    }

    #[test]
    fn initial_data_scales_f_and_attaches_norms() {
        let (params, spec, grid) = small_params();
        let f = build_f(&params, &spec, &grid).unwrap();
        let pair = build_initial_data(&params, &spec, &grid).unwrap();
        let m = params.shell_index as f64;
        // u = 2^{3m/2} f pointwise
        let expect_u = f.scale((1.5 * m).exp2());
        let du = pair.u.sub(&expect_u);
        assert!(du.max_abs() <= 1e-12 * expect_u.max_abs());
        // v_1 = 2^{m/2} f, v_2 = 0
        let expect_v = f.scale((0.5 * m).exp2());
        let dv = pair.v.components[0].sub(&expect_v);
        assert!(dv.max_abs() <= 1e-12 * expect_v.max_abs());
        assert!(pair.v.components[1].max_abs() == 0.0);
        // attached norms match recomputation
        let profile = build_cutoffs(DEFAULT_ORDER);
        let p = Exponent::finite(4.0).unwrap();
        let r = Exponent::finite(1.0).unwrap();
        let u_again = besov_norm(&pair.u, -1.5, p, r, None, &profile).unwrap();
        assert!((pair.norms.u_norm - u_again).abs() <= 1e-10 * u_again);
        assert!(pair.norms.u_norm > 0.0 && pair.norms.v_norm > 0.0);
    }

    #[test]
    fn validation_rejects_broken_families() {
        let (params, spec, grid) = small_params();
        // colliding offsets
        let mut collide = params.clone();
        collide.offsets = vec![6.0 * std::f64::consts::PI, 6.0 * std::f64::consts::PI + 0.5];
        assert!(matches!(
            collide.validate(&spec, &grid),
            Err(Error::OffsetCollision { .. })
        ));
        // unresolvable beta
        let narrow = AtomSpec {
            beta: 1.0 / 60.0,
            ..spec.clone()
        };
        assert!(matches!(
            params.validate(&narrow, &grid),
            Err(Error::BetaUnresolvable(_))
        ));
        // off-lattice inner carrier
        let off_lattice = AtomSpec {
            modulation_inner: 0.7,
            ..spec.clone()
        };
        assert!(matches!(
            params.validate(&off_lattice, &grid),
            Err(Error::ConstraintViolation(_))
        ));
        // shell annulus violated: push the carrier out of shell 4
        let mut wrong_shell = params.clone();
        wrong_shell.modulation_outer = 17.0 / 6.0;
        assert!(matches!(
            wrong_shell.validate(&spec, &grid),
            Err(Error::ConstraintViolation(_))
        ));
    }

    #[test]
    fn single_atom_l2_matches_continuum_oracle() {
        // modulation halves the squared mass; offsets do not change norms
        let (mut params, spec, grid) = small_params();
        params.scales = vec![2];
        params.offsets = vec![6.0 * std::f64::consts::PI];
        params.count_factor = 1.0;
        let f = build_f(&params, &spec, &grid).unwrap();
        let k = 2.0f64;
        // continuum value corrected by the per-axis hump sampling factor
        // (the hump spans 8 lattice points here; both axes carry one
        // factor in the squared norm, so the norm carries one);
        // the residual is the torus-image overlap at beta·2^k·box ≈ 50
        let points = spec.beta * k.exp2() / grid.delta_xi();
        let factor = crate::construction::oracle::hump_sampling_factor(&spec, points);
        let expect = (k / 2.0 - k * 2.0 / 2.0).exp2()
            * crate::construction::oracle::atom_l2(&spec, 2)
            / 2.0f64.sqrt()
            * factor;
        let got = lebesgue_norm(&f, Exponent::Finite(2.0), &Region::Full);
        assert!(
            (got - expect).abs() < 2e-6 * expect,
            "lattice {got} vs continuum {expect}"
        );
    }

    #[test]
    fn rescaled_family_has_invariant_critical_norm() {
        // parabolic rescaling: shell 3 -> 4 on a grid that resolves both
        let grid = GridSpec::new(2, 512, 12.0 * std::f64::consts::PI).unwrap();
        let spec = AtomSpec {
            beta: 1.0 / 3.0,
            plateau_fraction: 0.5,
            modulation_inner: 17.0 / 24.0,
            profile: AtomProfile::SmoothstepPoly { order: 8 },
        };
        let params = ConstructionParams {
            dim: 2,
            besov_r: 1.0,
            shell_index: 3,
            scales: vec![2],
            offsets: vec![6.0 * std::f64::consts::PI],
            modulation_outer: 17.0 / 12.0,
            count_factor: 1.0,
        };
        let coarse = build_initial_data(&params, &spec, &grid).unwrap();
        let fine = build_initial_data(&params.rescaled(), &spec, &grid).unwrap();
        let ratio = fine.norms.u_norm / coarse.norms.u_norm;
        assert!(
            (ratio - 1.0).abs() < 0.02,
            "critical norm ratio {ratio} deviates from scale invariance"
        );
        let ratio_v = fine.norms.v_norm / coarse.norms.v_norm;
        assert!((ratio_v - 1.0).abs() < 0.02, "v ratio {ratio_v}");
    }
}
