//! Calibration probe: measures the constants and error floors that the
//! test suite freezes into its tolerance bands.
//!
//! Run with `cargo run --release -p besovlab --example calibrate`.
//! Sections:
//!   1. envelope tail landscape across transition orders,
//!   2. continuum oracle constants,
//!   3. default family: norms, support, projected-component ratios,
//!   4. two-scale probe pair: cross-term and remainder levels vs separation,
//!   5. two-scale window geometry in the reference regime,
//!   6. count-sweep data norms and the fitted decay exponent.

use besovlab::construction::atom::{AtomProfile, AtomSpec};
use besovlab::construction::family::build_initial_data;
use besovlab::construction::oracle;
use besovlab::construction::presets;
use besovlab::construction::window::{pair_window, verify_pair_windows};
use besovlab::construction::{build_f, product_split, support_report, FrequencyRegion};
use besovlab::cutoff::build_cutoffs;
use besovlab::norms::{
    ball_norm_spectral, besov_norm, block_profile, l2_norm, lebesgue_norm, Exponent, Region,
};

fn main() {
    tails();
    oracle_constants();
    default_family();
    probe_pair();
    lp_diagonal();
    window_geometry();
    count_sweep();
}

/// Lebesgue-scaling instrument on the broad-bandwidth pair probe:
/// diagonal-sum prediction quality per exponent, and the cross-term mass
/// ladder measured lattice-vs-lattice (pair minus singletons, so every
/// oracle systematic cancels and only mixed terms remain).
fn lp_diagonal() {
    println!("== Lp diagonal + cross ladder (broad pair probe, scales {{3,4}}) ==");
    let exponents = [2.0, 3.5, 4.0];
    // diagonal quality at maximal separation
    let b = presets::lp_probe_bundle(0);
    let f = build_f(&b.params, &b.spec, &b.grid).unwrap();
    for &p in &exponents {
        let measured = lebesgue_norm(&f, Exponent::Finite(p), &Region::Full).powf(p);
        let atom = oracle::atom_lp_pow(&b.spec, 2, p) * oracle::sine_power_average(p);
        let diag: f64 = b
            .params
            .scales
            .iter()
            .map(|&k| ((p / 2.0 - 2.0) * k as f64).exp2() * atom)
            .sum::<f64>()
            * b.params.count_factor.powf(p);
        println!(
            "p = {p}: measured^p {measured:.6e}  diagonal {diag:.6e}  ratio {:.6}",
            measured / diag
        );
    }
    // cross ladder: mixed quartic mass vs separation
    println!("halvings  cross mass       cross/diagonal   ratio to next");
    let mut masses = Vec::new();
    for h in 0..=3u32 {
        let b = presets::lp_probe_bundle(h);
        let pow4 = |scales: Vec<i32>, offsets: Vec<f64>| -> f64 {
            let mut params = b.params.clone();
            params.scales = scales;
            params.offsets = offsets;
            let f = build_f(&params, &b.spec, &b.grid).unwrap();
            lebesgue_norm(&f, Exponent::Finite(4.0), &Region::Full).powi(4)
        };
        let pair = pow4(b.params.scales.clone(), b.params.offsets.clone());
        let first = pow4(vec![b.params.scales[0]], vec![b.params.offsets[0]]);
        let second = pow4(vec![b.params.scales[1]], vec![b.params.offsets[1]]);
        let cross = pair - first - second;
        masses.push((h, cross.abs(), cross / (first + second)));
    }
    for i in 0..masses.len() {
        let next = if i + 1 < masses.len() {
            format!("{:.3}", masses[i + 1].1 / masses[i].1)
        } else {
            "-".to_string()
        };
        println!(
            "{:>8}  {:14.5e}  {:14.5e}  {next}",
            masses[i].0, masses[i].1, masses[i].2
        );
    }
    println!();
}

fn tails() {
    println!("== envelope tail ratios |theta(x)/theta(0)| ==");
    println!("   (x expressed as a = beta*x; beta = 1/24 here)");
    let orders = [1u32, 2, 3, 4, 6, 8, 10, 12];
    let args = [5.0, 8.0, 12.0, 16.0, 21.0, 25.0, 30.0, 40.0, 50.0];
    print!("{:>8}", "a");
    for o in orders {
        print!("  ord{o:>2}    ");
    }
    println!("  bump");
    for &a in &args {
        print!("{a:>8.1}");
        for o in orders {
            let spec = AtomSpec {
                beta: 1.0 / 24.0,
                plateau_fraction: 0.5,
                modulation_inner: 17.0 / 24.0,
                profile: AtomProfile::SmoothstepPoly { order: o },
            };
            print!("  {:9.2e}", oracle::theta_tail_ratio(&spec, 24.0 * a));
        }
        let bump = AtomSpec {
            beta: 1.0 / 24.0,
            plateau_fraction: 0.5,
            modulation_inner: 17.0 / 24.0,
            profile: AtomProfile::Bump,
        };
        println!("  {:9.2e}", oracle::theta_tail_ratio(&bump, 24.0 * a));
    }
    println!();
}

fn oracle_constants() {
    println!("== continuum oracle constants (beta = 1/24, order 8) ==");
    let s = presets::desk_spec();
    println!("theta(0)                 = {:.12e}", oracle::theta_pointwise(&s, 0.0));
    println!("int theta^2              = {:.12e}", oracle::int_theta_squared(&s));
    println!("atom L2 (d=2)            = {:.12e}", oracle::atom_l2(&s, 2));
    println!("atom L4^4 (d=2)          = {:.12e}", oracle::atom_lp_pow(&s, 2, 4.0));
    println!("|h| L4 ball (d=2)        = {:.12e}", oracle::kernel_ball_norm(&s, 2, 4.0));
    println!("sine avg p=2             = {:.12e}", oracle::sine_power_average(2.0));
    println!("sine avg p=4             = {:.12e}", oracle::sine_power_average(4.0));
    println!();
}

fn default_family() {
    println!("== default bundle (4096^2, box 48pi, m=5, scales {{3}}) ==");
    let b = presets::default_bundle();
    let f = build_f(&b.params, &b.spec, &b.grid).unwrap();
    let geom = b.params.shell_geometry(&b.spec);
    println!("geometry: [{:.6}, {:.6}] in plateau [{:.6}, {:.6}]",
        geom.min_freq, geom.max_corner, geom.plateau_lo, geom.plateau_hi);
    let annulus = FrequencyRegion::Annulus {
        lo: geom.min_freq * 0.999,
        hi: geom.max_corner * 1.001,
    };
    let rep = support_report(&f, &annulus);
    println!("support leakage          = {:.3e}", rep.leakage);
    println!("f L2                     = {:.12e}", l2_norm(&f));

    // lattice-vs-continuum single-atom L2: the carrier and the inner
    // modulation each average to 1/2, so |atom|_2 = 2^{-k/2}(int theta^2)/2
    // at scale 2^k in d = 2; the hump sampling factor converts that to the
    // lattice prediction, leaving only the torus-image overlap
    let cont = 2f64.powf(-1.5) * oracle::int_theta_squared(&b.spec) / 2.0;
    let pts = b.spec.beta * 8.0 / b.grid.delta_xi();
    let factor = oracle::hump_sampling_factor(&b.spec, pts);
    let lattice = l2_norm(&f);
    println!("hump sampling factor (8 pts) = {factor:.12}");
    println!(
        "periodization: lattice {lattice:.12e} vs corrected {:.12e} (rel {:.3e})",
        cont * factor,
        (lattice - cont * factor).abs() / (cont * factor)
    );

    let split = product_split(&b.params, &b.spec, &b.grid).unwrap();
    let profile = build_cutoffs(8);
    let sq_blocks = block_profile(&split.square, Exponent::Finite(2.0), (1, 5), &profile).unwrap();
    let osc_blocks = block_profile(&split.osc, Exponent::Finite(2.0), (1, 5), &profile).unwrap();
    let cross_blocks =
        block_profile(&split.cross, Exponent::Finite(2.0), (1, 5), &profile).unwrap();
    println!("shell   |sq block|      |osc block|     |cross block|");
    for i in 0..sq_blocks.len() {
        println!(
            "{:>5}   {:12.5e}   {:12.5e}   {:12.5e}",
            sq_blocks[i].0, sq_blocks[i].1, osc_blocks[i].1, cross_blocks[i].1
        );
    }

    // derivative block at the construction scale vs the continuum product
    let k1 = split.k1_block(3).unwrap();
    let center = [b.params.offsets[0], 0.0];
    let ball = ball_norm_spectral(&k1, 4.0, &center, 2f64.powi(-3), 48, 96, 1e-9);
    let oracle_val = 2f64.powf(1.5 * 3.0 - 1.0) * oracle::kernel_ball_norm(&b.spec, 2, 4.0);
    println!(
        "K1 ball norm (l=3)       = {ball:.10e} vs oracle {oracle_val:.10e} (rel {:.3e})",
        (ball - oracle_val).abs() / oracle_val
    );
    let c = presets::companion_scale_bundle();
    let split4 = product_split(&c.params, &c.spec, &c.grid).unwrap();
    let k1b = split4.k1_block(4).unwrap();
    let center4 = [c.params.offsets[0], 0.0];
    let ball4 = ball_norm_spectral(&k1b, 4.0, &center4, 2f64.powi(-4), 48, 96, 1e-9);
    println!(
        "K1 ratio l=3 -> l=4      = {:.8} vs 2^1.5 = {:.8}",
        ball4 / ball,
        2f64.powf(1.5)
    );
    println!();
}

fn probe_pair() {
    for wide in [false, true] {
        let tag = if wide { "wide beta=1/12" } else { "desk beta=1/24" };
        println!("== probe pair (scales {{3,4}}, {tag}), separation sweep ==");
        println!("halvings  |K1| ball        |K2| ball        |K2|/|K1|        max_l cross/sq");
        let profile = build_cutoffs(8);
        for h in 0..=3u32 {
            let b = if wide {
                presets::pair_probe_wide_bundle(h)
            } else {
                presets::pair_probe_bundle(h)
            };
            let split = product_split(&b.params, &b.spec, &b.grid).unwrap();
            let k1 = split.k1_block(3).unwrap();
            let k2 = split.k2_block(3).unwrap();
            let center = [b.params.offsets[0], 0.0];
            let r = 2f64.powi(-3);
            let n1 = ball_norm_spectral(&k1, 4.0, &center, r, 48, 96, 1e-9);
            let n2 = ball_norm_spectral(&k2, 4.0, &center, r, 48, 96, 1e-9);
            let mut worst: f64 = 0.0;
            for l in [3, 4] {
                let sq =
                    block_profile(&split.square, Exponent::Finite(2.0), (l, l), &profile).unwrap();
                let cr =
                    block_profile(&split.cross, Exponent::Finite(2.0), (l, l), &profile).unwrap();
                if sq[0].1 > 0.0 {
                    worst = worst.max(cr[0].1 / sq[0].1);
                }
            }
            println!("{h:>8}  {n1:14.5e}  {n2:14.5e}  {:14.5e}  {worst:14.5e}", n2 / n1);
        }
        println!();
    }
}

fn window_geometry() {
    println!("== two-scale window, reference regime (beta=1/200, gaps 8) ==");
    let w = presets::window_reference();
    for v in verify_pair_windows(&w.spec, w.dim, w.omega, &w.scales, &w.shells).unwrap() {
        let unit = (v.scale_hi as f64).exp2();
        println!(
            "pair ({:>2},{:>2}): window [{:.6}, {:.6}]/2^hi  inside={} shells_disjoint={} carrier={} leakage={:.1e}",
            v.scale_hi,
            v.scale_lo,
            v.window.lo / unit,
            v.window.hi / unit,
            v.inside_reference,
            v.shells_disjoint,
            v.carrier_clear,
            v.axis.leakage
        );
    }
    // margins at the minimal workable gap
    for beta in [1.0 / 200.0, 0.0095, 1.0 / 24.0] {
        let spec = AtomSpec {
            beta,
            plateau_fraction: 0.5,
            modulation_inner: 17.0 / 24.0,
            profile: AtomProfile::SmoothstepPoly { order: 8 },
        };
        let w6 = pair_window(&spec, 2, 6, 0);
        let unit = 64.0;
        println!(
            "gap 6, beta {beta:.5}: [{:.6}, {:.6}] vs [{:.6}, {:.6}] inside={}",
            w6.lo / unit,
            w6.hi / unit,
            33.0 / 48.0,
            35.0 / 48.0,
            w6.inside_reference()
        );
    }
    println!();
}

fn count_sweep() {
    println!("== count sweep (2048^2, box 24pi, m=5) ==");
    let profile = build_cutoffs(8);
    let mut points = Vec::new();
    for count in 1..=4usize {
        let b = presets::sweep_bundle(count);
        let data = build_initial_data(&b.params, &b.spec, &b.grid).unwrap();
        let f = build_f(&b.params, &b.spec, &b.grid).unwrap();
        let l4 = besov_norm(
            &f,
            0.0,
            Exponent::Finite(4.0),
            Exponent::Finite(1.0),
            Some((5, 5)),
            &profile,
        )
        .unwrap();
        println!(
            "count {count}: u norm {:.8e}  v norm {:.8e}  f shell-L4 {:.8e}",
            data.norms.u_norm, data.norms.v_norm, l4
        );
        points.push(((count as f64).ln(), data.norms.u_norm.ln()));
    }
    // least-squares slope through the three points
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    println!("fitted count exponent    = {slope:.6} (prediction -0.25)");
    println!();
}
