//! Leading vs competing derivative kernels of the squared data.
//!
//! On construction shell `l` the first derivative of the squared family
//! reduces to diagonal kernels: the scale-`l` atom contributes the leading
//! kernel (local L^{2d} ball mass `2^{3l/2-1}` times a closed-form profile
//! constant), every other scale contributes a competing remainder that
//! lives on envelope-tail overlap. The rows pin the closed form, the dyadic
//! growth of the leading kernel, and the smallness and separation decay of
//! the competing one. The desk bandwidth makes the competing kernel vanish
//! identically (the doubled-inner hump kisses the neighbour shell), so its
//! decay is measured on the doubled-bandwidth probe pair.

use besovlab::construction::oracle::kernel_ball_norm;
use besovlab::construction::presets::{
    companion_scale_bundle, default_bundle, pair_probe_wide_bundle, Bundle,
};
use besovlab::construction::split::{product_split, ProductSplit};
use besovlab::cutoff::{build_cutoffs, DEFAULT_ORDER};
use besovlab::error::Result;
use besovlab::lp::project_block;
use besovlab::multiplier::partial;
use besovlab::norms::ball_norm_spectral;

use crate::report::{CheckReport, Measurement};

/// Relative tolerance on the closed-form and ratio identities.
pub const KERNEL_TOLERANCE: f64 = 0.02;
/// Minimal competing-kernel decay per doubling of the atom separation.
pub const K2_DECAY_FACTOR: f64 = 4.0;
/// Maximal competing/leading ball-mass fraction.
pub const K2_FRACTION_LIMIT: f64 = 0.1;

const RADIAL_NODES: usize = 48;
const ANGULAR_NODES: usize = 96;
const COEFF_THRESHOLD: f64 = 1e-9;

/// L^{2d} mass of `field` on the ball of radius 2^{-scale} around the
/// scale-`scale` atom of `bundle`.
fn ball(bundle: &Bundle, field: &besovlab::Field, scale: i32) -> f64 {
    let which = bundle
        .params
        .scales
        .iter()
        .position(|&k| k == scale)
        .expect("scale present in bundle");
    let center = [bundle.params.offsets[which], 0.0];
    ball_norm_spectral(
        field,
        2.0 * bundle.grid.dim as f64,
        &center,
        (-scale as f64).exp2(),
        RADIAL_NODES,
        ANGULAR_NODES,
        COEFF_THRESHOLD,
    )
}

fn split(bundle: &Bundle) -> Result<ProductSplit> {
    product_split(&bundle.params, &bundle.spec, &bundle.grid)
}

pub fn check_k1_k2() -> Result<CheckReport> {
    let profile = build_cutoffs(DEFAULT_ORDER);
    let mut measured = Vec::new();

    // Leading kernel against the closed form, and against the dense
    // derivative of the square (validates the sparse bookkeeping).
    let b = default_bundle();
    let s = split(&b)?;
    let scale = b.params.scales[0];
    let k1 = ball(&b, &s.k1_block(scale)?, scale);
    let oracle = (1.5 * scale as f64 - 1.0).exp2()
        * kernel_ball_norm(&b.spec, b.grid.dim, 2.0 * b.grid.dim as f64);
    measured.push(Measurement::identity(
        format!("leading kernel closed form scale={scale}"),
        k1,
        oracle,
    ));
    let dense = partial(&project_block(&s.square, scale, &profile)?, 0);
    measured.push(Measurement::identity(
        format!("derivative block matches leading kernel scale={scale}"),
        ball(&b, &dense, scale),
        k1,
    ));
    measured.push(Measurement::bound(
        format!("competing kernel single scale={scale}"),
        ball(&b, &s.k2_block(scale)?, scale),
        K2_FRACTION_LIMIT * k1,
    ));

    // One dyadic step up: the leading kernel must grow by exactly 2^{3/2}.
    let c = companion_scale_bundle();
    let cs = split(&c)?;
    let up = c.params.scales[0];
    let k1_up = ball(&c, &cs.k1_block(up)?, up);
    measured.push(Measurement::identity(
        format!("leading kernel dyadic ratio scale={scale}->{up}"),
        k1_up,
        (1.5f64).exp2() * k1,
    ));

    // Competing kernel on the doubled-bandwidth pair: bounded fraction at
    // every separation, fixed decay per separation doubling.
    let mut competing = Vec::new();
    for h in 0..=3u32 {
        let p = pair_probe_wide_bundle(h);
        let ps = split(&p)?;
        let lo = p.params.scales[0];
        let lead = ball(&p, &ps.k1_block(lo)?, lo);
        let comp = ball(&p, &ps.k2_block(lo)?, lo);
        measured.push(Measurement::bound(
            format!("competing kernel fraction halvings={h}"),
            comp,
            K2_FRACTION_LIMIT * lead,
        ));
        competing.push(comp);
    }
    for h in 1..competing.len() {
        measured.push(Measurement::bound(
            format!("competing kernel decay halvings={h}"),
            K2_DECAY_FACTOR * competing[h - 1],
            competing[h],
        ));
    }

    Ok(CheckReport::evaluate(
        "derivative-kernels",
        KERNEL_TOLERANCE,
        measured,
        vec![],
    ))
}
