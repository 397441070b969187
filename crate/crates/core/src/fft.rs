//! Multidimensional FFT built from cached 1-d rustfft plans.
//!
//! Transforms run axis by axis. The last axis is contiguous and is handled
//! in place; other axes are gathered into a scratch lane, transformed and
//! scattered back. Forward transforms carry the 1/points^dim normalisation
//! so that spectral coefficients are Fourier series coefficients:
//! f(x) = sum_k c_k exp(i xi_k . x).

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::grid::GridSpec;

struct PlanCache {
    planner: FftPlanner<f64>,
    plans: HashMap<(usize, bool), Arc<dyn Fft<f64>>>,
}

fn cache() -> &'static Mutex<PlanCache> {
    static CACHE: OnceLock<Mutex<PlanCache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(PlanCache {
            planner: FftPlanner::new(),
            plans: HashMap::new(),
        })
    })
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut guard = cache().lock().expect("fft plan cache poisoned");
    if let Some(p) = guard.plans.get(&(len, forward)) {
        return Arc::clone(p);
    }
    let dir = if forward {
        FftDirection::Forward
    } else {
        FftDirection::Inverse
    };
    let p = guard.planner.plan_fft(len, dir);
    guard.plans.insert((len, forward), Arc::clone(&p));
    p
}

fn transform_axis(grid: &GridSpec, data: &mut [Complex64], axis: usize, forward: bool) {
    let n = grid.points;
    let fft = plan(n, forward);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    if axis == grid.dim - 1 {
        for line in data.chunks_exact_mut(n) {
            fft.process_with_scratch(line, &mut scratch);
        }
        return;
    }

    // stride between consecutive entries of a lane along `axis`
    let stride = n.pow((grid.dim - 1 - axis) as u32);
    let block = stride * n; // span of one full set of lanes
    let mut lane = vec![Complex64::default(); n];
    let total = data.len();
    let mut base = 0;
    while base < total {
        for offset in 0..stride {
            let start = base + offset;
            for (j, slot) in lane.iter_mut().enumerate() {
                *slot = data[start + j * stride];
            }
            fft.process_with_scratch(&mut lane, &mut scratch);
            for (j, value) in lane.iter().enumerate() {
                data[start + j * stride] = *value;
            }
        }
        base += block;
    }
}

/// Physical samples -> Fourier series coefficients (in place).
pub fn forward(grid: &GridSpec, data: &mut [Complex64]) {
    debug_assert_eq!(data.len(), grid.len());
    for axis in 0..grid.dim {
        transform_axis(grid, data, axis, true);
    }
    let scale = 1.0 / grid.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Fourier series coefficients -> physical samples (in place).
pub fn inverse(grid: &GridSpec, data: &mut [Complex64]) {
    debug_assert_eq!(data.len(), grid.len());
    for axis in 0..grid.dim {
        transform_axis(grid, data, axis, false);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(dim: usize, points: usize) {
        let grid = GridSpec::new(dim, points, 2.0 * std::f64::consts::PI).unwrap();
        let mut data: Vec<Complex64> = (0..grid.len())
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), 0.0))
            .collect();
        let original = data.clone();
        forward(&grid, &mut data);
        inverse(&grid, &mut data);
        let worst = data
            .iter()
            .zip(&original)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-12, "roundtrip defect {worst}");
    }

    #[test]
    fn roundtrip_1d() {
        roundtrip(1, 64);
    }

    #[test]
    fn roundtrip_2d() {
        roundtrip(2, 32);
    }

    #[test]
    fn roundtrip_3d() {
        roundtrip(3, 16);
    }

    #[test]
    fn forward_of_plane_wave_is_unit_coefficient() {
        let grid = GridSpec::new(2, 16, 2.0 * std::f64::consts::PI).unwrap();
        // f(x, y) = exp(i * (3 x - 2 y))
        let mut data = vec![Complex64::default(); grid.len()];
        let mut xy = [0.0; 2];
        for (flat, v) in data.iter_mut().enumerate() {
            grid.coordinates(flat, &mut xy);
            *v = Complex64::new(0.0, 3.0 * xy[0] - 2.0 * xy[1]).exp();
        }
        forward(&grid, &mut data);
        let hit = grid.ravel(&[3, 16 - 2]);
        for (flat, v) in data.iter().enumerate() {
            let expect = if flat == hit { 1.0 } else { 0.0 };
            assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-12);
        }
    }
}
