//! Rough single-thread throughput probe for the nd FFT, used to size the
//! default verification families for a given machine.

use besovlab::{fft, GridSpec};
use num_complex::Complex64;
use std::time::Instant;

fn main() {
    for points in [256usize, 512, 1024, 2048] {
        let grid = GridSpec::new(2, points, 2.0 * std::f64::consts::PI).unwrap();
        let mut data: Vec<Complex64> = (0..grid.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), 0.0))
            .collect();
        // warm up plans
        fft::forward(&grid, &mut data);
        fft::inverse(&grid, &mut data);
        let reps = if points >= 2048 { 4 } else { 10 };
        let start = Instant::now();
        for _ in 0..reps {
            fft::forward(&grid, &mut data);
            fft::inverse(&grid, &mut data);
        }
        let per = start.elapsed().as_secs_f64() / (2 * reps) as f64;
        println!("{points}^2: {:.1} ms per transform", per * 1e3);
    }
}
