//! Unitary multi-axis FFTs over row-major arrays.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

fn plan(len: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let planner = PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()));
    let mut guard = planner.lock().unwrap_or_else(|e| e.into_inner());
    match dir {
        Direction::Forward => guard.plan_fft_forward(len),
        Direction::Inverse => guard.plan_fft_inverse(len),
    }
}

/// Transforms `data` (row-major with the given `shape`) along each listed
/// axis with scaling `1/√n` per axis.
pub fn transform_axes(data: &mut [Complex64], shape: &[usize], axes: &[usize], dir: Direction) {
    debug_assert_eq!(data.len(), shape.iter().product::<usize>());
    for &axis in axes {
        let n = shape[axis];
        let fft = plan(n, dir);
        let stride: usize = shape[axis + 1..].iter().product();
        let scale = 1.0 / (n as f64).sqrt();
        if stride == 1 {
            fft.process(data);
            for z in data.iter_mut() {
                *z *= scale;
            }
            continue;
        }
        let block = n * stride;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for outer in 0..data.len() / block {
            let base = outer * block;
            for inner in 0..stride {
                for (i, z) in line.iter_mut().enumerate() {
                    *z = data[base + i * stride + inner];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i, z) in line.iter().enumerate() {
                    data[base + i * stride + inner] = *z * scale;
                }
            }
        }
    }
}

pub(crate) fn forward(data: &mut [Complex64], dim: usize, n: usize) {
    let shape = vec![n; dim];
    let axes: Vec<usize> = (0..dim).collect();
    transform_axes(data, &shape, &axes, Direction::Forward);
}

pub(crate) fn inverse(data: &mut [Complex64], dim: usize, n: usize) {
    let shape = vec![n; dim];
    let axes: Vec<usize> = (0..dim).collect();
    transform_axes(data, &shape, &axes, Direction::Inverse);
}
