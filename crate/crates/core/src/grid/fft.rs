//! Unnormalized 3D DFT on an `N³` cube stored row-major with z fastest.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

type Plan = Arc<dyn Fft<f64>>;

fn plan(n: usize, direction: FftDirection) -> Plan {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Plan>>> = OnceLock::new();
    let forward = matches!(direction, FftDirection::Forward);
    let mut cache = PLANS.get_or_init(Default::default).lock().unwrap();
    cache
        .entry((n, forward))
        .or_insert_with(|| FftPlanner::new().plan_fft(n, direction))
        .clone()
}

/// In-place 3D transform, `sum_j x_j exp(∓2πi j·k / N)` along every axis.
pub(crate) fn fft3(data: &mut [Complex64], n: usize, direction: FftDirection) {
    debug_assert_eq!(data.len(), n * n * n);
    let fft = plan(n, direction);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let n2 = n * n;

    // z: contiguous lines
    fft.process_with_scratch(data, &mut scratch);

    // y: per x-plane, transpose (y,z) -> (z,y), transform, transpose back
    let mut plane = vec![Complex64::new(0.0, 0.0); n2];
    for ix in 0..n {
        let slab = &mut data[ix * n2..(ix + 1) * n2];
        for iy in 0..n {
            for iz in 0..n {
                plane[iz * n + iy] = slab[iy * n + iz];
            }
        }
        fft.process_with_scratch(&mut plane, &mut scratch);
        for iz in 0..n {
            for iy in 0..n {
                slab[iy * n + iz] = plane[iz * n + iy];
            }
        }
    }

    // x: per y-plane, gather (x,z) -> (z,x), transform, scatter back
    for iy in 0..n {
        for ix in 0..n {
            let line = &data[ix * n2 + iy * n..ix * n2 + iy * n + n];
            for (iz, v) in line.iter().enumerate() {
                plane[iz * n + ix] = *v;
            }
        }
        fft.process_with_scratch(&mut plane, &mut scratch);
        for ix in 0..n {
            let line = &mut data[ix * n2 + iy * n..ix * n2 + iy * n + n];
            for (iz, v) in line.iter_mut().enumerate() {
                *v = plane[iz * n + ix];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_dft_on_small_cube() {
        let n = 4;
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut fast = data.clone();
        fft3(&mut fast, n, FftDirection::Forward);
        for k in 0..n * n * n {
            let (kx, ky, kz) = (k / (n * n), (k / n) % n, k % n);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n * n * n {
                let (jx, jy, jz) = (j / (n * n), (j / n) % n, j % n);
                let phase = -2.0 * std::f64::consts::PI * ((jx * kx + jy * ky + jz * kz) as f64)
                    / n as f64;
                acc += data[j] * Complex64::from_polar(1.0, phase);
            }
            assert!((acc - fast[k]).norm() < 1e-12);
        }
    }
}
