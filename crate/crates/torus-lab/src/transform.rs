//! Radix-2 FFT over the sampling grid.
//!
//! The grid samples at cell centers, so the synthesis of a mode `k` reads
//! `exp(2πi k (i + 1/2)/N) = exp(2πi k i/N) · exp(πi k/N)`: a plain DFT plus
//! a half-sample phase per frequency. Keeping the phase explicit makes the
//! forward transform the exact midpoint quadrature of the analysis integral.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::geometry::TorusGeometry;

/// In-place radix-2 Cooley-Tukey transform.
///
/// `sign = -1` gives the forward kernel `e^{-2πi jk/N}` (unnormalized),
/// `sign = +1` the inverse kernel. Length must be a power of two.
pub fn fft_in_place(data: &mut [Complex64], sign: f64) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n < 2 {
        return;
    }
    // bit-reversed addressing permutation
    let levels = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - levels);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut size = 2;
    while size <= n {
        let half = size / 2;
        let step = sign * 2.0 * PI / size as f64;
        for start in (0..n).step_by(size) {
            for offset in 0..half {
                let tw = Complex64::from_polar(1.0, step * offset as f64);
                let a = data[start + offset];
                let b = data[start + offset + half] * tw;
                data[start + offset] = a + b;
                data[start + offset + half] = a - b;
            }
        }
        size *= 2;
    }
}

/// Transforms every axis of a row-major `N^d` grid in place.
pub fn fft_nd_in_place(grid: &mut [Complex64], geometry: &TorusGeometry, sign: f64) {
    let n = geometry.samples_per_axis();
    let d = geometry.dim();
    debug_assert_eq!(grid.len(), geometry.grid_len());
    let mut lane = vec![Complex64::default(); n];
    for axis in 0..d {
        // stride of consecutive entries along `axis` in row-major order
        let stride = n.pow((d - 1 - axis) as u32);
        let lanes = grid.len() / n;
        for lane_idx in 0..lanes {
            // decompose lane_idx into the (d-1) fixed coordinates
            let block = lane_idx / stride;
            let offset = lane_idx % stride;
            let base = block * stride * n + offset;
            for (t, slot) in lane.iter_mut().enumerate() {
                *slot = grid[base + t * stride];
            }
            fft_in_place(&mut lane, sign);
            for (t, slot) in lane.iter().enumerate() {
                grid[base + t * stride] = *slot;
            }
        }
    }
}

/// Half-sample phase `Π_j exp(sign · πi k_j/N)` attached to cell-center grids.
pub fn half_sample_phase(k: &[i64], n: usize, sign: f64) -> Complex64 {
    let mut phase = 0.0;
    for &kj in k {
        phase += sign * PI * kj as f64 / n as f64;
    }
    Complex64::from_polar(1.0, phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(data: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = data.len();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        data[j]
                            * Complex64::from_polar(
                                1.0,
                                sign * 2.0 * PI * (j * k % n) as f64 / n as f64,
                            )
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let data: Vec<Complex64> = (0..32)
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.7).cos()))
            .collect();
        let expected = naive_dft(&data, -1.0);
        let mut got = data.clone();
        fft_in_place(&mut got, -1.0);
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn forward_inverse_roundtrip() {
        let data: Vec<Complex64> = (0..64)
            .map(|i| Complex64::new(i as f64, -(i as f64) * 0.3))
            .collect();
        let mut work = data.clone();
        fft_in_place(&mut work, -1.0);
        fft_in_place(&mut work, 1.0);
        for (a, b) in work.iter().zip(&data) {
            assert!((a / 64.0 - b).norm() < 1e-10);
        }
    }
}
