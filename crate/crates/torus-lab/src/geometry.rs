//! Sampling geometry of the torus `[0, 2πL]^d` and its frequency lattice.
//!
//! Functions live on the torus of side `2πL`; their Fourier support lies on
//! the lattice `(1/L)Z^d`. The grid stores one sample per cell, taken at the
//! cell center `x_i = (i + 1/2) · 2πL/N`, so that Riemann sums are midpoint
//! quadrature. With `N ≥ 4·k_max + 4` samples per axis every product of two
//! active modes is alias-free and the quadrature of band-limited integrands
//! is exact up to rounding.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Hard cap on the spatial dimension; grids beyond d = 3 are not desk-scale.
pub const MAX_DIM: usize = 3;

/// Oversampling guard: samples per axis must be at least `4·k_max + 4`.
pub const OVERSAMPLING_FACTOR: i64 = 4;

/// Dimension, scale and sampling resolution of the torus `[0, 2πL]^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGeometry {
    dim: usize,
    scale: f64,
    samples: usize,
}

impl TorusGeometry {
    pub fn new(dim: usize, scale: f64, samples: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Geometry(format!(
                "dimension must be in 1..={MAX_DIM}, got {dim}"
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Geometry(format!("scale L must be positive, got {scale}")));
        }
        if samples < 4 || !samples.is_power_of_two() {
            return Err(Error::Geometry(format!(
                "samples per axis must be a power of two >= 4, got {samples}"
            )));
        }
        if (samples as u128).pow(dim as u32) > 1 << 24 {
            return Err(Error::Geometry(format!(
                "grid of {samples}^{dim} cells exceeds the 2^24 cell budget"
            )));
        }
        Ok(Self { dim, scale, samples })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The scale `L`; the torus is `[0, 2πL]^d`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn samples_per_axis(&self) -> usize {
        self.samples
    }

    /// Side length `2πL`.
    pub fn side(&self) -> f64 {
        2.0 * PI * self.scale
    }

    /// Total volume `(2πL)^d`.
    pub fn volume(&self) -> f64 {
        self.side().powi(self.dim as i32)
    }

    pub fn cell_width(&self) -> f64 {
        self.side() / self.samples as f64
    }

    /// Volume `(2πL/N)^d` of one grid cell, the quadrature weight.
    pub fn cell_volume(&self) -> f64 {
        self.cell_width().powi(self.dim as i32)
    }

    pub fn grid_len(&self) -> usize {
        self.samples.pow(self.dim as u32)
    }

    /// Row-major multi-index of a flat cell index.
    pub fn cell_coords(&self, index: usize) -> [usize; MAX_DIM] {
        let mut c = [0usize; MAX_DIM];
        let mut rest = index;
        for axis in (0..self.dim).rev() {
            c[axis] = rest % self.samples;
            rest /= self.samples;
        }
        c
    }

    pub fn cell_index(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dim);
        let mut idx = 0;
        for axis in 0..self.dim {
            debug_assert!(coords[axis] < self.samples);
            idx = idx * self.samples + coords[axis];
        }
        idx
    }

    /// Center of the cell with the given multi-index.
    pub fn cell_center(&self, coords: &[usize]) -> [f64; MAX_DIM] {
        let h = self.cell_width();
        let mut x = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            x[axis] = (coords[axis] as f64 + 0.5) * h;
        }
        x
    }

    pub fn cell_center_flat(&self, index: usize) -> [f64; MAX_DIM] {
        self.cell_center(&self.cell_coords(index)[..self.dim])
    }

    /// Largest integer frequency magnitude this grid can measure while
    /// honoring the oversampling invariant.
    pub fn max_representable_frequency(&self) -> i64 {
        (self.samples as i64 - OVERSAMPLING_FACTOR) / OVERSAMPLING_FACTOR
    }

    /// Checks `N ≥ 4·k_max + 4` for the given maximal frequency component.
    pub fn require_oversampled(&self, max_abs_k: i64) -> Result<()> {
        if OVERSAMPLING_FACTOR * (max_abs_k + 1) > self.samples as i64 {
            return Err(Error::Aliasing(format!(
                "frequency component {max_abs_k} needs at least {} samples per axis, grid has {}",
                OVERSAMPLING_FACTOR * (max_abs_k + 1),
                self.samples
            )));
        }
        Ok(())
    }

    /// Shortest distance between two points under torus wrap-around.
    pub fn torus_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let side = self.side();
        let mut sum = 0.0;
        for axis in 0..self.dim {
            let mut diff = (a[axis] - b[axis]).abs() % side;
            if diff > side / 2.0 {
                diff = side - diff;
            }
            sum += diff * diff;
        }
        sum.sqrt()
    }
}

/// A point of the integer frequency lattice; the physical frequency is
/// `k/L` componentwise. Components beyond the geometry dimension stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FrequencyIndex([i64; MAX_DIM]);

impl FrequencyIndex {
    pub fn zero() -> Self {
        Self([0; MAX_DIM])
    }

    pub fn from_components(components: &[i64]) -> Self {
        let mut k = [0i64; MAX_DIM];
        k[..components.len()].copy_from_slice(components);
        Self(k)
    }

    pub fn d1(k: i64) -> Self {
        Self([k, 0, 0])
    }

    pub fn d2(k1: i64, k2: i64) -> Self {
        Self([k1, k2, 0])
    }

    pub fn d3(k1: i64, k2: i64, k3: i64) -> Self {
        Self([k1, k2, k3])
    }

    pub fn component(&self, axis: usize) -> i64 {
        self.0[axis]
    }

    pub fn components(&self) -> &[i64; MAX_DIM] {
        &self.0
    }

    pub fn max_abs_component(&self) -> i64 {
        self.0.iter().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn translated(&self, shift: &FrequencyIndex) -> Self {
        let mut k = self.0;
        for (a, b) in k.iter_mut().zip(shift.0.iter()) {
            *a += b;
        }
        Self(k)
    }

    pub fn negated(&self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }

    /// Physical frequency `k_j / L` along one axis.
    pub fn physical(&self, axis: usize, geometry: &TorusGeometry) -> f64 {
        self.0[axis] as f64 / geometry.scale()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimensions() {
        assert!(TorusGeometry::new(0, 1.0, 64).is_err());
        assert!(TorusGeometry::new(4, 1.0, 64).is_err());
        assert!(TorusGeometry::new(2, -1.0, 64).is_err());
        assert!(TorusGeometry::new(2, 1.0, 48).is_err());
    }

    #[test]
    fn volume_and_cells() {
        let g = TorusGeometry::new(2, 1.0, 8).unwrap();
        assert!((g.volume() - (2.0 * PI).powi(2)).abs() < 1e-12);
        assert_eq!(g.grid_len(), 64);
        assert!((g.cell_volume() * 64.0 - g.volume()).abs() < 1e-9);
    }

    #[test]
    fn coords_roundtrip() {
        let g = TorusGeometry::new(3, 2.0, 8).unwrap();
        for idx in [0usize, 1, 63, 255, 511] {
            let c = g.cell_coords(idx);
            assert_eq!(g.cell_index(&c[..3]), idx);
        }
    }

    #[test]
    fn oversampling_guard() {
        let g = TorusGeometry::new(1, 1.0, 64).unwrap();
        assert!(g.require_oversampled(15).is_ok());
        assert!(g.require_oversampled(16).is_err());
        assert_eq!(g.max_representable_frequency(), 15);
    }

    #[test]
    fn torus_metric_wraps() {
        let g = TorusGeometry::new(1, 1.0, 64).unwrap();
        let side = g.side();
        assert!((g.torus_distance(&[0.1], &[side - 0.1]) - 0.2).abs() < 1e-12);
    }
}
