//! Frequency bands: unions of axis-parallel parallelepipeds sharing one
//! side-length vector.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::{FrequencyIndex, TorusGeometry, MAX_DIM};

/// A union of `n ≥ 1` axis-parallel boxes in frequency space. Box `l` is
/// centered at `centers[l]` and all boxes share the side-length vector
/// `side`, i.e. box `l` spans `[center_j − side_j/2, center_j + side_j/2]`
/// along axis `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandSpec {
    dim: usize,
    side: [f64; MAX_DIM],
    centers: Vec<[f64; MAX_DIM]>,
}

impl BandSpec {
    pub fn new(dim: usize, side: &[f64], centers: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Band(format!("dimension {dim} out of range")));
        }
        if side.len() != dim {
            return Err(Error::Band("side length vector has wrong dimension".into()));
        }
        if centers.is_empty() {
            return Err(Error::Band("band needs at least one box".into()));
        }
        let mut b = [0.0; MAX_DIM];
        for (j, &s) in side.iter().enumerate() {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::Band(format!("side length b_{j} must be positive, got {s}")));
            }
            b[j] = s;
        }
        let mut cs = Vec::with_capacity(centers.len());
        for c in &centers {
            if c.len() != dim {
                return Err(Error::Band("box center has wrong dimension".into()));
            }
            let mut arr = [0.0; MAX_DIM];
            arr[..dim].copy_from_slice(c);
            cs.push(arr);
        }
        Ok(Self { dim, side: b, centers: cs })
    }

    /// Single box of the given side lengths centered at the origin.
    pub fn centered(dim: usize, side: &[f64]) -> Result<Self> {
        Self::new(dim, side, vec![vec![0.0; dim]])
    }

    /// Single symmetric interval `[-half, half]` in one dimension.
    pub fn symmetric_1d(half: f64) -> Result<Self> {
        Self::centered(1, &[2.0 * half])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn box_count(&self) -> usize {
        self.centers.len()
    }

    pub fn side(&self) -> &[f64] {
        &self.side[..self.dim]
    }

    pub fn centers(&self) -> impl Iterator<Item = &[f64]> {
        self.centers.iter().map(move |c| &c[..self.dim])
    }

    pub fn center(&self, l: usize) -> &[f64] {
        &self.centers[l][..self.dim]
    }

    /// `Σ_j a_j b_j` against a window-size vector `a`.
    pub fn dot_with(&self, a: &[f64]) -> f64 {
        a.iter().zip(self.side()).map(|(x, y)| x * y).sum()
    }

    /// `|b|_1 = Σ_j b_j`.
    pub fn side_l1(&self) -> f64 {
        self.side().iter().sum()
    }

    /// All integer lattice points `k` with `k/L` inside some box, sorted.
    pub fn lattice_frequencies(&self, geometry: &TorusGeometry) -> BTreeSet<FrequencyIndex> {
        let scale = geometry.scale();
        let mut out = BTreeSet::new();
        for center in &self.centers {
            let mut ranges = [(0i64, -1i64); MAX_DIM];
            for j in 0..self.dim {
                let lo = scale * (center[j] - self.side[j] / 2.0);
                let hi = scale * (center[j] + self.side[j] / 2.0);
                ranges[j] = lattice_range(lo, hi);
            }
            collect_boxes(&ranges[..self.dim], &mut out);
        }
        out
    }

    /// Largest integer frequency component over the band lattice.
    pub fn max_abs_frequency(&self, geometry: &TorusGeometry) -> i64 {
        self.lattice_frequencies(geometry)
            .iter()
            .map(|k| k.max_abs_component())
            .max()
            .unwrap_or(0)
    }

    /// Same boxes translated by the lattice vector `shift/L`.
    pub fn translated(&self, shift: &FrequencyIndex, geometry: &TorusGeometry) -> Self {
        let scale = geometry.scale();
        let mut moved = self.clone();
        for c in &mut moved.centers {
            for j in 0..self.dim {
                c[j] += shift.component(j) as f64 / scale;
            }
        }
        moved
    }

    /// Checks the separation hypothesis: every pair of distinct box centers
    /// differs by more than `2 b_j` in every coordinate.
    pub fn is_well_separated(&self) -> bool {
        for l in 0..self.centers.len() {
            for k in 0..l {
                for j in 0..self.dim {
                    if (self.centers[l][j] - self.centers[k][j]).abs() <= 2.0 * self.side[j] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Integer range `[ceil(lo), floor(hi)]` with a tolerance guard so that
/// boundary frequencies (e.g. `b·L/2` integral) are kept deterministically.
fn lattice_range(lo: f64, hi: f64) -> (i64, i64) {
    let tol = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
    (((lo - tol).ceil()) as i64, ((hi + tol).floor()) as i64)
}

fn collect_boxes(ranges: &[(i64, i64)], out: &mut BTreeSet<FrequencyIndex>) {
    match ranges.len() {
        1 => {
            for k0 in ranges[0].0..=ranges[0].1 {
                out.insert(FrequencyIndex::d1(k0));
            }
        }
        2 => {
            for k0 in ranges[0].0..=ranges[0].1 {
                for k1 in ranges[1].0..=ranges[1].1 {
                    out.insert(FrequencyIndex::d2(k0, k1));
                }
            }
        }
        3 => {
            for k0 in ranges[0].0..=ranges[0].1 {
                for k1 in ranges[1].0..=ranges[1].1 {
                    for k2 in ranges[2].0..=ranges[2].1 {
                        out.insert(FrequencyIndex::d3(k0, k1, k2));
                    }
                }
            }
        }
        _ => unreachable!("dimension checked at construction"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_interval_lattice() {
        let g = TorusGeometry::new(1, 2.0, 64).unwrap();
        let band = BandSpec::centered(1, &[3.0]).unwrap();
        // k/2 in [-1.5, 1.5]  =>  k in {-3,...,3}
        let freqs = band.lattice_frequencies(&g);
        assert_eq!(freqs.len(), 7);
        assert!(freqs.contains(&FrequencyIndex::d1(-3)));
        assert!(freqs.contains(&FrequencyIndex::d1(3)));
        assert!(!freqs.contains(&FrequencyIndex::d1(4)));
    }

    #[test]
    fn union_of_boxes() {
        let g = TorusGeometry::new(1, 1.0, 64).unwrap();
        let band = BandSpec::new(1, &[1.0], vec![vec![0.0], vec![5.0]]).unwrap();
        let freqs = band.lattice_frequencies(&g);
        // [-0.5, 0.5] keeps {0}; [4.5, 5.5] keeps {5}
        assert_eq!(freqs.len(), 2);
        assert!(freqs.contains(&FrequencyIndex::d1(0)));
        assert!(freqs.contains(&FrequencyIndex::d1(5)));
    }

    #[test]
    fn translation_shifts_lattice() {
        let g = TorusGeometry::new(1, 1.0, 64).unwrap();
        let band = BandSpec::centered(1, &[2.0]).unwrap();
        let moved = band.translated(&FrequencyIndex::d1(7), &g);
        let freqs = moved.lattice_frequencies(&g);
        assert!(freqs.contains(&FrequencyIndex::d1(6)));
        assert!(freqs.contains(&FrequencyIndex::d1(8)));
        assert!(!freqs.contains(&FrequencyIndex::d1(0)));
    }

    #[test]
    fn separation_check() {
        let tight = BandSpec::new(1, &[1.0], vec![vec![0.0], vec![1.5]]).unwrap();
        assert!(!tight.is_well_separated());
        let wide = BandSpec::new(1, &[1.0], vec![vec![0.0], vec![2.5]]).unwrap();
        assert!(wide.is_well_separated());
    }
}
