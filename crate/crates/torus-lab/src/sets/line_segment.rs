//! Search for a line segment from a point to the boundary of a unit cube
//! along which a set has high one-dimensional density.
//!
//! Averaging over directions shows some ray from `y` must carry density at
//! least `|S ∩ Λ| / (σ_{d-1} d^{d/2})`; the search scans a deterministic set
//! of directions and reports the best sampled density together with the
//! discretization allowance.

use crate::error::{Error, Result};
use crate::geometry::MAX_DIM;
use crate::sets::{unit_sphere_area, GridSet};

/// Minimum number of directions per dimension.
pub const DIRECTIONS_PER_DIM: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct LineSegmentReport {
    /// Unit direction of the best segment.
    pub direction: Vec<f64>,
    /// Sampled density of the set along the best segment.
    pub ratio: f64,
    /// Length of the best segment (from `y` to the cube boundary).
    pub segment_length: f64,
    /// Averaging guarantee `|S ∩ Λ| / (σ_{d-1} d^{d/2})` at grid resolution.
    pub guarantee: f64,
    /// First-order allowance for direction mesh, ray sampling and cell size.
    pub slack: f64,
}

/// Scans `≥ 512·d` deterministic directions from `y`, sampling each segment
/// at `≥ 4N` points per unit length, and returns the densest one.
pub fn best_line_segment(set: &GridSet, y: &[f64], cube_corner: &[f64]) -> Result<LineSegmentReport> {
    let geometry = set.geometry();
    let d = geometry.dim();
    if y.len() != d || cube_corner.len() != d {
        return Err(Error::InvalidArgument("point/cube dimension mismatch".into()));
    }
    for j in 0..d {
        if y[j] < cube_corner[j] - 1e-12 || y[j] > cube_corner[j] + 1.0 + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "point coordinate {} = {} outside the unit cube starting at {}",
                j, y[j], cube_corner[j]
            )));
        }
    }

    let directions = direction_set(d);
    let n = geometry.samples_per_axis();
    let samples_per_unit = 4 * n;
    let h = geometry.cell_width();
    let side = geometry.side();

    let mut best_ratio = -1.0;
    let mut best_dir = vec![0.0; d];
    let mut best_len = 0.0;
    for dir in &directions {
        // longest segment from y inside the cube along dir
        let mut r_max = f64::INFINITY;
        for j in 0..d {
            let eta = dir[j];
            if eta > 1e-15 {
                r_max = r_max.min((cube_corner[j] + 1.0 - y[j]) / eta);
            } else if eta < -1e-15 {
                r_max = r_max.min((cube_corner[j] - y[j]) / eta);
            }
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            continue;
        }
        let m = ((samples_per_unit as f64 * r_max).ceil() as usize).max(16);
        let mut hits = 0usize;
        for s in 0..m {
            let t = (s as f64 + 0.5) * r_max / m as f64;
            let mut coords = [0usize; MAX_DIM];
            for j in 0..d {
                let x = (y[j] + t * dir[j]).rem_euclid(side);
                coords[j] = ((x / h).floor() as usize).min(n - 1);
            }
            if set.contains(geometry.cell_index(&coords[..d])) {
                hits += 1;
            }
        }
        let ratio = hits as f64 / m as f64;
        if ratio > best_ratio {
            best_ratio = ratio;
            best_dir.copy_from_slice(&dir[..d]);
            best_len = r_max;
        }
    }

    // |S ∩ Λ| at grid resolution
    let mut hit_cells = 0usize;
    for idx in 0..geometry.grid_len() {
        let c = geometry.cell_center_flat(idx);
        let inside = (0..d).all(|j| {
            let rel = (c[j] - cube_corner[j]).rem_euclid(side);
            rel < 1.0
        });
        if inside && set.contains(idx) {
            hit_cells += 1;
        }
    }
    let mass = hit_cells as f64 * geometry.cell_volume();
    let guarantee = mass / (unit_sphere_area(d) * (d as f64).powf(d as f64 / 2.0));

    let angular_mesh = match d {
        1 => 0.0,
        2 => 2.0 * std::f64::consts::PI / directions.len() as f64,
        _ => (2.0 * unit_sphere_area(3) / directions.len() as f64).sqrt(),
    };
    let slack = (d as f64).sqrt() * angular_mesh + 1.0 / samples_per_unit as f64 + h;

    Ok(LineSegmentReport {
        direction: best_dir,
        ratio: best_ratio.max(0.0),
        segment_length: best_len,
        guarantee,
        slack,
    })
}

/// Deterministic low-discrepancy direction sets: `{-1, +1}` in d=1, uniform
/// angles in d=2, a Fibonacci sphere in d=3.
fn direction_set(d: usize) -> Vec<[f64; MAX_DIM]> {
    match d {
        1 => vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
        2 => {
            let count = 2 * DIRECTIONS_PER_DIM;
            (0..count)
                .map(|t| {
                    let theta = 2.0 * std::f64::consts::PI * (t as f64 + 0.5) / count as f64;
                    [theta.cos(), theta.sin(), 0.0]
                })
                .collect()
        }
        3 => {
            let count = 3 * DIRECTIONS_PER_DIM;
            let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
            (0..count)
                .map(|t| {
                    let z = 1.0 - 2.0 * (t as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = 2.0 * std::f64::consts::PI * (t as f64) / golden;
                    [r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        _ => panic!("dimension out of range"),
    }
}
