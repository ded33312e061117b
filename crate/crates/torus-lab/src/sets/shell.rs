//! Covering counts for momentum shells `{E-1 ≤ ‖p‖² ≤ E}`.
//!
//! Torus functions carry their Fourier support on a lattice, so covering a
//! momentum shell means covering its lattice points: each integer point of
//! the shell owns one half-open unit lattice cube, and the number of cubes
//! is compared against the volume-comparison bound
//! `C(d)·E^{d/2-1}` with `C(d) = ω_d · d · (1 + 2√d)`.

use crate::error::{Error, Result};
use crate::sets::unit_ball_volume;

#[derive(Debug, Clone, PartialEq)]
pub struct ShellCoverReport {
    /// Number of unit lattice cubes covering the shell's lattice points.
    pub n_cubes: u64,
    /// Volume-comparison bound `C(d)·E^{d/2-1}`.
    pub bound: f64,
    pub within_bound: bool,
}

/// Counts unit lattice cubes needed to cover the lattice points of the
/// shell `{p : E-1 ≤ ‖p‖² ≤ E}` and checks them against the bound.
pub fn shell_cover_count(energy: f64, dim: usize) -> Result<ShellCoverReport> {
    if dim == 0 || dim > 3 {
        return Err(Error::InvalidArgument(format!("dimension {dim} out of range")));
    }
    if !(energy > 1.0) {
        return Err(Error::InvalidArgument(format!("shell needs E > 1, got {energy}")));
    }
    let radius = energy.sqrt().ceil() as i64;
    let lo = energy - 1.0;
    let mut count = 0u64;
    match dim {
        1 => {
            for k in -radius..=radius {
                let n2 = (k * k) as f64;
                if n2 >= lo && n2 <= energy {
                    count += 1;
                }
            }
        }
        2 => {
            for k0 in -radius..=radius {
                for k1 in -radius..=radius {
                    let n2 = (k0 * k0 + k1 * k1) as f64;
                    if n2 >= lo && n2 <= energy {
                        count += 1;
                    }
                }
            }
        }
        3 => {
            for k0 in -radius..=radius {
                for k1 in -radius..=radius {
                    for k2 in -radius..=radius {
                        let n2 = (k0 * k0 + k1 * k1 + k2 * k2) as f64;
                        if n2 >= lo && n2 <= energy {
                            count += 1;
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }

    let c_d = unit_ball_volume(dim) * dim as f64 * (1.0 + 2.0 * (dim as f64).sqrt());
    let bound = c_d * energy.powf(dim as f64 / 2.0 - 1.0);
    Ok(ShellCoverReport { n_cubes: count, bound, within_bound: (count as f64) <= bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_shell() {
        // E = 4: lattice points with k² in [3, 4] are ±2
        let report = shell_cover_count(4.0, 1).unwrap();
        assert_eq!(report.n_cubes, 2);
        // bound: ω_1 · 1 · 3 · E^{-1/2} = 6/2 = 3
        assert!((report.bound - 3.0).abs() < 1e-12);
        assert!(report.within_bound);
    }

    #[test]
    fn two_dimensional_shell_at_100() {
        // ‖k‖² ∈ [99, 100]: 99 is not a sum of two squares, 100 has 12
        let report = shell_cover_count(100.0, 2).unwrap();
        assert_eq!(report.n_cubes, 12);
        assert!(report.within_bound);
    }

    #[test]
    fn growing_shells_in_three_dimensions() {
        let counts: Vec<u64> = [2.0, 10.0, 50.0]
            .iter()
            .map(|&e| shell_cover_count(e, 3).unwrap().n_cubes)
            .collect();
        assert!(counts[0] <= counts[1] && counts[1] <= counts[2], "{counts:?}");
    }

    #[test]
    fn rejects_small_energy() {
        assert!(shell_cover_count(1.0, 2).is_err());
    }
}
