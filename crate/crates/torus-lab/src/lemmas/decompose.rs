//! Spectral decomposition over well-separated frequency boxes.
//!
//! When the band boxes are pairwise separated by more than `2b_j` in every
//! coordinate, the coefficient map splits box by box: `f = Σ_l f_l e^{i c_l·x}`
//! with each `c_l` a lattice point inside its box and each piece supported in
//! the centered box `[-b, b]`. The split is an exact coefficient partition,
//! so reconstruction is exact; by a multiplier argument each piece obeys
//! `‖f_l‖_p ≤ K^d ‖f‖_p` with `K = 6`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::band::BandSpec;
use crate::error::{Error, Result};
use crate::function::BandLimitedFunction;
use crate::geometry::{FrequencyIndex, TorusGeometry};

/// Norm amplification constant of the piecewise bound.
pub const PIECE_NORM_CONSTANT: f64 = 6.0;

/// One piece `f_l` of a decomposition, recentered at the origin, together
/// with the lattice shift that restores its position.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPiece {
    /// Integer lattice shift; the physical center is `shift/L`.
    pub shift: FrequencyIndex,
    /// Recentered piece with support in the `[-b, b]` box.
    pub part: BandLimitedFunction,
}

/// Splits `f` along the boxes of a well-separated band.
pub fn decompose_spectrum(f: &BandLimitedFunction, band: &BandSpec) -> Result<Vec<SpectralPiece>> {
    let geometry = f.geometry();
    if band.dim() != geometry.dim() {
        return Err(Error::Band("band and function dimensions differ".into()));
    }
    if !band.is_well_separated() {
        return Err(Error::Hypothesis(
            "boxes are not separated by more than 2b in every coordinate; \
             cover them with fewer, larger boxes first"
                .into(),
        ));
    }
    if !f.is_supported_in(band) {
        return Err(Error::Band("function support leaves the band".into()));
    }

    let d = geometry.dim();
    let scale = geometry.scale();
    let mut pieces = Vec::new();
    for l in 0..band.box_count() {
        let single = BandSpec::new(d, band.side(), vec![band.center(l).to_vec()])?;
        let lattice = single.lattice_frequencies(geometry);
        if lattice.is_empty() {
            continue;
        }
        // lattice point of the box nearest to its center
        let center = band.center(l);
        let shift = lattice
            .iter()
            .min_by(|a, b| {
                let da = lattice_center_distance(a, center, scale, d);
                let db = lattice_center_distance(b, center, scale, d);
                da.partial_cmp(&db).unwrap()
            })
            .cloned()
            .unwrap();

        let neg = shift.negated();
        let mut coeffs: BTreeMap<FrequencyIndex, Complex64> = BTreeMap::new();
        for (k, c) in f.coefficients() {
            if lattice.contains(k) {
                coeffs.insert(k.translated(&neg), *c);
            }
        }
        let part = BandLimitedFunction::new(*geometry, coeffs)?;
        pieces.push(SpectralPiece { shift, part });
    }
    Ok(pieces)
}

/// `Σ_l f_l e^{i c_l·x}` back from the pieces; exact coefficient union.
pub fn reconstruct(
    pieces: &[SpectralPiece],
    geometry: &TorusGeometry,
) -> Result<BandLimitedFunction> {
    let mut coeffs: BTreeMap<FrequencyIndex, Complex64> = BTreeMap::new();
    for piece in pieces {
        for (k, c) in piece.part.coefficients() {
            *coeffs.entry(k.translated(&piece.shift)).or_default() += c;
        }
    }
    BandLimitedFunction::new(*geometry, coeffs)
}

fn lattice_center_distance(k: &FrequencyIndex, center: &[f64], scale: f64, d: usize) -> f64 {
    (0..d)
        .map(|j| {
            let diff = k.component(j) as f64 / scale - center[j];
            diff * diff
        })
        .sum()
}

/// Normalized `L¹` norm of the multiplier kernel `Π_j (1 + 2 cos x_j)`
/// whose transform is the indicator of the integer box `[-1, 1]^d`,
/// computed by quadrature on `samples` points per axis. Must stay below
/// `6^d` for the piecewise norm bound.
pub fn box_multiplier_l1_norm(dim: usize, samples: usize) -> f64 {
    let mut one_dim = 0.0;
    for i in 0..samples {
        let x = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / samples as f64;
        one_dim += (1.0 + 2.0 * x.cos()).abs();
    }
    (one_dim / samples as f64).powi(dim as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Ensemble;
    use crate::norms::Lp;

    #[test]
    fn single_box_is_a_modulation() {
        let g = TorusGeometry::new(1, 1.0, 128).unwrap();
        let band = BandSpec::new(1, &[2.0], vec![vec![5.0]]).unwrap();
        let f = BandLimitedFunction::random(&band, g, Ensemble::UnitSphere, 2).unwrap();
        let pieces = decompose_spectrum(&f, &band).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].shift, FrequencyIndex::d1(5));
        // norm ratio 1 ≤ 6^d
        let ratio = pieces[0].part.lp_norm(Lp::Finite(2.0), None) / f.lp_norm(Lp::Finite(2.0), None);
        assert!((ratio - 1.0).abs() < 1e-9);
        let back = reconstruct(&pieces, &g).unwrap();
        assert_eq!(back.coefficients().len(), f.coefficients().len());
        for (k, c) in f.coefficients() {
            assert!((back.coefficient(k) - c).norm() < 1e-12);
        }
    }

    #[test]
    fn two_separated_modes_split_cleanly() {
        let g = TorusGeometry::new(1, 1.0, 256).unwrap();
        let band = BandSpec::new(1, &[1.0], vec![vec![0.0], vec![10.0]]).unwrap();
        assert!(band.is_well_separated());
        let f = BandLimitedFunction::from_pairs(
            g,
            &[
                (FrequencyIndex::d1(0), Complex64::new(1.0, 0.0)),
                (FrequencyIndex::d1(10), Complex64::new(0.0, 2.0)),
            ],
        )
        .unwrap();
        let pieces = decompose_spectrum(&f, &band).unwrap();
        assert_eq!(pieces.len(), 2);
        for piece in &pieces {
            assert_eq!(piece.part.support_len(), 1);
            // by Plancherel each single-mode piece has no more mass than f
            assert!(
                piece.part.lp_norm(Lp::Finite(2.0), None)
                    <= f.lp_norm(Lp::Finite(2.0), None) + 1e-12
            );
        }
    }

    #[test]
    fn insufficient_separation_is_rejected() {
        let g = TorusGeometry::new(1, 1.0, 128).unwrap();
        let band = BandSpec::new(1, &[2.0], vec![vec![0.0], vec![3.0]]).unwrap();
        let f = BandLimitedFunction::random(&band, g, Ensemble::UnitSphere, 1).unwrap();
        assert!(matches!(decompose_spectrum(&f, &band), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn multiplier_norm_is_well_below_the_constant() {
        // (1/2π)∫|1+2cos| = (2π/3 + 4√3)/(2π) ≈ 1.436
        let got = box_multiplier_l1_norm(1, 1 << 16);
        let exact = (2.0 * std::f64::consts::PI / 3.0 + 4.0 * 3.0f64.sqrt())
            / (2.0 * std::f64::consts::PI);
        assert!((got - exact).abs() < 1e-4, "got {got}, exact {exact}");
        assert!(got <= PIECE_NORM_CONSTANT);
        assert!(box_multiplier_l1_norm(3, 4096) <= PIECE_NORM_CONSTANT.powi(3));
    }

    #[test]
    fn reconstruction_and_norm_bounds_on_random_instances() {
        let g = TorusGeometry::new(1, 1.0, 512).unwrap();
        let band =
            BandSpec::new(1, &[2.0], vec![vec![-20.0], vec![0.0], vec![20.0]]).unwrap();
        for seed in 0..10 {
            let f = BandLimitedFunction::random(&band, g, Ensemble::UnitSphere, seed).unwrap();
            let pieces = decompose_spectrum(&f, &band).unwrap();
            let back = reconstruct(&pieces, &g).unwrap();
            let diff: f64 = f
                .coefficients()
                .iter()
                .map(|(k, c)| (back.coefficient(k) - c).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-12);
            for p in [Lp::Finite(1.0), Lp::Finite(2.0), Lp::Infinity] {
                let total = f.lp_norm(p, None);
                for piece in &pieces {
                    let part = piece.part.lp_norm(p, None);
                    assert!(part <= PIECE_NORM_CONSTANT * total + 1e-9);
                }
            }
        }
    }
}
