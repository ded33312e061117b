//! Bernstein quotients: `‖∂^α f‖_p / (b^α ‖f‖_p)` for functions with
//! Fourier support in the box `[-b_1, b_1] × … × [-b_d, b_d]`.
//!
//! At `p = 2` the quotient is at most 1 exactly: the derivative multiplies
//! each coefficient by `Π (i k_j/L)^{α_j}` with `|k_j|/L ≤ b_j`, and
//! Plancherel turns the pointwise multiplier bound into the norm bound.

use crate::error::{Error, Result};
use crate::function::BandLimitedFunction;
use crate::norms::Lp;

/// Returns `‖∂^α f‖_p / (b^α ‖f‖_p)` with `b` the componentwise support
/// envelope of `f`. Follows the convention that a vanishing derivative
/// yields quotient 0 even when the envelope degenerates.
pub fn bernstein_ratio(f: &BandLimitedFunction, alpha: &[u32], p: Lp) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("Bernstein quotient of the zero function".into()));
    }
    if alpha.len() != f.geometry().dim() {
        return Err(Error::InvalidArgument("multi-index dimension mismatch".into()));
    }
    let derivative = f.partial_derivative(alpha);
    let numerator = derivative.lp_norm(p, None);
    if numerator == 0.0 {
        return Ok(0.0);
    }
    let envelope = f.support_envelope();
    let mut b_alpha = 1.0;
    for (j, &a) in alpha.iter().enumerate() {
        b_alpha *= envelope[j].powi(a as i32);
    }
    let denominator = b_alpha * f.lp_norm(p, None);
    if denominator == 0.0 {
        return Err(Error::InvalidArgument("degenerate envelope with nonzero derivative".into()));
    }
    Ok(numerator / denominator)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::BandSpec;
    use crate::function::Ensemble;
    use crate::geometry::{FrequencyIndex, TorusGeometry};
    use num_complex::Complex64;

    #[test]
    fn single_mode_is_extremal() {
        let g = TorusGeometry::new(1, 1.0, 64).unwrap();
        let f = BandLimitedFunction::from_pairs(
            g,
            &[(FrequencyIndex::d1(3), Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let ratio = bernstein_ratio(&f, &[1], Lp::Finite(2.0)).unwrap();
        assert!((ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn l2_quotient_never_exceeds_one() {
        let g = TorusGeometry::new(1, 1.0, 128).unwrap();
        let band = BandSpec::symmetric_1d(5.0).unwrap();
        for seed in 0..50 {
            let f = BandLimitedFunction::random(&band, g, Ensemble::ComplexGaussian, seed).unwrap();
            for alpha in [[1u32], [2], [3]] {
                let ratio = bernstein_ratio(&f, &alpha, Lp::Finite(2.0)).unwrap();
                assert!(ratio <= 1.0 + 1e-9, "seed {seed} α {alpha:?}: {ratio}");
            }
        }
    }

    #[test]
    fn constant_function_has_zero_quotient() {
        let g = TorusGeometry::new(1, 1.0, 64).unwrap();
        let f = BandLimitedFunction::from_pairs(
            g,
            &[(FrequencyIndex::zero(), Complex64::new(2.0, 0.0))],
        )
        .unwrap();
        assert_eq!(bernstein_ratio(&f, &[1], Lp::Finite(2.0)).unwrap(), 0.0);
    }

    #[test]
    fn sup_norm_quotient_is_finite_and_can_reach_one() {
        let g = TorusGeometry::new(1, 1.0, 256).unwrap();
        let f = BandLimitedFunction::from_pairs(
            g,
            &[(FrequencyIndex::d1(2), Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let ratio = bernstein_ratio(&f, &[1], Lp::Infinity).unwrap();
        assert!((ratio - 1.0).abs() < 1e-9);
    }
}
