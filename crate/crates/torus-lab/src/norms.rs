//! `L^p` norms of grid samples by midpoint quadrature.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;
use crate::sets::GridSet;

/// An exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lp {
    Finite(f64),
    Infinity,
}

impl Lp {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(Lp::Infinity)
        } else if p >= 1.0 && p.is_finite() {
            Ok(Lp::Finite(p))
        } else {
            Err(Error::InvalidArgument(format!("p must lie in [1, ∞], got {p}")))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Lp::Infinity)
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> f64 {
        match self {
            Lp::Finite(p) => 1.0 / p,
            Lp::Infinity => 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Lp::Finite(p) => *p,
            Lp::Infinity => f64::INFINITY,
        }
    }
}

/// `(∫ |f|^p)^{1/p}` over the whole torus or a masked subset; `p = ∞` is the
/// (masked) grid maximum. An empty mask gives 0.
pub fn lp_norm(values: &[Complex64], geometry: &TorusGeometry, p: Lp, mask: Option<&GridSet>) -> f64 {
    debug_assert_eq!(values.len(), geometry.grid_len());
    if let Some(set) = mask {
        debug_assert_eq!(set.geometry().grid_len(), geometry.grid_len());
    }
    match p {
        Lp::Infinity => {
            let mut max = 0.0f64;
            for (idx, v) in values.iter().enumerate() {
                if mask.is_none_or(|s| s.contains(idx)) {
                    max = max.max(v.norm());
                }
            }
            max
        }
        Lp::Finite(p) => {
            let mut sum = 0.0f64;
            if (p - 2.0).abs() < 1e-15 {
                for (idx, v) in values.iter().enumerate() {
                    if mask.is_none_or(|s| s.contains(idx)) {
                        sum += v.norm_sqr();
                    }
                }
            } else {
                for (idx, v) in values.iter().enumerate() {
                    if mask.is_none_or(|s| s.contains(idx)) {
                        sum += v.norm().powf(p);
                    }
                }
            }
            (sum * geometry.cell_volume()).powf(1.0 / p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_bad_exponents() {
        assert!(Lp::new(0.5).is_err());
        assert!(Lp::new(f64::NAN).is_err());
        assert!(Lp::new(1.0).is_ok());
        assert!(Lp::new(f64::INFINITY).is_ok());
    }

    #[test]
    fn constant_function_l2() {
        let g = TorusGeometry::new(1, 1.0, 256).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); g.grid_len()];
        let norm = lp_norm(&ones, &g, Lp::Finite(2.0), None);
        assert!((norm - (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn masked_l1_of_constant_recovers_the_measure() {
        let g = TorusGeometry::new(1, 1.0, 256).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); g.grid_len()];
        let mask = crate::sets::GridSet::from_predicate(g, |x| x[0] < 2.5);
        let l1 = lp_norm(&ones, &g, Lp::Finite(1.0), Some(&mask));
        assert!((l1 - 2.5).abs() <= g.cell_volume());
        // empty mask gives zero, for any p
        let empty = crate::sets::GridSet::empty(g);
        assert_eq!(lp_norm(&ones, &g, Lp::Finite(1.0), Some(&empty)), 0.0);
        assert_eq!(lp_norm(&ones, &g, Lp::Infinity, Some(&empty)), 0.0);
    }

    #[test]
    fn sup_norm_of_cosine() {
        let g = TorusGeometry::new(1, 1.0, 1024).unwrap();
        let vals: Vec<Complex64> = (0..g.grid_len())
            .map(|i| Complex64::new(2.0 * g.cell_center_flat(i)[0].cos(), 0.0))
            .collect();
        let sup = lp_norm(&vals, &g, Lp::Infinity, None);
        assert!((sup - 2.0).abs() < 1e-4);
    }
}
