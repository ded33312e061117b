//! Remez-type bound for analytic functions: the sup over a unit interval is
//! controlled by the sup over any positive-measure subset, with the doubling
//! exponent `2·log M / log 2` taken from the growth of the function on a
//! surrounding disc.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lemmas::expsum::{sup_sampled, ExponentialSum};

/// Radius of the disc on which `M` is measured.
pub const GROWTH_RADIUS: f64 = 4.0;
/// Boundary samples used for the maximum principle.
pub const BOUNDARY_SAMPLES: usize = 4096;
/// Samples per unit length for interval sups.
pub const INTERVAL_SAMPLES: usize = 8192;
/// Allowed relative sampling slack when comparing the two sides.
pub const SAMPLING_SLACK: f64 = 1e-6;

/// Analytic functions the check accepts: entire data given either as a
/// finite power series around a center or as an exponential sum.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFunction {
    PowerSeries { center: Complex64, coeffs: Vec<Complex64> },
    ExpSum(ExponentialSum),
}

impl AnalyticFunction {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            AnalyticFunction::PowerSeries { center, coeffs } => {
                let w = z - center;
                let mut acc = Complex64::default();
                for &c in coeffs.iter().rev() {
                    acc = acc * w + c;
                }
                acc
            }
            AnalyticFunction::ExpSum(sum) => sum.eval_complex(z),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemezCheck {
    /// Sampled `sup_I |φ|`.
    pub lhs: f64,
    /// `(12/|A|)^{2 log M / log 2} · sup_A |φ|`.
    pub rhs: f64,
    /// Boundary-sampled disc maximum `M`.
    pub disc_max: f64,
    pub subset_measure: f64,
    pub pass: bool,
}

impl RemezCheck {
    /// `log10(rhs/lhs)`; nonnegative when the bound holds.
    pub fn log_slack(&self) -> f64 {
        (self.rhs / self.lhs).log10()
    }
}

/// Checks the bound for `φ` on a unit interval `I ∋ z0` against a subset
/// `A ⊆ I` of positive measure, requiring the normalization `|φ(z0)| ≥ 1`.
pub fn remez_check(
    phi: &AnalyticFunction,
    z0: f64,
    interval: (f64, f64),
    subset: &[(f64, f64)],
) -> Result<RemezCheck> {
    let (lo, hi) = interval;
    if !((hi - lo - 1.0).abs() < 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "interval [{lo}, {hi}] must have unit length"
        )));
    }
    if z0 < lo - 1e-12 || z0 > hi + 1e-12 {
        return Err(Error::InvalidArgument("z0 must lie in the interval".into()));
    }
    let measure = validated_subset_measure(subset, lo, hi)?;

    let at_center = phi.eval(Complex64::new(z0, 0.0)).norm();
    if at_center < 1.0 {
        return Err(Error::Hypothesis(format!(
            "|φ(z0)| = {at_center} < 1; no verdict for this instance"
        )));
    }

    // maximum principle: the disc sup is attained on the boundary
    let mut disc_max = at_center;
    for i in 0..BOUNDARY_SAMPLES {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / BOUNDARY_SAMPLES as f64;
        let z = Complex64::new(z0, 0.0) + Complex64::from_polar(GROWTH_RADIUS, theta);
        disc_max = disc_max.max(phi.eval(z).norm());
    }

    let lhs = sup_sampled(|x| phi.eval(Complex64::new(x, 0.0)).norm(), lo, hi, INTERVAL_SAMPLES);
    let sup_subset = subset
        .iter()
        .map(|&(a, b)| {
            sup_sampled(|x| phi.eval(Complex64::new(x, 0.0)).norm(), a, b, INTERVAL_SAMPLES)
        })
        .fold(0.0, f64::max);

    let exponent = 2.0 * disc_max.max(1.0).ln() / 2.0f64.ln();
    let rhs = (12.0 / measure).powf(exponent) * sup_subset;
    let pass = lhs <= rhs * (1.0 + SAMPLING_SLACK);
    Ok(RemezCheck { lhs, rhs, disc_max, subset_measure: measure, pass })
}

/// Total length of a union of subintervals, all required inside `[lo, hi]`.
pub fn validated_subset_measure(subset: &[(f64, f64)], lo: f64, hi: f64) -> Result<f64> {
    let mut measure = 0.0;
    for &(a, b) in subset {
        if b <= a {
            return Err(Error::InvalidArgument(format!("empty subinterval [{a}, {b}]")));
        }
        if a < lo - 1e-9 || b > hi + 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "subinterval [{a}, {b}] leaves the interval [{lo}, {hi}]"
            )));
        }
        measure += b - a;
    }
    if measure <= 0.0 {
        return Err(Error::InvalidArgument("subset must have positive measure".into()));
    }
    Ok(measure)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_one() -> AnalyticFunction {
        AnalyticFunction::PowerSeries {
            center: Complex64::default(),
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    #[test]
    fn constant_function_is_tight() {
        let phi = constant_one();
        let check = remez_check(&phi, 0.25, (0.0, 1.0), &[(0.0, 0.5)]).unwrap();
        assert!((check.disc_max - 1.0).abs() < 1e-12);
        // exponent 0: rhs equals sup_A = 1 = lhs
        assert!((check.rhs - 1.0).abs() < 1e-12);
        assert!((check.lhs - 1.0).abs() < 1e-12);
        assert!(check.pass);
    }

    #[test]
    fn oscillating_exponentials_pass() {
        for i in 0..40 {
            let omega = -3.0 + 6.0 * (i as f64 + 0.5) / 40.0;
            let phi = AnalyticFunction::ExpSum(
                ExponentialSum::new(vec![crate::lemmas::expsum::ExpTerm {
                    poly: vec![Complex64::new(1.0, 0.0)],
                    frequency: Complex64::new(omega, 0.0),
                }])
                .unwrap(),
            );
            let check = remez_check(&phi, 0.0, (0.0, 1.0), &[(0.0, 0.5)]).unwrap();
            assert!(check.pass, "ω = {omega}: lhs {} rhs {}", check.lhs, check.rhs);
        }
    }

    #[test]
    fn vanishing_at_center_is_flagged() {
        // φ(z) = z - z0 has |φ(z0)| = 0
        let phi = AnalyticFunction::PowerSeries {
            center: Complex64::new(0.5, 0.0),
            coeffs: vec![Complex64::default(), Complex64::new(1.0, 0.0)],
        };
        let err = remez_check(&phi, 0.5, (0.0, 1.0), &[(0.0, 0.5)]);
        assert!(matches!(err, Err(Error::Hypothesis(_))));
    }

    #[test]
    fn rejects_non_unit_interval() {
        let phi = constant_one();
        assert!(remez_check(&phi, 0.0, (0.0, 2.0), &[(0.0, 0.5)]).is_err());
        assert!(remez_check(&phi, 0.0, (0.0, 1.0), &[]).is_err());
    }
}
