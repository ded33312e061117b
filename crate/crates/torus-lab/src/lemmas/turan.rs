//! Turan-type bound for exponential sums: `‖r‖_{L^∞(I)} ≤
//! (316·|I|/|A|)^{nm-1} ‖r‖_{L^∞(A)}` for `n` terms with polynomial
//! coefficients of degree at most `m-1` and real frequencies.

use crate::error::{Error, Result};
use crate::lemmas::expsum::ExponentialSum;
use crate::lemmas::remez::validated_subset_measure;

/// Explicit constant of the bound.
pub const TURAN_CONSTANT: f64 = 316.0;
/// Sampling density per unit length for the sup norms.
pub const SAMPLES_PER_UNIT: usize = 10_000;
/// Allowed relative sampling slack when comparing the two sides.
pub const SAMPLING_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct TuranCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// `(316·|I|/|A|)^{nm-1}`.
    pub factor: f64,
    pub subset_measure: f64,
    pub pass: bool,
}

impl TuranCheck {
    pub fn log_slack(&self) -> f64 {
        (self.rhs / self.lhs).log10()
    }
}

/// Evaluates both sides on dense samples and compares.
///
/// The stated bound is for real frequencies; terms with an imaginary
/// frequency component grow along the interval and are rejected (the
/// complex-frequency variant carries an extra exponential factor this
/// check does not model).
pub fn turan_check(
    sum: &ExponentialSum,
    interval: (f64, f64),
    subset: &[(f64, f64)],
) -> Result<TuranCheck> {
    let (lo, hi) = interval;
    if !(hi > lo) {
        return Err(Error::InvalidArgument("interval must have positive length".into()));
    }
    if sum.max_abs_imag_frequency() > 1e-12 {
        return Err(Error::Hypothesis(
            "frequencies must be real for the stated sup-norm bound".into(),
        ));
    }
    let measure = validated_subset_measure(subset, lo, hi)?;

    let lhs = sum.sup_on_interval(lo, hi, SAMPLES_PER_UNIT);
    let sup_subset = sum.sup_on_union(subset, SAMPLES_PER_UNIT);
    let n = sum.term_count();
    let m = sum.degree_bound();
    let exponent = (n * m - 1) as f64;
    let factor = (TURAN_CONSTANT * (hi - lo) / measure).powf(exponent);
    let rhs = factor * sup_subset;
    let pass = lhs <= rhs * (1.0 + SAMPLING_SLACK);
    Ok(TuranCheck { lhs, rhs, factor, subset_measure: measure, pass })
}
