//! Exponential sums `r(x) = Σ_k p_k(x) e^{iλ_k x}` with polynomial
//! coefficients, evaluable at real and complex arguments.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One term `p(x)·e^{iλx}`; `poly` holds the coefficients of `p` from the
/// constant term up, degree ≤ m-1.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm {
    pub poly: Vec<Complex64>,
    pub frequency: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSum {
    terms: Vec<ExpTerm>,
}

impl ExponentialSum {
    pub fn new(terms: Vec<ExpTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("exponential sum needs at least one term".into()));
        }
        for t in &terms {
            if t.poly.is_empty() {
                return Err(Error::InvalidArgument("term has an empty polynomial".into()));
            }
        }
        Ok(Self { terms })
    }

    /// `sin(Kx)` as the two-term sum `(e^{iKx} - e^{-iKx}) / 2i`.
    pub fn sine(frequency: f64) -> Self {
        let half_over_i = Complex64::new(0.0, -0.5);
        Self {
            terms: vec![
                ExpTerm { poly: vec![half_over_i], frequency: Complex64::new(frequency, 0.0) },
                ExpTerm { poly: vec![-half_over_i], frequency: Complex64::new(-frequency, 0.0) },
            ],
        }
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    /// Number of terms `n`.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `m` = largest polynomial degree + 1.
    pub fn degree_bound(&self) -> usize {
        self.terms.iter().map(|t| t.poly.len()).max().unwrap_or(1)
    }

    pub fn max_abs_imag_frequency(&self) -> f64 {
        self.terms.iter().map(|t| t.frequency.im.abs()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.eval_complex(Complex64::new(x, 0.0))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut sum = Complex64::default();
        for term in &self.terms {
            let mut poly = Complex64::default();
            for &c in term.poly.iter().rev() {
                poly = poly * z + c;
            }
            sum += poly * (Complex64::i() * term.frequency * z).exp();
        }
        sum
    }

    /// Midpoint-sampled sup of `|r|` on `[lo, hi]` at the given density.
    pub fn sup_on_interval(&self, lo: f64, hi: f64, samples_per_unit: usize) -> f64 {
        sup_sampled(|x| self.eval(x).norm(), lo, hi, samples_per_unit)
    }

    /// Sup of `|r|` over a finite union of intervals.
    pub fn sup_on_union(&self, intervals: &[(f64, f64)], samples_per_unit: usize) -> f64 {
        intervals
            .iter()
            .map(|&(lo, hi)| self.sup_on_interval(lo, hi, samples_per_unit))
            .fold(0.0, f64::max)
    }
}

/// Dense midpoint sampling of a sup, with endpoints included.
pub fn sup_sampled<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, samples_per_unit: usize) -> f64 {
    debug_assert!(hi >= lo);
    let count = (((hi - lo) * samples_per_unit as f64).ceil() as usize).max(8);
    let mut sup = f(lo).max(f(hi));
    for i in 0..count {
        let x = lo + (hi - lo) * (i as f64 + 0.5) / count as f64;
        sup = sup.max(f(x));
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_matches_std() {
        let r = ExponentialSum::sine(5.0);
        for i in 0..50 {
            let x = i as f64 * 0.13;
            let got = r.eval(x);
            assert!((got.re - (5.0 * x).sin()).abs() < 1e-12);
            assert!(got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn polynomial_coefficients_evaluate_by_horner() {
        // (1 + 2x + x²)·e^{0} at x = 3 is 16
        let r = ExponentialSum::new(vec![ExpTerm {
            poly: vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
            frequency: Complex64::default(),
        }])
        .unwrap();
        assert!((r.eval(3.0) - Complex64::new(16.0, 0.0)).norm() < 1e-12);
        assert_eq!(r.degree_bound(), 3);
        assert_eq!(r.term_count(), 1);
    }

    #[test]
    fn sup_of_sine_is_one() {
        let r = ExponentialSum::sine(4.0);
        let sup = r.sup_on_interval(0.0, 2.0, 10_000);
        assert!((sup - 1.0).abs() < 1e-6);
    }

    #[test]
    fn complex_evaluation_grows_off_axis() {
        // e^{ix} at x - i: |e^{i(x-i)}| = e
        let r = ExponentialSum::new(vec![ExpTerm {
            poly: vec![Complex64::new(1.0, 0.0)],
            frequency: Complex64::new(1.0, 0.0),
        }])
        .unwrap();
        let v = r.eval_complex(Complex64::new(0.4, -1.0));
        assert!((v.norm() - 1.0f64.exp()).abs() < 1e-12);
    }
}
