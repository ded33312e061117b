//! Level-set argument: a pointwise sup lower bound on a subset turns into
//! an integral lower bound after excising a small exceptional set.
//!
//! On a normalized domain `|Λ| = 1` carrying grid values, with `ε =
//! C/(1+C)·|U|` and `W = {x : |f(x)| + Q < (ε/C)^α ‖f‖_{L^p(Λ)}}`, the two
//! sup hypotheses force `|W| ≤ ε` and
//! `‖f+Q‖^q_{L^q(U)} ≥ (|U|/(1+C))^{qα+1} ‖f‖^q_{L^q(Λ)}`. The implication
//! is exact for grid functions; only rounding tolerance is allowed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::norms::Lp;

#[derive(Debug, Clone)]
pub struct LevelSetInstance {
    /// Values of `f` on the cells of the normalized domain Λ.
    pub values: Vec<Complex64>,
    /// Membership of each cell in `U ⊆ Λ`.
    pub membership: Vec<bool>,
    /// Measure of one cell; `cells × cell_measure` must equal 1.
    pub cell_measure: f64,
    /// Additive offset `Q ≥ 0`.
    pub offset: f64,
    /// Constant `C ≥ 1`.
    pub constant: f64,
    /// Exponent `α ≥ 1`.
    pub alpha: f64,
    pub p: Lp,
    /// Conclusion exponent `1 ≤ q ≤ p`, finite.
    pub q: f64,
}

impl LevelSetInstance {
    /// Uniform-cell instance on a normalized domain.
    pub fn new(
        values: Vec<Complex64>,
        membership: Vec<bool>,
        offset: f64,
        constant: f64,
        alpha: f64,
        p: Lp,
        q: f64,
    ) -> Result<Self> {
        if values.is_empty() || values.len() != membership.len() {
            return Err(Error::InvalidArgument("values/membership length mismatch".into()));
        }
        let cell_measure = 1.0 / values.len() as f64;
        let inst =
            Self { values, membership, cell_measure, offset, constant, alpha, p, q };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let total = self.cell_measure * self.values.len() as f64;
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "domain measure is {total}, the lemma needs |Λ| = 1"
            )));
        }
        if !self.membership.iter().any(|&b| b) {
            return Err(Error::InvalidArgument("subset U must have positive measure".into()));
        }
        if self.offset < 0.0 || self.constant < 1.0 || self.alpha < 1.0 {
            return Err(Error::InvalidArgument("need Q ≥ 0, C ≥ 1, α ≥ 1".into()));
        }
        if !(self.q >= 1.0 && self.q <= self.p.value() && self.q.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "conclusion exponent q = {} must be finite in [1, p]",
                self.q
            )));
        }
        Ok(())
    }

    fn norm_p(&self) -> f64 {
        match self.p {
            Lp::Infinity => self.values.iter().map(|v| v.norm()).fold(0.0, f64::max),
            Lp::Finite(p) => {
                let sum: f64 = self.values.iter().map(|v| v.norm().powf(p)).sum();
                (sum * self.cell_measure).powf(1.0 / p)
            }
        }
    }
}

/// Outcome of one application: either the hypotheses fail numerically (the
/// instance is vacuous, no verdict) or the conclusions are checked.
#[derive(Debug, Clone, PartialEq)]
pub enum LevelSetOutcome {
    Vacuous { assumption_on_u: bool, assumption_on_w: bool },
    Verified(LevelSetReport),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetReport {
    pub epsilon: f64,
    pub w_measure: f64,
    /// `|W| ≤ ε`.
    pub excision_holds: bool,
    /// `‖f+Q‖^q_{L^q(U)}`.
    pub lhs: f64,
    /// `(|U|/(1+C))^{qα+1} ‖f‖^q_{L^q(Λ)}`.
    pub rhs: f64,
    pub conclusion_holds: bool,
}

pub fn level_set_apply(inst: &LevelSetInstance) -> Result<LevelSetOutcome> {
    inst.validate()?;
    let mu = inst.cell_measure;
    let norm_p = inst.norm_p();
    let u_measure = inst.membership.iter().filter(|&&b| b).count() as f64 * mu;
    let epsilon = inst.constant / (1.0 + inst.constant) * u_measure;

    let w_threshold = (epsilon / inst.constant).powf(inst.alpha) * norm_p;
    let in_w: Vec<bool> =
        inst.values.iter().map(|v| v.norm() + inst.offset < w_threshold).collect();
    let w_measure = in_w.iter().filter(|&&b| b).count() as f64 * mu;

    // hypothesis on U: sup_U |f| + Q ≥ (|U|/C)^α ‖f‖_p
    let sup_u = inst
        .values
        .iter()
        .zip(&inst.membership)
        .filter(|(_, &m)| m)
        .map(|(v, _)| v.norm())
        .fold(0.0, f64::max);
    let assumption_on_u =
        sup_u + inst.offset >= (u_measure / inst.constant).powf(inst.alpha) * norm_p * (1.0 - 1e-12);

    // hypothesis on W (vacuously true when W is empty)
    let sup_w = inst
        .values
        .iter()
        .zip(&in_w)
        .filter(|(_, &m)| m)
        .map(|(v, _)| v.norm())
        .fold(0.0, f64::max);
    let assumption_on_w = w_measure == 0.0
        || sup_w + inst.offset
            >= (w_measure / inst.constant).powf(inst.alpha) * norm_p * (1.0 - 1e-12);

    if !assumption_on_u || !assumption_on_w {
        return Ok(LevelSetOutcome::Vacuous { assumption_on_u, assumption_on_w });
    }

    let excision_holds = w_measure <= epsilon * (1.0 + 1e-12);

    let q = inst.q;
    let lhs: f64 = inst
        .values
        .iter()
        .zip(&inst.membership)
        .filter(|(_, &m)| m)
        .map(|(v, _)| (v.norm() + inst.offset).powf(q))
        .sum::<f64>()
        * mu;
    let norm_q_pow: f64 =
        inst.values.iter().map(|v| v.norm().powf(q)).sum::<f64>() * mu;
    let rhs = (u_measure / (1.0 + inst.constant)).powf(q * inst.alpha + 1.0) * norm_q_pow;
    let conclusion_holds = lhs >= rhs * (1.0 - 1e-12);

    Ok(LevelSetOutcome::Verified(LevelSetReport {
        epsilon,
        w_measure,
        excision_holds,
        lhs,
        rhs,
        conclusion_holds,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(n: usize) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); n]
    }

    #[test]
    fn constant_function_on_full_domain() {
        // f ≡ 1, Q = 0, U = Λ, C = 1, α = 1: W empty, conclusion with the
        // factor (1/2)^{q+1}
        let n = 64;
        let inst = LevelSetInstance::new(
            ones(n),
            vec![true; n],
            0.0,
            1.0,
            1.0,
            Lp::Finite(2.0),
            2.0,
        )
        .unwrap();
        match level_set_apply(&inst).unwrap() {
            LevelSetOutcome::Verified(report) => {
                assert_eq!(report.w_measure, 0.0);
                assert!(report.excision_holds);
                assert!(report.conclusion_holds);
                assert!((report.lhs - 1.0).abs() < 1e-12);
                assert!((report.rhs - 0.125).abs() < 1e-12); // (1/2)^{2·1+1}
            }
            other => panic!("expected verification, got {other:?}"),
        }
    }

    #[test]
    fn violated_hypothesis_is_vacuous() {
        // f almost vanishes on U but is large elsewhere: sup_U too small
        let n = 64;
        let mut values = ones(n);
        for v in values.iter_mut().take(8) {
            *v = Complex64::new(1e-9, 0.0);
        }
        let membership: Vec<bool> = (0..n).map(|i| i < 8).collect();
        let inst =
            LevelSetInstance::new(values, membership, 0.0, 1.0, 1.0, Lp::Finite(2.0), 1.0)
                .unwrap();
        match level_set_apply(&inst).unwrap() {
            LevelSetOutcome::Vacuous { assumption_on_u, .. } => assert!(!assumption_on_u),
            other => panic!("expected vacuous, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let n = 16;
        assert!(LevelSetInstance::new(
            ones(n),
            vec![false; n],
            0.0,
            1.0,
            1.0,
            Lp::Finite(2.0),
            1.0
        )
        .is_err());
        assert!(LevelSetInstance::new(
            ones(n),
            vec![true; n],
            -1.0,
            1.0,
            1.0,
            Lp::Finite(2.0),
            1.0
        )
        .is_err());
        assert!(LevelSetInstance::new(
            ones(n),
            vec![true; n],
            0.0,
            0.5,
            1.0,
            Lp::Finite(2.0),
            1.0
        )
        .is_err());
        // q > p
        assert!(LevelSetInstance::new(
            ones(n),
            vec![true; n],
            0.0,
            1.0,
            1.0,
            Lp::Finite(2.0),
            3.0
        )
        .is_err());
    }
}
