//! Closed-form observability constants and the machinery to test them
//! against computed ratios.
//!
//! The theorems give constants of the shape `(base)^(exponent)` whose
//! exponents explode (doubly exponential in the number of boxes), so every
//! constant is carried in log-space. All evaluators share the orientation
//! `‖f‖_{L^p(T)} ≤ K · ‖f‖_{L^p(S∩T)}`: a computed ratio `ρ =
//! ‖f‖_{S∩T}/‖f‖_T` is consistent with a constant `K` exactly when
//! `ρ ≥ 1/K`.

use crate::error::{Error, Result};
use crate::norms::Lp;
use crate::sets::unit_sphere_area;

/// A positive quantity stored by its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    ln: f64,
}

impl LogValue {
    pub fn from_value(v: f64) -> Result<Self> {
        if !(v > 0.0) {
            return Err(Error::InvalidArgument(format!("log-space value must be positive: {v}")));
        }
        Ok(Self { ln: v.ln() })
    }

    pub fn from_ln(ln: f64) -> Self {
        Self { ln }
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn log10(&self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }

    /// The plain value; overflows to `inf` beyond ~1e308.
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    pub fn recip(&self) -> Self {
        Self { ln: -self.ln }
    }
}

/// The universal constants of the estimates, configurable with documented
/// defaults. The defaults are deliberately generous placeholders — the
/// theorems prove existence without pinning values — and the calibration
/// routine finds the smallest constant consistent with computed instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalConstants {
    /// Single-box constant base `c`.
    pub c: f64,
    /// Union-of-boxes base `c̃ ≥ 3`.
    pub c_tilde: f64,
    /// Bernstein constant `C_B ≥ 1` (exact value 1 for `p = 2`).
    pub c_bernstein: f64,
    /// Exponent scale of the unique-continuation constant; never
    /// quantified, supplied per use.
    pub n_unique_continuation: f64,
    /// Kovrijkine's reference constant `C`.
    pub c_kovrijkine: f64,
}

impl Default for UniversalConstants {
    fn default() -> Self {
        Self {
            c: 10.0,
            c_tilde: 10.0,
            c_bernstein: 1.0,
            n_unique_continuation: 1.0,
            c_kovrijkine: 10.0,
        }
    }
}

impl UniversalConstants {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c_tilde >= 3.0 && self.c_bernstein >= 1.0) {
            return Err(Error::InvalidArgument(
                "need c > 0, c̃ ≥ 3, C_B ≥ 1 for the universal constants".into(),
            ));
        }
        if !(self.n_unique_continuation > 0.0 && self.c_kovrijkine > 0.0) {
            return Err(Error::InvalidArgument("constants must be positive".into()));
        }
        Ok(())
    }

    /// `σ_{d-1}·d^{d/2}`: divisor in the line-segment density guarantee.
    pub fn segment_divisor_pow_d(&self, dim: usize) -> f64 {
        unit_sphere_area(dim) * (dim as f64).powf(dim as f64 / 2.0)
    }

    /// Assembled local-estimate divisor `C_4^d = 2·316·C_1^d`.
    pub fn local_estimate_divisor_pow_d(&self, dim: usize) -> f64 {
        2.0 * crate::lemmas::TURAN_CONSTANT * self.segment_divisor_pow_d(dim)
    }

    /// `C_5^d = 1 + C_4^d`, the density-normalized form of the divisor.
    pub fn level_divisor_pow_d(&self, dim: usize) -> f64 {
        1.0 + self.local_estimate_divisor_pow_d(dim)
    }

    /// Assembled `C_7^d`, generous enough to absorb the combinatorial
    /// factors of the remainder-sum estimate.
    pub fn c7_pow_d(&self, dim: usize) -> f64 {
        let k = crate::lemmas::PIECE_NORM_CONSTANT;
        (16.0 * std::f64::consts::E * self.c_bernstein * k).powi(dim as i32)
            * self.level_divisor_pow_d(dim)
    }
}

/// Exponent convention of the single-box constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentMode {
    /// `c·(a·b) + (6d+1)/p`.
    Standard,
    /// `c·(a·b) + (4p+1)/p`, valid when `2πL` is an integer multiple of
    /// every window side so the cube cover tiles without overlap.
    IntegerTiling,
}

fn validate_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidArgument(format!("density γ = {gamma} outside (0, 1]")));
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument("window/band dimension mismatch".into()));
    }
    for (&x, name) in a.iter().zip(std::iter::repeat("a")).chain(b.iter().zip(std::iter::repeat("b")))
    {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidArgument(format!("vector {name} must be positive: {x}")));
        }
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
}

/// `(c^d/γ)^{c·(a·b) + (6d+1)/p}` for one frequency box.
pub fn single_box_constant(
    gamma: f64,
    window: &[f64],
    band_side: &[f64],
    p: Lp,
    consts: &UniversalConstants,
    mode: ExponentMode,
) -> Result<LogValue> {
    consts.validate()?;
    validate_gamma(gamma)?;
    let d = window.len();
    let ab = dot(window, band_side)?;
    let ln_base = (consts.c.powi(d as i32) / gamma).ln();
    let tail = match mode {
        ExponentMode::Standard => (6.0 * d as f64 + 1.0) * p.reciprocal(),
        ExponentMode::IntegerTiling => {
            // (4p+1)/p = 4 + 1/p
            4.0 + p.reciprocal()
        }
    };
    let exponent = consts.c * ab + tail;
    Ok(LogValue::from_ln(exponent * ln_base))
}

/// `(c̃^d/γ)^{(c̃^d/γ)^n·(a·b) + n - (p-1)/p}` for a union of `n` boxes.
pub fn union_constant(
    gamma: f64,
    window: &[f64],
    band_side: &[f64],
    n_boxes: usize,
    p: Lp,
    consts: &UniversalConstants,
) -> Result<LogValue> {
    consts.validate()?;
    validate_gamma(gamma)?;
    if n_boxes == 0 {
        return Err(Error::InvalidArgument("need at least one box".into()));
    }
    let d = window.len();
    let ab = dot(window, band_side)?;
    let base = consts.c_tilde.powi(d as i32) / gamma;
    let ln_base = base.ln();
    // (c̃^d/γ)^n in log space, then back out of it for the exponent; the
    // exponent itself can overflow only far beyond representable constants
    let inner = (n_boxes as f64 * ln_base).exp();
    let exponent = inner * ab + n_boxes as f64 - (1.0 - p.reciprocal());
    Ok(LogValue::from_ln(exponent * ln_base))
}

/// Reference constants for functions on the line and on `R^d`, returned in
/// the same `‖f‖ ≤ K·‖f‖_S` orientation (the literature states their
/// reciprocals).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceForm {
    /// `(γ/C)^{C(ab+1)}`, one interval.
    Line,
    /// `(γ/C)^{ab(C/γ)^n + n - (p-1)/p}`, union of intervals.
    LineUnion,
    /// `(γ/C^d)^{C(d + a·b)}`, one box in `R^d`.
    Box,
    /// `(γ/C^d)^{(C^d/γ)^n·a·b + n - (p-1)/p}`, union of boxes.
    BoxUnion,
}

pub fn reference_constant(
    gamma: f64,
    window: &[f64],
    band_side: &[f64],
    n_boxes: usize,
    p: Lp,
    form: ReferenceForm,
    consts: &UniversalConstants,
) -> Result<LogValue> {
    consts.validate()?;
    validate_gamma(gamma)?;
    let d = window.len();
    let c = consts.c_kovrijkine;
    let ab = dot(window, band_side)?;
    if matches!(form, ReferenceForm::Line | ReferenceForm::LineUnion) && d != 1 {
        return Err(Error::InvalidArgument("line forms are one-dimensional".into()));
    }
    let (ln_small_base, exponent) = match form {
        ReferenceForm::Line => ((gamma / c).ln(), c * (ab + 1.0)),
        ReferenceForm::LineUnion => {
            let inner = (n_boxes as f64 * (c / gamma).ln()).exp();
            ((gamma / c).ln(), ab * inner + n_boxes as f64 - (1.0 - p.reciprocal()))
        }
        ReferenceForm::Box => ((gamma / c.powi(d as i32)).ln(), c * (d as f64 + ab)),
        ReferenceForm::BoxUnion => {
            let inner = (n_boxes as f64 * (c.powi(d as i32) / gamma).ln()).exp();
            (
                (gamma / c.powi(d as i32)).ln(),
                ab * inner + n_boxes as f64 - (1.0 - p.reciprocal()),
            )
        }
    };
    // the literature lower bound is (small base)^exponent; K is its inverse
    Ok(LogValue::from_ln(exponent * ln_small_base).recip())
}

/// Scale-free unique continuation constant
/// `(δ/G)^{N(1 + G^{4/3}‖V‖^{2/3} + G√E₀)}`; a lower-bound constant, hence
/// at most 1.
pub fn unique_continuation_constant(
    delta: f64,
    spacing: f64,
    potential_sup: f64,
    energy: f64,
    n_exponent: f64,
) -> Result<LogValue> {
    if !(delta > 0.0 && delta <= spacing / 2.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < δ ≤ G/2, got δ = {delta}, G = {spacing}"
        )));
    }
    if potential_sup < 0.0 || energy < 0.0 || n_exponent <= 0.0 {
        return Err(Error::InvalidArgument("potential, energy and N must be nonnegative".into()));
    }
    let exponent = n_exponent
        * (1.0 + spacing.powf(4.0 / 3.0) * potential_sup.powf(2.0 / 3.0)
            + spacing * energy.sqrt());
    Ok(LogValue::from_ln(exponent * (delta / spacing).ln()))
}

/// Outcome of testing a computed ratio against a constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub log10_k: f64,
    pub rho: f64,
    /// `ln(K·ρ)`; nonnegative exactly when the inequality holds.
    pub log_slack: f64,
    pub pass: bool,
}

/// `pass ⇔ ρ ≥ 1/K`, evaluated in log-space.
pub fn verify_inequality(rho: f64, k: LogValue) -> Result<BoundReport> {
    if !(rho > 0.0 && rho <= 1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!("ratio ρ = {rho} outside (0, 1]")));
    }
    let log_slack = k.ln() + rho.ln();
    Ok(BoundReport { log10_k: k.log10(), rho, log_slack, pass: log_slack >= -1e-12 })
}

/// Least-squares fit of `log(1/λ_min)` against `log(1/γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn polynomial_scaling_fit(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("fit needs at least two sweep points".into()));
    }
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|&(gamma, lambda)| {
            if !(gamma > 0.0 && lambda > 0.0) {
                Err(Error::InvalidArgument("sweep values must be positive".into()))
            } else {
                Ok(((1.0 / gamma).ln(), (1.0 / lambda).ln()))
            }
        })
        .collect::<Result<_>>()?;
    let n = xy.len() as f64;
    let mean_x = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx < 1e-12 {
        return Err(Error::InvalidArgument("degenerate sweep: densities coincide".into()));
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let max_residual = xy
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Ok(ScalingFit { slope, intercept, max_residual })
}

/// One desk-scale instance for calibration: the observed ratio against the
/// thickness data it was computed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationInstance {
    pub gamma: f64,
    pub a_dot_b: f64,
    pub p: f64,
    pub dim: usize,
    pub rho: f64,
}

/// Smallest `c ≥ 1` making the single-box constant dominate `1/ρ` on every
/// instance; found by bisection (the constant is monotone in `c`).
pub fn calibrate_single_box_constant(instances: &[CalibrationInstance]) -> Result<f64> {
    if instances.is_empty() {
        return Err(Error::InvalidArgument("no instances to calibrate against".into()));
    }
    let passes = |c: f64| -> bool {
        instances.iter().all(|inst| {
            let ln_base = (c.powi(inst.dim as i32) / inst.gamma).ln();
            let exponent = c * inst.a_dot_b + (6.0 * inst.dim as f64 + 1.0) / inst.p;
            // K ≥ 1/ρ  ⇔  exponent·ln_base + ln ρ ≥ 0
            exponent * ln_base + inst.rho.ln() >= 0.0
        })
    };
    let mut hi = 1.0f64;
    while !passes(hi) {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::InvalidArgument(
                "calibration diverged; some instance has vanishing ratio".into(),
            ));
        }
    }
    let mut lo = hi / 2.0;
    if hi == 1.0 {
        return Ok(1.0);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if passes(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
