//! Taylor-remainder majorants for decomposed functions on unit cubes.
//!
//! For pieces `f_l` with support in `[-b, b]`, the remainder of an `m`-term
//! Taylor expansion along any unit segment is bounded by
//! `M_Λ = (1/m!) Σ_l Σ_{|α|=m} (m!/α!) Σ_{β∈{0,1}^d} ‖∂^{α+β} f_l‖_{L¹(Λ)}`,
//! and the cube sup of `f` obeys the two-sided local estimate
//! `‖f‖_{L^∞(Λ)} ≤ (C/|S∩Λ|)^{nm-1} (‖f‖_{L^∞(Λ∩S)} + M_Λ)`.

use crate::error::{Error, Result};
use crate::geometry::MAX_DIM;
use crate::lemmas::cubes::CubeCover;
use crate::lemmas::decompose::SpectralPiece;
use crate::norms::Lp;
use crate::sets::GridSet;

/// Largest admissible expansion order; `α + β` stays within the derivative
/// budget used elsewhere.
pub const MAX_EXPANSION_ORDER: u32 = 20;

/// Computes `M_Λ` exactly as the triple sum with `β ∈ {0,1}^d`.
pub fn taylor_majorant(
    pieces: &[SpectralPiece],
    cover: &CubeCover,
    cube: usize,
    order: u32,
) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidArgument("expansion order m must be at least 1".into()));
    }
    if order > MAX_EXPANSION_ORDER {
        return Err(Error::InvalidArgument(format!(
            "expansion order {order} exceeds the derivative budget {MAX_EXPANSION_ORDER}"
        )));
    }
    if pieces.is_empty() {
        return Err(Error::InvalidArgument("no spectral pieces given".into()));
    }
    let d = cover.geometry().dim();

    let mut majorant = 0.0;
    for piece in pieces {
        for alpha in compositions(order, d) {
            let weight = multinomial_weight(&alpha[..d]);
            for beta in 0..(1usize << d) {
                let mut idx = [0u32; MAX_DIM];
                for axis in 0..d {
                    idx[axis] = alpha[axis] + ((beta >> axis) & 1) as u32;
                }
                let grid = piece.part.partial_derivative(&idx[..d]).synthesize();
                majorant += weight * cover.cube_norm(&grid, cube, Lp::Finite(1.0));
            }
        }
    }
    Ok(majorant)
}

/// All `α ∈ N_0^d` with `|α| = total`.
fn compositions(total: u32, dim: usize) -> Vec<[u32; MAX_DIM]> {
    let mut out = Vec::new();
    match dim {
        1 => out.push([total, 0, 0]),
        2 => {
            for a in 0..=total {
                out.push([a, total - a, 0]);
            }
        }
        3 => {
            for a in 0..=total {
                for b in 0..=(total - a) {
                    out.push([a, b, total - a - b]);
                }
            }
        }
        _ => unreachable!(),
    }
    out
}

/// `(1/m!)·(m!/α!) = 1/α!`.
fn multinomial_weight(alpha: &[u32]) -> f64 {
    1.0 / alpha.iter().map(|&a| factorial(a)).product::<f64>()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalEstimateReport {
    /// Grid sup of `|f|` over the cube.
    pub lhs: f64,
    /// `(C/|S∩Λ|)^{nm-1} (sup_{Λ∩S}|f| + M_Λ)`.
    pub rhs: f64,
    pub majorant: f64,
    pub set_mass_in_cube: f64,
    pub pass: bool,
}

/// Checks the local sup estimate on one cube against an observation set.
///
/// `divisor_pow_d` is the assembled constant `C_4^d`; the exponent is
/// `nm - 1` for `n` pieces and expansion order `m ≥ 2` (at `nm = 1` the
/// chain degenerates and the instance is rejected).
pub fn local_sup_estimate(
    pieces: &[SpectralPiece],
    set: &GridSet,
    cover: &CubeCover,
    cube: usize,
    order: u32,
    divisor_pow_d: f64,
) -> Result<LocalEstimateReport> {
    let geometry = cover.geometry();
    if set.geometry() != geometry {
        return Err(Error::Set("set lives on a different grid".into()));
    }
    let n = pieces.len();
    let exponent = (n as u32 * order).saturating_sub(1) as f64;
    if n as u32 * order < 2 {
        return Err(Error::InvalidArgument(
            "local estimate needs nm ≥ 2; expand to higher order".into(),
        ));
    }

    let f = crate::lemmas::decompose::reconstruct(pieces, geometry)?;
    let values = f.synthesize();
    let cells = cover.cells(cube);
    let mut sup_cube = 0.0f64;
    let mut sup_set = 0.0f64;
    let mut set_cells = 0usize;
    for &cell in cells {
        let v = values[cell].norm();
        sup_cube = sup_cube.max(v);
        if set.contains(cell) {
            sup_set = sup_set.max(v);
            set_cells += 1;
        }
    }
    let set_mass = set_cells as f64 * geometry.cell_volume();
    if set_mass == 0.0 {
        return Err(Error::Set("observation set misses the cube entirely".into()));
    }

    let majorant = taylor_majorant(pieces, cover, cube, order)?;
    let rhs = (divisor_pow_d / set_mass).powf(exponent) * (sup_set + majorant);
    let pass = sup_cube <= rhs * (1.0 + 1e-9);
    Ok(LocalEstimateReport { lhs: sup_cube, rhs, majorant, set_mass_in_cube: set_mass, pass })
}

/// The expansion order `m = ⌈2e·C_B·(C_7^d/γ)^n·|b|_1⌉` and the log of the
/// geometric factor `(|b|_1)^{mp} e^{pC_B|b|_1} (C_7^d/γ)^{pnm} / m^{mp}`,
/// which the order choice must push below `log(1/2)`.
pub fn expansion_order_factor(
    gamma: f64,
    envelope_l1: f64,
    n: usize,
    p: f64,
    c7_pow_d: f64,
    c_b: f64,
) -> Result<(f64, f64)> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidArgument(format!("density {gamma} outside (0, 1]")));
    }
    if envelope_l1 <= 0.0 || n == 0 || p < 1.0 || c7_pow_d <= 0.0 || c_b < 1.0 {
        return Err(Error::InvalidArgument("bad expansion-order parameters".into()));
    }
    let base = c7_pow_d / gamma;
    let m = (2.0 * std::f64::consts::E * c_b * base.powi(n as i32) * envelope_l1).ceil();
    let ln_factor = m * p * envelope_l1.ln() + p * c_b * envelope_l1
        + p * n as f64 * m * base.ln()
        - m * p * m.ln();
    Ok((m, ln_factor))
}
