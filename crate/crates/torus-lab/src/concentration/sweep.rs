//! Parameter sweeps over the torus scale and the thickness parameter.
//!
//! The observation set is a periodic ball union, so its cell pattern is
//! independent of the torus size: growing `L` only appends periods. This is
//! exactly the setting in which the observability constant is claimed to be
//! uniform in `L`, and the sweep measures that uniformity.

use crate::band::BandSpec;
use crate::concentration::{build_concentration, extremal_search};
use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;
use crate::sets::{build_ball_union, unit_ball_volume, EquidistributedSeq, GridSet, SeqMode};

/// Which quantity a sweep records per grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepRatio {
    /// Exact `p = 2` minimal eigenvalue.
    LambdaMin,
    /// Searched `L^p` ratio for the given finite `p`.
    SearchedRho(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub scale: f64,
    /// `λ_min` or the searched ratio, per [`SweepRatio`].
    pub value: f64,
    pub set_fraction: f64,
    pub matrix_dim: usize,
}

/// Sweeps the torus scale while holding the thickness data `(γ, a)` and the
/// band side `b` fixed.
///
/// The set is the periodic ball union with spacing `G = a/2` and radius
/// chosen so the volume fraction is `γ_target`; scales where `a > 2πL` or
/// where `G` does not divide the period are rejected.
pub fn scale_free_sweep(
    dim: usize,
    gamma_target: f64,
    window: &[f64],
    band_side: &[f64],
    ratio: SweepRatio,
    scales: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    if window.len() != dim || band_side.len() != dim {
        return Err(Error::InvalidArgument("window/band dimension mismatch".into()));
    }
    if window.windows(2).any(|w| (w[0] - w[1]).abs() > 1e-12 * w[0].abs()) {
        return Err(Error::InvalidArgument(
            "ball-union sweeps need equal window sides a_j = 2G".into(),
        ));
    }
    let spacing = window[0] / 2.0;
    let omega = unit_ball_volume(dim);
    let radius = spacing * (gamma_target / omega).powf(1.0 / dim as f64);
    if !(radius > 0.0 && radius <= spacing / 2.0) {
        return Err(Error::InvalidArgument(format!(
            "γ_target {gamma_target} needs ball radius {radius}, admissible range is (0, G/2]"
        )));
    }

    let mut points = Vec::with_capacity(scales.len());
    for &scale in scales {
        let geometry = TorusGeometry::new(dim, scale, samples)?;
        let side = geometry.side();
        for (j, &a) in window.iter().enumerate() {
            if a > side * (1.0 + 1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "window side a_{j} = {a} exceeds 2πL = {side} at L = {scale}"
                )));
            }
        }
        let cells = side / spacing;
        if (cells - cells.round()).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "spacing G = {spacing} does not divide the period 2πL = {side}"
            )));
        }
        let seq =
            EquidistributedSeq::new(dim, spacing, radius, cells.round() as usize, SeqMode::Periodic)?;
        let set = build_ball_union(&seq, &geometry, true)?;
        let band = BandSpec::centered(dim, band_side)?;
        let (value, matrix_dim) = match ratio {
            SweepRatio::LambdaMin => {
                let result = build_concentration(&set, &band, &geometry)?;
                (result.lambda_min, result.matrix_dim())
            }
            SweepRatio::SearchedRho(p) => {
                let result = extremal_search(&band, &set, &geometry, p, seed, 2000)?;
                (result.ratio, result.coefficients.len())
            }
        };
        points.push(SweepPoint { scale, value, set_fraction: set.fraction(), matrix_dim });
    }
    Ok(points)
}

/// One row of a thickness sweep: the target density, the exact density
/// achieved on the grid, and the minimal eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSweepPoint {
    pub gamma_target: f64,
    pub gamma_measured: f64,
    pub lambda_min: f64,
    pub matrix_dim: usize,
}

/// Observation sets swept by [`gamma_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaSweepSet {
    /// Exact-density periodic stripes; degenerate on purpose (the set is
    /// `a`-periodic, so narrow bands see no coupling and `λ_min = γ`
    /// exactly), which makes it the unit-slope oracle.
    Stripes { periods: usize },
    /// Seeded-random equidistributed ball unions with spacing `G = a/2`;
    /// the jitter spreads the indicator spectrum over all frequencies, so
    /// the band genuinely couples. The measured density is the exhaustive
    /// thickness scan at window `a`.
    JitteredBalls { window: f64, seed: u64 },
}

/// One-dimensional periodic stripe set hitting the target density exactly at
/// grid resolution: each of the `periods` blocks keeps the same
/// `round(fraction · block)` leading cells.
pub fn periodic_stripe_set(
    geometry: &TorusGeometry,
    periods: usize,
    fraction: f64,
) -> Result<(GridSet, f64)> {
    if geometry.dim() != 1 {
        return Err(Error::InvalidArgument("stripe sets are one-dimensional".into()));
    }
    let n = geometry.samples_per_axis();
    if periods == 0 || !n.is_multiple_of(periods) {
        return Err(Error::InvalidArgument(format!(
            "periods {periods} must divide the {n} grid cells"
        )));
    }
    let block = n / periods;
    let keep = ((fraction * block as f64).round() as usize).clamp(0, block);
    let indicator = (0..n).map(|i| i % block < keep).collect();
    let set = GridSet::from_indicator(*geometry, indicator)?;
    let measured = keep as f64 / block as f64;
    Ok((set, measured))
}

/// Sweeps the set density and records `λ_min` per density; the abscissa for
/// scaling fits is the measured (grid-exact) density, not the target.
pub fn gamma_sweep(
    geometry: &TorusGeometry,
    set_kind: GammaSweepSet,
    gammas: &[f64],
    band: &BandSpec,
) -> Result<Vec<GammaSweepPoint>> {
    let mut out = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(format!("density {gamma} outside [0, 1]")));
        }
        let (set, measured) = match set_kind {
            GammaSweepSet::Stripes { periods } => periodic_stripe_set(geometry, periods, gamma)?,
            GammaSweepSet::JitteredBalls { window, seed } => {
                let spacing = window / 2.0;
                let cells = geometry.side() / spacing;
                if (cells - cells.round()).abs() > 1e-9 {
                    return Err(Error::InvalidArgument(format!(
                        "spacing G = {spacing} does not divide the period {}",
                        geometry.side()
                    )));
                }
                let radius = gamma * spacing / 2.0;
                let seq = EquidistributedSeq::new(
                    geometry.dim(),
                    spacing,
                    radius,
                    cells.round() as usize,
                    SeqMode::SeededRandom(seed),
                )?;
                let set = build_ball_union(&seq, geometry, true)?;
                let window_vec = vec![window; geometry.dim()];
                let thickness = crate::sets::thickness_scan(&set, &window_vec)?;
                (set, thickness.gamma_est)
            }
        };
        let result = build_concentration(&set, band, geometry)?;
        out.push(GammaSweepPoint {
            gamma_target: gamma,
            gamma_measured: measured,
            lambda_min: result.lambda_min,
            matrix_dim: result.matrix_dim(),
        });
    }
    Ok(out)
}
