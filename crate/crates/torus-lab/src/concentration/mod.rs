//! The band-restricted concentration operator and exact `L²` observability
//! constants.
//!
//! Restricting multiplication by the indicator of `S` to a band of
//! frequencies gives a Hermitian matrix with entries
//! `A_{k,k'} = (1/(2πL)^d) ∫_{S∩T} e^{-i((k-k')/L)·x} dx`, the Fourier
//! coefficients of the indicator. Its Rayleigh quotient is exactly
//! `‖f‖²_{L²(S∩T)} / ‖f‖²_{L²(T)}` at grid resolution, so the minimal
//! eigenvalue is the squared optimal `p = 2` observability ratio and the
//! extremal eigenvector realizes it.

mod eigen;
mod extremal;
mod sweep;

pub use eigen::{eigen_residual, hermitian_eigen, HermitianEigen};
pub use extremal::{extremal_search, ExtremalSearchResult};
pub use sweep::{
    gamma_sweep, periodic_stripe_set, scale_free_sweep, GammaSweepPoint, GammaSweepSet,
    SweepPoint, SweepRatio,
};

use num_complex::Complex64;

use crate::band::BandSpec;
use crate::error::{Error, Result};
use crate::function::BandLimitedFunction;
use crate::geometry::{FrequencyIndex, TorusGeometry};
use crate::norms::{lp_norm, Lp};
use crate::sets::GridSet;
use crate::transform::{fft_nd_in_place, half_sample_phase};

/// Dimension cap for the dense eigenproblem.
pub const MAX_MATRIX_DIM: usize = 4096;

#[derive(Debug, Clone)]
pub struct ConcentrationResult {
    /// Band lattice frequencies indexing the matrix, in sorted order.
    pub frequencies: Vec<FrequencyIndex>,
    /// Row-major Hermitian `m × m` concentration matrix.
    pub matrix: Vec<Complex64>,
    /// Minimal eigenvalue: the exact squared `p = 2` observability ratio.
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Unit coefficient vector attaining `lambda_min`.
    pub extremal: Vec<Complex64>,
    /// Max `‖Av - λv‖` over the two extreme eigenpairs.
    pub eigen_residual: f64,
    /// Largest entry deviation `|A - A^H|` before symmetrizing.
    pub hermiticity_defect: f64,
    pub trace: f64,
}

impl ConcentrationResult {
    pub fn matrix_dim(&self) -> usize {
        self.frequencies.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.frequencies.len() + col]
    }

    /// The extremal eigenvector as a band-limited function.
    pub fn extremal_function(&self, geometry: &TorusGeometry) -> Result<BandLimitedFunction> {
        let pairs: Vec<(FrequencyIndex, Complex64)> = self
            .frequencies
            .iter()
            .cloned()
            .zip(self.extremal.iter().cloned())
            .collect();
        BandLimitedFunction::from_pairs(*geometry, &pairs)
    }

    /// Report text used by the experiment driver.
    pub fn report_text(&self, geometry: &TorusGeometry) -> String {
        let mut out = String::new();
        out.push_str(&format!("matrix_dim {}\n", self.matrix_dim()));
        out.push_str(&format!("lambda_min {:?}\n", self.lambda_min));
        out.push_str(&format!("lambda_max {:?}\n", self.lambda_max));
        out.push_str(&format!("trace {:?}\n", self.trace));
        out.push_str(&format!("eigen_residual {:?}\n", self.eigen_residual));
        out.push_str(&format!("hermiticity_defect {:?}\n", self.hermiticity_defect));
        out.push_str("extremal_coefficients\n");
        if let Ok(f) = self.extremal_function(geometry) {
            out.push_str(&f.to_text());
        }
        out
    }
}

/// Builds the concentration matrix with one fast transform of the indicator
/// and diagonalizes it.
pub fn build_concentration(
    set: &GridSet,
    band: &BandSpec,
    geometry: &TorusGeometry,
) -> Result<ConcentrationResult> {
    if set.geometry() != geometry {
        return Err(Error::Set("set lives on a different grid".into()));
    }
    let lattice: Vec<FrequencyIndex> = band.lattice_frequencies(geometry).into_iter().collect();
    if lattice.is_empty() {
        return Err(Error::Band("band contains no lattice frequencies".into()));
    }
    if lattice.len() > MAX_MATRIX_DIM {
        return Err(Error::Band(format!(
            "band lattice has {} points, cap is {MAX_MATRIX_DIM}",
            lattice.len()
        )));
    }
    let max_k = lattice.iter().map(|k| k.max_abs_component()).max().unwrap_or(0);
    geometry.require_oversampled(max_k)?;

    // Fourier coefficients of the indicator, one fast transform
    let n = geometry.samples_per_axis();
    let d = geometry.dim();
    let mut grid: Vec<Complex64> = set
        .indicator()
        .iter()
        .map(|&b| if b { Complex64::new(1.0, 0.0) } else { Complex64::default() })
        .collect();
    fft_nd_in_place(&mut grid, geometry, -1.0);
    let scale = 1.0 / geometry.grid_len() as f64;
    let indicator_coeff = |delta: [i64; 3]| -> Complex64 {
        let mut bin = 0usize;
        for axis in 0..d {
            bin = bin * n + delta[axis].rem_euclid(n as i64) as usize;
        }
        grid[bin] * scale * half_sample_phase(&delta[..d], n, -1.0)
    };

    let m = lattice.len();
    let mut matrix = vec![Complex64::default(); m * m];
    for (r, kr) in lattice.iter().enumerate() {
        for (c, kc) in lattice.iter().enumerate() {
            let mut delta = [0i64; 3];
            for axis in 0..d {
                delta[axis] = kr.component(axis) - kc.component(axis);
            }
            matrix[r * m + c] = indicator_coeff(delta);
        }
    }

    // enforce Hermiticity, recording the rounding defect
    let mut defect = 0.0f64;
    for r in 0..m {
        for c in 0..=r {
            let a = matrix[r * m + c];
            let b = matrix[c * m + r].conj();
            defect = defect.max((a - b).norm());
            let avg = (a + b) * 0.5;
            matrix[r * m + c] = avg;
            matrix[c * m + r] = avg.conj();
        }
    }

    let eig = hermitian_eigen(&matrix, m);
    let lambda_min = eig.values[0];
    let lambda_max = eig.values[m - 1];
    let residual_min = eigen_residual(&matrix, m, lambda_min, &eig.vectors[0]);
    let residual_max = eigen_residual(&matrix, m, lambda_max, &eig.vectors[m - 1]);
    let trace: f64 = (0..m).map(|i| matrix[i * m + i].re).sum();

    Ok(ConcentrationResult {
        frequencies: lattice,
        matrix,
        lambda_min,
        lambda_max,
        extremal: eig.vectors[0].clone(),
        eigen_residual: residual_min.max(residual_max),
        hermiticity_defect: defect,
        trace,
    })
}

/// `‖f‖_{L^p(S∩T)} / ‖f‖_{L^p(T)} ∈ (0, 1]` on the grid.
pub fn empirical_ratio(f: &BandLimitedFunction, set: &GridSet, p: Lp) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("ratio of the zero function".into()));
    }
    let values = f.synthesize();
    let total = lp_norm(&values, f.geometry(), p, None);
    if total == 0.0 {
        return Err(Error::InvalidArgument("zero norm on the grid".into()));
    }
    Ok(lp_norm(&values, f.geometry(), p, Some(set)) / total)
}
