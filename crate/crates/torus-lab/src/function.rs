//! Band-limited functions on the torus: finite maps from lattice
//! frequencies to complex coefficients, `f(x) = Σ_k c_k e^{i(k/L)·x}`.
//!
//! Coefficients are stored sparsely; bands are tiny relative to the grid.
//! Synthesis and analysis go through the fast transform and are exact (up to
//! rounding) under the oversampling invariant. The same finite sum defines
//! an entire function of `z ∈ C^d`, which is what the Taylor-disc estimates
//! evaluate.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::band::BandSpec;
use crate::error::{Error, Result};
use crate::geometry::{FrequencyIndex, TorusGeometry, MAX_DIM};
use crate::norms::{lp_norm, Lp};
use crate::sets::GridSet;
use crate::transform::{fft_nd_in_place, half_sample_phase};

/// Coefficient ensembles for random functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    /// i.i.d. standard complex Gaussian coefficients.
    ComplexGaussian,
    /// Gaussian draw normalized to `‖f‖_{L²(T^d_L)} = 1`.
    UnitSphere,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandLimitedFunction {
    geometry: TorusGeometry,
    coeffs: BTreeMap<FrequencyIndex, Complex64>,
}

impl BandLimitedFunction {
    pub fn new(geometry: TorusGeometry, coeffs: BTreeMap<FrequencyIndex, Complex64>) -> Result<Self> {
        let max_k = coeffs.keys().map(|k| k.max_abs_component()).max().unwrap_or(0);
        geometry.require_oversampled(max_k)?;
        for k in coeffs.keys() {
            for axis in geometry.dim()..MAX_DIM {
                if k.component(axis) != 0 {
                    return Err(Error::Band(format!(
                        "frequency {k:?} uses axis {axis} beyond dimension {}",
                        geometry.dim()
                    )));
                }
            }
        }
        Ok(Self { geometry, coeffs })
    }

    pub fn zero(geometry: TorusGeometry) -> Self {
        Self { geometry, coeffs: BTreeMap::new() }
    }

    pub fn from_pairs(
        geometry: TorusGeometry,
        pairs: &[(FrequencyIndex, Complex64)],
    ) -> Result<Self> {
        Self::new(geometry, pairs.iter().cloned().collect())
    }

    /// Deterministic random function supported on the band's lattice.
    pub fn random(
        band: &BandSpec,
        geometry: TorusGeometry,
        ensemble: Ensemble,
        seed: u64,
    ) -> Result<Self> {
        let lattice = band.lattice_frequencies(&geometry);
        if lattice.is_empty() {
            return Err(Error::Band("band contains no lattice frequencies".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = BTreeMap::new();
        for k in lattice {
            coeffs.insert(k, standard_complex_gaussian(&mut rng));
        }
        let mut f = Self::new(geometry, coeffs)?;
        if ensemble == Ensemble::UnitSphere {
            let norm = f.l2_norm_plancherel();
            if norm == 0.0 {
                return Err(Error::Band("degenerate zero draw".into()));
            }
            for c in f.coeffs.values_mut() {
                *c /= norm;
            }
        }
        Ok(f)
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geometry
    }

    pub fn coefficients(&self) -> &BTreeMap<FrequencyIndex, Complex64> {
        &self.coeffs
    }

    pub fn coefficient(&self, k: &FrequencyIndex) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.norm_sqr() == 0.0)
    }

    pub fn max_abs_frequency(&self) -> i64 {
        self.coeffs.keys().map(|k| k.max_abs_component()).max().unwrap_or(0)
    }

    pub fn is_supported_in(&self, band: &BandSpec) -> bool {
        let lattice = band.lattice_frequencies(&self.geometry);
        self.coeffs.keys().all(|k| lattice.contains(k))
    }

    /// Componentwise envelope `max_k |k_j| / L` of the support; the tightest
    /// `[-b, b]` box containing all physical frequencies.
    pub fn support_envelope(&self) -> Vec<f64> {
        let d = self.geometry.dim();
        let mut b = vec![0.0; d];
        for k in self.coeffs.keys() {
            for (j, slot) in b.iter_mut().enumerate() {
                *slot = f64::max(*slot, k.component(j).abs() as f64 / self.geometry.scale());
            }
        }
        b
    }

    /// Direct evaluation `Σ_k c_k e^{i(k/L)·x}` at a real point.
    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        let scale = self.geometry.scale();
        let d = self.geometry.dim();
        let mut sum = Complex64::default();
        for (k, c) in &self.coeffs {
            let mut phase = 0.0;
            for axis in 0..d {
                phase += k.component(axis) as f64 / scale * x[axis];
            }
            sum += c * Complex64::from_polar(1.0, phase);
        }
        sum
    }

    /// Entire extension: the same finite sum at `z ∈ C^d`.
    pub fn evaluate_complex(&self, z: &[Complex64]) -> Complex64 {
        let scale = self.geometry.scale();
        let d = self.geometry.dim();
        let mut sum = Complex64::default();
        for (k, c) in &self.coeffs {
            let mut w = Complex64::default();
            for axis in 0..d {
                w += z[axis] * (k.component(axis) as f64 / scale);
            }
            sum += c * (Complex64::i() * w).exp();
        }
        sum
    }

    /// Grid samples at all cell centers, by fast transform.
    pub fn synthesize(&self) -> Vec<Complex64> {
        let n = self.geometry.samples_per_axis();
        let d = self.geometry.dim();
        let mut grid = vec![Complex64::default(); self.geometry.grid_len()];
        for (k, c) in &self.coeffs {
            let mut bin = 0usize;
            for axis in 0..d {
                let idx = k.component(axis).rem_euclid(n as i64) as usize;
                bin = bin * n + idx;
            }
            // half-sample phase keeps the true k, not its residue
            grid[bin] += c * half_sample_phase(&k.components()[..d], n, 1.0);
        }
        fft_nd_in_place(&mut grid, &self.geometry, 1.0);
        grid
    }

    /// Grid samples and their `L^p` norm in one go.
    pub fn lp_norm(&self, p: Lp, mask: Option<&GridSet>) -> f64 {
        let values = self.synthesize();
        lp_norm(&values, &self.geometry, p, mask)
    }

    /// `‖f‖_{L²}` from the Plancherel identity, no grid involved.
    pub fn l2_norm_plancherel(&self) -> f64 {
        let sum: f64 = self.coeffs.values().map(|c| c.norm_sqr()).sum();
        (self.geometry.volume() * sum).sqrt()
    }

    /// Multiplies each coefficient by `Π_j (i k_j / L)^{α_j}`.
    pub fn partial_derivative(&self, alpha: &[u32]) -> Self {
        let scale = self.geometry.scale();
        let d = self.geometry.dim();
        debug_assert!(alpha.len() == d);
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            let mut factor = Complex64::new(1.0, 0.0);
            for axis in 0..d {
                let base = Complex64::new(0.0, k.component(axis) as f64 / scale);
                factor *= base.powu(alpha[axis]);
            }
            coeffs.insert(*k, c * factor);
        }
        Self { geometry: self.geometry, coeffs }
    }

    /// Shifts the whole coefficient map by the lattice vector `c`; this is
    /// multiplication by `e^{i(c/L)·x}` and preserves every `L^p` norm.
    pub fn modulate(&self, shift: &FrequencyIndex) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            coeffs.insert(k.translated(shift), *c);
        }
        Self::new(self.geometry, coeffs)
    }

    /// Text form with header lines `d`, `L`, `N` and one row
    /// `k_1 … k_d re im` per coefficient, in sorted key order.
    pub fn to_text(&self) -> String {
        let d = self.geometry.dim();
        let mut out = format!(
            "d {}\nL {:?}\nN {}\n",
            d,
            self.geometry.scale(),
            self.geometry.samples_per_axis()
        );
        for (k, c) in &self.coeffs {
            for axis in 0..d {
                out.push_str(&format!("{} ", k.component(axis)));
            }
            out.push_str(&format!("{:?} {:?}\n", c.re, c.im));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut d = None;
        let mut scale = None;
        let mut samples = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[0] {
                "d" if fields.len() == 2 => {
                    d = Some(fields[1].parse::<usize>().map_err(|_| bad_header(line))?)
                }
                "L" if fields.len() == 2 => {
                    scale = Some(fields[1].parse::<f64>().map_err(|_| bad_header(line))?)
                }
                "N" if fields.len() == 2 => {
                    samples = Some(fields[1].parse::<usize>().map_err(|_| bad_header(line))?)
                }
                _ => rows.push(fields.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            }
        }
        let d = d.ok_or_else(|| Error::Parse("missing header line `d`".into()))?;
        let scale = scale.ok_or_else(|| Error::Parse("missing header line `L`".into()))?;
        let samples = samples.ok_or_else(|| Error::Parse("missing header line `N`".into()))?;
        let geometry = TorusGeometry::new(d, scale, samples)?;
        let mut coeffs = BTreeMap::new();
        for row in rows {
            if row.len() != d + 2 {
                return Err(Error::Parse(format!("coefficient row needs {} fields", d + 2)));
            }
            let mut k = [0i64; MAX_DIM];
            for axis in 0..d {
                k[axis] = row[axis].parse().map_err(|_| Error::Parse("bad frequency".into()))?;
            }
            let re: f64 = row[d].parse().map_err(|_| Error::Parse("bad real part".into()))?;
            let im: f64 = row[d + 1].parse().map_err(|_| Error::Parse("bad imaginary part".into()))?;
            coeffs.insert(FrequencyIndex::from_components(&k[..d]), Complex64::new(re, im));
        }
        Self::new(geometry, coeffs)
    }
}

fn bad_header(line: &str) -> Error {
    Error::Parse(format!("bad header line: {line}"))
}

/// Reads grid samples back into coefficients on the band's lattice.
///
/// Inverse of [`BandLimitedFunction::synthesize`] for any function supported
/// in `band`; coefficients smaller than the rounding floor are dropped.
pub fn analyze(
    values: &[Complex64],
    geometry: &TorusGeometry,
    band: &BandSpec,
) -> Result<BandLimitedFunction> {
    if values.len() != geometry.grid_len() {
        return Err(Error::Geometry(format!(
            "expected {} samples, got {}",
            geometry.grid_len(),
            values.len()
        )));
    }
    if band.dim() != geometry.dim() {
        return Err(Error::Band("band and geometry dimensions differ".into()));
    }
    let lattice = band.lattice_frequencies(geometry);
    let max_k = lattice.iter().map(|k| k.max_abs_component()).max().unwrap_or(0);
    geometry.require_oversampled(max_k)?;

    let n = geometry.samples_per_axis();
    let d = geometry.dim();
    let mut grid = values.to_vec();
    fft_nd_in_place(&mut grid, geometry, -1.0);
    let norm = 1.0 / geometry.grid_len() as f64;
    let peak = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let floor = 1e-13 * (1.0 + peak);

    let mut coeffs = BTreeMap::new();
    for k in lattice {
        let mut bin = 0usize;
        for axis in 0..d {
            bin = bin * n + k.component(axis).rem_euclid(n as i64) as usize;
        }
        let c = grid[bin] * norm * half_sample_phase(&k.components()[..d], n, -1.0);
        if c.norm() > floor {
            coeffs.insert(k, c);
        }
    }
    BandLimitedFunction::new(*geometry, coeffs)
}

fn standard_complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    // Box-Muller from two uniforms; each real part has variance 1/2.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt() / 2.0f64.sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    Complex64::from_polar(r, theta)
}
