//! Adversarial search for functions of minimal masked `L^p` mass:
//! projected (sub)gradient descent on the unit sphere of band coefficients.
//!
//! Every reported ratio is realized by an explicit coefficient vector, so it
//! is a certified upper bound on the optimal ratio and hence a lower bound
//! on the observability constant of the instance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::band::BandSpec;
use crate::error::{Error, Result};
use crate::function::BandLimitedFunction;
use crate::geometry::{FrequencyIndex, TorusGeometry};
use crate::sets::GridSet;
use crate::transform::{fft_nd_in_place, half_sample_phase};

/// Number of deterministic restarts (seeds `seed..seed+7`).
pub const RESTARTS: u64 = 8;

const ARMIJO_SLOPE: f64 = 1e-4;
const SHRINK: f64 = 0.5;
const STALL_LIMIT: usize = 6;

#[derive(Debug, Clone)]
pub struct ExtremalSearchResult {
    pub p: f64,
    /// Best achieved `‖f‖_{L^p(S∩T)} / ‖f‖_{L^p(T)}`.
    pub ratio: f64,
    /// Unit coefficient vector realizing `ratio`, paired with the lattice.
    pub coefficients: Vec<(FrequencyIndex, Complex64)>,
    /// Best-so-far ratio after each accepted step, across restarts.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl ExtremalSearchResult {
    pub fn extremal_function(&self, geometry: &TorusGeometry) -> Result<BandLimitedFunction> {
        BandLimitedFunction::from_pairs(*geometry, &self.coefficients)
    }
}

/// Minimizes the masked-to-total `L^p` norm ratio over unit-norm band
/// coefficients with backtracking line search and 8 deterministic restarts.
pub fn extremal_search(
    band: &BandSpec,
    set: &GridSet,
    geometry: &TorusGeometry,
    p: f64,
    seed: u64,
    max_iter: usize,
) -> Result<ExtremalSearchResult> {
    if !(1.0..f64::INFINITY).contains(&p) {
        return Err(Error::InvalidArgument(format!("search needs p in [1, ∞), got {p}")));
    }
    if set.geometry() != geometry {
        return Err(Error::Set("set lives on a different grid".into()));
    }
    let lattice: Vec<FrequencyIndex> = band.lattice_frequencies(geometry).into_iter().collect();
    if lattice.is_empty() {
        return Err(Error::Band("band contains no lattice frequencies".into()));
    }
    let max_k = lattice.iter().map(|k| k.max_abs_component()).max().unwrap_or(0);
    geometry.require_oversampled(max_k)?;

    let work = Workspace::new(geometry, set, &lattice, p);

    let mut best_ratio = f64::INFINITY;
    let mut best_coeffs = vec![Complex64::default(); lattice.len()];
    let mut history = Vec::new();
    let mut iterations = 0usize;
    let mut converged = false;
    let rayleigh = (p - 2.0).abs() < 1e-12;

    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart));
        let mut coeffs: Vec<Complex64> = (0..lattice.len())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        normalize(&mut coeffs);

        let mut ratio = work.ratio(&coeffs);
        if ratio < best_ratio {
            best_ratio = ratio;
            best_coeffs = coeffs.clone();
        }
        history.push(best_ratio);
        let mut step = 1.0f64;
        let mut stall = 0usize;
        let mut local_converged = false;
        let mut previous_step: Option<Vec<Complex64>> = None;

        for _ in 0..max_iter {
            iterations += 1;
            let grad = work.ratio_gradient(&coeffs);
            let tangent = project_tangent(&grad, &coeffs);
            let tangent_sq: f64 = tangent.iter().map(|g| g.norm_sqr()).sum();
            if tangent_sq.sqrt() < 1e-14 * ratio.max(1e-30) {
                local_converged = true;
                break;
            }

            let mut accepted = false;
            if rayleigh {
                // Rayleigh-Ritz over span{c, gradient, previous step}: the
                // quotient restricted to the subspace is a small Hermitian
                // eigenproblem over the grid quadratic forms, so each step
                // takes the exact subspace minimizer (never worse than c)
                if let Some((candidate, cand_ratio)) =
                    work.subspace_minimizer(&coeffs, &tangent, previous_step.as_deref())
                {
                    let drop = ratio - cand_ratio;
                    if drop > 0.0 {
                        let direction: Vec<Complex64> = candidate
                            .iter()
                            .zip(&coeffs)
                            .map(|(a, b)| a - b)
                            .collect();
                        previous_step = Some(direction);
                        coeffs = candidate;
                        ratio = cand_ratio;
                        accepted = true;
                    }
                    if drop <= 1e-12 * ratio.max(1e-30) {
                        stall += 1;
                    } else {
                        stall = 0;
                    }
                }
            } else {
                // backtracking from an adaptively re-grown step
                step = (step * 4.0).min(1.0);
                for _ in 0..40 {
                    let mut candidate: Vec<Complex64> = coeffs
                        .iter()
                        .zip(&tangent)
                        .map(|(c, g)| c - g * step)
                        .collect();
                    normalize(&mut candidate);
                    let cand_ratio = work.ratio(&candidate);
                    if cand_ratio <= ratio - ARMIJO_SLOPE * step * tangent_sq {
                        let drop = ratio - cand_ratio;
                        coeffs = candidate;
                        ratio = cand_ratio;
                        accepted = true;
                        if drop <= 1e-15 * ratio.max(1e-30) {
                            stall += 1;
                        } else {
                            stall = 0;
                        }
                        break;
                    }
                    step *= SHRINK;
                }
            }
            if ratio < best_ratio {
                best_ratio = ratio;
                best_coeffs = coeffs.clone();
            }
            history.push(best_ratio);
            if !accepted {
                stall += 1;
            }
            if stall >= STALL_LIMIT {
                local_converged = true;
                break;
            }
        }
        converged |= local_converged;
    }

    Ok(ExtremalSearchResult {
        p,
        ratio: best_ratio,
        coefficients: lattice.into_iter().zip(best_coeffs).collect(),
        history,
        iterations,
        converged,
    })
}

/// Precomputed scatter/synthesis machinery for one instance.
struct Workspace<'a> {
    geometry: &'a TorusGeometry,
    set: &'a GridSet,
    bins: Vec<usize>,
    phases: Vec<Complex64>,
    p: f64,
}

impl<'a> Workspace<'a> {
    fn new(
        geometry: &'a TorusGeometry,
        set: &'a GridSet,
        lattice: &[FrequencyIndex],
        p: f64,
    ) -> Self {
        let n = geometry.samples_per_axis();
        let d = geometry.dim();
        let mut bins = Vec::with_capacity(lattice.len());
        let mut phases = Vec::with_capacity(lattice.len());
        for k in lattice {
            let mut bin = 0usize;
            for axis in 0..d {
                bin = bin * n + k.component(axis).rem_euclid(n as i64) as usize;
            }
            bins.push(bin);
            phases.push(half_sample_phase(&k.components()[..d], n, 1.0));
        }
        Self { geometry, set, bins, phases, p }
    }

    fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut grid = vec![Complex64::default(); self.geometry.grid_len()];
        for ((bin, phase), c) in self.bins.iter().zip(&self.phases).zip(coeffs) {
            grid[*bin] += c * phase;
        }
        fft_nd_in_place(&mut grid, self.geometry, 1.0);
        grid
    }

    /// `(Σ |f|^p vol)` over the masked cells and over all cells.
    fn power_sums(&self, values: &[Complex64]) -> (f64, f64) {
        let vol = self.geometry.cell_volume();
        let mut masked = 0.0;
        let mut total = 0.0;
        for (idx, v) in values.iter().enumerate() {
            let w = v.norm().powf(self.p);
            total += w;
            if self.set.contains(idx) {
                masked += w;
            }
        }
        (masked * vol, total * vol)
    }

    fn ratio(&self, coeffs: &[Complex64]) -> f64 {
        let values = self.synthesize(coeffs);
        let (masked, total) = self.power_sums(&values);
        (masked / total).powf(1.0 / self.p)
    }

    /// Wirtinger gradient `∂ρ/∂c̄` of the ratio at `coeffs`.
    ///
    /// With `P_A = Σ_A |f|^p vol`, one has `∂P_A/∂c̄_k = (p/2) vol ·
    /// Σ_{x∈A} |f|^{p-2} f(x) e^{-i(k/L)·x}`: an adjoint synthesis of the
    /// weight grid, evaluated with one fast transform. Cells where `f`
    /// vanishes contribute the zero subgradient.
    fn ratio_gradient(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let values = self.synthesize(coeffs);
        let (masked_p, total_p) = self.power_sums(&values);
        let p = self.p;
        let vol = self.geometry.cell_volume();
        let ns = masked_p.powf(1.0 / p);
        let nt = total_p.powf(1.0 / p);

        let mut weight_masked = vec![Complex64::default(); values.len()];
        let mut weight_total = vec![Complex64::default(); values.len()];
        for (idx, v) in values.iter().enumerate() {
            let a = v.norm();
            if a <= 1e-300 {
                continue;
            }
            let w = v * a.powf(p - 2.0);
            weight_total[idx] = w;
            if self.set.contains(idx) {
                weight_masked[idx] = w;
            }
        }
        let adj_masked = self.adjoint(&mut weight_masked);
        let adj_total = self.adjoint(&mut weight_total);

        // dNs = (vol/2)·P_S^{1/p-1}·T_S, same for the total norm
        let cs = 0.5 * vol * masked_p.powf(1.0 / p - 1.0);
        let ct = 0.5 * vol * total_p.powf(1.0 / p - 1.0);
        adj_masked
            .iter()
            .zip(&adj_total)
            .map(|(gm, gt)| (gm * cs) / nt - (gt * ct) * (ns / (nt * nt)))
            .collect()
    }

    /// `T[k] = Σ_x W(x) e^{-i(k/L)·x}` for all lattice points at once.
    fn adjoint(&self, weights: &mut [Complex64]) -> Vec<Complex64> {
        fft_nd_in_place(weights, self.geometry, -1.0);
        self.bins
            .iter()
            .zip(&self.phases)
            .map(|(bin, phase)| weights[*bin] * phase.conj())
            .collect()
    }

    /// Exact `p = 2` minimizer over the complex span of the current iterate,
    /// the gradient and the previous step.
    ///
    /// After orthonormalizing the basis in coefficient space, Plancherel
    /// makes the total-mass Gram the identity, so the restricted squared
    /// ratio is the Rayleigh quotient of the small Hermitian matrix
    /// `M_ij = ∫_S f_i conj(f_j) / (2πL)^d` of masked pairings.
    fn subspace_minimizer(
        &self,
        coeffs: &[Complex64],
        tangent: &[Complex64],
        previous: Option<&[Complex64]>,
    ) -> Option<(Vec<Complex64>, f64)> {
        let mut basis: Vec<Vec<Complex64>> = vec![coeffs.to_vec()];
        let mut candidates: Vec<&[Complex64]> = vec![tangent];
        if let Some(prev) = previous {
            candidates.push(prev);
        }
        for cand in candidates {
            let mut v = cand.to_vec();
            for b in &basis {
                let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (slot, x) in v.iter_mut().zip(b) {
                    *slot -= x * overlap;
                }
            }
            let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-12 {
                for slot in v.iter_mut() {
                    *slot /= norm;
                }
                basis.push(v);
            }
        }
        if basis.len() < 2 {
            return None;
        }

        let grids: Vec<Vec<Complex64>> = basis.iter().map(|b| self.synthesize(b)).collect();
        let dim = basis.len();
        let mut masked_gram = vec![Complex64::default(); dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                // x^H M x must equal ∫_S |Σ x_i f_i|², so M_ij pairs the
                // j-th function against the conjugated i-th
                let mut acc = Complex64::default();
                for (idx, (a, b)) in grids[i].iter().zip(&grids[j]).enumerate() {
                    if self.set.contains(idx) {
                        acc += b * a.conj();
                    }
                }
                // divide by N^d: together with Plancherel this makes the
                // total-mass Gram exactly the identity
                acc /= self.geometry.grid_len() as f64;
                masked_gram[i * dim + j] = acc;
                masked_gram[j * dim + i] = acc.conj();
            }
        }
        let eig = crate::concentration::hermitian_eigen(&masked_gram, dim);
        let weights = &eig.vectors[0];
        let mut combo = vec![Complex64::default(); coeffs.len()];
        for (w, b) in weights.iter().zip(&basis) {
            for (slot, x) in combo.iter_mut().zip(b) {
                *slot += w * x;
            }
        }
        normalize(&mut combo);
        let lambda = eig.values[0].max(0.0);
        Some((combo, lambda.powf(1.0 / self.p)))
    }
}

fn normalize(coeffs: &mut [Complex64]) {
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for c in coeffs.iter_mut() {
            *c /= norm;
        }
    } else {
        coeffs[0] = Complex64::new(1.0, 0.0);
    }
}

fn project_tangent(grad: &[Complex64], coeffs: &[Complex64]) -> Vec<Complex64> {
    let overlap: Complex64 = coeffs.iter().zip(grad).map(|(c, g)| c.conj() * g).sum();
    let along = overlap.re;
    grad.iter().zip(coeffs).map(|(g, c)| g - c * along).collect()
}
