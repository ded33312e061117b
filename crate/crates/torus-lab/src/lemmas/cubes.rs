//! Unit-cube cover of the torus and the good/bad cube machinery.
//!
//! The torus is covered by unit cubes anchored at integer corners; at most
//! two cubes per axis overlap any point (the wrap-around tail of the last
//! cube), so summed cube masses overcount the total by at most `2^d`. A cube
//! is good when every derivative up to the truncation order obeys the
//! amplified Bernstein threshold; bad cubes carry a bounded share of the
//! total mass, which is what makes the good ones usable.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::BandLimitedFunction;
use crate::geometry::{TorusGeometry, MAX_DIM};
use crate::norms::Lp;

/// Default truncation of the multi-index quantifier.
pub const DEFAULT_ALPHA_MAX: u32 = 12;

/// Unit-cube cover with per-cube cell lists.
#[derive(Debug, Clone)]
pub struct CubeCover {
    geometry: TorusGeometry,
    cubes_per_axis: usize,
    cube_cells: Vec<Vec<usize>>,
}

impl CubeCover {
    pub fn new(geometry: &TorusGeometry) -> Result<Self> {
        let side = geometry.side();
        if side < 1.0 {
            return Err(Error::Geometry(format!(
                "unit-cube cover needs 2πL ≥ 1, torus side is {side}"
            )));
        }
        let cubes_per_axis = side.ceil() as usize;
        let d = geometry.dim();
        let cube_count = cubes_per_axis.pow(d as u32);
        let mut cube_cells: Vec<Vec<usize>> = vec![Vec::new(); cube_count];

        for cell in 0..geometry.grid_len() {
            let center = geometry.cell_center_flat(cell);
            // per-axis cube memberships: the containing cube, plus the wrap
            // tail of the last cube when the side is not an integer
            let mut memberships: [[usize; 2]; MAX_DIM] = [[0, 0]; MAX_DIM];
            let mut counts = [0usize; MAX_DIM];
            for axis in 0..d {
                let x = center[axis];
                let j = x.floor() as usize;
                memberships[axis][0] = j.min(cubes_per_axis - 1);
                counts[axis] = 1;
                let wrapped = x + side;
                if wrapped < cubes_per_axis as f64 {
                    memberships[axis][1] = wrapped.floor() as usize;
                    counts[axis] = 2;
                }
            }
            let combos: usize = counts[..d].iter().product();
            for combo in 0..combos {
                let mut rest = combo;
                let mut cube = 0usize;
                for axis in 0..d {
                    let pick = rest % counts[axis];
                    rest /= counts[axis];
                    cube = cube * cubes_per_axis + memberships[axis][pick];
                }
                cube_cells[cube].push(cell);
            }
        }
        Ok(Self { geometry: *geometry, cubes_per_axis, cube_cells })
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geometry
    }

    pub fn cubes_per_axis(&self) -> usize {
        self.cubes_per_axis
    }

    pub fn cube_count(&self) -> usize {
        self.cube_cells.len()
    }

    pub fn cells(&self, cube: usize) -> &[usize] {
        &self.cube_cells[cube]
    }

    pub fn cube_coords(&self, cube: usize) -> [usize; MAX_DIM] {
        let d = self.geometry.dim();
        let mut c = [0usize; MAX_DIM];
        let mut rest = cube;
        for axis in (0..d).rev() {
            c[axis] = rest % self.cubes_per_axis;
            rest /= self.cubes_per_axis;
        }
        c
    }

    /// Integer corner of the cube as coordinates.
    pub fn cube_corner(&self, cube: usize) -> [f64; MAX_DIM] {
        let coords = self.cube_coords(cube);
        let mut corner = [0.0; MAX_DIM];
        for axis in 0..self.geometry.dim() {
            corner[axis] = coords[axis] as f64;
        }
        corner
    }

    /// `‖g‖_{L^p(cube)}` from grid samples (the p-th power for finite p is
    /// `mass^{1/p}` with midpoint quadrature).
    pub fn cube_norm(&self, values: &[Complex64], cube: usize, p: Lp) -> f64 {
        match p {
            Lp::Infinity => {
                self.cube_cells[cube].iter().map(|&c| values[c].norm()).fold(0.0, f64::max)
            }
            Lp::Finite(p) => {
                let sum: f64 =
                    self.cube_cells[cube].iter().map(|&c| values[c].norm().powf(p)).sum();
                (sum * self.geometry.cell_volume()).powf(1.0 / p)
            }
        }
    }
}

/// All multi-indices with `1 ≤ |α| ≤ max_total` (or from 0 when asked).
pub fn multi_indices(dim: usize, max_total: u32, include_zero: bool) -> Vec<[u32; MAX_DIM]> {
    let mut out = Vec::new();
    let mut alpha = [0u32; MAX_DIM];
    loop {
        let total: u32 = alpha[..dim].iter().sum();
        if total <= max_total && (include_zero || total > 0) {
            out.push(alpha);
        }
        // odometer increment bounded by max_total per axis
        let mut axis = 0;
        loop {
            if axis == dim {
                return out;
            }
            alpha[axis] += 1;
            if alpha[..dim].iter().sum::<u32>() <= max_total {
                break;
            }
            alpha[axis] = 0;
            axis += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeInfo {
    pub coords: [usize; MAX_DIM],
    pub good: bool,
    /// `‖f‖^p_{L^p(cube)}` for finite `p`; the cube sup for `p = ∞`.
    pub mass: f64,
}

#[derive(Debug, Clone)]
pub struct CubeClassification {
    pub cubes: Vec<CubeInfo>,
    pub alpha_max: u32,
    /// Upper estimate for the mass-share of derivative orders beyond the
    /// truncation, `2^{-d} Σ_{|α| > α_max} #{|α|} A^{-p|α|}`.
    pub tail_bound: f64,
    /// `‖f‖^p_{L^p(T)}` (finite `p`) or the global sup (`p = ∞`).
    pub total_mass: f64,
    /// Mass summed over bad cubes (finite `p`) or their sup (`p = ∞`).
    pub bad_mass: f64,
    pub bad_count: usize,
}

/// Labels every cube of the cover good or bad by the amplified Bernstein
/// thresholds, truncated at `|α| ≤ alpha_max`, and returns per-cube masses.
pub fn classify_cubes(
    f: &BandLimitedFunction,
    p: Lp,
    a_factor: f64,
    c_b: f64,
    alpha_max: u32,
) -> Result<CubeClassification> {
    if a_factor <= 1.0 {
        return Err(Error::InvalidArgument("amplification factor must exceed 1".into()));
    }
    if c_b < 1.0 {
        return Err(Error::InvalidArgument("Bernstein constant must be at least 1".into()));
    }
    let geometry = f.geometry();
    let d = geometry.dim();
    let cover = CubeCover::new(geometry)?;
    let envelope = f.support_envelope();

    let values = f.synthesize();
    let cube_norm_f: Vec<f64> =
        (0..cover.cube_count()).map(|c| cover.cube_norm(&values, c, p)).collect();
    let prefactor = match p {
        Lp::Finite(p) => 2.0f64.powf(2.0 * d as f64 / p),
        Lp::Infinity => 2.0f64.powi(2 * d as i32),
    };

    let mut good = vec![true; cover.cube_count()];
    for alpha in multi_indices(d, alpha_max, false) {
        let derivative = f.partial_derivative(&alpha[..d]).synthesize();
        let order: u32 = alpha[..d].iter().sum();
        let mut scale = prefactor * a_factor.powi(order as i32);
        for axis in 0..d {
            scale *= (c_b * envelope[axis]).powi(alpha[axis] as i32);
        }
        for cube in 0..cover.cube_count() {
            if !good[cube] {
                continue;
            }
            let lhs = cover.cube_norm(&derivative, cube, p);
            let threshold = scale * cube_norm_f[cube];
            if !(lhs < threshold || lhs == 0.0) {
                good[cube] = false;
            }
        }
    }

    let (total_mass, masses): (f64, Vec<f64>) = match p {
        Lp::Finite(pf) => {
            let total: f64 = values.iter().map(|v| v.norm().powf(pf)).sum::<f64>()
                * geometry.cell_volume();
            let masses =
                (0..cover.cube_count()).map(|c| cube_norm_f[c].powf(pf)).collect();
            (total, masses)
        }
        Lp::Infinity => {
            let total = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
            (total, cube_norm_f.clone())
        }
    };

    let mut bad_mass = 0.0;
    let mut bad_count = 0;
    let mut cubes = Vec::with_capacity(cover.cube_count());
    for cube in 0..cover.cube_count() {
        if !good[cube] {
            bad_count += 1;
            match p {
                Lp::Finite(_) => bad_mass += masses[cube],
                Lp::Infinity => bad_mass = f64::max(bad_mass, masses[cube]),
            }
        }
        cubes.push(CubeInfo {
            coords: cover.cube_coords(cube),
            good: good[cube],
            mass: masses[cube],
        });
    }

    let p_eff = match p {
        Lp::Finite(pf) => pf,
        Lp::Infinity => 1.0,
    };
    let tail_bound = truncation_tail(d, alpha_max, a_factor.powf(p_eff));

    Ok(CubeClassification { cubes, alpha_max, tail_bound, total_mass, bad_mass, bad_count })
}

/// `2^{-d} Σ_{s > α_max} #{|α| = s} x^{-s}` for `x = A^p > 1`.
fn truncation_tail(dim: usize, alpha_max: u32, x: f64) -> f64 {
    let ratio = 1.0 / x;
    let mut sum = 0.0;
    let mut s = alpha_max + 1;
    loop {
        let count = match dim {
            1 => 1.0,
            2 => (s + 1) as f64,
            3 => ((s + 1) * (s + 2)) as f64 / 2.0,
            _ => unreachable!(),
        };
        let term = count * ratio.powi(s as i32);
        sum += term;
        if term < 1e-18 || s > alpha_max + 400 {
            break;
        }
        s += 1;
    }
    sum / 2.0f64.powi(dim as i32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaylorDiscReport {
    /// Grid point satisfying the pointwise derivative bounds, if any.
    pub witness: Option<Vec<f64>>,
    /// Sampled max of `|f|` over the polydisc of radius 4.5 around the cube.
    pub disc_max: f64,
    /// `2^{3d/p} · exp(5·B·C_B·|b|_1) · ‖f‖_{L^p(cube)}`.
    pub bound: f64,
    pub pass: bool,
    /// No grid point satisfied the truncated bounds; not a failure verdict.
    pub inconclusive: bool,
}

/// On a good cube, finds a point whose derivatives obey the `B`-amplified
/// bounds and checks the Taylor growth estimate on the surrounding polydisc
/// via the entire extension of `f`.
pub fn good_cube_taylor_bound(
    f: &BandLimitedFunction,
    cover: &CubeCover,
    cube: usize,
    p: Lp,
    b_factor: f64,
    c_b: f64,
    alpha_max: u32,
) -> Result<TaylorDiscReport> {
    let geometry = f.geometry();
    let d = geometry.dim();
    if cube >= cover.cube_count() {
        return Err(Error::InvalidArgument("cube index out of range".into()));
    }
    let envelope = f.support_envelope();
    let values = f.synthesize();
    let norm_cube = cover.cube_norm(&values, cube, p);
    if norm_cube == 0.0 {
        return Err(Error::InvalidArgument("cube carries no mass".into()));
    }
    let prefactor = match p {
        Lp::Finite(pf) => 2.0f64.powf(3.0 * d as f64 / pf),
        Lp::Infinity => 1.0,
    };

    // pointwise thresholds per derivative order
    let alphas = multi_indices(d, alpha_max, true);
    let derivative_grids: Vec<Vec<Complex64>> =
        alphas.iter().map(|a| f.partial_derivative(&a[..d]).synthesize()).collect();
    let thresholds: Vec<f64> = alphas
        .iter()
        .map(|a| {
            let order: u32 = a[..d].iter().sum();
            let mut t = prefactor * b_factor.powi(order as i32) * norm_cube;
            for axis in 0..d {
                t *= (c_b * envelope[axis]).powi(a[axis] as i32);
            }
            t
        })
        .collect();

    let mut witness = None;
    'cells: for &cell in cover.cells(cube) {
        for (grid, threshold) in derivative_grids.iter().zip(&thresholds) {
            let v = grid[cell].norm();
            if !(v <= threshold * (1.0 + 1e-12) || v == 0.0) {
                continue 'cells;
            }
        }
        witness = Some(geometry.cell_center_flat(cell)[..d].to_vec());
        break;
    }
    if witness.is_none() {
        return Ok(TaylorDiscReport {
            witness: None,
            disc_max: 0.0,
            bound: 0.0,
            pass: false,
            inconclusive: true,
        });
    }

    // distinguished boundary of the polydisc of radius 4.5 at the cube center
    let corner = cover.cube_corner(cube);
    let samples = match d {
        1 => 512,
        2 => 96,
        _ => 24,
    };
    let mut disc_max = 0.0f64;
    let mut idx = vec![0usize; d];
    loop {
        let mut z = [Complex64::default(); MAX_DIM];
        for axis in 0..d {
            let theta = 2.0 * std::f64::consts::PI * (idx[axis] as f64 + 0.5) / samples as f64;
            z[axis] = Complex64::new(corner[axis] + 0.5, 0.0)
                + Complex64::from_polar(4.5, theta);
        }
        disc_max = disc_max.max(f.evaluate_complex(&z[..d]).norm());
        let mut axis = 0;
        loop {
            if axis == d {
                break;
            }
            idx[axis] += 1;
            if idx[axis] < samples {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
        if axis == d {
            break;
        }
    }

    let envelope_l1: f64 = envelope.iter().sum();
    let bound = prefactor * (5.0 * b_factor * c_b * envelope_l1).exp() * norm_cube;
    let pass = disc_max <= bound * (1.0 + 1e-9);
    Ok(TaylorDiscReport { witness, disc_max, bound, pass, inconclusive: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::band::BandSpec;
    use crate::function::Ensemble;
    use crate::geometry::FrequencyIndex;

    #[test]
    fn cover_counts_cells_with_wrap_overlap() {
        let g = TorusGeometry::new(1, 1.0, 256).unwrap();
        let cover = CubeCover::new(&g).unwrap();
        // 2π -> 7 cubes on [0,7); the tail of cube 6 wraps onto [0, 7-2π)
        assert_eq!(cover.cubes_per_axis(), 7);
        let cells_assigned: usize = (0..7).map(|c| cover.cells(c).len()).sum();
        assert!(cells_assigned >= 256);
        assert!(cells_assigned <= 2 * 256);
    }

    #[test]
    fn multi_index_enumeration_counts() {
        assert_eq!(multi_indices(1, 12, false).len(), 12);
        assert_eq!(multi_indices(2, 12, false).len(), 13 * 14 / 2 - 1);
        assert_eq!(multi_indices(2, 12, true).len(), 13 * 14 / 2);
        // |α| ≤ 4 in three dimensions: C(7, 3) compositions
        assert_eq!(multi_indices(3, 4, true).len(), 35);
    }

    #[test]
    fn constant_function_makes_every_cube_good() {
        let g = TorusGeometry::new(1, 1.0, 128).unwrap();
        let f = BandLimitedFunction::from_pairs(
            g,
            &[(FrequencyIndex::zero(), Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let cls = classify_cubes(&f, Lp::Finite(2.0), 3.0, 1.0, 8).unwrap();
        assert_eq!(cls.bad_count, 0);
        assert!(cls.cubes.iter().all(|c| c.good));
    }

    #[test]
    fn single_mode_cubes_are_good_and_mass_bound_holds() {
        let g = TorusGeometry::new(1, 1.0, 256).unwrap();
        let f = BandLimitedFunction::from_pairs(
            g,
            &[(FrequencyIndex::d1(3), Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let cls = classify_cubes(&f, Lp::Finite(2.0), 3.0, 1.0, 12).unwrap();
        assert_eq!(cls.bad_count, 0);
        assert!(cls.bad_mass <= 0.5 * cls.total_mass + 1e-12);
    }

    #[test]
    fn random_functions_obey_the_bad_mass_bound() {
        let g = TorusGeometry::new(1, 2.0, 512).unwrap();
        let band = BandSpec::symmetric_1d(2.0).unwrap();
        for seed in 0..20 {
            let f = BandLimitedFunction::random(&band, g, Ensemble::UnitSphere, seed).unwrap();
            let cls = classify_cubes(&f, Lp::Finite(2.0), 3.0, 1.0, 12).unwrap();
            let slack = cls.total_mass * g.cell_volume().max(cls.tail_bound);
            assert!(
                cls.bad_mass <= 0.5 * cls.total_mass + slack,
                "seed {seed}: bad {} vs half {}",
                cls.bad_mass,
                0.5 * cls.total_mass
            );
        }
    }

    #[test]
    fn taylor_disc_bound_constant_function() {
        // f ≡ 1: any point works as witness and the disc max is 1
        let g = TorusGeometry::new(1, 1.0, 128).unwrap();
        let f = BandLimitedFunction::from_pairs(
            g,
            &[(FrequencyIndex::zero(), Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let cover = CubeCover::new(&g).unwrap();
        let report =
            good_cube_taylor_bound(&f, &cover, 2, Lp::Finite(2.0), 9.0, 1.0, 8).unwrap();
        assert!(report.witness.is_some());
        assert!((report.disc_max - 1.0).abs() < 1e-12);
        assert!(report.pass);
    }

    #[test]
    fn taylor_disc_bound_single_mode() {
        // e^{ix} on a good cube: |f(z)| ≤ e^{4.5} on the polydisc while the
        // bound is 2^{3/p}·e^{45·C_B}·‖f‖, enormously larger
        let g = TorusGeometry::new(1, 1.0, 256).unwrap();
        let f = BandLimitedFunction::from_pairs(
            g,
            &[(FrequencyIndex::d1(1), Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        let cover = CubeCover::new(&g).unwrap();
        let report =
            good_cube_taylor_bound(&f, &cover, 0, Lp::Finite(2.0), 9.0, 1.0, 12).unwrap();
        assert!(!report.inconclusive);
        assert!(report.witness.is_some());
        assert!((report.disc_max - 4.5f64.exp()).abs() < 0.2 * 4.5f64.exp());
        assert!(report.pass);
    }

    #[test]
    fn random_good_cubes_pass_taylor_bound() {
        let g = TorusGeometry::new(1, 1.0, 512).unwrap();
        let band = BandSpec::symmetric_1d(2.0).unwrap();
        let mut checked = 0;
        for seed in 0..10 {
            let f = BandLimitedFunction::random(&band, g, Ensemble::UnitSphere, 100 + seed)
                .unwrap();
            let cls = classify_cubes(&f, Lp::Finite(2.0), 3.0, 1.0, 12).unwrap();
            let cover = CubeCover::new(&g).unwrap();
            for (idx, info) in cls.cubes.iter().enumerate() {
                if info.good {
                    let report = good_cube_taylor_bound(
                        &f,
                        &cover,
                        idx,
                        Lp::Finite(2.0),
                        9.0,
                        1.0,
                        12,
                    )
                    .unwrap();
                    if !report.inconclusive {
                        assert!(report.pass, "seed {seed} cube {idx}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}
