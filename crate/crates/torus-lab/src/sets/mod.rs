//! Measurable sets on the sampling grid: indicators, equidistributed ball
//! unions, thickness scans, line-segment densities and shell covers.
//!
//! Sets are periodic bit masks over the `N^d` grid. Measures and window
//! counts are exact at grid resolution; every tolerance downstream is
//! expressed in grid-cell volumes.

mod line_segment;
mod shell;
mod thickness;

pub use line_segment::{best_line_segment, LineSegmentReport};
pub use shell::{shell_cover_count, ShellCoverReport};
pub use thickness::{thickness_scan, ThicknessReport};

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{TorusGeometry, MAX_DIM};

/// Volume of the unit ball in `d` dimensions.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => panic!("dimension out of range"),
    }
}

/// Surface measure of the unit sphere `S^{d-1}`.
pub fn unit_sphere_area(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("dimension out of range"),
    }
}

/// Optional closed-form description carried alongside the indicator.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticSet {
    BallUnion { centers: Vec<[f64; MAX_DIM]>, radius: f64 },
}

/// Periodic indicator of a measurable set on the sampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSet {
    geometry: TorusGeometry,
    indicator: Vec<bool>,
    analytic: Option<AnalyticSet>,
}

impl GridSet {
    pub fn empty(geometry: TorusGeometry) -> Self {
        Self { indicator: vec![false; geometry.grid_len()], geometry, analytic: None }
    }

    pub fn full(geometry: TorusGeometry) -> Self {
        Self { indicator: vec![true; geometry.grid_len()], geometry, analytic: None }
    }

    pub fn from_indicator(geometry: TorusGeometry, indicator: Vec<bool>) -> Result<Self> {
        if indicator.len() != geometry.grid_len() {
            return Err(Error::Set(format!(
                "indicator has {} cells, geometry expects {}",
                indicator.len(),
                geometry.grid_len()
            )));
        }
        Ok(Self { geometry, indicator, analytic: None })
    }

    /// Membership decided by the predicate at each cell center.
    pub fn from_predicate<F: Fn(&[f64]) -> bool>(geometry: TorusGeometry, f: F) -> Self {
        let indicator = (0..geometry.grid_len())
            .map(|i| f(&geometry.cell_center_flat(i)[..geometry.dim()]))
            .collect();
        Self { geometry, indicator, analytic: None }
    }

    pub fn geometry(&self) -> &TorusGeometry {
        &self.geometry
    }

    pub fn analytic(&self) -> Option<&AnalyticSet> {
        self.analytic.as_ref()
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.indicator[cell]
    }

    pub fn indicator(&self) -> &[bool] {
        &self.indicator
    }

    pub fn cell_count(&self) -> usize {
        self.indicator.iter().filter(|&&b| b).count()
    }

    /// Set measure `(count of set cells) × (2πL/N)^d`.
    pub fn measure(&self) -> f64 {
        self.cell_count() as f64 * self.geometry.cell_volume()
    }

    /// `|S| / |T^d_L|`.
    pub fn fraction(&self) -> f64 {
        self.cell_count() as f64 / self.geometry.grid_len() as f64
    }

    pub fn is_empty(&self) -> bool {
        !self.indicator.iter().any(|&b| b)
    }

    pub fn complement(&self) -> Self {
        Self {
            geometry: self.geometry,
            indicator: self.indicator.iter().map(|b| !b).collect(),
            analytic: None,
        }
    }

    pub fn union(&self, other: &GridSet) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            geometry: self.geometry,
            indicator: self.indicator.iter().zip(&other.indicator).map(|(a, b)| *a || *b).collect(),
            analytic: None,
        })
    }

    pub fn intersection(&self, other: &GridSet) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            geometry: self.geometry,
            indicator: self.indicator.iter().zip(&other.indicator).map(|(a, b)| *a && *b).collect(),
            analytic: None,
        })
    }

    pub fn is_subset_of(&self, other: &GridSet) -> bool {
        self.indicator.iter().zip(&other.indicator).all(|(a, b)| !*a || *b)
    }

    fn check_same_grid(&self, other: &GridSet) -> Result<()> {
        if self.geometry != other.geometry {
            return Err(Error::Set("sets live on different grids".into()));
        }
        Ok(())
    }

    /// Run-length encoded text form: header `d L N`, then `bit count` rows.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {}\n",
            self.geometry.dim(),
            self.geometry.scale(),
            self.geometry.samples_per_axis()
        );
        let mut i = 0;
        while i < self.indicator.len() {
            let bit = self.indicator[i];
            let mut run = 0;
            while i + run < self.indicator.len() && self.indicator[i + run] == bit {
                run += 1;
            }
            out.push_str(&format!("{} {}\n", u8::from(bit), run));
            i += run;
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty grid-set text".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse("grid-set header must be `d L N`".into()));
        }
        let d: usize = fields[0].parse().map_err(|_| Error::Parse("bad dimension".into()))?;
        let l: f64 = fields[1].parse().map_err(|_| Error::Parse("bad scale".into()))?;
        let n: usize = fields[2].parse().map_err(|_| Error::Parse("bad sample count".into()))?;
        let geometry = TorusGeometry::new(d, l, n)?;
        let mut indicator = Vec::with_capacity(geometry.grid_len());
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse(format!("bad run-length row: {line}")));
            }
            let bit = match fields[0] {
                "0" => false,
                "1" => true,
                other => return Err(Error::Parse(format!("bad bit value: {other}"))),
            };
            let run: usize = fields[1].parse().map_err(|_| Error::Parse("bad run length".into()))?;
            if indicator.len() + run > geometry.grid_len() {
                return Err(Error::Parse(format!(
                    "run lengths exceed the {} cells of the grid",
                    geometry.grid_len()
                )));
            }
            indicator.extend(std::iter::repeat_n(bit, run));
        }
        Self::from_indicator(geometry, indicator)
    }
}

/// How the ball centers of an equidistributed sequence are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqMode {
    /// Every center sits in the middle of its `G`-cell.
    Periodic,
    /// Centers drawn uniformly from the admissible sub-box of each cell.
    SeededRandom(u64),
}

/// One ball of radius `δ` per `G`-cell of the lattice partition; the
/// containment `B(z_j, δ) ⊂ Λ_G + j` is required for every cell.
#[derive(Debug, Clone, PartialEq)]
pub struct EquidistributedSeq {
    dim: usize,
    spacing: f64,
    radius: f64,
    cells_per_axis: usize,
    points: Vec<([usize; MAX_DIM], [f64; MAX_DIM])>,
}

impl EquidistributedSeq {
    /// Builds the sequence for a torus of side `cells_per_axis × G`.
    pub fn new(
        dim: usize,
        spacing: f64,
        radius: f64,
        cells_per_axis: usize,
        mode: SeqMode,
    ) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Set(format!("dimension {dim} out of range")));
        }
        if !(spacing > 0.0) {
            return Err(Error::Set("spacing G must be positive".into()));
        }
        if !(radius > 0.0 && radius <= spacing / 2.0) {
            return Err(Error::Set(format!(
                "radius δ must lie in (0, G/2], got δ={radius}, G={spacing}"
            )));
        }
        if cells_per_axis == 0 {
            return Err(Error::Set("need at least one cell per axis".into()));
        }
        let mut rng = match mode {
            SeqMode::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            SeqMode::Periodic => None,
        };
        if matches!(mode, SeqMode::SeededRandom(_)) && radius >= spacing / 2.0 {
            return Err(Error::Set("seeded-random mode needs δ < G/2".into()));
        }
        let cell_total = cells_per_axis.pow(dim as u32);
        let mut points = Vec::with_capacity(cell_total);
        for flat in 0..cell_total {
            let mut j = [0usize; MAX_DIM];
            let mut rest = flat;
            for axis in (0..dim).rev() {
                j[axis] = rest % cells_per_axis;
                rest /= cells_per_axis;
            }
            let mut z = [0.0; MAX_DIM];
            for axis in 0..dim {
                let base = j[axis] as f64 * spacing;
                z[axis] = match &mut rng {
                    None => base + spacing / 2.0,
                    Some(r) => base + r.gen_range(radius..=(spacing - radius)),
                };
            }
            points.push((j, z));
        }
        Ok(Self { dim, spacing, radius, cells_per_axis, points })
    }

    /// Explicit centers, one per cell index.
    pub fn from_points(
        dim: usize,
        spacing: f64,
        radius: f64,
        cells_per_axis: usize,
        points: Vec<([usize; MAX_DIM], [f64; MAX_DIM])>,
    ) -> Result<Self> {
        let seq = Self { dim, spacing, radius, cells_per_axis, points };
        seq.validate_containment()?;
        Ok(seq)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    pub fn points(&self) -> &[([usize; MAX_DIM], [f64; MAX_DIM])] {
        &self.points
    }

    /// Verifies `B(z_j, δ) ⊂ Λ_G + j` for every cell; reports the first
    /// offending cell index.
    pub fn validate_containment(&self) -> Result<()> {
        let tol = 1e-12 * self.spacing;
        for (j, z) in &self.points {
            for axis in 0..self.dim {
                let lo = j[axis] as f64 * self.spacing + self.radius;
                let hi = (j[axis] + 1) as f64 * self.spacing - self.radius;
                if z[axis] < lo - tol || z[axis] > hi + tol {
                    return Err(Error::Set(format!(
                        "ball at cell {:?} is not contained in its G-cell",
                        &j[..self.dim]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Point list text form: header `d G delta cells`, rows `j_1 … j_d z_1 … z_d`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.dim, self.spacing, self.radius, self.cells_per_axis);
        for (j, z) in &self.points {
            let mut row = String::new();
            for axis in 0..self.dim {
                row.push_str(&format!("{} ", j[axis]));
            }
            for axis in 0..self.dim {
                row.push_str(&format!("{}", z[axis]));
                if axis + 1 < self.dim {
                    row.push(' ');
                }
            }
            out.push_str(&row);
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty sequence text".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse("sequence header must be `d G delta cells`".into()));
        }
        let dim: usize = fields[0].parse().map_err(|_| Error::Parse("bad dimension".into()))?;
        let spacing: f64 = fields[1].parse().map_err(|_| Error::Parse("bad spacing".into()))?;
        let radius: f64 = fields[2].parse().map_err(|_| Error::Parse("bad radius".into()))?;
        let cells: usize = fields[3].parse().map_err(|_| Error::Parse("bad cell count".into()))?;
        let mut points = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 * dim {
                return Err(Error::Parse(format!("bad point row: {line}")));
            }
            let mut j = [0usize; MAX_DIM];
            let mut z = [0.0; MAX_DIM];
            for axis in 0..dim {
                j[axis] = fields[axis].parse().map_err(|_| Error::Parse("bad cell index".into()))?;
                z[axis] =
                    fields[dim + axis].parse().map_err(|_| Error::Parse("bad coordinate".into()))?;
            }
            points.push((j, z));
        }
        Self::from_points(dim, spacing, radius, cells, points)
    }
}

/// Rasterizes the ball union of an equidistributed sequence onto the grid.
///
/// A cell belongs to the set iff its center lies within distance `δ` of some
/// center; distances wrap around the torus unless `wrap` is false. The
/// sequence's cell partition must tile the torus exactly.
pub fn build_ball_union(
    seq: &EquidistributedSeq,
    geometry: &TorusGeometry,
    wrap: bool,
) -> Result<GridSet> {
    if seq.dim() != geometry.dim() {
        return Err(Error::Set("sequence and geometry dimensions differ".into()));
    }
    let side = geometry.side();
    let covered = seq.spacing() * seq.cells_per_axis() as f64;
    if (covered - side).abs() > 1e-9 * side {
        return Err(Error::Set(format!(
            "G-cells cover {covered}, torus side is {side}; G must divide the period"
        )));
    }
    seq.validate_containment()?;

    let d = geometry.dim();
    let n = geometry.samples_per_axis();
    let h = geometry.cell_width();
    let delta = seq.radius();
    let mut indicator = vec![false; geometry.grid_len()];

    // visit only the cells inside each ball's bounding box
    for (_, z) in seq.points() {
        let mut lo = [0i64; MAX_DIM];
        let mut len = [1usize; MAX_DIM];
        for axis in 0..d {
            lo[axis] = ((z[axis] - delta) / h - 1.0).floor() as i64;
            let hi = ((z[axis] + delta) / h + 1.0).ceil() as i64;
            len[axis] = (hi - lo[axis] + 1) as usize;
        }
        let total: usize = len[..d].iter().product();
        'cells: for flat in 0..total {
            let mut rest = flat;
            let mut coords = [0usize; MAX_DIM];
            let mut center = [0.0; MAX_DIM];
            for axis in (0..d).rev() {
                let raw = lo[axis] + (rest % len[axis]) as i64;
                rest /= len[axis];
                if wrap {
                    let wrapped = raw.rem_euclid(n as i64) as usize;
                    coords[axis] = wrapped;
                    center[axis] = (wrapped as f64 + 0.5) * h;
                } else {
                    if raw < 0 || raw >= n as i64 {
                        continue 'cells;
                    }
                    coords[axis] = raw as usize;
                    center[axis] = (raw as f64 + 0.5) * h;
                }
            }
            let dist = if wrap {
                geometry.torus_distance(&center[..d], &z[..d])
            } else {
                center[..d]
                    .iter()
                    .zip(&z[..d])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            };
            if dist <= delta {
                indicator[geometry.cell_index(&coords[..d])] = true;
            }
        }
    }

    let centers = seq.points().iter().map(|(_, z)| *z).collect();
    Ok(GridSet {
        geometry: *geometry,
        indicator,
        analytic: Some(AnalyticSet::BallUnion { centers, radius: delta }),
    })
}

/// Thickness density guaranteed by a `(G, δ)` ball union at window size
/// `a = (2G, …, 2G)`: every such window contains at least one full ball, so
/// the density is at least `ω_d δ^d / (2G)^d`.
pub fn ball_union_thickness(spacing: f64, radius: f64, dim: usize) -> Result<f64> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::Set(format!("dimension {dim} out of range")));
    }
    if !(radius > 0.0 && radius <= spacing / 2.0) {
        return Err(Error::Set(format!(
            "radius must lie in (0, G/2], got δ={radius}, G={spacing}"
        )));
    }
    Ok(unit_ball_volume(dim) * radius.powi(dim as i32) / (2.0 * spacing).powi(dim as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_of_half_torus() {
        let g = TorusGeometry::new(1, 1.0, 256).unwrap();
        let s = GridSet::from_predicate(g, |x| x[0] < PI);
        assert!((s.measure() - PI).abs() < g.cell_volume());
        assert!((s.fraction() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rle_roundtrip() {
        let g = TorusGeometry::new(2, 1.0, 16).unwrap();
        let s = GridSet::from_predicate(g, |x| x[0] + x[1] < 3.0);
        let text = s.to_text();
        let back = GridSet::from_text(&text).unwrap();
        assert_eq!(s.indicator(), back.indicator());
    }

    #[test]
    fn periodic_centers_are_contained() {
        let seq = EquidistributedSeq::new(2, 1.0, 0.5, 5, SeqMode::Periodic).unwrap();
        assert!(seq.validate_containment().is_ok());
        assert_eq!(seq.points().len(), 25);
    }

    #[test]
    fn seeded_mode_is_deterministic() {
        let a = EquidistributedSeq::new(2, 1.0, 0.3, 4, SeqMode::SeededRandom(7)).unwrap();
        let b = EquidistributedSeq::new(2, 1.0, 0.3, 4, SeqMode::SeededRandom(7)).unwrap();
        assert_eq!(a, b);
        let c = EquidistributedSeq::new(2, 1.0, 0.3, 4, SeqMode::SeededRandom(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sequence_text_round_trip() {
        let seq = EquidistributedSeq::new(2, 1.25, 0.3, 4, SeqMode::SeededRandom(21)).unwrap();
        let back = EquidistributedSeq::from_text(&seq.to_text()).unwrap();
        assert_eq!(seq, back);
    }

    #[test]
    fn containment_violation_is_reported() {
        let bad = EquidistributedSeq::from_points(
            1,
            1.0,
            0.4,
            2,
            vec![([0, 0, 0], [0.1, 0.0, 0.0]), ([1, 0, 0], [1.5, 0.0, 0.0])],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn disk_union_measure_matches_area() {
        // 2πL = 5, G = 1, δ = 0.4: 25 disks of area π·0.16
        let l = 5.0 / (2.0 * PI);
        let g = TorusGeometry::new(2, l, 256).unwrap();
        let seq = EquidistributedSeq::new(2, 1.0, 0.4, 5, SeqMode::Periodic).unwrap();
        let s = build_ball_union(&seq, &g, true).unwrap();
        let expected = 25.0 * PI * 0.16;
        assert!(
            (s.measure() - expected).abs() < 0.05 * expected,
            "measure {} vs {}",
            s.measure(),
            expected
        );
    }

    #[test]
    fn tiny_radius_gives_tiny_measure() {
        let l = 4.0 / (2.0 * PI);
        let g = TorusGeometry::new(1, l, 512).unwrap();
        let seq = EquidistributedSeq::new(1, 1.0, 0.01, 4, SeqMode::Periodic).unwrap();
        let s = build_ball_union(&seq, &g, true).unwrap();
        assert!(s.measure() <= 4.0 * 0.02 + 8.0 * g.cell_volume());
    }

    #[test]
    fn three_dimensional_ball_union_and_scan() {
        // 4³ balls of radius 0.4 in unit cells; torus side 4
        let l = 4.0 / (2.0 * PI);
        let g = TorusGeometry::new(3, l, 32).unwrap();
        let seq = EquidistributedSeq::new(3, 1.0, 0.4, 4, SeqMode::SeededRandom(19)).unwrap();
        let s = build_ball_union(&seq, &g, true).unwrap();
        let expected = 64.0 * unit_ball_volume(3) * 0.4f64.powi(3);
        assert!((s.measure() - expected).abs() < 0.1 * expected);

        let report = crate::sets::thickness_scan(&s, &[2.0, 2.0, 2.0]).unwrap();
        let guaranteed = ball_union_thickness(1.0, 0.4, 3).unwrap();
        assert!(report.gamma_est >= guaranteed - report.cell_slack);
        assert!(report.gamma_est <= s.fraction() + 1e-12);
    }

    #[test]
    fn contained_balls_are_wrap_agnostic() {
        // containment keeps every ball inside its cell, so the torus and
        // plain metrics must rasterize identically
        let l = 3.0 / (2.0 * PI);
        let g = TorusGeometry::new(2, l, 64).unwrap();
        let seq = EquidistributedSeq::new(2, 1.0, 0.45, 3, SeqMode::SeededRandom(4)).unwrap();
        let wrapped = build_ball_union(&seq, &g, true).unwrap();
        let flat = build_ball_union(&seq, &g, false).unwrap();
        assert_eq!(wrapped.indicator(), flat.indicator());
    }

    #[test]
    fn ball_union_thickness_values() {
        // d=1: ω_1 δ / (2G) = 2δ/(2G) = δ/G
        assert!((ball_union_thickness(1.0, 0.5, 1).unwrap() - 0.5).abs() < 1e-15);
        // d=2, G=1, δ=0.25: π/16 / 4
        let got = ball_union_thickness(1.0, 0.25, 2).unwrap();
        assert!((got - PI * 0.0625 / 4.0).abs() < 1e-15);
        assert!(ball_union_thickness(1.0, 0.6, 1).is_err());
    }
}
