//! Space-time point clouds built from trajectories.
//!
//! A cell holding strategy `s` at iteration `t` becomes the integer point
//! `(x, y, t)`. Distances are kept exact: squared Euclidean distances with the
//! time axis scaled by a rational factor are stored as integers over a common
//! denominator.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::lattice::{Coord, Lattice, Strategy};
use crate::trajectory::Trajectory;

/// Exact non-negative rational, used for squared distances and scale factors.
pub type Squared = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationInterval {
    pub start: u64,
    pub end: u64,
}

impl IterationInterval {
    pub fn new(start: u64, end: u64) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidInterval { start, end });
        }
        Ok(IterationInterval { start, end })
    }

    /// The whole range covered by `traj`.
    pub fn full(traj: &Trajectory) -> Result<Self> {
        match (traj.first_t(), traj.last_t()) {
            (Some(a), Some(b)) => Ok(IterationInterval { start: a, end: b }),
            _ => Err(Error::Config("empty trajectory".into())),
        }
    }

    pub fn contains(&self, t: u64) -> bool {
        self.start <= t && t <= self.end
    }

    fn check_in(&self, traj: &Trajectory) -> Result<()> {
        let (first, last) = match (traj.first_t(), traj.last_t()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Config("empty trajectory".into())),
        };
        if self.start < first || self.end > last {
            return Err(Error::IntervalOutOfRange {
                start: self.start,
                end: self.end,
                first,
                last,
            });
        }
        Ok(())
    }
}

impl std::str::FromStr for IterationInterval {
    type Err = Error;

    /// Parses `A:B`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("interval must look like A:B, got '{s}'")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("invalid interval bound '{v}'")))
        };
        IterationInterval::new(parse(a)?, parse(b)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCloud {
    pub points: Vec<[i64; 3]>,
    /// Multiplier applied to the time axis.
    pub time_scale: Squared,
}

impl PointCloud {
    pub fn new(points: Vec<[i64; 3]>) -> Self {
        PointCloud {
            points,
            time_scale: Squared::from_integer(1),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,t\n");
        for [x, y, t] in &self.points {
            let _ = writeln!(out, "{x},{y},{t}");
        }
        out
    }
}

/// Collects one point per (cell, frame) in `iv` where the cell holds `s`.
pub fn extract_cloud(
    traj: &Trajectory,
    s: Strategy,
    iv: IterationInterval,
    time_scale: Squared,
) -> Result<PointCloud> {
    iv.check_in(traj)?;
    if time_scale <= Squared::from_integer(0) {
        return Err(Error::Config("time scale must be positive".into()));
    }
    let mut points = Vec::new();
    for frame in traj.frames().iter().filter(|f| iv.contains(f.t)) {
        let lat = &frame.lattice;
        for (i, cell) in lat.cells().iter().enumerate() {
            if cell.strategy == s {
                let c = lat.coord(i);
                points.push([c.x as i64, c.y as i64, frame.t as i64]);
            }
        }
    }
    Ok(PointCloud { points, time_scale })
}

/// Dense symmetric matrix of exact squared distances.
///
/// Entry `(i, j)` is `raw(i, j) / denom`, where `denom` is the squared
/// denominator of the time scale, so every raw entry is an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaredDistanceMatrix {
    n: usize,
    denom: u64,
    raw: Vec<u64>,
}

impl SquaredDistanceMatrix {
    /// Builds a matrix from raw integer entries over `denom`. Checks symmetry and
    /// the zero diagonal.
    pub fn from_raw(n: usize, denom: u64, raw: Vec<u64>) -> Result<Self> {
        if raw.len() != n * n || denom == 0 {
            return Err(Error::Config("distance matrix shape mismatch".into()));
        }
        for i in 0..n {
            if raw[i * n + i] != 0 {
                return Err(Error::Config(format!("nonzero diagonal entry at {i}")));
            }
            for j in 0..i {
                if raw[i * n + j] != raw[j * n + i] {
                    return Err(Error::Config(format!("asymmetric entry at ({i}, {j})")));
                }
            }
        }
        Ok(SquaredDistanceMatrix { n, denom, raw })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    /// Integer entry in units of `1 / denom`.
    #[inline]
    pub fn raw(&self, i: usize, j: usize) -> u64 {
        self.raw[i * self.n + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Squared {
        Squared::new(self.raw(i, j), self.denom)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        (self.raw(i, j) as f64 / self.denom as f64).sqrt()
    }

    /// Largest raw value not exceeding `bound` (a squared distance).
    pub fn raw_bound(&self, bound: Squared) -> u64 {
        let scaled =
            u128::from(*bound.numer()) * u128::from(self.denom) / u128::from(*bound.denom());
        scaled.min(u128::from(u64::MAX)) as u64
    }

    pub fn to_lower_triangular_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = (0..i).map(|j| format!("{}", self.distance(i, j))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn squared_distance_matrix(pc: &PointCloud) -> SquaredDistanceMatrix {
    let num = *pc.time_scale.numer();
    let den = *pc.time_scale.denom();
    let denom = den * den;
    let n = pc.points.len();
    let mut raw = vec![0u64; n * n];
    for i in 0..n {
        let [xi, yi, ti] = pc.points[i];
        for j in 0..i {
            let [xj, yj, tj] = pc.points[j];
            let dx = xi.abs_diff(xj);
            let dy = yi.abs_diff(yj);
            let dt = ti.abs_diff(tj) * num;
            let d = (dx * dx + dy * dy) * denom + dt * dt;
            raw[i * n + j] = d;
            raw[j * n + i] = d;
        }
    }
    SquaredDistanceMatrix { n, denom, raw }
}

/// A frame in which cells of other strategies sit on the lattice boundary while
/// being enclosed by the analyzed strategy elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeContact {
    pub t: u64,
    pub cells: Vec<Coord>,
}

/// Audits the edge-exclusion assumption for strategy `s` over `iv`.
///
/// A connected (8-neighborhood) group of non-`s` cells is flagged when it
/// touches the boundary, every cell adjacent to it is `s`, and it spans neither
/// the full width nor the full height. Such a group would form a hole or void
/// if it sat away from the edge, but is invisible to the topology here.
pub fn edge_contact_report(
    traj: &Trajectory,
    s: Strategy,
    iv: IterationInterval,
) -> Result<Vec<EdgeContact>> {
    iv.check_in(traj)?;
    let mut out = Vec::new();
    for frame in traj.frames().iter().filter(|f| iv.contains(f.t)) {
        let cells = embedded_edge_cells(&frame.lattice, s);
        if !cells.is_empty() {
            out.push(EdgeContact { t: frame.t, cells });
        }
    }
    Ok(out)
}

fn embedded_edge_cells(lat: &Lattice, s: Strategy) -> Vec<Coord> {
    let (w, h) = (lat.width(), lat.height());
    let mut seen = vec![false; lat.len()];
    let mut flagged = Vec::new();
    for start in 0..lat.len() {
        if seen[start] || lat.cells()[start].strategy == s {
            continue;
        }
        let mut component = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            let c = lat.coord(i);
            component.push(c);
            for n in lat.neighbors(c).expect("in bounds") {
                let j = lat.index(n);
                if lat.cells()[j].strategy == s {
                    continue;
                }
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        // Every 8-neighbor of the component outside it is `s` by construction of
        // the flood fill; the group is enclosed unless it spans the lattice.
        let touches = component
            .iter()
            .any(|c| c.x == 0 || c.y == 0 || c.x == w - 1 || c.y == h - 1);
        let (min_x, max_x) = min_max(component.iter().map(|c| c.x));
        let (min_y, max_y) = min_max(component.iter().map(|c| c.y));
        let enclosed = !(min_x == 0 && max_x == w - 1 || min_y == 0 && max_y == h - 1);
        if touches && enclosed && lat.count(s) > 0 {
            flagged.extend(
                component
                    .into_iter()
                    .filter(|c| c.x == 0 || c.y == 0 || c.x == w - 1 || c.y == h - 1),
            );
        }
    }
    flagged.sort();
    flagged
}

fn min_max(values: impl Iterator<Item = usize>) -> (usize, usize) {
    values.fold((usize::MAX, 0), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// First iteration from which per-cell strategies stay unchanged for `k`
/// further frames, if any.
pub fn frozen_from(traj: &Trajectory, k: usize) -> Option<u64> {
    let frames = traj.frames();
    if k == 0 {
        return frames.first().map(|f| f.t);
    }
    let mut run = 0;
    for i in 1..frames.len() {
        if frames[i].lattice.same_strategies(&frames[i - 1].lattice) {
            run += 1;
            if run >= k {
                return Some(frames[i - k].t);
            }
        } else {
            run = 0;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Cell, GameKind};
    use crate::trajectory::TrajectoryMeta;

    fn traj_of(lattices: &[Lattice]) -> Trajectory {
        let mut traj = Trajectory::new(TrajectoryMeta::new(GameKind::Pd));
        for (t, l) in lattices.iter().enumerate() {
            traj.record_frame(l, t as u64).unwrap();
        }
        traj
    }

    fn filled(w: usize, h: usize, s: Strategy) -> Lattice {
        Lattice::filled(w, h, Cell::new(s, 2)).unwrap()
    }

    fn one() -> Squared {
        Squared::from_integer(1)
    }

    #[test]
    fn full_occupancy_over_frames() {
        let lat = filled(7, 7, Strategy::Defector);
        let traj = traj_of(&vec![lat; 26]);
        let pc = extract_cloud(
            &traj,
            Strategy::Defector,
            IterationInterval::full(&traj).unwrap(),
            one(),
        )
        .unwrap();
        assert_eq!(pc.len(), 1274);
    }

    #[test]
    fn single_frame_counts_strategy_cells() {
        let mut lat = filled(10, 10, Strategy::Defector);
        for c in [(2, 2), (5, 6), (7, 3), (7, 4)] {
            lat.set_strategy(Coord::new(c.0, c.1), Strategy::Cooperator)
                .unwrap();
        }
        let traj = traj_of(&[lat]);
        let pc = extract_cloud(
            &traj,
            Strategy::Defector,
            IterationInterval::new(0, 0).unwrap(),
            one(),
        )
        .unwrap();
        assert_eq!(pc.len(), 96);
        assert!(pc.points.iter().all(|p| p[2] == 0));
    }

    #[test]
    fn absent_strategy_gives_empty_cloud() {
        let traj = traj_of(&[filled(3, 3, Strategy::Defector)]);
        let pc = extract_cloud(
            &traj,
            Strategy::TitForTat,
            IterationInterval::new(0, 0).unwrap(),
            one(),
        )
        .unwrap();
        assert!(pc.is_empty());
    }

    #[test]
    fn out_of_range_interval_is_an_error() {
        let traj = traj_of(&vec![filled(3, 3, Strategy::Defector); 3]);
        let err = extract_cloud(
            &traj,
            Strategy::Defector,
            IterationInterval::new(1, 5).unwrap(),
            one(),
        );
        assert!(matches!(err, Err(Error::IntervalOutOfRange { .. })));
        assert!(IterationInterval::new(4, 2).is_err());
        assert!("3:x".parse::<IterationInterval>().is_err());
        assert_eq!(
            "2:9".parse::<IterationInterval>().unwrap(),
            IterationInterval::new(2, 9).unwrap()
        );
    }

    #[test]
    fn squared_distances_match_reported_scales() {
        let pc = PointCloud::new(vec![[0, 0, 0], [1, 1, 0], [1, 2, 0], [1, 1, 2]]);
        let m = squared_distance_matrix(&pc);
        assert_eq!(m.get(0, 1), Squared::from_integer(2));
        assert_eq!(m.get(0, 2), Squared::from_integer(5));
        assert_eq!(m.get(0, 3), Squared::from_integer(6));
        assert_eq!(format!("{:.2}", m.distance(0, 1)), "1.41");
        assert_eq!(m.raw(2, 0), m.raw(0, 2));
        assert_eq!(m.raw(3, 3), 0);
    }

    #[test]
    fn rational_time_scale_stays_exact() {
        let mut pc = PointCloud::new(vec![[0, 0, 0], [1, 0, 1]]);
        pc.time_scale = Squared::new(1, 2);
        let m = squared_distance_matrix(&pc);
        assert_eq!(m.get(0, 1), Squared::new(5, 4));
        assert_eq!(m.raw_bound(Squared::new(5, 4)), m.raw(0, 1));
    }

    #[test]
    fn lower_triangular_export() {
        let m = squared_distance_matrix(&PointCloud::new(vec![[0, 0, 0], [3, 4, 0], [0, 0, 1]]));
        assert_eq!(m.to_lower_triangular_csv(), "\n5\n1,5.0990195135927845\n");
    }

    #[test]
    fn edge_contact_flags_boundary_clusters_only() {
        let mut interior = filled(7, 7, Strategy::Defector);
        interior
            .set_strategy(Coord::new(2, 2), Strategy::TitForTat)
            .unwrap();
        interior
            .set_strategy(Coord::new(4, 4), Strategy::TitForTat)
            .unwrap();
        let traj = traj_of(&[interior.clone()]);
        let iv = IterationInterval::new(0, 0).unwrap();
        assert!(edge_contact_report(&traj, Strategy::Defector, iv)
            .unwrap()
            .is_empty());

        let mut touching = interior;
        touching
            .set_strategy(Coord::new(0, 3), Strategy::TitForTat)
            .unwrap();
        touching
            .set_strategy(Coord::new(1, 3), Strategy::TitForTat)
            .unwrap();
        let traj = traj_of(&[touching.clone(), touching]);
        let report = edge_contact_report(
            &traj,
            Strategy::Defector,
            IterationInterval::new(0, 1).unwrap(),
        )
        .unwrap();
        assert_eq!(report.len(), 2);
        assert_eq!(report[0].cells, vec![Coord::new(0, 3)]);

        let single = traj_of(&[filled(5, 5, Strategy::Defector)]);
        assert!(edge_contact_report(&single, Strategy::Defector, iv)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn half_split_is_not_an_edge_contact() {
        let lat = Lattice::from_fn(6, 6, |c| {
            Cell::new(
                if c.x < 3 {
                    Strategy::Defector
                } else {
                    Strategy::TitForTat
                },
                2,
            )
        })
        .unwrap();
        let traj = traj_of(&[lat]);
        let report = edge_contact_report(
            &traj,
            Strategy::Defector,
            IterationInterval::new(0, 0).unwrap(),
        )
        .unwrap();
        assert!(report.is_empty());
    }

    #[test]
    fn frozen_detection() {
        let a = filled(3, 3, Strategy::Defector);
        let mut b = a.clone();
        b.set_strategy(Coord::new(1, 1), Strategy::Cooperator)
            .unwrap();
        let traj = traj_of(&[a.clone(), b.clone(), b.clone(), b.clone(), a]);
        assert_eq!(frozen_from(&traj, 2), Some(1));
        assert_eq!(frozen_from(&traj, 3), None);
    }
}
