//! Spectrum snapshots, families and nearest-point queries.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{PlanckValue, Point2, PointKey, Window};

/// Relative slack under which two candidate distances count as tied.
///
/// Only absorbs floating-point noise; see `AlgoConfig::tie_tolerance` for the
/// coarser tolerance used while labelling.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;

/// Uniform bucket grid over the snapshot window.
#[derive(Debug, Clone)]
struct Grid {
    x0: f64,
    y0: f64,
    cell: f64,
    nx: i64,
    ny: i64,
    start: Vec<u32>,
    items: Vec<u32>,
}

impl Grid {
    fn build(window: &Window, points: &[Point2]) -> Grid {
        let n = points.len().max(1) as f64;
        let area = window.width() * window.height();
        let mut cell = libm::sqrt(area / n);
        let max_cells = 2048.0;
        cell = cell
            .max(window.width() / max_cells)
            .max(window.height() / max_cells);
        let nx = (libm::ceil(window.width() / cell) as i64).max(1);
        let ny = (libm::ceil(window.height() / cell) as i64).max(1);
        let mut grid = Grid {
            x0: window.xmin,
            y0: window.ymin,
            cell,
            nx,
            ny,
            start: vec![0; (nx * ny + 1) as usize],
            items: vec![0; points.len()],
        };
        let cells: Vec<usize> = points
            .iter()
            .map(|p| {
                let (i, j) = grid.cell_of(*p);
                grid.flat(i.clamp(0, nx - 1), j.clamp(0, ny - 1))
            })
            .collect();
        for &c in &cells {
            grid.start[c + 1] += 1;
        }
        for c in 0..(nx * ny) as usize {
            grid.start[c + 1] += grid.start[c];
        }
        let mut fill = grid.start.clone();
        for (idx, &c) in cells.iter().enumerate() {
            grid.items[fill[c] as usize] = idx as u32;
            fill[c] += 1;
        }
        grid
    }

    fn cell_of(&self, p: Point2) -> (i64, i64) {
        let fx = libm::floor((p.x - self.x0) / self.cell);
        let fy = libm::floor((p.y - self.y0) / self.cell);
        // Saturate far-away targets; the ring search only needs the order of
        // magnitude right.
        let clamp = |v: f64| v.clamp(-(1i64 << 40) as f64, (1i64 << 40) as f64) as i64;
        (clamp(fx), clamp(fy))
    }

    fn flat(&self, i: i64, j: i64) -> usize {
        (j * self.nx + i) as usize
    }

    fn bucket(&self, i: i64, j: i64) -> &[u32] {
        let c = self.flat(i, j);
        &self.items[self.start[c] as usize..self.start[c + 1] as usize]
    }

    /// Visits every bucket at Chebyshev cell distance exactly `r` from
    /// `(ci, cj)` that lies inside the grid.
    fn for_ring(&self, ci: i64, cj: i64, r: i64, mut f: impl FnMut(&[u32])) {
        let jlo = (cj - r).max(0);
        let jhi = (cj + r).min(self.ny - 1);
        let ilo = (ci - r).max(0);
        let ihi = (ci + r).min(self.nx - 1);
        for j in jlo..=jhi {
            if j == cj - r || j == cj + r {
                for i in ilo..=ihi {
                    f(self.bucket(i, j));
                }
            } else {
                // r > 0 here, so the two columns are distinct.
                for i in [ci - r, ci + r] {
                    if i >= 0 && i < self.nx {
                        f(self.bucket(i, j));
                    }
                }
            }
        }
    }

    /// Ring radii that can contain points, for a query cell.
    fn ring_range(&self, ci: i64, cj: i64) -> (i64, i64) {
        let gap = |c: i64, n: i64| {
            if c < 0 {
                -c
            } else if c >= n {
                c - (n - 1)
            } else {
                0
            }
        };
        let rmin = gap(ci, self.nx).max(gap(cj, self.ny));
        let rmax = (ci).max(self.nx - 1 - ci).max(cj).max(self.ny - 1 - cj);
        (rmin, rmax.max(rmin))
    }
}

/// A finite point set observed at one value of ħ inside a window.
///
/// Points are stored sorted lexicographically by `(x, y)`, so the order of the
/// input does not influence any downstream result.
#[derive(Debug, Clone)]
pub struct SpectrumSnapshot {
    hbar: PlanckValue,
    window: Window,
    points: Vec<Point2>,
    grid: Grid,
}

impl SpectrumSnapshot {
    pub fn new(hbar: PlanckValue, window: Window, mut points: Vec<Point2>) -> Result<Self> {
        for p in &points {
            if !p.is_finite() {
                return Err(Error::InvalidInput("non-finite point".into()));
            }
            if !window.contains(*p) {
                return Err(Error::InvalidInput(format!(
                    "point ({}, {}) lies outside the window",
                    p.x, p.y
                )));
            }
        }
        points.sort_by(|a, b| a.lex_cmp(b));
        if let Some(w) = points.windows(2).find(|w| w[0].key() == w[1].key()) {
            return Err(Error::InvalidInput(format!(
                "duplicate point ({}, {})",
                w[0].x, w[0].y
            )));
        }
        let grid = Grid::build(&window, &points);
        Ok(SpectrumSnapshot {
            hbar,
            window,
            points,
            grid,
        })
    }

    pub fn hbar(&self) -> PlanckValue {
        self.hbar
    }

    pub fn h(&self) -> f64 {
        self.hbar.get()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, idx: usize) -> Point2 {
        self.points[idx]
    }

    /// Index of `p` if it is a member of the snapshot.
    pub fn index_of(&self, p: Point2) -> Option<usize> {
        let key = p.key();
        self.points
            .binary_search_by(|q| q.lex_cmp(&p))
            .ok()
            .filter(|&i| self.points[i].key() == key)
    }

    /// Index of the point nearest to `target` among those for which `skip`
    /// is false.
    ///
    /// Distances within a relative slack `rel_tol` of the minimum count as
    /// ties and are resolved lexicographically by `(x, y)`.
    pub fn nearest_index_where(
        &self,
        target: Point2,
        rel_tol: f64,
        skip: impl Fn(usize) -> bool,
    ) -> Option<usize> {
        let g = &self.grid;
        let (ci, cj) = g.cell_of(target);
        let (rmin, rmax) = g.ring_range(ci, cj);
        let mut best = f64::INFINITY;
        let mut cands: Vec<(u32, f64)> = Vec::new();
        for r in rmin..=rmax {
            if best.is_finite() && (r - 1) as f64 * g.cell > best * (1.0 + rel_tol) {
                break;
            }
            g.for_ring(ci, cj, r, |bucket| {
                for &idx in bucket {
                    if skip(idx as usize) {
                        continue;
                    }
                    let d = self.points[idx as usize].dist(target);
                    if d <= best * (1.0 + rel_tol) {
                        cands.push((idx, d));
                    }
                    if d < best {
                        best = d;
                    }
                }
            });
        }
        let limit = best * (1.0 + rel_tol);
        cands.retain(|&(_, d)| d <= limit);
        // Lexicographic choice where x-coordinates within the same slack
        // count as equal.
        let slack = rel_tol * best;
        let xmin = cands
            .iter()
            .map(|&(i, _)| self.points[i as usize].x)
            .fold(f64::INFINITY, f64::min);
        cands
            .into_iter()
            .map(|(i, _)| i as usize)
            .filter(|&i| self.points[i].x <= xmin + slack)
            .min_by(|&a, &b| {
                let (pa, pb) = (self.points[a], self.points[b]);
                pa.y.total_cmp(&pb.y).then(pa.x.total_cmp(&pb.x))
            })
    }

    /// Indices of all points within distance `radius` of `center`.
    pub fn indices_within(&self, center: Point2, radius: f64) -> Vec<usize> {
        let g = &self.grid;
        let (ci, cj) = g.cell_of(center);
        let (rmin, rmax) = g.ring_range(ci, cj);
        let mut out = Vec::new();
        for r in rmin..=rmax {
            if (r - 1) as f64 * g.cell > radius {
                break;
            }
            g.for_ring(ci, cj, r, |bucket| {
                out.extend(
                    bucket
                        .iter()
                        .map(|&i| i as usize)
                        .filter(|&i| self.points[i].dist(center) <= radius),
                );
            });
        }
        out.sort_unstable();
        out
    }
}

/// Point of `snapshot` outside `excluded` nearest to `target`, ties broken by
/// smaller `x`, then smaller `y`.
pub fn nearest_point(
    snapshot: &SpectrumSnapshot,
    target: Point2,
    excluded: &[Point2],
) -> Result<Point2> {
    let keys: BTreeSet<PointKey> = excluded.iter().map(|p| p.key()).collect();
    snapshot
        .nearest_index_where(target, DEFAULT_TIE_TOLERANCE, |i| {
            keys.contains(&snapshot.point(i).key())
        })
        .map(|i| snapshot.point(i))
        .ok_or(Error::EmptyCandidateSet)
}

/// Minimal pairwise distance between points of the snapshot.
pub fn separation_radius(snapshot: &SpectrumSnapshot) -> Result<f64> {
    if snapshot.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: snapshot.len(),
        });
    }
    let mut best = f64::INFINITY;
    for (i, p) in snapshot.points().iter().enumerate() {
        if let Some(j) = snapshot.nearest_index_where(*p, 0.0, |k| k == i) {
            best = best.min(p.dist(snapshot.point(j)));
        }
    }
    Ok(best)
}

/// Snapshots over a strictly decreasing sequence of ħ sharing one window.
#[derive(Debug, Clone)]
pub struct SpectrumFamily {
    snapshots: Vec<SpectrumSnapshot>,
}

impl SpectrumFamily {
    pub fn new(snapshots: Vec<SpectrumSnapshot>) -> Result<Self> {
        let first = snapshots
            .first()
            .ok_or_else(|| Error::InvalidSchedule("no snapshots".into()))?;
        for w in snapshots.windows(2) {
            if w[1].h() >= w[0].h() {
                return Err(Error::InvalidSchedule(format!(
                    "hbar must be strictly decreasing ({} then {})",
                    w[0].h(),
                    w[1].h()
                )));
            }
        }
        if snapshots.iter().any(|s| s.window() != first.window()) {
            return Err(Error::InvalidInput(
                "all snapshots of a family must share one window".into(),
            ));
        }
        Ok(SpectrumFamily { snapshots })
    }

    pub fn snapshots(&self) -> &[SpectrumSnapshot] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn window(&self) -> &Window {
        self.snapshots[0].window()
    }

    /// Snapshot whose ħ equals `h` exactly.
    pub fn get(&self, h: PlanckValue) -> Option<&SpectrumSnapshot> {
        self.snapshots.iter().find(|s| s.hbar() == h)
    }
}
