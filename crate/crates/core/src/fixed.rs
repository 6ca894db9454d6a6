//! Labelling of a single snapshot by nearest-neighbour transport from an
//! affine basis, and exact transition matrices between labellings.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::chart::OracleLabelling;
use crate::error::{Error, Result};
use crate::geometry::{Point2, PointKey, Window};
use crate::integer::{solve_affine_relation, AffineInt2, IntMatrix2, Label2, UnimodularMatrix2};
use crate::labelling::{Labelling, LabellingKind};
use crate::snapshot::{SpectrumSnapshot, DEFAULT_TIE_TOLERANCE};

/// Default relative slack for treating candidate distances as tied during
/// labelling. Ties are resolved lexicographically, which makes the choice of
/// basis insensitive to `O(ħ²)` displacements of the points.
pub const LABEL_TIE_TOLERANCE: f64 = 0.1;

/// Three labelled points `(0,0)`, `(1,0)`, `(0,1)` and their differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineBasis {
    pub origin: Point2,
    pub east: Point2,
    pub north: Point2,
    pub v1: Point2,
    pub v2: Point2,
}

impl AffineBasis {
    pub fn new(origin: Point2, east: Point2, north: Point2) -> AffineBasis {
        AffineBasis {
            origin,
            east,
            north,
            v1: east - origin,
            v2: north - origin,
        }
    }

    pub fn det(&self) -> f64 {
        self.v1.cross(self.v2)
    }

    /// The basis with `east` and `north` exchanged when `det < 0`.
    pub fn oriented(&self) -> AffineBasis {
        if self.det() < 0.0 {
            AffineBasis::new(self.origin, self.north, self.east)
        } else {
            *self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoConfig {
    /// The point `c` near which the origin is chosen.
    pub center: Point2,
    /// Only points inside this window are labelled.
    pub inner_window: Window,
    /// Cap on nearest-point queries; defaults to ten times the number of
    /// points in the inner window.
    pub max_steps: Option<usize>,
    /// Relative slack under which candidate distances count as tied.
    pub tie_tolerance: f64,
}

impl AlgoConfig {
    pub fn new(center: Point2, inner_window: Window) -> AlgoConfig {
        AlgoConfig {
            center,
            inner_window,
            max_steps: None,
            tie_tolerance: LABEL_TIE_TOLERANCE,
        }
    }

    pub fn with_tie_tolerance(mut self, tol: f64) -> Self {
        self.tie_tolerance = tol;
        self
    }

    pub fn with_max_steps(mut self, cap: usize) -> Self {
        self.max_steps = Some(cap);
        self
    }

    pub fn validate(&self, window: &Window) -> Result<()> {
        if !window.strictly_contains(&self.inner_window) {
            return Err(Error::InvalidInput(
                "inner window must lie strictly inside the snapshot window".into(),
            ));
        }
        if !self.inner_window.contains(self.center) {
            return Err(Error::InvalidInput(format!(
                "center ({}, {}) must lie in the inner window",
                self.center.x, self.center.y
            )));
        }
        if !(self.tie_tolerance.is_finite() && self.tie_tolerance >= 0.0) {
            return Err(Error::InvalidInput("tie tolerance must be >= 0".into()));
        }
        if self.max_steps == Some(0) {
            return Err(Error::InvalidInput("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// Result of [`label_window`].
#[derive(Debug, Clone)]
pub struct WindowLabelling {
    pub labelling: Labelling,
    /// The emitted basis, positively oriented.
    pub basis: AffineBasis,
    /// True when the final orientation swap `(n, m) -> (m, n)` was applied.
    pub swapped: bool,
    /// Points of the inner window that received no label.
    pub unlabelled: Vec<Point2>,
}

/// A transported match farther than half a step from its prediction means the
/// lattice has run out (typically at the edge of the snapshot).
fn gate(step: Point2) -> f64 {
    0.5 * step.norm()
}

struct Labeler<'a> {
    snap: &'a SpectrumSnapshot,
    inner: Window,
    tie: f64,
    used: Vec<bool>,
    at: BTreeMap<Label2, usize>,
    order: Vec<(usize, Label2)>,
    steps: usize,
    cap: usize,
}

impl<'a> Labeler<'a> {
    fn new(snap: &'a SpectrumSnapshot, config: &AlgoConfig) -> Result<Labeler<'a>> {
        config.validate(snap.window())?;
        let inside = snap
            .points()
            .iter()
            .filter(|p| config.inner_window.contains(**p))
            .count();
        if inside < 3 {
            return Err(Error::TooFewPoints {
                needed: 3,
                found: inside,
            });
        }
        Ok(Labeler {
            snap,
            inner: config.inner_window,
            tie: config.tie_tolerance,
            used: vec![false; snap.len()],
            at: BTreeMap::new(),
            order: Vec::new(),
            steps: 0,
            cap: config.max_steps.unwrap_or(10 * inside + 10),
        })
    }

    fn closest(&mut self, target: Point2) -> Result<Option<usize>> {
        self.steps += 1;
        if self.steps > self.cap {
            return Err(Error::SafetyCapExceeded { cap: self.cap });
        }
        let used = &self.used;
        Ok(self.snap.nearest_index_where(target, self.tie, |i| used[i]))
    }

    fn pos(&self, l: Label2) -> Option<Point2> {
        self.at.get(&l).map(|&i| self.snap.point(i))
    }

    fn assign(&mut self, idx: usize, l: Label2) {
        self.used[idx] = true;
        self.at.insert(l, idx);
        self.order.push((idx, l));
    }

    /// Labels the point closest to `target` with `l` if it lies in the inner
    /// window and within `reach` of the target.
    fn try_assign(&mut self, target: Point2, l: Label2, reach: f64) -> Result<bool> {
        match self.closest(target)? {
            Some(i)
                if self.inner.contains(self.snap.point(i))
                    && self.snap.point(i).dist(target) <= reach =>
            {
                self.assign(i, l);
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    /// A seed point: the closest unlabelled point to `target`, which must lie
    /// in the inner window. `placed` counts the seeds already chosen.
    fn seed(&mut self, target: Point2, l: Label2, placed: usize) -> Result<Point2> {
        if self.try_assign(target, l, f64::INFINITY)? {
            Ok(self.pos(l).expect("just assigned"))
        } else {
            Err(Error::TooFewPoints {
                needed: 3,
                found: placed,
            })
        }
    }

    /// Extends row `m` from `λ_{0,m}` in both directions; `d` predicts the
    /// step to `λ_{1,m}` when that label is not yet assigned.
    fn extend_row(&mut self, m: i64, d: Point2) -> Result<()> {
        let base = self.pos(Label2::new(0, m)).expect("row start is labelled");
        let l = |n| Label2::new(n, m);
        let forward = self.pos(l(1)).is_some() || self.try_assign(base + d, l(1), gate(d))?;
        if forward {
            let mut n = 2;
            loop {
                let (p1, p2) = (self.pos(l(n - 1)).unwrap(), self.pos(l(n - 2)).unwrap());
                if !self.try_assign(2.0 * p1 - p2, l(n), gate(p1 - p2))? {
                    break;
                }
                n += 1;
            }
        }
        let back = match self.pos(l(1)) {
            Some(p1) => base - p1,
            None => -d,
        };
        if self.try_assign(base + back, l(-1), gate(back))? {
            let mut n = -2;
            loop {
                let (p1, p2) = (self.pos(l(n + 1)).unwrap(), self.pos(l(n + 2)).unwrap());
                if !self.try_assign(2.0 * p1 - p2, l(n), gate(p1 - p2))? {
                    break;
                }
                n -= 1;
            }
        }
        Ok(())
    }

    /// Predicted step along row `m` taken from the neighbouring row `prev`.
    fn row_step(&self, prev: i64, fallback: Point2) -> Point2 {
        let p0 = self.pos(Label2::new(0, prev)).expect("previous row start");
        if let Some(p1) = self.pos(Label2::new(1, prev)) {
            p1 - p0
        } else if let Some(pm) = self.pos(Label2::new(-1, prev)) {
            p0 - pm
        } else {
            fallback
        }
    }

    /// Origin, east, the row through them, and north.
    fn seed_basis(&mut self, center: Point2) -> Result<AffineBasis> {
        let origin = self.seed(center, Label2::new(0, 0), 0)?;
        let east = self.seed(origin, Label2::new(1, 0), 1)?;
        self.extend_row(0, east - origin)?;
        let north = self.seed(origin, Label2::new(0, 1), 2)?;
        let basis = AffineBasis::new(origin, east, north);
        if basis.det().abs() <= 1e-12 * self.snap.h() {
            return Err(Error::DegenerateBasis { det: basis.det() });
        }
        Ok(basis)
    }

    /// Seeds from a given basis instead of nearest-point choices.
    fn seed_given(&mut self, basis: &AffineBasis) -> Result<()> {
        for (p, l) in [
            (basis.origin, Label2::new(0, 0)),
            (basis.east, Label2::new(1, 0)),
            (basis.north, Label2::new(0, 1)),
        ] {
            let idx = self
                .snap
                .index_of(p)
                .filter(|&i| !self.used[i] && self.inner.contains(self.snap.point(i)))
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "basis point ({}, {}) is not an unlabelled point of the inner window",
                        p.x, p.y
                    ))
                })?;
            self.assign(idx, l);
        }
        if basis.det().abs() <= 1e-12 * self.snap.h() {
            return Err(Error::DegenerateBasis { det: basis.det() });
        }
        self.extend_row(0, basis.v1)
    }

    /// Rows `m = 1, 2, …` then `m = -1, -2, …`, each started from the column
    /// point `λ_{0,m}`.
    fn complete(&mut self, v1: Point2) -> Result<()> {
        self.extend_row(1, self.row_step(0, v1))?;
        let mut m = 2;
        loop {
            let (p1, p2) = (
                self.pos(Label2::new(0, m - 1)).unwrap(),
                self.pos(Label2::new(0, m - 2)).unwrap(),
            );
            if !self.try_assign(2.0 * p1 - p2, Label2::new(0, m), gate(p1 - p2))? {
                break;
            }
            self.extend_row(m, self.row_step(m - 1, v1))?;
            m += 1;
        }
        let p0 = self.pos(Label2::new(0, 0)).unwrap();
        let p1 = self.pos(Label2::new(0, 1)).unwrap();
        if !self.try_assign(2.0 * p0 - p1, Label2::new(0, -1), gate(p0 - p1))? {
            return Ok(());
        }
        self.extend_row(-1, self.row_step(0, v1))?;
        let mut m = -2;
        loop {
            let (p1, p2) = (
                self.pos(Label2::new(0, m + 1)).unwrap(),
                self.pos(Label2::new(0, m + 2)).unwrap(),
            );
            if !self.try_assign(2.0 * p1 - p2, Label2::new(0, m), gate(p1 - p2))? {
                break;
            }
            self.extend_row(m, self.row_step(m + 1, v1))?;
            m -= 1;
        }
        Ok(())
    }

    fn finish(self, kind: LabellingKind) -> Result<WindowLabelling> {
        let origin = self.pos(Label2::new(0, 0)).unwrap();
        let east = self.pos(Label2::new(1, 0)).unwrap();
        let north = self.pos(Label2::new(0, 1)).unwrap();
        let raw = AffineBasis::new(origin, east, north);
        let swapped = raw.det() < 0.0;
        let pairs = self.order.iter().map(|&(i, l)| {
            let l = if swapped { Label2::new(l.m, l.n) } else { l };
            (self.snap.point(i), l)
        });
        let labelling = Labelling::new(self.snap.hbar(), *self.snap.window(), kind, pairs)?;
        let unlabelled = self
            .snap
            .points()
            .iter()
            .enumerate()
            .filter(|&(i, p)| !self.used[i] && self.inner.contains(*p))
            .map(|(_, p)| *p)
            .collect();
        Ok(WindowLabelling {
            labelling,
            basis: raw.oriented(),
            swapped,
            unlabelled,
        })
    }
}

/// Origin nearest `c`, east nearest the origin, the row through them, then
/// north nearest the origin among points not yet labelled.
///
/// The returned basis is as chosen, before any orientation swap.
pub fn seed_affine_basis(snapshot: &SpectrumSnapshot, config: &AlgoConfig) -> Result<AffineBasis> {
    let mut lab = Labeler::new(snapshot, config)?;
    lab.seed_basis(config.center)
}

/// Nearest point to `mu1 + v` outside `excluded`.
pub fn transport_point(
    snapshot: &SpectrumSnapshot,
    mu1: Point2,
    v: Point2,
    excluded: &[Point2],
) -> Result<Point2> {
    crate::snapshot::nearest_point(snapshot, mu1 + v, excluded)
}

/// Labels the points of the inner window reachable from the seed basis.
pub fn label_window(snapshot: &SpectrumSnapshot, config: &AlgoConfig) -> Result<WindowLabelling> {
    let mut lab = Labeler::new(snapshot, config)?;
    let basis = lab.seed_basis(config.center)?;
    lab.complete(basis.v1)?;
    lab.finish(LabellingKind::FixedH)
}

/// Labels the inner window starting from an explicit basis: its three points
/// get `(0,0)`, `(1,0)`, `(0,1)` and the rest is filled in by transport.
pub fn label_from_basis(
    snapshot: &SpectrumSnapshot,
    config: &AlgoConfig,
    basis: &AffineBasis,
    kind: LabellingKind,
) -> Result<WindowLabelling> {
    let mut lab = Labeler::new(snapshot, config)?;
    lab.seed_given(basis)?;
    lab.complete(basis.v1)?;
    lab.finish(kind)
}

/// The exact relation `oracle = Z · label + s` over all labelled points.
pub fn oracle_transition(
    labelling: &Labelling,
    oracle: &OracleLabelling,
) -> Result<(IntMatrix2, Label2)> {
    let pairs: Vec<(Label2, Label2)> = labelling
        .iter()
        .filter_map(|(p, l)| oracle.label_of(p).map(|k| (l, k)))
        .collect();
    solve_affine_relation(&pairs)
}

/// The matrix `Z` with `oracle = Z · label + const`, required to lie in
/// `SL(2,Z)`.
pub fn check_unimodular_basis(
    labelling: &Labelling,
    oracle: &OracleLabelling,
) -> Result<UnimodularMatrix2> {
    let (z, _) = oracle_transition(labelling, oracle)?;
    match z.det() {
        1 => UnimodularMatrix2::try_from_matrix(z),
        -1 => Err(Error::OrientationReversed),
        det => Err(Error::NotUnimodular { det }),
    }
}

/// The affine map `t` with `l2(λ) = t(l1(λ))` on every common point.
pub fn transition_between(l1: &Labelling, l2: &Labelling) -> Result<AffineInt2> {
    let pairs: Vec<(Label2, Label2)> = l1
        .iter()
        .filter_map(|(p, a)| l2.label_of(p).map(|b| (a, b)))
        .collect();
    let (z, shift) = solve_affine_relation(&pairs)?;
    Ok(AffineInt2::new(
        UnimodularMatrix2::try_from_matrix(z)?,
        shift,
    ))
}

/// Points labelled by both labellings.
pub fn common_points(l1: &Labelling, l2: &Labelling) -> Vec<Point2> {
    let keys: BTreeSet<PointKey> = l2.iter().map(|(p, _)| p.key()).collect();
    l1.iter()
        .map(|(p, _)| p)
        .filter(|p| keys.contains(&p.key()))
        .collect()
}

/// Nearest-point query with the labelling tie rule, exposed for diagnostics.
pub fn nearest_with_tolerance(
    snapshot: &SpectrumSnapshot,
    target: Point2,
    tie_tolerance: f64,
) -> Option<Point2> {
    snapshot
        .nearest_index_where(target, tie_tolerance.max(DEFAULT_TIE_TOLERANCE), |_| false)
        .map(|i| snapshot.point(i))
}
