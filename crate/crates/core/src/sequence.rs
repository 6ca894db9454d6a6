//! Labellings across a decreasing sequence of ħ: basis correction so that one
//! linear labelling holds for every ħ, point tracking, drift estimation and
//! transitions along a chain of windows.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fixed::{label_window, transition_between, AlgoConfig, WindowLabelling};
use crate::geometry::{Matrix2, PlanckValue, Point2, Window};
use crate::integer::{AffineInt2, IntMatrix2, Label2, UnimodularMatrix2};
use crate::labelling::{Labelling, LabellingKind};
use crate::snapshot::{nearest_point, separation_radius, SpectrumFamily, SpectrumSnapshot};

/// Entrywise rounding, halves away from zero.
pub fn round_to_int_matrix(m: &Matrix2) -> IntMatrix2 {
    let r = |v: f64| libm::round(v) as i64;
    IntMatrix2::new(r(m.a), r(m.b), r(m.c), r(m.d))
}

/// One ħ of the correction fold.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceStep {
    pub hbar: PlanckValue,
    /// Basis vectors scaled by `1/ħ`, as columns.
    pub t: Matrix2,
    /// `T_j⁻¹ T_{j−1}`; `None` on the first step and when `T_j` is singular.
    pub a: Option<Matrix2>,
    pub a_sharp: Option<IntMatrix2>,
    /// Accumulated correction applied to the labels of this ħ.
    pub s: UnimodularMatrix2,
    /// The correction was carried over unchanged because `T_j` was singular
    /// or the rounded matrix did not have determinant 1.
    pub skipped: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SequenceState {
    pub steps: Vec<SequenceStep>,
}

impl SequenceState {
    /// Number of steps after the first whose update was skipped.
    pub fn skipped_count(&self) -> usize {
        self.steps.iter().skip(1).filter(|s| s.skipped).count()
    }

    /// Folds the next basis into the state.
    pub fn push(&mut self, hbar: PlanckValue, v1: Point2, v2: Point2) {
        let h = hbar.get();
        let t = Matrix2::from_columns((1.0 / h) * v1, (1.0 / h) * v2);
        let Some(prev) = self.steps.last() else {
            self.steps.push(SequenceStep {
                hbar,
                t,
                a: None,
                a_sharp: None,
                s: UnimodularMatrix2::IDENTITY,
                skipped: false,
            });
            return;
        };
        let prev_s = prev.s;
        let (a, a_sharp, s, skipped) = match t.inverse().filter(|_| t.det().abs() >= 1e-12) {
            None => (None, None, prev_s, true),
            Some(inv) => {
                let a = inv.mul(&prev.t);
                let sharp = round_to_int_matrix(&a);
                match UnimodularMatrix2::try_from_matrix(sharp) {
                    Ok(u) => (Some(a), Some(sharp), prev_s.mul(&u.inverse()), false),
                    Err(_) => (Some(a), Some(sharp), prev_s, true),
                }
            }
        };
        self.steps.push(SequenceStep {
            hbar,
            t,
            a,
            a_sharp,
            s,
            skipped,
        });
    }
}

/// Applies the correction fold to per-ħ labellings, given in decreasing ħ.
/// Each output labelling carries labels `S_j · (n, m)`.
pub fn correct_sequence(per_hbar: &[WindowLabelling]) -> Result<(Vec<Labelling>, SequenceState)> {
    if per_hbar.len() < 2 {
        return Err(Error::TooFewSnapshots {
            found: per_hbar.len(),
        });
    }
    let mut state = SequenceState::default();
    let mut out = Vec::with_capacity(per_hbar.len());
    for w in per_hbar {
        let hbar = w.labelling.hbar();
        state.push(hbar, w.basis.v1, w.basis.v2);
        let s = state.steps.last().expect("just pushed").s;
        let fix = AffineInt2::new(s, Label2::new(0, 0));
        out.push(
            w.labelling
                .relabel(&fix)
                .with_kind(LabellingKind::SequenceCorrected),
        );
    }
    Ok((out, state))
}

/// Labels every snapshot of the family with one configuration and corrects
/// the bases so that a single linear labelling holds for all ħ.
pub fn uniform_label_family(
    family: &SpectrumFamily,
    config: &AlgoConfig,
) -> Result<(Vec<Labelling>, SequenceState)> {
    if family.len() < 2 {
        return Err(Error::TooFewSnapshots {
            found: family.len(),
        });
    }
    let per: Vec<WindowLabelling> = family
        .snapshots()
        .iter()
        .map(|s| label_window(s, config))
        .collect::<Result<_>>()?;
    correct_sequence(&per)
}

/// Half the minimal spacing of the two snapshots: within this radius a point
/// has at most one neighbour.
fn uniqueness_radius(s1: &SpectrumSnapshot, s2: &SpectrumSnapshot) -> Result<f64> {
    Ok(0.5 * separation_radius(s1)?.min(separation_radius(s2)?))
}

fn snapshot_at(family: &SpectrumFamily, h: PlanckValue) -> Result<&SpectrumSnapshot> {
    family
        .get(h)
        .ok_or_else(|| Error::InvalidInput(alloc::format!("no snapshot at hbar = {}", h.get())))
}

/// The point of the ħ2 snapshot carrying the label of `lambda1`.
///
/// The match must be the only point of either snapshot within half the
/// minimal spacing of `lambda1`; otherwise the step in ħ is too large to
/// follow the point and `AmbiguousMatch` is returned.
pub fn track_point(
    family: &SpectrumFamily,
    lambda1: Point2,
    h1: PlanckValue,
    h2: PlanckValue,
    labellings: (&Labelling, &Labelling),
) -> Result<Point2> {
    let s1 = snapshot_at(family, h1)?;
    let s2 = snapshot_at(family, h2)?;
    let label = labellings
        .0
        .label_of(lambda1)
        .ok_or(Error::PointUnlabelled {
            x: lambda1.x,
            y: lambda1.y,
        })?;
    let lambda2 = labellings
        .1
        .point_of(label)
        .ok_or(Error::LabelMissing(label))?;
    if lambda1.dist(lambda2) >= uniqueness_radius(s1, s2)? {
        return Err(Error::AmbiguousMatch);
    }
    Ok(lambda2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackedPoint {
    pub anchor_label: Label2,
    /// Positions in family order (decreasing ħ).
    pub trajectory: Vec<(PlanckValue, Point2)>,
}

/// Follows `lambda1` from its snapshot through consecutive snapshots in
/// both directions, stopping in each direction at the first failed step.
/// `labellings` are aligned with the family.
pub fn track_through(
    family: &SpectrumFamily,
    labellings: &[Labelling],
    lambda1: Point2,
    h1: PlanckValue,
) -> Result<TrackedPoint> {
    if labellings.len() != family.len() {
        return Err(Error::InvalidInput(
            "one labelling per snapshot is required".into(),
        ));
    }
    let start = family
        .snapshots()
        .iter()
        .position(|s| s.hbar() == h1)
        .ok_or_else(|| Error::InvalidInput(alloc::format!("no snapshot at hbar = {}", h1.get())))?;
    let anchor_label = labellings[start]
        .label_of(lambda1)
        .ok_or(Error::PointUnlabelled {
            x: lambda1.x,
            y: lambda1.y,
        })?;
    let hb = |i: usize| family.snapshots()[i].hbar();
    let step = |i: usize, j: usize, p: Point2| {
        track_point(family, p, hb(i), hb(j), (&labellings[i], &labellings[j]))
    };
    let mut before = Vec::new();
    let mut p = lambda1;
    for i in (0..start).rev() {
        match step(i + 1, i, p) {
            Ok(q) => {
                before.push((hb(i), q));
                p = q;
            }
            Err(_) => break,
        }
    }
    before.reverse();
    before.push((h1, lambda1));
    let mut p = lambda1;
    for i in start + 1..family.len() {
        match step(i - 1, i, p) {
            Ok(q) => {
                before.push((hb(i), q));
                p = q;
            }
            Err(_) => break,
        }
    }
    Ok(TrackedPoint {
        anchor_label,
        trajectory: before,
    })
}

/// Admissibility of a pair `(ħ1, ħ2)`: `ħ2 < ħ1`, `ħ1 − ħ2 >= ħ1^N` and
/// `1/ħ2 − 1/ħ1 < ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftConfig {
    pub order: u32,
    /// `None` means `0.1/ħ1`.
    pub epsilon: Option<f64>,
}

impl Default for DriftConfig {
    fn default() -> Self {
        DriftConfig {
            order: 3,
            epsilon: None,
        }
    }
}

impl DriftConfig {
    pub fn admissible(&self, h1: f64, h2: f64) -> bool {
        let eps = self.epsilon.unwrap_or(0.1 / h1);
        h2 < h1 && h1 - h2 >= libm::pow(h1, self.order as f64) && 1.0 / h2 - 1.0 / h1 < eps
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftEstimate {
    pub value: Point2,
    pub h1: PlanckValue,
    pub h2: PlanckValue,
    pub divided_difference: Point2,
}

/// Divided difference `ħ1 (λ1 − λ2) / (ħ1 − ħ2)` between the point `λ1`
/// nearest `c` at ħ1 and its nearest neighbour `λ2` at ħ2.
///
/// ħ1 is the smallest value having an admissible partner; among its partners
/// the one closest to ħ1 is used.
pub fn estimate_drift(
    family: &SpectrumFamily,
    c: Point2,
    config: &DriftConfig,
) -> Result<DriftEstimate> {
    let snaps = family.snapshots();
    let pair = (0..snaps.len()).rev().find_map(|i| {
        let h1 = snaps[i].h();
        (i + 1..snaps.len())
            .find(|&j| config.admissible(h1, snaps[j].h()))
            .map(|j| (i, j))
    });
    let (i, j) = pair.ok_or(Error::NoAdmissiblePair)?;
    let (s1, s2) = (&snaps[i], &snaps[j]);
    let lambda1 = nearest_point(s1, c, &[])?;
    let lambda2 = nearest_point(s2, lambda1, &[])?;
    if lambda1.dist(lambda2) >= uniqueness_radius(s1, s2)? {
        return Err(Error::AmbiguousMatch);
    }
    let (h1, h2) = (s1.h(), s2.h());
    let value = (h1 / (h1 - h2)) * (lambda1 - lambda2);
    Ok(DriftEstimate {
        value,
        h1: s1.hbar(),
        h2: s2.hbar(),
        divided_difference: value,
    })
}

/// Labels each window on its own (origin nearest the window centre) and
/// returns the transitions `A_i` with `l_{i+1} = A_i(l_i)` on each overlap.
pub fn path_transitions(
    snapshot: &SpectrumSnapshot,
    windows: &[Window],
    tie_tolerance: f64,
) -> Result<Vec<AffineInt2>> {
    if windows.len() < 2 {
        return Err(Error::InvalidInput(
            "a path needs at least two windows".into(),
        ));
    }
    let labellings: Vec<Labelling> = windows
        .iter()
        .map(|w| {
            let config = AlgoConfig::new(w.center(), *w).with_tie_tolerance(tie_tolerance);
            label_window(snapshot, &config).map(|o| o.labelling)
        })
        .collect::<Result<_>>()?;
    labellings
        .windows(2)
        .enumerate()
        .map(|(i, pair)| {
            transition_between(&pair[0], &pair[1]).map_err(|e| match e {
                Error::InsufficientOverlap { .. } => Error::InsufficientOverlap { window: i },
                e => e,
            })
        })
        .collect()
}

/// The product `A_0⁻¹ A_1⁻¹ ⋯ A_{N−1}⁻¹` of the inverse transitions along
/// the path, in that order. It maps labels of the last window back to labels
/// of the first.
pub fn monodromy_along_path(
    snapshot: &SpectrumSnapshot,
    windows: &[Window],
    tie_tolerance: f64,
) -> Result<UnimodularMatrix2> {
    let ts = path_transitions(snapshot, windows, tie_tolerance)?;
    Ok(ts.iter().fold(UnimodularMatrix2::IDENTITY, |acc, t| {
        acc.mul(&t.linear.inverse())
    }))
}
