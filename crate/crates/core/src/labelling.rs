//! Partial injective maps from spectrum points to integer labels.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{PlanckValue, Point2, PointKey, Window};
use crate::integer::{AffineInt2, Label2};

/// Which algorithm produced a labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabellingKind {
    FixedH,
    Semitoric,
    SequenceCorrected,
}

#[derive(Debug, Clone)]
pub struct Labelling {
    hbar: PlanckValue,
    window: Window,
    kind: LabellingKind,
    entries: Vec<(Point2, Label2)>,
    by_label: BTreeMap<Label2, usize>,
    by_point: BTreeMap<PointKey, usize>,
}

impl Labelling {
    /// Builds a labelling, rejecting repeated labels or repeated points.
    pub fn new(
        hbar: PlanckValue,
        window: Window,
        kind: LabellingKind,
        pairs: impl IntoIterator<Item = (Point2, Label2)>,
    ) -> Result<Self> {
        let mut out = Labelling {
            hbar,
            window,
            kind,
            entries: Vec::new(),
            by_label: BTreeMap::new(),
            by_point: BTreeMap::new(),
        };
        for (p, l) in pairs {
            let idx = out.entries.len();
            if out.by_label.insert(l, idx).is_some() {
                return Err(Error::DuplicateLabel(l));
            }
            if out.by_point.insert(p.key(), idx).is_some() {
                return Err(Error::InvalidInput(format!(
                    "point ({}, {}) labelled twice",
                    p.x, p.y
                )));
            }
            out.entries.push((p, l));
        }
        Ok(out)
    }

    pub fn hbar(&self) -> PlanckValue {
        self.hbar
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn kind(&self) -> LabellingKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(point, label)` pairs in the order they were assigned.
    pub fn iter(&self) -> impl Iterator<Item = (Point2, Label2)> + '_ {
        self.entries.iter().copied()
    }

    pub fn point_of(&self, label: Label2) -> Option<Point2> {
        self.by_label.get(&label).map(|&i| self.entries[i].0)
    }

    pub fn label_of(&self, p: Point2) -> Option<Label2> {
        self.by_point.get(&p.key()).map(|&i| self.entries[i].1)
    }

    pub fn labels(&self) -> impl Iterator<Item = Label2> + '_ {
        self.by_label.keys().copied()
    }

    /// The same points with every label mapped through `t`.
    pub fn relabel(&self, t: &AffineInt2) -> Labelling {
        Labelling::new(
            self.hbar,
            self.window,
            self.kind,
            self.entries.iter().map(|&(p, l)| (p, t.apply(l))),
        )
        .expect("affine bijections preserve injectivity")
    }

    pub fn with_kind(mut self, kind: LabellingKind) -> Labelling {
        self.kind = kind;
        self
    }
}
