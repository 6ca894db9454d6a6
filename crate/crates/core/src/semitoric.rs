//! Spectra organised in vertical strips `x ≈ α + ħ(j + μ)`: strip detection,
//! semitoric rebasing and labelling from an elliptic boundary.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::fixed::{label_from_basis, label_window, AffineBasis, AlgoConfig};
use crate::geometry::{PlanckValue, Point2, PointKey};
use crate::integer::{bezout_complement, extended_gcd, Label2};
use crate::labelling::{Labelling, LabellingKind};
use crate::snapshot::SpectrumSnapshot;

pub const DEFAULT_STRIP_EPSILON: f64 = 0.25;

/// Fitted strip lattice `x = α + ħ(j + μ)`. The gauge is fixed by `α = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripModel {
    pub hbar: PlanckValue,
    pub alpha: f64,
    pub mu: f64,
    pub epsilon: f64,
}

/// Strip index and residual `x − α − ħ(j + μ)` of every point.
#[derive(Debug, Clone, Default)]
pub struct StripAssignment {
    entries: BTreeMap<PointKey, (Point2, i64, f64)>,
}

impl StripAssignment {
    pub fn strip_of(&self, p: Point2) -> Option<i64> {
        self.entries.get(&p.key()).map(|e| e.1)
    }

    pub fn residual_of(&self, p: Point2) -> Option<f64> {
        self.entries.get(&p.key()).map(|e| e.2)
    }

    /// `(point, strip, residual)` triples.
    pub fn iter(&self) -> impl Iterator<Item = (Point2, i64, f64)> + '_ {
        self.entries.values().copied()
    }

    pub fn max_residual(&self) -> f64 {
        self.iter().map(|e| e.2.abs()).fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// [`detect_strips_with`] using `ε = 0.25`.
pub fn detect_strips(snapshot: &SpectrumSnapshot) -> Result<(StripModel, StripAssignment)> {
    detect_strips_with(snapshot, DEFAULT_STRIP_EPSILON)
}

/// Fits the strip phase `μ` as the circular mean of `x/ħ` and assigns every
/// point to its nearest strip. Fails unless all residuals are within `εħ`.
pub fn detect_strips_with(
    snapshot: &SpectrumSnapshot,
    epsilon: f64,
) -> Result<(StripModel, StripAssignment)> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidInput(format!(
            "strip half-width must lie in (0, 1/2), got {epsilon}"
        )));
    }
    if snapshot.is_empty() {
        return Err(Error::EmptySnapshot);
    }
    let h = snapshot.h();
    let (mut s, mut c) = (0.0, 0.0);
    for p in snapshot.points() {
        let phase = TAU * libm::fmod(p.x / h, 1.0);
        s += libm::sin(phase);
        c += libm::cos(phase);
    }
    let mut mu = libm::atan2(s, c) / TAU;
    if mu < 0.0 {
        mu += 1.0;
    }
    if mu >= 1.0 {
        mu = 0.0;
    }
    let mut entries = BTreeMap::new();
    let mut worst: f64 = 0.0;
    for &p in snapshot.points() {
        let j = libm::round(p.x / h - mu) as i64;
        let r = p.x - h * (j as f64 + mu);
        worst = worst.max(r.abs());
        entries.insert(p.key(), (p, j, r));
    }
    let bound = epsilon * h;
    if worst > bound {
        return Err(Error::NotStriped {
            max_residual: worst,
            bound,
        });
    }
    Ok((
        StripModel {
            hbar: snapshot.hbar(),
            alpha: 0.0,
            mu,
            epsilon,
        },
        StripAssignment { entries },
    ))
}

/// Replaces the basis of a fixed-ħ labelling by one whose second vector
/// points straight up its strip.
///
/// `μ` is the nearest point strictly above the origin with
/// `|Δx| <= ħ^{3/2}/2`; `(n, m)` are its rounded coordinates in the basis and
/// `(n', m')` the minimal Bezout complement with `n' m − m' n = 1`. The new
/// basis is `(origin, point (n', m'), μ)`.
pub fn semitoric_rebase(
    snapshot: &SpectrumSnapshot,
    basis: &AffineBasis,
    labelling: &Labelling,
) -> Result<AffineBasis> {
    let h = snapshot.h();
    let o = basis.origin;
    let half = 0.5 * h * libm::sqrt(h);
    let mu = snapshot
        .points()
        .iter()
        .filter(|p| p.y > o.y && (p.x - o.x).abs() <= half)
        .min_by(|a, b| a.dist(o).total_cmp(&b.dist(o)).then(a.lex_cmp(b)))
        .copied()
        .ok_or(Error::NoStripNeighbor)?;
    let t = crate::geometry::Matrix2::from_columns(basis.v1, basis.v2)
        .inverse()
        .ok_or(Error::DegenerateBasis { det: basis.det() })?;
    let coef = t.apply(mu - o);
    let (n, m) = (libm::round(coef.x) as i64, libm::round(coef.y) as i64);
    if extended_gcd(n, m).0 != 1 {
        return Err(Error::NotCoprime { n, m });
    }
    let (np, mp) = bezout_complement(n, m)?;
    let east = labelling
        .point_of(Label2::new(np, mp))
        .ok_or(Error::LabelMissing(Label2::new(np, mp)))?;
    Ok(AffineBasis::new(o, east, mu))
}

/// Fixed-ħ labelling rebased so that the first label is constant along each
/// vertical strip.
pub fn label_semitoric(snapshot: &SpectrumSnapshot, config: &AlgoConfig) -> Result<Labelling> {
    detect_strips(snapshot)?;
    let first = label_window(snapshot, config)?;
    let basis = semitoric_rebase(snapshot, &first.basis, &first.labelling)?;
    Ok(label_from_basis(snapshot, config, &basis, LabellingKind::Semitoric)?.labelling)
}

/// Which edge of the spectrum carries the elliptic boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySide {
    /// Strips bounded below; ranks increase with y.
    Minimum,
    /// Strips bounded above; ranks increase as y decreases.
    Maximum,
}

/// [`label_from_elliptic_boundary_with`] with `ε = 0.25` and a lower boundary.
pub fn label_from_elliptic_boundary(snapshot: &SpectrumSnapshot) -> Result<Labelling> {
    label_from_elliptic_boundary_with(snapshot, DEFAULT_STRIP_EPSILON, BoundarySide::Minimum)
}

/// Labels each point `(j, k)` with `j` its strip and `k` its 0-based rank in
/// y within the strip, counted from the boundary.
pub fn label_from_elliptic_boundary_with(
    snapshot: &SpectrumSnapshot,
    epsilon: f64,
    side: BoundarySide,
) -> Result<Labelling> {
    let (_, strips) = detect_strips_with(snapshot, epsilon)?;
    let sign = match side {
        BoundarySide::Minimum => 1.0,
        BoundarySide::Maximum => -1.0,
    };
    let mut by_strip: BTreeMap<i64, Vec<Point2>> = BTreeMap::new();
    for (p, j, _) in strips.iter() {
        by_strip.entry(j).or_default().push(p);
    }
    let mut pairs = Vec::with_capacity(snapshot.len());
    for (j, mut pts) in by_strip {
        pts.sort_by(|a, b| (sign * a.y).total_cmp(&(sign * b.y)));
        for w in pts.windows(2) {
            let scale = w[0].y.abs().max(w[1].y.abs());
            if (w[1].y - w[0].y).abs() <= 1e-12 * scale {
                return Err(Error::DuplicateHeight { strip: j });
            }
        }
        pairs.extend(
            pts.into_iter()
                .enumerate()
                .map(|(k, p)| (p, Label2::new(j, k as i64))),
        );
    }
    Labelling::new(
        snapshot.hbar(),
        *snapshot.window(),
        LabellingKind::Semitoric,
        pairs,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{generate_snapshot, PerturbationSpec, SystemPreset};
    use crate::geometry::Window;
    use alloc::vec;

    fn h(v: f64) -> PlanckValue {
        PlanckValue::new(v).unwrap()
    }

    #[test]
    fn strip_example_semitoric() {
        let p = SystemPreset::Semitoric {
            alpha: 0.0,
            mu: 0.25,
        };
        let chart = p.chart().unwrap();
        let (s, _) =
            generate_snapshot(&chart, h(0.1), p.default_window(), &PerturbationSpec::NONE).unwrap();
        let (model, strips) = detect_strips(&s).unwrap();
        assert!((model.mu - 0.25).abs() < 1e-12);
        let pt = *s
            .points()
            .iter()
            .find(|q| (q.x - 0.125).abs() < 1e-12)
            .unwrap();
        assert_eq!(strips.strip_of(pt), Some(1));
        assert!(strips.residual_of(pt).unwrap().abs() < 1e-12);
    }

    #[test]
    fn strips_on_identity_lattice() {
        let chart = SystemPreset::Identity.chart().unwrap();
        let w = Window::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let (s, _) = generate_snapshot(&chart, h(0.1), w, &PerturbationSpec::NONE).unwrap();
        let (model, strips) = detect_strips(&s).unwrap();
        assert!(model.mu.abs() < 1e-12 || (model.mu - 1.0).abs() < 1e-12);
        for (p, j, r) in strips.iter() {
            assert_eq!(j, libm::round(p.x / 0.1) as i64);
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn elliptic_ranks() {
        let w = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let pts = vec![
            Point2::new(0.0, 0.3),
            Point2::new(0.0, 0.1),
            Point2::new(0.0, 0.2),
        ];
        let s = SpectrumSnapshot::new(h(0.1), w, pts).unwrap();
        let l = label_from_elliptic_boundary(&s).unwrap();
        assert_eq!(l.label_of(Point2::new(0.0, 0.3)), Some(Label2::new(0, 2)));
        assert_eq!(l.label_of(Point2::new(0.0, 0.1)), Some(Label2::new(0, 0)));
        assert_eq!(l.label_of(Point2::new(0.0, 0.2)), Some(Label2::new(0, 1)));
        let l = label_from_elliptic_boundary_with(&s, 0.25, BoundarySide::Maximum).unwrap();
        assert_eq!(l.label_of(Point2::new(0.0, 0.3)), Some(Label2::new(0, 0)));
    }

    #[test]
    fn elliptic_duplicate_height() {
        let w = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let pts = vec![Point2::new(0.0, 0.3), Point2::new(1e-5, 0.3)];
        let s = SpectrumSnapshot::new(h(0.1), w, pts).unwrap();
        assert_eq!(
            label_from_elliptic_boundary(&s).unwrap_err(),
            Error::DuplicateHeight { strip: 0 }
        );
    }

    #[test]
    fn bad_epsilon() {
        let w = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let s = SpectrumSnapshot::new(h(0.1), w, vec![Point2::new(0.0, 0.0)]).unwrap();
        assert!(detect_strips_with(&s, 0.5).is_err());
        assert!(detect_strips_with(&s, 0.0).is_err());
    }
}
