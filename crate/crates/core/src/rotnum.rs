//! Quantum rotation numbers of a labelled spectrum and their comparison with
//! the classical value.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::chart::{classical_rotation, ChartModel};
use crate::error::{Error, Neighbor, Result};
use crate::geometry::{PlanckValue, Point2};
use crate::integer::{IntMatrix2, Label2};
use crate::labelling::{Labelling, LabellingKind};
use crate::projective::{mobius_apply, projective_distance, Projective1};
use crate::snapshot::{nearest_point, SpectrumFamily};

/// Errors at or below this value are treated as exact when fitting orders.
pub const ERROR_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumRotationSample {
    pub label: Label2,
    pub value: Projective1,
    /// `ΔE₁ / ΔE₂`, `+∞` when the denominator vanishes.
    pub value_real: f64,
    pub hbar: PlanckValue,
}

/// `[E_{j+1,k} − E_{j,k} : E_{j,k+1} − E_{j,k}]` at `label = (j, k)`, where `E`
/// is the second coordinate of a spectrum point.
pub fn quantum_rotation(labelling: &Labelling, label: Label2) -> Result<QuantumRotationSample> {
    let get = |l: Label2, which| {
        labelling
            .point_of(l)
            .ok_or(Error::NeighborMissing { label: l, which })
    };
    let base = get(label, Neighbor::Base)?;
    let east = get(label + Label2::new(1, 0), Neighbor::East)?;
    let north = get(label + Label2::new(0, 1), Neighbor::North)?;
    let num = east.y - base.y;
    let den = north.y - base.y;
    let value = Projective1::new(num, den)?;
    let value_real = if den == 0.0 { f64::INFINITY } else { num / den };
    Ok(QuantumRotationSample {
        label,
        value,
        value_real,
        hbar: labelling.hbar(),
    })
}

/// Quantum rotation at every label whose east and north neighbours are
/// labelled. Labels where the direction degenerates are left out too.
pub fn rotation_field(labelling: &Labelling) -> BTreeMap<Label2, QuantumRotationSample> {
    labelling
        .labels()
        .filter_map(|l| quantum_rotation(labelling, l).ok().map(|s| (l, s)))
        .collect()
}

/// The quantum rotation reduced to `[0, 1)`; needs a semitoric labelling.
pub fn semitoric_rotation_mod1(labelling: &Labelling, label: Label2) -> Result<f64> {
    if labelling.kind() != LabellingKind::Semitoric {
        return Err(Error::WrongLabellingKind);
    }
    let s = quantum_rotation(labelling, label)?;
    if !s.value_real.is_finite() {
        return Err(Error::DegenerateDirection);
    }
    Ok(reduce_mod1(s.value_real))
}

/// `x − ⌊x⌋`, with a result rounding up to 1 mapped to 0.
pub fn reduce_mod1(x: f64) -> f64 {
    let r = x - libm::floor(x);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceEntry {
    pub hbar: PlanckValue,
    /// Algorithmic label of the base point (the snapshot point nearest `c`).
    pub label: Label2,
    pub quantum: Projective1,
    /// Classical rotation expressed in the algorithmic labels.
    pub classical: Projective1,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub entries: Vec<ConvergenceEntry>,
    /// Least-squares slope of `ln(error)` against `ln(ħ)` over the entries
    /// above [`ERROR_FLOOR`]; `None` when fewer than two remain.
    pub fitted_order: Option<f64>,
}

impl ConvergenceReport {
    /// Every error is at float-noise level.
    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.error <= ERROR_FLOOR)
    }
}

/// Linear part `Z` of `oracle = Z · label + s` near `label`, read off from the
/// oracle labels of the base point and its east and north neighbours.
pub fn local_oracle_matrix(
    chart: &ChartModel,
    labelling: &Labelling,
    label: Label2,
) -> Result<IntMatrix2> {
    let h = labelling.hbar();
    let tol = 0.25 * h.get();
    let oracle = |l: Label2, which| {
        let p = labelling
            .point_of(l)
            .ok_or(Error::NeighborMissing { label: l, which })?;
        chart.oracle_label(h, p, tol)
    };
    let k0 = oracle(label, Neighbor::Base)?;
    let k1 = oracle(label + Label2::new(1, 0), Neighbor::East)? - k0;
    let k2 = oracle(label + Label2::new(0, 1), Neighbor::North)? - k0;
    Ok(IntMatrix2::new(k1.n, k2.n, k1.m, k2.m))
}

/// Least-squares slope of `ln y` against `ln x` over points with
/// `y > ERROR_FLOOR`.
pub fn fit_order(samples: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(_, e)| e > ERROR_FLOOR)
        .map(|&(h, e)| (libm::log(h), libm::log(e)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// One entry per snapshot: the quantum rotation at the point nearest `c`
/// against the classical rotation at `c`, both in the algorithmic labels.
/// `labellings` are aligned with the family.
pub fn compare_convergence(
    chart: &ChartModel,
    family: &SpectrumFamily,
    labellings: &[Labelling],
    c: Point2,
) -> Result<ConvergenceReport> {
    if labellings.len() != family.len() {
        return Err(Error::InvalidInput(
            "one labelling per snapshot is required".into(),
        ));
    }
    let w = classical_rotation(chart, c)?;
    let entries = family
        .snapshots()
        .iter()
        .zip(labellings)
        .map(|(snap, lab)| {
            let base = nearest_point(snap, c, &[])?;
            let label = lab.label_of(base).ok_or(Error::PointUnlabelled {
                x: base.x,
                y: base.y,
            })?;
            let q = quantum_rotation(lab, label)?;
            let z = local_oracle_matrix(chart, lab, label)?;
            let classical = mobius_apply(&z, &w);
            Ok(ConvergenceEntry {
                hbar: snap.hbar(),
                label,
                quantum: q.value,
                classical,
                error: projective_distance(&q.value, &classical),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let samples: Vec<(f64, f64)> = entries.iter().map(|e| (e.hbar.get(), e.error)).collect();
    Ok(ConvergenceReport {
        fitted_order: fit_order(&samples),
        entries,
    })
}
