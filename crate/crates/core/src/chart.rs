//! Asymptotic charts `G_ħ = G0 + ħ G1 + ħ² G2`, synthetic spectra with known
//! labels, and the classical rotation number and drift read off a chart.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::geometry::{Matrix2, PlanckValue, Point2, PointKey, Window};
use crate::integer::{Label2, UnimodularMatrix2};
use crate::projective::Projective1;
use crate::snapshot::{SpectrumFamily, SpectrumSnapshot};

pub type PlaneMap = Arc<dyn Fn(Point2) -> Point2 + Send + Sync>;
pub type JacobianMap = Arc<dyn Fn(Point2) -> Matrix2 + Send + Sync>;
pub type DomainFilter = Arc<dyn Fn(Point2) -> bool + Send + Sync>;

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;
const FD_STEP: f64 = 1e-6;

/// An evaluable asymptotic chart on a rectangular domain `U`.
#[derive(Clone)]
pub struct ChartModel {
    name: String,
    domain: Window,
    filter: Option<DomainFilter>,
    g0: PlaneMap,
    g1: Option<PlaneMap>,
    g2: Option<PlaneMap>,
    jacobian_g0: Option<JacobianMap>,
}

impl fmt::Debug for ChartModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartModel")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("g1", &self.g1.is_some())
            .field("g2", &self.g2.is_some())
            .field("jacobian_g0", &self.jacobian_g0.is_some())
            .finish()
    }
}

impl ChartModel {
    /// A chart with principal term `g0` on the closed rectangle `domain`.
    pub fn new(
        domain: Window,
        g0: impl Fn(Point2) -> Point2 + Send + Sync + 'static,
    ) -> ChartModel {
        ChartModel {
            name: String::from("custom"),
            domain,
            filter: None,
            g0: Arc::new(g0),
            g1: None,
            g2: None,
            jacobian_g0: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_g1(mut self, g1: impl Fn(Point2) -> Point2 + Send + Sync + 'static) -> Self {
        self.g1 = Some(Arc::new(g1));
        self
    }

    pub fn with_g2(mut self, g2: impl Fn(Point2) -> Point2 + Send + Sync + 'static) -> Self {
        self.g2 = Some(Arc::new(g2));
        self
    }

    pub fn with_jacobian(
        mut self,
        jac: impl Fn(Point2) -> Matrix2 + Send + Sync + 'static,
    ) -> Self {
        self.jacobian_g0 = Some(Arc::new(jac));
        self
    }

    /// Replaces the rectangular domain, keeping any filter.
    pub fn with_domain(mut self, domain: Window) -> Self {
        self.domain = domain;
        self
    }

    /// Restricts the domain further to points where `keep` holds.
    pub fn with_filter(mut self, keep: impl Fn(Point2) -> bool + Send + Sync + 'static) -> Self {
        let keep: DomainFilter = Arc::new(keep);
        self.filter = Some(match self.filter.take() {
            None => keep,
            Some(old) => Arc::new(move |p| old(p) && keep(p)),
        });
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Window {
        &self.domain
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian_g0.is_some()
    }

    pub fn in_domain(&self, xi: Point2) -> bool {
        self.domain.contains_closed(xi) && self.filter.as_ref().is_none_or(|f| f(xi))
    }

    fn eval_raw(&self, h: f64, xi: Point2) -> Point2 {
        let mut v = (self.g0)(xi);
        if let Some(g1) = &self.g1 {
            v = v + h * g1(xi);
        }
        if let Some(g2) = &self.g2 {
            v = v + (h * h) * g2(xi);
        }
        v
    }

    /// `G0(ξ) + ħ G1(ξ) + ħ² G2(ξ)`.
    pub fn evaluate(&self, h: PlanckValue, xi: Point2) -> Result<Point2> {
        if !self.in_domain(xi) {
            return Err(Error::OutOfDomain { x: xi.x, y: xi.y });
        }
        Ok(self.eval_raw(h.get(), xi))
    }

    pub fn g0(&self, xi: Point2) -> Point2 {
        (self.g0)(xi)
    }

    /// `G0'(ξ)`, analytic when supplied, else central differences.
    pub fn jacobian_g0(&self, xi: Point2) -> Matrix2 {
        match &self.jacobian_g0 {
            Some(j) => j(xi),
            None => self.jacobian_fd(|p| (self.g0)(p), xi),
        }
    }

    /// Central-difference Jacobian of `G0`, ignoring any analytic one.
    pub fn jacobian_g0_fd(&self, xi: Point2) -> Matrix2 {
        self.jacobian_fd(|p| (self.g0)(p), xi)
    }

    fn jacobian_fd(&self, f: impl Fn(Point2) -> Point2, xi: Point2) -> Matrix2 {
        let dx = Point2::new(FD_STEP, 0.0);
        let dy = Point2::new(0.0, FD_STEP);
        let cx = (1.0 / (2.0 * FD_STEP)) * (f(xi + dx) - f(xi - dx));
        let cy = (1.0 / (2.0 * FD_STEP)) * (f(xi + dy) - f(xi - dy));
        Matrix2::from_columns(cx, cy)
    }

    /// Checks orientation and injectivity of `G0` on an `n x n` grid.
    pub fn validate(&self, n: usize) -> Result<()> {
        let n = n.max(2);
        let d = &self.domain;
        let mut images = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let xi = Point2::new(
                    d.xmin + d.width() * i as f64 / (n - 1) as f64,
                    d.ymin + d.height() * j as f64 / (n - 1) as f64,
                );
                if !self.in_domain(xi) {
                    continue;
                }
                let det = self.jacobian_g0(xi).det();
                if det.is_nan() || det <= 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "chart '{}' has det G0' = {det} at ({}, {})",
                        self.name, xi.x, xi.y
                    )));
                }
                images.push(self.g0(xi));
            }
        }
        let scale = images.iter().map(|p| p.norm()).fold(1.0, f64::max);
        images.sort_by(|a, b| a.lex_cmp(b));
        for (k, p) in images.iter().enumerate() {
            for q in &images[k + 1..] {
                if q.x - p.x > 1e-9 * scale {
                    break;
                }
                if p.dist(*q) <= 1e-9 * scale {
                    return Err(Error::InvalidInput(format!(
                        "chart '{}' is not injective near ({}, {})",
                        self.name, p.x, p.y
                    )));
                }
            }
        }
        Ok(())
    }

    /// The chart `ξ -> G(P ξ)`. Its lattice image is the same point set, with
    /// oracle labels transformed by `P⁻¹`.
    pub fn precompose(&self, p: UnimodularMatrix2) -> ChartModel {
        let m = p.matrix();
        let (a, b, c, d) = (m.a as f64, m.b as f64, m.c as f64, m.d as f64);
        let map = move |xi: Point2| Point2::new(a * xi.x + b * xi.y, c * xi.x + d * xi.y);
        let inv = p.inverse().matrix();
        let (ia, ib, ic, id) = (inv.a as f64, inv.b as f64, inv.c as f64, inv.d as f64);
        let old = self.domain;
        let corners = [
            Point2::new(old.xmin, old.ymin),
            Point2::new(old.xmin, old.ymax),
            Point2::new(old.xmax, old.ymin),
            Point2::new(old.xmax, old.ymax),
        ];
        let domain = Window::bounding(
            corners
                .iter()
                .map(|q| Point2::new(ia * q.x + ib * q.y, ic * q.x + id * q.y)),
        )
        .expect("four corners");
        let base = self.clone();
        let jac = {
            let base = base.clone();
            move |xi: Point2| {
                let mp = Matrix2::new(a, b, c, d);
                base.jacobian_g0(map(xi)).mul(&mp)
            }
        };
        let keep = {
            let base = base.clone();
            move |xi: Point2| base.in_domain(map(xi))
        };
        let g0 = {
            let f = base.g0.clone();
            move |xi: Point2| f(map(xi))
        };
        let mut out = ChartModel::new(domain, g0)
            .with_name(format!("{}∘{}", base.name, p))
            .with_jacobian(jac)
            .with_filter(keep);
        if let Some(g1) = base.g1.clone() {
            out = out.with_g1(move |xi| g1(map(xi)));
        }
        if let Some(g2) = base.g2.clone() {
            out = out.with_g2(move |xi| g2(map(xi)));
        }
        out
    }

    /// Solves `G0(ξ) = c` for `ξ` in the domain.
    pub fn invert_g0(&self, c: Point2) -> Result<Point2> {
        self.invert_with(c, |xi| self.g0(xi), |xi| self.jacobian_g0(xi))
    }

    /// Solves `G_ħ(ξ) = target` for `ξ` in the domain.
    pub fn invert(&self, h: PlanckValue, target: Point2) -> Result<Point2> {
        let hv = h.get();
        self.invert_with(
            target,
            |xi| self.eval_raw(hv, xi),
            |xi| {
                if self.g1.is_none() && self.g2.is_none() {
                    self.jacobian_g0(xi)
                } else {
                    self.jacobian_fd(|p| self.eval_raw(hv, p), xi)
                }
            },
        )
    }

    fn invert_with(
        &self,
        target: Point2,
        f: impl Fn(Point2) -> Point2,
        jac: impl Fn(Point2) -> Matrix2,
    ) -> Result<Point2> {
        let fail = Error::InversionFailed {
            x: target.x,
            y: target.y,
        };
        let scale = target.norm().max(1.0);
        let mut starts = Vec::with_capacity(2);
        if self.in_domain(target) {
            starts.push(target);
        }
        starts.push(self.grid_presearch(target, &f));
        for start in starts {
            if let Some(xi) = newton(target, start, &f, &jac, NEWTON_TOL * scale) {
                let slack = 1e-9 * (self.domain.width() + self.domain.height());
                let grown = Window {
                    xmin: self.domain.xmin - slack,
                    xmax: self.domain.xmax + slack,
                    ymin: self.domain.ymin - slack,
                    ymax: self.domain.ymax + slack,
                };
                if grown.contains_closed(xi) {
                    return Ok(xi);
                }
            }
        }
        Err(fail)
    }

    fn grid_presearch(&self, target: Point2, f: &impl Fn(Point2) -> Point2) -> Point2 {
        let d = &self.domain;
        let n = 40;
        let mut best = (f64::INFINITY, d.center());
        for i in 0..=n {
            for j in 0..=n {
                let xi = Point2::new(
                    d.xmin + d.width() * i as f64 / n as f64,
                    d.ymin + d.height() * j as f64 / n as f64,
                );
                if !self.in_domain(xi) {
                    continue;
                }
                let r = f(xi).dist(target);
                if r < best.0 {
                    best = (r, xi);
                }
            }
        }
        best.1
    }

    /// The label `k` with `G_ħ(ħ k) ≈ λ`, found by inverting the chart.
    ///
    /// `tol` bounds the accepted residual `|G_ħ(ħ k) − λ|`.
    pub fn oracle_label(&self, h: PlanckValue, lambda: Point2, tol: f64) -> Result<Label2> {
        let xi = self.invert(h, lambda)?;
        let hv = h.get();
        let k = Label2::new(libm::round(xi.x / hv) as i64, libm::round(xi.y / hv) as i64);
        let back = self.eval_raw(hv, Point2::new(k.n as f64 * hv, k.m as f64 * hv));
        if back.dist(lambda) <= tol {
            Ok(k)
        } else {
            Err(Error::PointUnlabelled {
                x: lambda.x,
                y: lambda.y,
            })
        }
    }
}

/// Damped Newton iteration with backtracking on the residual norm.
fn newton(
    target: Point2,
    start: Point2,
    f: &impl Fn(Point2) -> Point2,
    jac: &impl Fn(Point2) -> Matrix2,
    tol: f64,
) -> Option<Point2> {
    let mut xi = start;
    let mut r = f(xi) - target;
    for _ in 0..NEWTON_MAX_ITER {
        if r.norm() <= tol {
            return Some(xi);
        }
        let step = jac(xi).inverse()?.apply(r);
        let mut t = 1.0;
        loop {
            let cand = xi - t * step;
            let rc = f(cand) - target;
            if rc.is_finite() && rc.norm() < r.norm() {
                xi = cand;
                r = rc;
                break;
            }
            t *= 0.5;
            if t < 1e-10 {
                return (r.norm() <= tol * 1e3).then_some(xi);
            }
        }
    }
    (r.norm() <= tol).then_some(xi)
}

/// Classical rotation number `[∂₁g : ∂₂g]` at `c`, where `g` is the second
/// component of `G0` and the derivative is taken at `G0⁻¹(c)`.
pub fn classical_rotation(chart: &ChartModel, c: Point2) -> Result<Projective1> {
    let xi0 = chart.invert_g0(c)?;
    let j = chart.jacobian_g0(xi0);
    if j.c.abs() < 1e-12 && j.d.abs() < 1e-12 {
        return Err(Error::DegenerateGradient);
    }
    Projective1::new(j.c, j.d)
}

/// Drift `δ_c = G0'(ξ0) ξ0` with `ξ0 = G0⁻¹(c)`.
pub fn classical_drift(chart: &ChartModel, c: Point2) -> Result<Point2> {
    let xi0 = chart.invert_g0(c)?;
    Ok(chart.jacobian_g0(xi0).apply(xi0))
}

/// Random displacement of each generated point, uniform in the disk of
/// radius `amplitude · ħ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    pub amplitude: f64,
    pub seed: u64,
}

impl PerturbationSpec {
    pub const NONE: PerturbationSpec = PerturbationSpec {
        amplitude: 0.0,
        seed: 0,
    };

    pub fn new(amplitude: f64, seed: u64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "perturbation amplitude must be >= 0, got {amplitude}"
            )));
        }
        Ok(PerturbationSpec { amplitude, seed })
    }
}

/// Seeded noise source: ChaCha8 keyed by the base seed, one stream per
/// snapshot index.
struct NoiseStream {
    rng: ChaCha8Rng,
    radius: f64,
}

impl NoiseStream {
    fn new(spec: &PerturbationSpec, stream: u64, h: f64) -> NoiseStream {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(stream);
        NoiseStream {
            rng,
            radius: spec.amplitude * h * h,
        }
    }

    fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn sample(&mut self) -> Point2 {
        let r = self.radius * libm::sqrt(self.unit());
        let theta = core::f64::consts::TAU * self.unit();
        Point2::new(r * libm::cos(theta), r * libm::sin(theta))
    }
}

/// Ground-truth labels of a generated snapshot.
#[derive(Debug, Clone, Default)]
pub struct OracleLabelling {
    labels: BTreeMap<PointKey, (Point2, Label2)>,
}

impl OracleLabelling {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Point2, Label2)>) -> Self {
        OracleLabelling {
            labels: pairs.into_iter().map(|(p, l)| (p.key(), (p, l))).collect(),
        }
    }

    pub fn label_of(&self, p: Point2) -> Option<Label2> {
        self.labels.get(&p.key()).map(|&(_, l)| l)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point2, Label2)> + '_ {
        self.labels.values().copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Generates `{G_ħ(ħ k) + noise : ħ k ∈ U, result ∈ window}` with oracle labels.
///
/// Noise is drawn in enumeration order (`k1` outer, `k2` inner) for every
/// lattice point whose clean image falls in the window; points pushed out of
/// the window by the noise are dropped.
pub fn generate_snapshot(
    chart: &ChartModel,
    h: PlanckValue,
    window: Window,
    perturb: &PerturbationSpec,
) -> Result<(SpectrumSnapshot, OracleLabelling)> {
    generate_indexed(chart, h, window, perturb, 0)
}

fn generate_indexed(
    chart: &ChartModel,
    h: PlanckValue,
    window: Window,
    perturb: &PerturbationSpec,
    stream: u64,
) -> Result<(SpectrumSnapshot, OracleLabelling)> {
    let hv = h.get();
    let d = chart.domain();
    let k1lo = libm::ceil(d.xmin / hv) as i64;
    let k1hi = libm::floor(d.xmax / hv) as i64;
    let k2lo = libm::ceil(d.ymin / hv) as i64;
    let k2hi = libm::floor(d.ymax / hv) as i64;
    let mut noise = (perturb.amplitude > 0.0).then(|| NoiseStream::new(perturb, stream, hv));
    let mut points = Vec::new();
    let mut pairs = Vec::new();
    for k1 in k1lo..=k1hi {
        for k2 in k2lo..=k2hi {
            let xi = Point2::new(k1 as f64 * hv, k2 as f64 * hv);
            if !chart.in_domain(xi) {
                continue;
            }
            let mut p = chart.eval_raw(hv, xi);
            if !window.contains(p) {
                continue;
            }
            if let Some(n) = noise.as_mut() {
                p = p + n.sample();
                if !window.contains(p) {
                    continue;
                }
            }
            points.push(p);
            pairs.push((p, Label2::new(k1, k2)));
        }
    }
    if points.is_empty() {
        return Err(Error::EmptySnapshot);
    }
    let snapshot = SpectrumSnapshot::new(h, window, points)?;
    Ok((snapshot, OracleLabelling::from_pairs(pairs)))
}

/// One snapshot per ħ (strictly decreasing); snapshot `i` uses noise stream `i`.
pub fn generate_family(
    chart: &ChartModel,
    hs: &[PlanckValue],
    window: Window,
    perturb: &PerturbationSpec,
) -> Result<(SpectrumFamily, Vec<OracleLabelling>)> {
    if hs.is_empty() {
        return Err(Error::InvalidSchedule("empty hbar list".into()));
    }
    if hs.windows(2).any(|w| w[1].get() >= w[0].get()) {
        return Err(Error::InvalidSchedule(
            "hbar list must be strictly decreasing".into(),
        ));
    }
    let mut snaps = Vec::with_capacity(hs.len());
    let mut oracles = Vec::with_capacity(hs.len());
    for (i, &h) in hs.iter().enumerate() {
        let (s, o) = generate_indexed(chart, h, window, perturb, i as u64)?;
        snaps.push(s);
        oracles.push(o);
    }
    Ok((SpectrumFamily::new(snaps)?, oracles))
}

/// C² step from 0 at `a` to 1 at `b`, with its derivative.
fn smoothstep(a: f64, b: f64, x: f64) -> (f64, f64) {
    let t = ((x - a) / (b - a)).clamp(0.0, 1.0);
    let dt = if x > a && x < b { 1.0 / (b - a) } else { 0.0 };
    let v = t * t * t * (t * (6.0 * t - 15.0) + 10.0);
    (v, 30.0 * t * t * (t - 1.0) * (t - 1.0) * dt)
}

/// Built-in charts used by the test corpus and the command-line tool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemPreset {
    /// `G0 = Id`.
    Identity,
    /// `G0 = (ξ1, a ξ1 + b ξ2)`, `b > 0`.
    Linear { a: f64, b: f64 },
    /// `G0 = (ξ1, ξ1²/2 + κ ξ2²/2 + ξ2)`, `0 <= κ <= 1`.
    ShearNonlinear { kappa: f64 },
    /// `G0 = (ξ1 + α, 2 ξ1 + 3 ξ2 + ξ1²/2)`, `G1 = (μ, 1/2)`: the first
    /// component is exactly `α + ħ(j + μ)` on the lattice.
    Semitoric { alpha: f64, mu: f64 },
    /// Spherical pendulum; only its classical rotation number is modelled.
    PendulumClassical,
    /// `G0 = (ξ1 − ξ2/2 − β(ξ2 − 1/2)²/2, ξ2)`. At `ξ2 = 1/2` the steps
    /// `e2` and `e1 + e2` have equal image length, so the nearest-neighbour
    /// choice of a second basis vector depends on where the base point sits.
    BasisFlipping { beta: f64 },
    /// `G0 = (ξ1 − φ(ξ1) ξ2, 1.2 ξ2)` with `φ` a smooth step from 0 to 1 over
    /// `0.2 <= ξ1 <= 0.8`. Short lattice vectors change by `[[1,1],[0,1]]`
    /// from the left region to the right one.
    TwoRegion,
}

impl SystemPreset {
    pub fn name(&self) -> &'static str {
        match self {
            SystemPreset::Identity => "identity",
            SystemPreset::Linear { .. } => "linear",
            SystemPreset::ShearNonlinear { .. } => "shear_nonlinear",
            SystemPreset::Semitoric { .. } => "semitoric",
            SystemPreset::PendulumClassical => "pendulum_classical",
            SystemPreset::BasisFlipping { .. } => "basis_flipping",
            SystemPreset::TwoRegion => "two_region",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        match *self {
            SystemPreset::Linear { a, b } if !(a.is_finite() && b.is_finite() && b > 0.0) => bad(
                format!("linear preset needs finite a and b > 0, got a={a}, b={b}"),
            ),
            SystemPreset::ShearNonlinear { kappa } if !(0.0..=1.0).contains(&kappa) => bad(
                format!("shear_nonlinear needs 0 <= kappa <= 1, got {kappa}"),
            ),
            SystemPreset::Semitoric { alpha, mu }
                if !(alpha.is_finite() && (0.0..1.0).contains(&mu)) =>
            {
                bad(format!(
                    "semitoric needs finite alpha and 0 <= mu < 1, got mu={mu}"
                ))
            }
            SystemPreset::BasisFlipping { beta } if !(0.0..=2.0).contains(&beta) => {
                bad(format!("basis_flipping needs 0 <= beta <= 2, got {beta}"))
            }
            _ => Ok(()),
        }
    }

    pub fn chart(&self) -> Result<ChartModel> {
        self.validate()?;
        let w = |a, b, c, d| Window::new(a, b, c, d).expect("preset domain");
        let chart = match *self {
            SystemPreset::Identity => {
                ChartModel::new(w(-1.0, 3.0, -1.0, 3.0), |p| p).with_jacobian(|_| Matrix2::IDENTITY)
            }
            SystemPreset::Linear { a, b } => {
                let r = a.abs() / b;
                ChartModel::new(w(-1.0, 2.0, -r - 1.0, r + 2.0), move |p: Point2| {
                    Point2::new(p.x, a * p.x + b * p.y)
                })
                .with_jacobian(move |_| Matrix2::new(1.0, 0.0, a, b))
            }
            SystemPreset::ShearNonlinear { kappa } => {
                ChartModel::new(w(-0.5, 2.5, -0.5, 2.5), move |p: Point2| {
                    Point2::new(p.x, 0.5 * p.x * p.x + 0.5 * kappa * p.y * p.y + p.y)
                })
                .with_jacobian(move |p| Matrix2::new(1.0, 0.0, p.x, 1.0 + kappa * p.y))
            }
            SystemPreset::Semitoric { alpha, mu } => {
                ChartModel::new(w(-1.0, 1.0, 0.0, 1.5), move |p: Point2| {
                    Point2::new(p.x + alpha, 2.0 * p.x + 3.0 * p.y + 0.5 * p.x * p.x)
                })
                .with_jacobian(|p| Matrix2::new(1.0, 0.0, 2.0 + p.x, 3.0))
                .with_g1(move |_| Point2::new(mu, 0.5))
            }
            SystemPreset::PendulumClassical => {
                return Err(Error::InvalidInput(
                    "pendulum_classical has no asymptotic chart".into(),
                ))
            }
            SystemPreset::BasisFlipping { beta } => {
                ChartModel::new(w(-2.0, 2.5, -0.5, 1.5), move |p: Point2| {
                    let s = p.y - 0.5;
                    Point2::new(p.x - 0.5 * p.y - 0.5 * beta * s * s, p.y)
                })
                .with_jacobian(move |p| Matrix2::new(1.0, -0.5 - beta * (p.y - 0.5), 0.0, 1.0))
            }
            SystemPreset::TwoRegion => ChartModel::new(w(-0.5, 1.5, -0.25, 0.25), |p: Point2| {
                let (phi, _) = smoothstep(0.2, 0.8, p.x);
                Point2::new(p.x - phi * p.y, 1.2 * p.y)
            })
            .with_jacobian(|p| {
                let (phi, dphi) = smoothstep(0.2, 0.8, p.x);
                Matrix2::new(1.0 - dphi * p.y, -phi, 0.0, 1.2)
            }),
        };
        Ok(chart.with_name(self.name()))
    }

    /// An image-side window fully covered by the lattice image.
    pub fn default_window(&self) -> Window {
        let w = |a, b, c, d| Window::new(a, b, c, d).expect("preset window");
        match *self {
            SystemPreset::Identity => w(0.0, 1.0, 0.0, 1.0),
            SystemPreset::Linear { a, b } => w(0.0, 1.0, a.min(0.0), a.max(0.0) + b),
            SystemPreset::ShearNonlinear { .. } => w(0.25, 1.75, 1.2, 2.4),
            SystemPreset::Semitoric { alpha, .. } => w(alpha - 0.3, alpha + 0.3, 1.5, 3.0),
            SystemPreset::PendulumClassical => w(-1.0, 1.0, -1.0, 3.0),
            SystemPreset::BasisFlipping { .. } => w(-0.5, 0.5, 0.0, 1.0),
            SystemPreset::TwoRegion => w(-0.1, 1.1, -0.25, 0.25),
        }
    }

    /// A point of the default window at which the chart is well behaved.
    pub fn default_center(&self) -> Point2 {
        match *self {
            SystemPreset::Identity => Point2::new(0.5, 0.5),
            SystemPreset::Linear { a, b } => Point2::new(0.5, 0.5 * (a + b)),
            SystemPreset::ShearNonlinear { .. } => Point2::new(1.0, 1.5),
            SystemPreset::Semitoric { alpha, .. } => Point2::new(alpha, 2.25),
            SystemPreset::PendulumClassical => Point2::new(0.0, 0.0),
            SystemPreset::BasisFlipping { .. } => Point2::new(0.0, 0.5),
            SystemPreset::TwoRegion => Point2::new(0.25, 0.0),
        }
    }
}
