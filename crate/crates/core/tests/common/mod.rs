#![allow(dead_code)]

use asymlat_core::chart::{generate_snapshot, ChartModel, OracleLabelling, PerturbationSpec};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use asymlat_core::{
    AlgoConfig, PlanckValue, Point2, SpectrumSnapshot, SystemPreset, UnimodularMatrix2, Window,
};

pub fn h(v: f64) -> PlanckValue {
    PlanckValue::new(v).unwrap()
}

/// Presets with a chart, as used across the integration tests.
pub fn chart_presets() -> Vec<SystemPreset> {
    vec![
        SystemPreset::Identity,
        SystemPreset::Linear { a: 2.0, b: 3.0 },
        SystemPreset::ShearNonlinear { kappa: 1.0 },
        SystemPreset::Semitoric {
            alpha: 0.0,
            mu: 0.25,
        },
    ]
}

/// The preset's window with a margin of about 10% of its smaller side
/// removed. The margin is irrational-looking so that no lattice point of the
/// test schedules sits on an edge.
pub fn inner_window(w: &Window) -> Window {
    w.shrink(0.103_141_59 * w.width().min(w.height())).unwrap()
}

pub fn config_for(preset: &SystemPreset) -> AlgoConfig {
    AlgoConfig::new(
        preset.default_center(),
        inner_window(&preset.default_window()),
    )
}

pub struct Case {
    pub chart: ChartModel,
    pub snapshot: SpectrumSnapshot,
    pub oracle: OracleLabelling,
    pub config: AlgoConfig,
}

pub fn case(preset: SystemPreset, hv: f64, perturb: PerturbationSpec) -> Case {
    let chart = preset.chart().unwrap();
    let (snapshot, oracle) =
        generate_snapshot(&chart, h(hv), preset.default_window(), &perturb).unwrap();
    Case {
        chart,
        snapshot,
        oracle,
        config: config_for(&preset),
    }
}

pub fn near(p: Point2, q: Point2, tol: f64) -> bool {
    p.dist(q) <= tol
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in `[lo, hi]`.
pub fn int_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

/// Uniform real in `[lo, hi)`.
pub fn real_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
}

/// A random element of SL(2,Z) with entries in `[-bound, bound]`.
pub fn random_sl2z(rng: &mut ChaCha8Rng, bound: i64) -> UnimodularMatrix2 {
    loop {
        let e: Vec<i64> = (0..4).map(|_| int_in(rng, -bound, bound)).collect();
        if let Ok(u) = UnimodularMatrix2::new(e[0], e[1], e[2], e[3]) {
            return u;
        }
    }
}

/// `w mod 1` from an independent 40-digit tanh-sinh evaluation in the height
/// variable (tests/oracles/pendulum_oracle.py).
pub const PENDULUM_REFERENCE: [((f64, f64), f64); 10] = [
    ((0.3, 0.2), 0.598_463_281_049_947_5),
    ((-0.3, 0.2), 0.401_536_718_950_052_5),
    ((0.5, 0.3), 0.663_452_870_130_985_3),
    ((1.0, 0.5), 0.776_377_608_889_142_9),
    ((0.2, -0.5), 0.544_665_622_097_786),
    ((0.1, -0.8), 0.520_003_219_966_723_4),
    ((0.8, 1.5), 0.915_746_689_461_328_9),
    ((-1.2, 2.0), 0.053_583_003_644_291_29),
    ((0.05, 1.2), 0.970_614_797_881_218),
    ((1.5, 3.0), 0.975_009_016_391_694_7),
];
