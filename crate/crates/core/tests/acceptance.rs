//! End-to-end acceptance checks. Each criterion prints one line:
//!
//! `AC<n> PASS|FAIL <seconds>s  <title>: <detail>`
//!
//! and the test fails if any criterion fails or overruns its time budget.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use asymlat_core::chart::{classical_drift, generate_family, generate_snapshot, PerturbationSpec};
use asymlat_core::fixed::{label_window, oracle_transition};
use asymlat_core::integer::extended_gcd;
use asymlat_core::pendulum::{elliptic_boundary_point, linearized_rotation};
use asymlat_core::projective::mobius_apply_exact;
use asymlat_core::rotnum::{compare_convergence, quantum_rotation, rotation_field};
use asymlat_core::semitoric::{detect_strips, label_from_elliptic_boundary, label_semitoric};
use asymlat_core::sequence::{
    estimate_drift, monodromy_along_path, uniform_label_family, DriftConfig,
};
use asymlat_core::{
    pendulum_rotation, projective_distance, AffineInt2, IntMatrix2, Label2, Labelling, PlanckValue,
    Point2, SystemPreset, UnimodularMatrix2, Window,
};
use common::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: asymlat_core::Error) -> String {
    format!("{} ({e:?})", e.name())
}

/// Label-to-oracle map `oracle = Z·label + s`, checked on every labelled point.
fn certified_relation(
    l: &Labelling,
    oracle: &asymlat_core::chart::OracleLabelling,
) -> Result<AffineInt2, String> {
    let (z, s) = oracle_transition(l, oracle).map_err(err)?;
    ensure(z.det() == 1, || format!("det Z = {}", z.det()))?;
    let t = AffineInt2::new(UnimodularMatrix2::try_from_matrix(z).map_err(err)?, s);
    for (p, lab) in l.iter() {
        let want = oracle.label_of(p).ok_or("labelled point not generated")?;
        ensure(t.apply(lab) == want, || format!("relation fails at {lab}"))?;
    }
    Ok(t)
}

fn all_chart_presets() -> Vec<SystemPreset> {
    let mut v = chart_presets();
    v.push(SystemPreset::BasisFlipping { beta: 1.0 });
    v.push(SystemPreset::TwoRegion);
    v
}

fn ac1() -> Outcome {
    let p = SystemPreset::Linear { a: 2.0, b: 3.0 };
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for hv in [0.1, 0.05, 0.02] {
        let c = case(p, hv, PerturbationSpec::NONE);
        let l = label_window(&c.snapshot, &c.config).map_err(err)?.labelling;
        let t = certified_relation(&l, &c.oracle)?;
        // Rotation numbers are read in the chart's own labels.
        let field = rotation_field(&l.relabel(&t));
        ensure(!field.is_empty(), || "no interior labels".into())?;
        for s in field.values() {
            worst = worst.max((s.value_real - 2.0 / 3.0).abs());
            count += 1;
        }
    }
    ensure(worst <= 1e-12, || format!("max |w - 2/3| = {worst:e}"))?;
    Ok(format!(
        "{count} interior labels, max |w - 2/3| = {worst:.1e}"
    ))
}

fn ac2() -> Outcome {
    let p = SystemPreset::ShearNonlinear { kappa: 1.0 };
    let chart = p.chart().map_err(err)?;
    let hs: Vec<PlanckValue> = [0.02, 0.01, 0.005, 0.0025].iter().map(|&v| h(v)).collect();
    // ∂₂g0 = 1 + ξ2 ≥ 0.5 on the whole chart domain.
    let (fam, _) =
        generate_family(&chart, &hs, p.default_window(), &PerturbationSpec::NONE).map_err(err)?;
    let (ls, _) = uniform_label_family(&fam, &config_for(&p)).map_err(err)?;
    let report = compare_convergence(&chart, &fam, &ls, Point2::new(1.0, 2.0)).map_err(err)?;
    let order = report.fitted_order.ok_or("errors at float noise")?;
    let errors: Vec<String> = report
        .entries
        .iter()
        .map(|e| format!("{:.2e}", e.error))
        .collect();
    ensure((0.8..=1.3).contains(&order), || format!("slope {order:.3}"))?;
    // Uniformity: one constant bounds error/ħ across the chart.
    let mut c_max: f64 = 0.0;
    for (x, y) in [(0.8, 1.7), (1.2, 1.7), (1.0, 2.0), (0.8, 2.1), (1.2, 2.1)] {
        let r = compare_convergence(&chart, &fam, &ls, Point2::new(x, y)).map_err(err)?;
        for e in &r.entries {
            c_max = c_max.max(e.error / e.hbar.get());
        }
    }
    ensure(c_max <= 5.0, || format!("error/ħ up to {c_max:.3}"))?;
    Ok(format!(
        "slope {order:.3}, errors [{}], max error/ħ {c_max:.3}",
        errors.join(", ")
    ))
}

fn ac3() -> Outcome {
    let mut r = rng(2024);
    let mut points = 0;
    for preset in chart_presets() {
        for _ in 0..20 {
            let u = random_sl2z(&mut r, 3);
            let chart = preset.chart().map_err(err)?.precompose(u);
            let (s, oracle) = generate_snapshot(
                &chart,
                h(0.05),
                preset.default_window(),
                &PerturbationSpec::NONE,
            )
            .map_err(err)?;
            let l = label_window(&s, &config_for(&preset))
                .map_err(|e| format!("{} {:?}: {}", preset.name(), u.matrix().rows(), err(e)))?
                .labelling;
            certified_relation(&l, &oracle)
                .map_err(|e| format!("{} {:?}: {e}", preset.name(), u.matrix().rows()))?;
            points += l.len();
        }
    }
    Ok(format!(
        "80 charts, {points} labelled points, one det +1 relation each"
    ))
}

fn ac4() -> Outcome {
    let mut c_est: f64 = 0.0;
    let mut matched = 0;
    let mut edge = 0;
    for preset in all_chart_presets() {
        for hv in [0.05, 0.02, 0.01] {
            let clean = case(preset, hv, PerturbationSpec::NONE);
            let noisy = case(preset, hv, PerturbationSpec::new(0.1, 17).map_err(err)?);
            let a = label_window(&clean.snapshot, &clean.config)
                .map_err(err)?
                .labelling;
            let b = label_window(&noisy.snapshot, &noisy.config)
                .map_err(err)?
                .labelling;
            let by_oracle = |l: &Labelling, o: &asymlat_core::chart::OracleLabelling| {
                l.iter()
                    .map(|(p, k)| (o.label_of(p).unwrap(), k))
                    .collect::<BTreeMap<Label2, Label2>>()
            };
            let ma = by_oracle(&a, &clean.oracle);
            let mb = by_oracle(&b, &noisy.oracle);
            let inner = clean.config.inner_window;
            let oracle_points: BTreeMap<Label2, Point2> =
                clean.oracle.iter().map(|(p, k)| (k, p)).collect();
            for k in ma.keys().chain(mb.keys()).collect::<BTreeSet<_>>() {
                match (ma.get(k), mb.get(k)) {
                    (Some(x), Some(y)) => {
                        ensure(x == y, || {
                            format!("{} h={hv}: {k} -> {x} vs {y}", preset.name())
                        })?;
                        matched += 1;
                    }
                    _ => {
                        // Entering or leaving the inner window is only allowed
                        // within the noise radius of its edge.
                        let p = oracle_points[k];
                        let d = (p.x - inner.xmin)
                            .abs()
                            .min((inner.xmax - p.x).abs())
                            .min((p.y - inner.ymin).abs())
                            .min((inner.ymax - p.y).abs());
                        ensure(d <= 0.1 * hv * hv, || {
                            format!("{} h={hv}: {k} labelled in one run only", preset.name())
                        })?;
                        edge += 1;
                    }
                }
            }
            for (k, s) in rotation_field(&a) {
                let ko = ma.iter().find(|(_, &v)| v == k).map(|(o, _)| *o).unwrap();
                let Some(&kb) = mb.get(&ko) else { continue };
                let Ok(other) = quantum_rotation(&b, kb) else {
                    continue;
                };
                c_est = c_est.max(projective_distance(&s.value, &other.value) / hv);
            }
        }
    }
    ensure(c_est <= 10.0, || {
        format!("rotation constant C = {c_est:.3}")
    })?;
    Ok(format!(
        "{matched} assignments identical, {edge} at the window edge, rotation C = {c_est:.3}"
    ))
}

fn ac5() -> Outcome {
    let mut points = 0;
    for mu in [0.0, 0.25, 0.7] {
        let p = SystemPreset::Semitoric { alpha: 0.0, mu };
        for hv in [0.05, 0.02, 0.01] {
            let c = case(p, hv, PerturbationSpec::NONE);
            let (_, strips) = detect_strips(&c.snapshot).map_err(err)?;
            let r = strips.max_residual();
            ensure(r <= 0.25 * hv, || format!("mu={mu} h={hv}: residual {r:e}"))?;
            let l = label_semitoric(&c.snapshot, &c.config).map_err(err)?;
            let offsets: BTreeSet<i64> = l
                .iter()
                .map(|(p, k)| k.n - strips.strip_of(p).unwrap())
                .collect();
            ensure(offsets.len() == 1, || {
                format!("mu={mu} h={hv}: offsets {offsets:?}")
            })?;
            points += l.len();
        }
    }
    Ok(format!("{points} points, one strip offset per run"))
}

fn ac6() -> Outcome {
    let preset = SystemPreset::Semitoric {
        alpha: 0.0,
        mu: 0.25,
    };
    // ξ2 ≥ 0 puts the elliptic boundary at the bottom of the spectrum.
    let chart = preset
        .chart()
        .map_err(err)?
        .with_domain(Window::new(-1.0, 1.0, 0.0, 1.5).unwrap());
    let w = Window::new(-0.3, 0.3, -1.0, 1.5).unwrap();
    let mut points = 0;
    for hv in [0.05, 0.02] {
        let (s, oracle) =
            generate_snapshot(&chart, h(hv), w, &PerturbationSpec::NONE).map_err(err)?;
        let l = label_from_elliptic_boundary(&s).map_err(err)?;
        ensure(l.len() == s.len(), || "unlabelled points".into())?;
        let mut shifts = BTreeSet::new();
        for (p, k) in l.iter() {
            let o = oracle.label_of(p).unwrap();
            ensure(o.m == k.m, || {
                format!("h={hv}: rank {} vs oracle {}", k.m, o.m)
            })?;
            shifts.insert(k.n - o.n);
        }
        ensure(shifts.len() == 1, || format!("h={hv}: shifts {shifts:?}"))?;
        points += l.len();
    }
    Ok(format!("{points} points match (j + const, k2)"))
}

fn ac7() -> Outcome {
    let hs: Vec<PlanckValue> = (1..=20).map(|j| h(0.2 / j as f64)).collect();
    let mut runs = vec![];
    // The two-region atlas is left out: it is built for local windows and its
    // full strip is not labellable at ħ = 0.1.
    let presets = all_chart_presets()
        .into_iter()
        .filter(|p| *p != SystemPreset::TwoRegion);
    for p in presets {
        let (window, config) = match p {
            // The default window holds too few strips at ħ = 0.2.
            SystemPreset::Semitoric { .. } => {
                let w = Window::new(-0.55, 0.55, 1.0, 3.5).unwrap();
                (
                    w,
                    asymlat_core::AlgoConfig::new(p.default_center(), inner_window(&w)),
                )
            }
            SystemPreset::BasisFlipping { .. } => {
                (p.default_window(), config_for(&p).with_tie_tolerance(0.0))
            }
            _ => (p.default_window(), config_for(&p)),
        };
        let (fam, oracles) = generate_family(
            &p.chart().map_err(err)?,
            &hs,
            window,
            &PerturbationSpec::NONE,
        )
        .map_err(err)?;
        let (ls, state) =
            uniform_label_family(&fam, &config).map_err(|e| format!("{}: {}", p.name(), err(e)))?;
        let mut linear = BTreeSet::new();
        for (l, o) in ls.iter().zip(&oracles) {
            let t = certified_relation(l, o).map_err(|e| format!("{}: {e}", p.name()))?;
            linear.insert(t.linear.matrix().rows());
        }
        ensure(linear.len() == 1, || {
            format!("{}: linear parts {linear:?}", p.name())
        })?;
        let corrections = state.steps[1..]
            .iter()
            .filter(|s| s.a_sharp != Some(IntMatrix2::IDENTITY))
            .count();
        runs.push(format!("{} ({corrections} corrections)", p.name()));
    }
    Ok(format!("one linear part per family: {}", runs.join(", ")))
}

fn ac8() -> Outcome {
    let mut out = vec![];
    let cases = [
        (SystemPreset::Identity, Point2::new(0.4, 0.6)),
        (
            SystemPreset::ShearNonlinear { kappa: 0.0 },
            Point2::new(1.0, 1.5),
        ),
        (
            SystemPreset::ShearNonlinear { kappa: 1.0 },
            Point2::new(1.0, 2.0),
        ),
    ];
    for (p, c) in cases {
        let chart = p.chart().map_err(err)?;
        let dc = classical_drift(&chart, c).map_err(err)?;
        let mut errors = vec![];
        for inv in [25.0, 50.0, 100.0, 200.0] {
            // The gap in 1/ħ has to stay below the drift-dependent ε; 0.05
            // keeps the moved point inside the uniqueness ball at |δ| ≈ 3.
            let hs = [h(1.0 / inv), h(1.0 / (inv + 0.05))];
            let (fam, _) =
                generate_family(&chart, &hs, p.default_window(), &PerturbationSpec::NONE)
                    .map_err(err)?;
            let d = estimate_drift(&fam, c, &DriftConfig::default())
                .map_err(|e| format!("{} 1/ħ={inv}: {}", p.name(), err(e)))?;
            errors.push((1.0 / inv, d.value.dist(dc)));
        }
        let c_est = errors.iter().map(|&(h1, e)| e / h1).fold(0.0, f64::max);
        for w in errors.windows(2) {
            let (a, b) = (w[0].1, w[1].1);
            // Both at float noise: nothing left to halve.
            if a <= 1e-12 && b <= 1e-12 {
                continue;
            }
            ensure(b <= 0.75 * a, || {
                format!("{}: error ratio {:.3} ({a:e} -> {b:e})", p.name(), b / a)
            })?;
        }
        out.push(format!("{p:?} C = {c_est:.3}"));
    }
    Ok(out.join(", "))
}

fn ac9() -> Outcome {
    let p = SystemPreset::TwoRegion;
    let w1 = Window::new(-0.07, 0.57, -0.22, 0.22).unwrap();
    let w2 = Window::new(0.43, 1.07, -0.22, 0.22).unwrap();
    let want = IntMatrix2::new(1, 1, 0, 1);
    for hv in [0.05, 0.02, 0.01] {
        let (s, _) = generate_snapshot(
            &p.chart().map_err(err)?,
            h(hv),
            p.default_window(),
            &PerturbationSpec::NONE,
        )
        .map_err(err)?;
        let m = monodromy_along_path(&s, &[w1, w2], 0.1).map_err(err)?;
        ensure(m.matrix() == want, || {
            format!("h={hv}: {:?}", m.matrix().rows())
        })?;
        let back = monodromy_along_path(&s, &[w1, w2, w1], 0.1).map_err(err)?;
        ensure(back.is_identity(), || {
            format!("h={hv}: there and back {:?}", back.matrix().rows())
        })?;
    }
    let id = SystemPreset::Identity;
    let (s, _) = generate_snapshot(
        &id.chart().map_err(err)?,
        h(0.05),
        Window::new(0.0, 1.0, 0.0, 1.0).unwrap(),
        &PerturbationSpec::NONE,
    )
    .map_err(err)?;
    let a = Window::new(0.03, 0.63, 0.03, 0.63).unwrap();
    let b = Window::new(0.37, 0.97, 0.03, 0.63).unwrap();
    let c = Window::new(0.37, 0.97, 0.37, 0.97).unwrap();
    let d = Window::new(0.03, 0.63, 0.37, 0.97).unwrap();
    let m = monodromy_along_path(&s, &[a, b, c, d, a], 0.1).map_err(err)?;
    ensure(m.is_identity(), || {
        format!("closed chain {:?}", m.matrix().rows())
    })?;
    Ok("two-region transition [[1,1],[0,1]] at 3 ħ, closed chain identity".into())
}

fn ac10() -> Outcome {
    let mut r = rng(10_000);
    for i in 0..10_000 {
        let a = random_sl2z(&mut r, 6).matrix();
        let b = random_sl2z(&mut r, 6).matrix();
        let (p, q) = loop {
            let p = int_in(&mut r, -1000, 1000) as i128;
            let q = int_in(&mut r, -1000, 1000) as i128;
            if p != 0 || q != 0 {
                break (p, q);
            }
        };
        let lhs = mobius_apply_exact(&a, mobius_apply_exact(&b, (p, q)));
        let rhs = mobius_apply_exact(&b.mul(&a), (p, q));
        ensure(lhs == rhs, || format!("case {i}: composition law"))?;
        // An integer pair stays integer, and SL(2,Z) keeps the gcd, so a
        // reduced fraction maps to a reduced fraction.
        let g = |(x, y): (i128, i128)| extended_gcd(x as i64, y as i64).0.abs();
        ensure(g(lhs) == g((p, q)), || format!("case {i}: gcd changed"))?;
        ensure(lhs != (0, 0), || format!("case {i}: degenerate image"))?;
    }
    Ok("10000 cases exact".into())
}

fn ac11() -> Outcome {
    let preset = SystemPreset::PendulumClassical;
    let mut worst: f64 = 0.0;
    for ((j, e), want) in PENDULUM_REFERENCE {
        let got = pendulum_rotation(&preset, Point2::new(j, e)).map_err(err)?;
        worst = worst.max((got - want).abs() / want.abs());
    }
    ensure(worst <= 1e-6, || format!("max relative error {worst:e}"))?;
    let mut lin_worst: f64 = 0.0;
    for k in 1..10 {
        let z = -0.1 * k as f64;
        let c = elliptic_boundary_point(z).map_err(err)?;
        let w = pendulum_rotation(&preset, Point2::new(c.x, c.y + 1e-7)).map_err(err)?;
        lin_worst = lin_worst.max((w - linearized_rotation(z).map_err(err)?).abs());
    }
    ensure(lin_worst < 1e-3, || {
        format!("linearization gap {lin_worst:e}")
    })?;
    Ok(format!(
        "reference max rel error {worst:.1e}, linearization gap {lin_worst:.1e}"
    ))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("AC1", "exact recovery on the linear chart", 1, ac1),
        ("AC2", "first-order convergence", 5, ac2),
        ("AC3", "GA+(2,Z) equivalence", 10, ac3),
        ("AC4", "robustness to O(ħ²) noise", 10, ac4),
        ("AC5", "semitoric strips", 2, ac5),
        ("AC6", "elliptic half-lattice", 1, ac6),
        ("AC7", "sequence stationarity", 20, ac7),
        ("AC8", "drift accuracy", 2, ac8),
        ("AC9", "monodromy composition", 5, ac9),
        ("AC10", "Möbius algebra", 1, ac10),
        ("AC11", "pendulum rotation", 10, ac11),
    ];
    let mut failed = vec![];
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > Duration::from_secs(budget) => {
                Err(format!("{d}; over the {budget} s budget"))
            }
            o => o,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!(
            "{id} {status} {:.2}s  {title}: {detail}",
            elapsed.as_secs_f64()
        );
        if outcome.is_err() {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
