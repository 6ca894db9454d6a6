mod common;

use asymlat_core::chart::PerturbationSpec;
use asymlat_core::fixed::label_window;
use asymlat_core::projective::mobius_apply_exact;
use asymlat_core::rotnum::{quantum_rotation, rotation_field};
use asymlat_core::semitoric::detect_strips;
use asymlat_core::{
    mobius_apply, nearest_point, projective_distance, AffineInt2, IntMatrix2, Label2, Labelling,
    LabellingKind, Point2, Projective1, SpectrumSnapshot, SystemPreset, UnimodularMatrix2, Window,
};
use common::*;
use proptest::prelude::*;

fn sl2z() -> impl Strategy<Value = UnimodularMatrix2> {
    (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4).prop_filter_map("det 1", |(a, b, c, d)| {
        UnimodularMatrix2::new(a, b, c, d).ok()
    })
}

fn int_matrix() -> impl Strategy<Value = IntMatrix2> {
    (-6i64..=6, -6i64..=6, -6i64..=6, -6i64..=6)
        .prop_map(|(a, b, c, d)| IntMatrix2::new(a, b, c, d))
}

fn label() -> impl Strategy<Value = Label2> {
    (-50i64..=50, -50i64..=50).prop_map(|(n, m)| Label2::new(n, m))
}

proptest! {
    #[test]
    fn mobius_right_action_exact(a in int_matrix(), b in int_matrix(), p in -100i128..=100, q in -100i128..=100) {
        let lhs = mobius_apply_exact(&a, mobius_apply_exact(&b, (p, q)));
        let rhs = mobius_apply_exact(&b.mul(&a), (p, q));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mobius_float_matches_exact(a in sl2z(), p in -100i64..=100, q in -100i64..=100) {
        prop_assume!(p != 0 || q != 0);
        let w = Projective1::new(p as f64, q as f64).unwrap();
        let (ep, eq) = mobius_apply_exact(&a.matrix(), (p as i128, q as i128));
        let exact = Projective1::new(ep as f64, eq as f64).unwrap();
        prop_assert!(projective_distance(&mobius_apply(&a.matrix(), &w), &exact) < 1e-14);
    }

    #[test]
    fn canonical_form_is_idempotent(p in -1e3f64..1e3, q in -1e3f64..1e3, s in prop_oneof![-1e6f64..-1e-6, 1e-6f64..1e6]) {
        prop_assume!(p != 0.0 || q != 0.0);
        let w = Projective1::new(p, q).unwrap();
        let again = Projective1::new(w.p(), w.q()).unwrap();
        prop_assert_eq!(w, again);
        let scaled = Projective1::new(s * p, s * q).unwrap();
        prop_assert!(projective_distance(&w, &scaled) < 1e-15);
        prop_assert!((w.p() * w.p() + w.q() * w.q() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn affine_roundtrip(u in sl2z(), v in sl2z(), s in label(), t in label(), l in label()) {
        let a = AffineInt2::new(u, s);
        let b = AffineInt2::new(v, t);
        prop_assert_eq!(a.inverse().apply(a.apply(l)), l);
        prop_assert_eq!(a.compose(&b).apply(l), a.apply(b.apply(l)));
        prop_assert_eq!(u.mul(&u.inverse()), UnimodularMatrix2::IDENTITY);
    }

    #[test]
    fn nearest_is_order_independent(
        pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 2..60),
        tx in 0.0f64..1.0, ty in 0.0f64..1.0, seed in 0u64..1000,
    ) {
        let w = Window::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let mut v: Vec<Point2> = pts.iter().map(|&(x, y)| Point2::new(x, y)).collect();
        v.sort_by(|a, b| a.lex_cmp(b));
        v.dedup_by(|a, b| a.key() == b.key());
        let s1 = SpectrumSnapshot::new(h(0.1), w, v.clone()).unwrap();
        let mut r = rng(seed);
        for i in (1..v.len()).rev() {
            v.swap(i, int_in(&mut r, 0, i as i64) as usize);
        }
        let s2 = SpectrumSnapshot::new(h(0.1), w, v.clone()).unwrap();
        let t = Point2::new(tx, ty);
        let a = nearest_point(&s1, t, &[]).unwrap();
        prop_assert_eq!(a, nearest_point(&s2, t, &[]).unwrap());
        let best = v.iter().map(|p| p.dist(t)).fold(f64::INFINITY, f64::min);
        prop_assert!(a.dist(t) <= best * (1.0 + 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn labels_are_injective(preset_idx in 0usize..4, hv in 0.01f64..0.05, amp in 0.0f64..0.1, seed in 0u64..100) {
        let preset = chart_presets()[preset_idx];
        let c = case(preset, hv, PerturbationSpec::new(amp, seed).unwrap());
        let out = label_window(&c.snapshot, &c.config).unwrap();
        let mut labels: Vec<Label2> = out.labelling.iter().map(|(_, l)| l).collect();
        let mut points: Vec<_> = out.labelling.iter().map(|(p, _)| p.key()).collect();
        let n = labels.len();
        labels.sort();
        labels.dedup();
        points.sort();
        points.dedup();
        prop_assert_eq!(labels.len(), n);
        prop_assert_eq!(points.len(), n);
    }

    #[test]
    fn rotation_is_shift_invariant_and_equivariant(u in sl2z(), s in label(), hv in 0.02f64..0.1) {
        let c = case(SystemPreset::Linear { a: 2.0, b: 3.0 }, hv, PerturbationSpec::NONE);
        let l = Labelling::new(c.snapshot.hbar(), *c.snapshot.window(), LabellingKind::FixedH, c.oracle.iter()).unwrap();
        let shifted = l.relabel(&AffineInt2::new(UnimodularMatrix2::IDENTITY, s));
        for (k, sample) in rotation_field(&l) {
            let moved = quantum_rotation(&shifted, k + s).unwrap();
            prop_assert!((moved.value_real - sample.value_real).abs() < 1e-12);
        }
        // Relabelling ℓ' = A ℓ gives w' = A⁻¹ · w under the Möbius action.
        let relabelled = l.relabel(&AffineInt2::new(u, Label2::new(0, 0)));
        let field = rotation_field(&l);
        let (k, sample) = field.iter().next().unwrap();
        let k2 = u.apply(*k);
        if let Ok(w2) = quantum_rotation(&relabelled, k2) {
            let predicted = mobius_apply(&u.inverse().matrix(), &sample.value);
            prop_assert!(projective_distance(&w2.value, &predicted) < 1e-9);
        }
    }

    #[test]
    fn strip_gauge_follows_translation(shift in -0.3f64..0.3, mu in 0.0f64..1.0) {
        let hv = 0.05;
        let w = Window::new(-1.0, 1.0, 0.0, 1.0).unwrap();
        let pts: Vec<Point2> = (-10..10)
            .flat_map(|j| (1..10).map(move |k| Point2::new(hv * (j as f64 + mu) + 0.1 * hv * (k as f64 / 10.0 - 0.5), 0.1 * k as f64)))
            .collect();
        let s1 = SpectrumSnapshot::new(h(hv), Window::new(-2.0, 2.0, 0.0, 1.0).unwrap(), pts.clone()).unwrap();
        let moved: Vec<Point2> = pts.iter().map(|p| Point2::new(p.x + shift, p.y)).collect();
        let s2 = SpectrumSnapshot::new(h(hv), Window::new(-2.0, 2.0, 0.0, 1.0).unwrap(), moved).unwrap();
        let (m1, a1) = detect_strips(&s1).unwrap();
        let (m2, a2) = detect_strips(&s2).unwrap();
        let dmu = (m2.mu - m1.mu - shift / hv).rem_euclid(1.0);
        prop_assert!(!(1e-9..=1.0 - 1e-9).contains(&dmu));
        for p in &pts {
            let r1 = a1.residual_of(*p).unwrap();
            let r2 = a2.residual_of(Point2::new(p.x + shift, p.y)).unwrap();
            prop_assert!((r1 - r2).abs() < 1e-9);
        }
        let _ = w;
    }
}
