mod common;

use iqa_core::distortion::FINAL_MAP_BOUND;
use iqa_core::eval::{krocc, srocc};
use iqa_core::features::{g_diff, lc_diff};
use iqa_core::{analyze_pair, local_pearson, pool, ImagePair, SaliencyMap, SaliencyMethod, ScalarField2D};
use proptest::prelude::*;

fn field(w: usize, h: usize) -> impl Strategy<Value = ScalarField2D> {
    prop::collection::vec(0.0f64..=1.0, w * h).prop_map(move |v| ScalarField2D::new(w, h, v).unwrap())
}

fn pair() -> impl Strategy<Value = ImagePair> {
    (3usize..20, 3usize..20).prop_flat_map(|(w, h)| {
        (field(w, h), field(w, h)).prop_map(|(a, b)| ImagePair::from_fields(a, b, 1).unwrap())
    })
}

fn method() -> impl Strategy<Value = SaliencyMethod> {
    prop_oneof![Just(SaliencyMethod::Sr), Just(SaliencyMethod::Pft)]
}

/// Scores drawn from a small alphabet so that ties are common.
fn tied_series() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (4usize..40).prop_flat_map(|n| {
        (
            prop::collection::vec((0u8..8).prop_map(f64::from), n),
            prop::collection::vec((0u8..8).prop_map(f64::from), n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maps_and_score_stay_in_bounds(p in pair(), m in method()) {
        let a = analyze_pair(&p, m.model()).unwrap();
        for v in a.lc_d.values() { prop_assert!((0.0..=0.0625).contains(v)); }
        for v in a.g_d.values() { prop_assert!((0.0..=0.25).contains(v)); }
        for v in a.t.values() { prop_assert!((0.0..=0.25 + 1e-15).contains(v)); }
        for v in a.maps.d_p.values() { prop_assert!((0.0..=0.25 + 1e-15).contains(v)); }
        for v in a.maps.a.values() { prop_assert!((0.0..=0.25 + 1e-15).contains(v)); }
        for v in a.maps.b.values() { prop_assert!((0.0..=0.125 + 1e-15).contains(v)); }
        for v in a.maps.d_f.values() { prop_assert!((0.0..=FINAL_MAP_BOUND + 1e-15).contains(v)); }
        for c in [&a.correlations.sm_c, &a.correlations.x_c, &a.correlations.y_c] {
            for v in c.values() { prop_assert!((-1.0..=1.0).contains(v)); }
        }
        for s in [&a.reference.saliency.field, &a.test.saliency.field] {
            for v in s.values() { prop_assert!((0.0..=1.0).contains(v)); }
        }
        prop_assert!(a.q.is_finite() && a.q >= 0.0 && a.q <= 10_000.0 * FINAL_MAP_BOUND);
    }

    #[test]
    fn score_is_symmetric(p in pair(), m in method()) {
        let swapped = ImagePair::from_fields(p.test.clone(), p.reference.clone(), 1).unwrap();
        let q1 = analyze_pair(&p, m.model()).unwrap().q;
        let q2 = analyze_pair(&swapped, m.model()).unwrap().q;
        prop_assert!((q1 - q2).abs() <= 1e-12 * q1.max(1.0), "{} vs {}", q1, q2);
    }

    #[test]
    fn identical_images_score_zero(f in (3usize..24, 3usize..24).prop_flat_map(|(w, h)| field(w, h)), m in method()) {
        let p = ImagePair::from_fields(f.clone(), f, 1).unwrap();
        prop_assert_eq!(analyze_pair(&p, m.model()).unwrap().q, 0.0);
    }

    #[test]
    fn difference_maps_are_symmetric(a in field(6, 5), b in field(6, 5)) {
        prop_assert_eq!(lc_diff(&a, &b), lc_diff(&b, &a));
        prop_assert_eq!(g_diff(&a, &b, &b, &a), g_diff(&b, &a, &a, &b));
    }

    #[test]
    fn local_correlation_is_affine_invariant(
        a in field(7, 7),
        b in field(7, 7),
        scale in 0.1f64..10.0,
        shift in -5.0f64..5.0,
    ) {
        let base = local_pearson(&a, &b);
        let moved = local_pearson(&a, &b.map(|v| v * scale + shift));
        let flipped = local_pearson(&a.map(|v| -v), &b);
        for i in 0..base.len() {
            // nearly flat windows sit on the flat-window threshold and may legitimately flip
            prop_assume!(base.values()[i].abs() < 1.0 - 1e-9 || base.values()[i].abs() == 1.0);
            prop_assert!((base.values()[i] - moved.values()[i]).abs() < 1e-9);
            prop_assert!((base.values()[i] + flipped.values()[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn pooling_ignores_saliency_scale(
        d in field(5, 4),
        s1 in field(5, 4),
        s2 in field(5, 4),
        k in 1e-3f64..1e3,
    ) {
        let sal = |f: ScalarField2D| SaliencyMap { field: f, method: SaliencyMethod::Sr };
        let q = pool(&d, &sal(s1.clone()), &sal(s2.clone()));
        let qk = pool(&d, &sal(s1.map(|v| v * k)), &sal(s2.map(|v| v * k)));
        match (q, qk) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0)),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn rank_correlations_ignore_monotone_transforms((x, y) in tied_series()) {
        let s = srocc(&x, &y);
        let k = krocc(&x, &y);
        let tx: Vec<f64> = x.iter().map(|v| (v * 0.7).exp() - 3.0).collect();
        let ty: Vec<f64> = y.iter().map(|v| v.powi(3) + 2.0 * v).collect();
        match (s, srocc(&tx, &ty)) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "{:?}", other),
        }
        match (k, krocc(&tx, &ty)) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn rank_correlations_are_bounded_and_symmetric((x, y) in tied_series()) {
        if let (Ok(a), Ok(b)) = (srocc(&x, &y), srocc(&y, &x)) {
            prop_assert!((-1.0..=1.0).contains(&a));
            prop_assert!((a - b).abs() < 1e-12);
        }
        if let (Ok(a), Ok(b)) = (krocc(&x, &y), krocc(&y, &x)) {
            prop_assert!((-1.0..=1.0).contains(&a));
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
