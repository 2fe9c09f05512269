mod common;

use common::oracle;
use common::{max_abs_diff, random_field, random_pair, rng, textured_field, to_img};
use iqa_core::features::{rms_contrast, scharr_gradients};
use iqa_core::saliency::{pft_saliency, spectral_residual};
use iqa_core::{analyze_pair, local_pearson, ImagePair, SaliencyMethod};

#[test]
fn local_features_match_brute_force_on_8x8() {
    let mut r = rng(11);
    for _ in 0..20 {
        let a = random_field(&mut r, 8, 8);
        let b = random_field(&mut r, 8, 8);
        assert!(max_abs_diff(&rms_contrast(&a), &oracle::contrast(&to_img(&a))) < 1e-12);

        let (gx, gy) = scharr_gradients(&a);
        let (ox, oy) = oracle::scharr(&to_img(&a));
        assert!(max_abs_diff(&gx, &ox) < 1e-12);
        assert!(max_abs_diff(&gy, &oy) < 1e-12);

        let c = local_pearson(&a, &b);
        assert!(max_abs_diff(&c, &oracle::local_corr(&to_img(&a), &to_img(&b))) < 1e-12);
    }
}

#[test]
fn saliency_matches_direct_dft() {
    let mut r = rng(12);
    for (w, h) in [(16, 16), (20, 12), (64, 40), (9, 30)] {
        let f = textured_field(&mut r, w, h);
        let img = to_img(&f);
        for (map, residual) in [(spectral_residual(&f), true), (pft_saliency(&f), false)] {
            let want = oracle::saliency(&img, residual);
            let scale = map.field.max().max(1e-300);
            assert!(
                max_abs_diff(&map.field, &want) / scale < 1e-10,
                "{w}x{h} residual={residual}"
            );
        }
    }
}

#[test]
fn final_map_and_score_match_straight_line_oracle() {
    let mut r = rng(13);
    for i in 0..12 {
        let pair = if i % 2 == 0 {
            random_pair(&mut r, 16, 16)
        } else {
            let a = textured_field(&mut r, 16, 16);
            let b = a.map(|v| (v * 0.8 + 0.05).clamp(0.0, 1.0));
            ImagePair::from_fields(a, b, 1).unwrap()
        };
        for method in SaliencyMethod::ALL {
            let got = analyze_pair(&pair, method.model()).unwrap();
            let want = oracle::score_with_saliency(
                &to_img(&pair.reference),
                &to_img(&pair.test),
                &to_img(&got.reference.saliency.field),
                &to_img(&got.test.saliency.field),
            );
            let worst = max_abs_diff(&got.maps.d_f, &want.d_f);
            assert!(worst < 1e-10, "pair {i} {method}: d_f off by {worst}");
            assert!((got.q - want.q).abs() <= 1e-10 * want.q.abs().max(1.0));

            let full = oracle::score(
                &to_img(&pair.reference),
                &to_img(&pair.test),
                method == SaliencyMethod::Sr,
            );
            assert!(
                (got.q - full.q).abs() <= 1e-9 * full.q.abs().max(1e-12),
                "pair {i} {method}: {} vs {}",
                got.q,
                full.q
            );
        }
    }
}
