//! Fusion of the correlation, contrast and gradient maps into the final
//! distortion map, saliency-weighted pooling, and the PSNR baseline.

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationMaps;
use crate::error::{IqaError, Result};
use crate::features::{g_diff, lc_diff, FeatureBundle};
use crate::field::ScalarField2D;
use crate::image::ImagePair;
use crate::saliency::{normalize_jointly, SaliencyMap, SaliencyMethod, SaliencyModel};

/// Pooling scale applied to the weighted mean of the final map.
pub const POOLING_SCALE: f64 = 10_000.0;

/// Upper bound of the final map (`0.25 + 0.25 + 0.125`).
pub const FINAL_MAP_BOUND: f64 = 0.625;

pub const DEFAULT_PSNR_CAP_DB: f64 = 100.0;

/// Margin by which `SM_c` must exceed `L_c` to open the gate. Correlations of
/// exactly proportional windows land within a few ulps of 1 rather than on it,
/// and an unguarded strict comparison would turn that noise into a full
/// `sqrt(LC_d * G_d)` contribution.
pub const GATE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DistortionMap {
    pub d_p: ScalarField2D,
    pub a: ScalarField2D,
    pub b: ScalarField2D,
    pub d_f: ScalarField2D,
}

/// One scored reference/test pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityRecord {
    pub q: f64,
    pub metric: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saliency_method: Option<SaliencyMethod>,
    pub ref_id: String,
    pub test_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subjective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distortion_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub database_label: Option<String>,
}

fn check_dims(fields: &[&ScalarField2D]) {
    let dims = fields[0].dims();
    assert!(
        fields.iter().all(|f| f.dims() == dims),
        "distortion maps require co-registered fields"
    );
}

/// Returns `(D_p, T)`.
pub fn primary_map(
    corr: &CorrelationMaps,
    lc_d: &ScalarField2D,
    g_d: &ScalarField2D,
) -> (ScalarField2D, ScalarField2D) {
    check_dims(&[&corr.sm_c, &corr.x_c, &corr.y_c, &corr.h_c, &corr.l_c, lc_d, g_d]);
    let n = lc_d.len();
    let mut d_p = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    for i in 0..n {
        let sm = corr.sm_c.values()[i];
        let modulator = (lc_d.values()[i] * ((1.0 - sm) / 2.0) * g_d.values()[i]).cbrt();
        let spread = corr.h_c.values()[i] - corr.l_c.values()[i];
        let deviation = spread
            .max(1.0 - corr.x_c.values()[i])
            .max(1.0 - corr.y_c.values()[i])
            .max(1.0 - sm);
        d_p.push(deviation / 2.0 * modulator);
        t.push(modulator);
    }
    let (w, h) = lc_d.dims();
    (
        ScalarField2D::from_parts(w, h, d_p),
        ScalarField2D::from_parts(w, h, t),
    )
}

/// Auxiliary maps `(A, B)`, non-zero only where `SM_c` exceeds `L_c` by more
/// than [`GATE_TOLERANCE`].
pub fn gated_maps(
    corr: &CorrelationMaps,
    lc_d: &ScalarField2D,
    g_d: &ScalarField2D,
) -> (ScalarField2D, ScalarField2D) {
    check_dims(&[&corr.sm_c, &corr.l_c, lc_d, g_d]);
    let n = lc_d.len();
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        let sm = corr.sm_c.values()[i];
        if sm - corr.l_c.values()[i] > GATE_TOLERANCE {
            let lc = lc_d.values()[i];
            a[i] = (lc * (1.0 - sm) / 2.0).sqrt();
            b[i] = (lc * g_d.values()[i]).sqrt();
        }
    }
    let (w, h) = lc_d.dims();
    (
        ScalarField2D::from_parts(w, h, a),
        ScalarField2D::from_parts(w, h, b),
    )
}

pub fn final_map(d_p: &ScalarField2D, a: &ScalarField2D, b: &ScalarField2D) -> ScalarField2D {
    check_dims(&[d_p, a, b]);
    d_p.zip_map(a, |p, q| p + q).zip_map(b, |s, r| s + r)
}

/// Saliency-weighted mean of `d_f`, scaled by [`POOLING_SCALE`]. Weights are
/// the pointwise maximum of the two saliency maps; sums run in row-major order.
pub fn pool(d_f: &ScalarField2D, s_ref: &SaliencyMap, s_test: &SaliencyMap) -> Result<f64> {
    check_dims(&[d_f, &s_ref.field, &s_test.field]);
    let (mut num, mut den) = (0.0, 0.0);
    for ((d, r), t) in d_f
        .values()
        .iter()
        .zip(s_ref.field.values())
        .zip(s_test.field.values())
    {
        let w = r.max(*t);
        num += d * w;
        den += w;
    }
    if den <= 0.0 {
        return Err(IqaError::DegenerateSaliency);
    }
    Ok(POOLING_SCALE * num / den)
}

/// Every intermediate of one scored pair.
#[derive(Clone, Debug)]
pub struct GldAnalysis {
    pub reference: FeatureBundle,
    pub test: FeatureBundle,
    pub correlations: CorrelationMaps,
    pub lc_d: ScalarField2D,
    pub g_d: ScalarField2D,
    pub t: ScalarField2D,
    pub maps: DistortionMap,
    pub q: f64,
}

pub fn analyze_pair(pair: &ImagePair, model: &dyn SaliencyModel) -> Result<GldAnalysis> {
    let mut s_ref = model.compute(&pair.reference);
    let mut s_test = model.compute(&pair.test);
    normalize_jointly(&mut s_ref, &mut s_test);
    let reference = FeatureBundle::with_saliency(&pair.reference, s_ref);
    let test = FeatureBundle::with_saliency(&pair.test, s_test);

    let correlations = CorrelationMaps::compute(
        (&reference.saliency.field, &test.saliency.field),
        (&reference.grad_x, &test.grad_x),
        (&reference.grad_y, &test.grad_y),
    );
    let lc_d = lc_diff(&reference.rms_contrast, &test.rms_contrast);
    let g_d = g_diff(
        &reference.grad_mag,
        &test.grad_mag,
        &reference.grad_ori,
        &test.grad_ori,
    );
    let (d_p, t) = primary_map(&correlations, &lc_d, &g_d);
    let (a, b) = gated_maps(&correlations, &lc_d, &g_d);
    let d_f = final_map(&d_p, &a, &b);
    let q = pool(&d_f, &reference.saliency, &test.saliency)?;
    Ok(GldAnalysis {
        reference,
        test,
        correlations,
        lc_d,
        g_d,
        t,
        maps: DistortionMap { d_p, a, b, d_f },
        q,
    })
}

/// Scores a preprocessed pair. Larger values mean stronger perceived degradation.
pub fn score_pair(pair: &ImagePair, method: SaliencyMethod) -> Result<QualityRecord> {
    let q = analyze_pair(pair, method.model())?.q;
    Ok(QualityRecord {
        q,
        metric: format!("gld-{method}"),
        saliency_method: Some(method),
        ref_id: String::new(),
        test_id: String::new(),
        subjective: None,
        distortion_label: None,
        database_label: None,
    })
}

pub fn mse(pair: &ImagePair) -> f64 {
    pair.reference
        .values()
        .iter()
        .zip(pair.test.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / pair.reference.len() as f64
}

/// PSNR in dB for unit-range images, capped at `cap_db` (reached when the
/// pair is identical).
pub fn psnr_with_cap(pair: &ImagePair, cap_db: f64) -> f64 {
    let mse = mse(pair);
    if mse == 0.0 {
        return cap_db;
    }
    (10.0 * (1.0 / mse).log10()).min(cap_db)
}

pub fn psnr(pair: &ImagePair) -> f64 {
    psnr_with_cap(pair, DEFAULT_PSNR_CAP_DB)
}
