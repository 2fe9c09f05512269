//! Local contrast and gradient features, plus the two pointwise difference
//! maps built from them.

use std::f64::consts::{PI, SQRT_2};

use crate::field::ScalarField2D;
use crate::saliency::{SaliencyMap, SaliencyModel};

/// Scharr smoothing taps across the derivative direction. The kernels are
/// normalized by the sum of their positive weights (16) so that each partial
/// derivative of a unit-range image lies in `[-1, 1]`.
const SCHARR_SMOOTH: [f64; 3] = [3.0, 10.0, 3.0];
const SCHARR_NORM: f64 = 16.0;

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureBundle {
    pub saliency: SaliencyMap,
    pub grad_x: ScalarField2D,
    pub grad_y: ScalarField2D,
    pub grad_mag: ScalarField2D,
    /// Radians in `[-pi, pi]`.
    pub grad_ori: ScalarField2D,
    pub rms_contrast: ScalarField2D,
}

impl FeatureBundle {
    pub fn extract(image: &ScalarField2D, saliency: &dyn SaliencyModel) -> Self {
        Self::with_saliency(image, saliency.compute(image))
    }

    pub fn with_saliency(image: &ScalarField2D, saliency: SaliencyMap) -> Self {
        let (grad_x, grad_y) = scharr_gradients(image);
        Self {
            saliency,
            grad_mag: grad_magnitude(&grad_x, &grad_y),
            grad_ori: grad_orientation(&grad_x, &grad_y),
            grad_x,
            grad_y,
            rms_contrast: rms_contrast(image),
        }
    }
}

/// Population standard deviation of each 3x3 neighbourhood. Samples are
/// taken relative to the centre first, which keeps flat windows exactly zero.
pub fn rms_contrast(field: &ScalarField2D) -> ScalarField2D {
    field.map_windows3(|w| {
        let d = w.map(|v| v - w[4]);
        let mean = d.iter().sum::<f64>() / 9.0;
        let ss: f64 = d.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / 9.0).sqrt()
    })
}

/// Horizontal (right minus left) and vertical (bottom minus top) Scharr
/// derivatives. Each tap pair is differenced before weighting, so flat
/// neighbourhoods give exactly zero.
pub fn scharr_gradients(field: &ScalarField2D) -> (ScalarField2D, ScalarField2D) {
    let gx = field.map_windows3(|w| {
        let [a, b, c] = SCHARR_SMOOTH;
        (a * (w[2] - w[0]) + b * (w[5] - w[3]) + c * (w[8] - w[6])) / SCHARR_NORM
    });
    let gy = field.map_windows3(|w| {
        let [a, b, c] = SCHARR_SMOOTH;
        (a * (w[6] - w[0]) + b * (w[7] - w[1]) + c * (w[8] - w[2])) / SCHARR_NORM
    });
    (gx, gy)
}

pub fn grad_magnitude(gx: &ScalarField2D, gy: &ScalarField2D) -> ScalarField2D {
    gx.zip_map(gy, f64::hypot)
}

/// Two-argument arctangent; a zero gradient has orientation 0.
pub fn grad_orientation(gx: &ScalarField2D, gy: &ScalarField2D) -> ScalarField2D {
    gx.zip_map(gy, |x, y| {
        if x == 0.0 && y == 0.0 {
            0.0
        } else {
            y.atan2(x)
        }
    })
}

/// `((V_ref - V_test) / 2)^2`, in `[0, 0.0625]` for contrasts in `[0, 0.5]`.
pub fn lc_diff(contrast_ref: &ScalarField2D, contrast_test: &ScalarField2D) -> ScalarField2D {
    contrast_ref.zip_map(contrast_test, |a, b| {
        let d = (a - b) / 2.0;
        d * d
    })
}

/// Squared half of the larger of the normalized magnitude and orientation
/// differences. Orientation differences are not wrapped, so they span `[0, 2pi]`.
pub fn g_diff(
    mag_ref: &ScalarField2D,
    mag_test: &ScalarField2D,
    ori_ref: &ScalarField2D,
    ori_test: &ScalarField2D,
) -> ScalarField2D {
    assert!(mag_ref.same_dims(mag_test) && mag_ref.same_dims(ori_ref) && mag_ref.same_dims(ori_test));
    let values = mag_ref
        .values()
        .iter()
        .zip(mag_test.values())
        .zip(ori_ref.values().iter().zip(ori_test.values()))
        .map(|((mr, mt), (or, ot))| {
            let dm = (mr - mt).abs() / SQRT_2;
            let dt = (or - ot).abs() / (2.0 * PI);
            let h = dm.max(dt) / 2.0;
            h * h
        })
        .collect();
    ScalarField2D::from_parts(mag_ref.width(), mag_ref.height(), values)
}
