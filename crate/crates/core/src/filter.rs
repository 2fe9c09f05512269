//! Resampling and smoothing helpers used by the saliency models.

use crate::field::{reflect_index, ScalarField2D};

/// Bilinear resize with pixel-centre alignment; samples outside the source are
/// clamped to the nearest edge.
pub fn resize_bilinear(field: &ScalarField2D, width: usize, height: usize) -> ScalarField2D {
    if field.dims() == (width, height) {
        return field.clone();
    }
    let xs = axis_taps(field.width(), width);
    let ys = axis_taps(field.height(), height);
    ScalarField2D::from_fn(width, height, |x, y| {
        let (x0, x1, tx) = xs[x];
        let (y0, y1, ty) = ys[y];
        let top = field.get(x0, y0) * (1.0 - tx) + field.get(x1, y0) * tx;
        let bottom = field.get(x0, y1) * (1.0 - tx) + field.get(x1, y1) * tx;
        top * (1.0 - ty) + bottom * ty
    })
}

fn axis_taps(src: usize, dst: usize) -> Vec<(usize, usize, f64)> {
    let ratio = src as f64 / dst as f64;
    (0..dst)
        .map(|i| {
            let s = ((i as f64 + 0.5) * ratio - 0.5).clamp(0.0, (src - 1) as f64);
            let i0 = s.floor() as usize;
            let i1 = (i0 + 1).min(src - 1);
            (i0, i1, s - i0 as f64)
        })
        .collect()
}

/// 3x3 box mean with mirror padding.
pub fn mean3x3(field: &ScalarField2D) -> ScalarField2D {
    field.map_windows3(|w| w.iter().sum::<f64>() / 9.0)
}

/// Normalized, truncated 1-D Gaussian taps of odd length `size`.
pub fn gaussian_kernel(sigma: f64, size: usize) -> Vec<f64> {
    assert!(size % 2 == 1, "kernel size must be odd");
    let half = (size / 2) as isize;
    let taps: Vec<f64> = (-half..=half)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / total).collect()
}

/// Separable Gaussian smoothing with mirror-reflected borders.
pub fn gaussian_blur(field: &ScalarField2D, sigma: f64, size: usize) -> ScalarField2D {
    let taps = gaussian_kernel(sigma, size);
    let half = (size / 2) as isize;
    let (w, h) = field.dims();
    let horizontal = ScalarField2D::from_fn(w, h, |x, y| {
        let row = field.row(y);
        taps.iter()
            .enumerate()
            .map(|(k, t)| t * row[reflect_index(x as isize + k as isize - half, w)])
            .sum()
    });
    ScalarField2D::from_fn(w, h, |x, y| {
        taps.iter()
            .enumerate()
            .map(|(k, t)| t * horizontal.get(x, reflect_index(y as isize + k as isize - half, h)))
            .sum()
    })
}
