//! Windowed Pearson correlation between co-registered fields.

use crate::field::ScalarField2D;

/// Windows whose population variance falls below this are treated as flat.
pub const FLAT_WINDOW_VARIANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMaps {
    /// Saliency vs saliency.
    pub sm_c: ScalarField2D,
    pub x_c: ScalarField2D,
    pub y_c: ScalarField2D,
    /// Pointwise `max(x_c, y_c)`.
    pub h_c: ScalarField2D,
    /// Pointwise `min(x_c, y_c)`.
    pub l_c: ScalarField2D,
}

impl CorrelationMaps {
    pub fn compute(
        saliency: (&ScalarField2D, &ScalarField2D),
        grad_x: (&ScalarField2D, &ScalarField2D),
        grad_y: (&ScalarField2D, &ScalarField2D),
    ) -> Self {
        let sm_c = local_pearson(saliency.0, saliency.1);
        let x_c = local_pearson(grad_x.0, grad_x.1);
        let y_c = local_pearson(grad_y.0, grad_y.1);
        let (h_c, l_c) = combine_hc_lc(&x_c, &y_c);
        Self {
            sm_c,
            x_c,
            y_c,
            h_c,
            l_c,
        }
    }
}

/// Pearson correlation of two 3x3 windows. Two flat windows correlate
/// perfectly (1); a single flat window has no measurable relationship (0).
pub fn window_pearson(a: &[f64; 9], b: &[f64; 9]) -> f64 {
    let ma = a.iter().sum::<f64>() / 9.0;
    let mb = b.iter().sum::<f64>() / 9.0;
    let (mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (da, db) = (x - ma, y - mb);
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    let flat_a = saa / 9.0 < FLAT_WINDOW_VARIANCE;
    let flat_b = sbb / 9.0 < FLAT_WINDOW_VARIANCE;
    match (flat_a, flat_b) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        (false, false) => (sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0),
    }
}

pub fn local_pearson(a: &ScalarField2D, b: &ScalarField2D) -> ScalarField2D {
    a.zip_windows3(b, window_pearson)
}

pub fn combine_hc_lc(x_c: &ScalarField2D, y_c: &ScalarField2D) -> (ScalarField2D, ScalarField2D) {
    (x_c.zip_map(y_c, f64::max), x_c.zip_map(y_c, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> ScalarField2D {
        ScalarField2D::from_fn(w, h, |x, y| ((x * 7 + y * 13) % 11) as f64 / 11.0)
    }

    #[test]
    fn self_correlation_is_one() {
        let a = ramp(6, 5);
        assert!(local_pearson(&a, &a)
            .values()
            .iter()
            .all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn negated_field_is_anticorrelated() {
        let a = ramp(6, 5);
        let b = a.map(|v| 3.0 - v);
        assert!(local_pearson(&a, &b)
            .values()
            .iter()
            .all(|&v| (v + 1.0).abs() < 1e-12));
    }

    #[test]
    fn flat_window_conventions() {
        let flat = ScalarField2D::constant(4, 4, 0.2);
        let other_flat = ScalarField2D::constant(4, 4, 0.9);
        let textured = ramp(4, 4);
        assert!(local_pearson(&flat, &other_flat).values().iter().all(|&v| v == 1.0));
        assert!(local_pearson(&flat, &textured).values().iter().all(|&v| v == 0.0));
        assert!(local_pearson(&textured, &flat).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn combine_definitions() {
        let x = ScalarField2D::new(2, 1, vec![0.9, -0.3]).unwrap();
        let y = ScalarField2D::new(2, 1, vec![-0.2, 0.4]).unwrap();
        let (h, l) = combine_hc_lc(&x, &y);
        assert_eq!(h.values(), &[0.9, 0.4]);
        assert_eq!(l.values(), &[-0.2, -0.3]);
        let (h, l) = combine_hc_lc(&x, &x);
        assert_eq!(h, x);
        assert_eq!(l, x);
    }
}
