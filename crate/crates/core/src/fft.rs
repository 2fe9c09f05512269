//! Two-dimensional DFT on arbitrary (non power-of-two) grids.
//!
//! The forward transform is unnormalized; the inverse divides by `width * height`
//! so that `inverse(forward(x)) == x` up to rounding.

use std::cell::RefCell;

use rustfft::num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::field::ScalarField2D;

thread_local! {
    // Plans are cached per worker thread; nothing is shared across threads.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Row-major complex spectrum of a `width` x `height` field.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum2D {
    pub width: usize,
    pub height: usize,
    pub data: Vec<Complex64>,
}

impl Spectrum2D {
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Complex64 {
        self.data[v * self.width + u]
    }
}

fn transform_in_place(width: usize, height: usize, data: &mut [Complex64], dir: FftDirection) {
    PLANNER.with(|planner| {
        let mut planner = planner.borrow_mut();
        let row_fft = planner.plan_fft(width, dir);
        let col_fft = planner.plan_fft(height, dir);

        let mut scratch =
            vec![Complex64::default(); row_fft.get_inplace_scratch_len().max(col_fft.get_inplace_scratch_len())];
        for row in data.chunks_exact_mut(width) {
            row_fft.process_with_scratch(row, &mut scratch);
        }

        let mut column = vec![Complex64::default(); height];
        for x in 0..width {
            for y in 0..height {
                column[y] = data[y * width + x];
            }
            col_fft.process_with_scratch(&mut column, &mut scratch);
            for y in 0..height {
                data[y * width + x] = column[y];
            }
        }
    });
}

pub fn fft2_forward(field: &ScalarField2D) -> Spectrum2D {
    let (width, height) = field.dims();
    let mut data: Vec<Complex64> = field
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    transform_in_place(width, height, &mut data, FftDirection::Forward);
    Spectrum2D {
        width,
        height,
        data,
    }
}

/// Inverse transform, scaled by `1 / (width * height)`. Returns the complex result.
pub fn fft2_inverse_complex(spectrum: &Spectrum2D) -> Vec<Complex64> {
    let mut data = spectrum.data.clone();
    transform_in_place(
        spectrum.width,
        spectrum.height,
        &mut data,
        FftDirection::Inverse,
    );
    let scale = 1.0 / (spectrum.width * spectrum.height) as f64;
    for c in &mut data {
        *c *= scale;
    }
    data
}

/// Inverse transform keeping only the real part.
pub fn fft2_inverse(spectrum: &Spectrum2D) -> ScalarField2D {
    let values = fft2_inverse_complex(spectrum)
        .into_iter()
        .map(|c| c.re)
        .collect();
    ScalarField2D::from_parts(spectrum.width, spectrum.height, values)
}
