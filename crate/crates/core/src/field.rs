//! Dense row-major scalar fields and the 3x3 sliding-window machinery shared by
//! every per-pixel stage of the metric.

use serde::{Deserialize, Serialize};

use crate::error::{IqaError, Result};

/// A `width` x `height` grid of finite reals stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarField2D {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ScalarField2D {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(IqaError::InvalidArgument(format!(
                "field dimensions must be positive, got {width}x{height}"
            )));
        }
        if values.len() != width * height {
            return Err(IqaError::InvalidArgument(format!(
                "{width}x{height} field needs {} values, got {}",
                width * height,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(IqaError::InvalidArgument(format!(
                "non-finite value {} at ({}, {})",
                values[i],
                i % width,
                i / width
            )));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    /// Builds a field without re-validating; callers guarantee the invariants.
    pub(crate) fn from_parts(width: usize, height: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), width * height);
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self {
            width,
            height,
            values,
        }
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Self {
        Self::from_parts(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Self::from_parts(width, height, values)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.values[y * self.width..(y + 1) * self.width]
    }

    pub fn same_dims(&self, other: &Self) -> bool {
        self.dims() == other.dims()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_parts(
            self.width,
            self.height,
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Pointwise combination of two equally sized fields.
    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert!(self.same_dims(other), "zip_map on mismatched fields");
        Self::from_parts(
            self.width,
            self.height,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.height, self.width, |x, y| self.get(y, x))
    }

    /// Extracts the `width` x `height` block whose top-left corner is `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 || x0 + width > self.width || y0 + height > self.height {
            return Err(IqaError::InvalidArgument(format!(
                "crop {width}x{height}+{x0}+{y0} outside {}x{}",
                self.width, self.height
            )));
        }
        Ok(Self::from_fn(width, height, |x, y| self.get(x0 + x, y0 + y)))
    }

    /// Mirror-pads by `margin` on every side without repeating the edge sample,
    /// so `[a, b, c]` with margin 1 becomes `[b, a, b, c, b]`.
    pub fn pad_symmetric(&self, margin: usize) -> Result<Self> {
        if margin == 0 || margin >= self.width.min(self.height) {
            return Err(IqaError::InvalidArgument(format!(
                "padding margin {margin} must be in 1..{} for a {}x{} field",
                self.width.min(self.height),
                self.width,
                self.height
            )));
        }
        Ok(self.pad_reflect_unchecked(margin))
    }

    fn pad_reflect_unchecked(&self, margin: usize) -> Self {
        let m = margin as isize;
        let (w, h) = (self.width, self.height);
        Self::from_fn(w + 2 * margin, h + 2 * margin, |x, y| {
            let sx = reflect_index(x as isize - m, w);
            let sy = reflect_index(y as isize - m, h);
            self.get(sx, sy)
        })
    }

    /// Applies `f` to the 3x3 neighbourhood of every pixel (row-major, mirror
    /// padded at the borders) and collects the results.
    pub fn map_windows3(&self, f: impl Fn(&[f64; 9]) -> f64) -> Self {
        let padded = self.pad_reflect_unchecked(1);
        let pw = padded.width;
        let pv = &padded.values;
        let mut out = Vec::with_capacity(self.len());
        let mut win = [0.0; 9];
        for y in 0..self.height {
            for x in 0..self.width {
                fill_window(pv, pw, x, y, &mut win);
                out.push(f(&win));
            }
        }
        Self::from_parts(self.width, self.height, out)
    }

    /// Like [`map_windows3`](Self::map_windows3) over two co-registered fields.
    pub fn zip_windows3(&self, other: &Self, f: impl Fn(&[f64; 9], &[f64; 9]) -> f64) -> Self {
        assert!(self.same_dims(other), "zip_windows3 on mismatched fields");
        let pa = self.pad_reflect_unchecked(1);
        let pb = other.pad_reflect_unchecked(1);
        let pw = pa.width;
        let mut out = Vec::with_capacity(self.len());
        let (mut wa, mut wb) = ([0.0; 9], [0.0; 9]);
        for y in 0..self.height {
            for x in 0..self.width {
                fill_window(&pa.values, pw, x, y, &mut wa);
                fill_window(&pb.values, pw, x, y, &mut wb);
                out.push(f(&wa, &wb));
            }
        }
        Self::from_parts(self.width, self.height, out)
    }
}

#[inline]
fn fill_window(padded: &[f64], pw: usize, x: usize, y: usize, win: &mut [f64; 9]) {
    for dy in 0..3 {
        let base = (y + dy) * pw + x;
        win[dy * 3..dy * 3 + 3].copy_from_slice(&padded[base..base + 3]);
    }
}

/// Maps an out-of-range index onto `0..n` by mirror reflection about the edge
/// samples (the edge itself is not repeated). Works for any offset and any `n >= 1`.
#[inline]
pub fn reflect_index(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut r = i.rem_euclid(period);
    if r >= n as isize {
        r = period - r;
    }
    r as usize
}
