//! Raster decoding and the preprocessing chain: luma conversion, automatic
//! scale selection by block averaging, and the unit-range clamp.

use std::path::Path;

use image::{DynamicImage, ImageReader};

use crate::error::{IqaError, Result};
use crate::field::ScalarField2D;

/// Side length the automatic scale rule normalizes the shorter image side towards.
pub const SCALE_REFERENCE_SIZE: f64 = 256.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channels {
    Gray,
    Rgb,
}

impl Channels {
    pub fn count(self) -> usize {
        match self {
            Channels::Gray => 1,
            Channels::Rgb => 3,
        }
    }
}

/// Decoded pixels with alpha already dropped. Samples are interleaved row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub channels: Channels,
    pub bit_depth: u8,
    pub samples: Vec<u16>,
}

impl Raster {
    pub fn new(
        width: usize,
        height: usize,
        channels: Channels,
        bit_depth: u8,
        samples: Vec<u16>,
    ) -> Result<Self> {
        if samples.len() != width * height * channels.count() {
            return Err(IqaError::InvalidImage(format!(
                "{width}x{height} {channels:?} raster needs {} samples, got {}",
                width * height * channels.count(),
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            bit_depth,
            samples,
        })
    }

    pub fn from_dynamic(img: DynamicImage) -> Result<Self> {
        let (w, h) = (img.width() as usize, img.height() as usize);
        let widen = |v: Vec<u8>| v.into_iter().map(u16::from).collect::<Vec<_>>();
        let (channels, depth, samples) = match img {
            DynamicImage::ImageLuma8(b) => (Channels::Gray, 8, widen(b.into_raw())),
            DynamicImage::ImageLumaA8(_) => {
                (Channels::Gray, 8, widen(img.to_luma8().into_raw()))
            }
            DynamicImage::ImageRgb8(b) => (Channels::Rgb, 8, widen(b.into_raw())),
            DynamicImage::ImageRgba8(_) => (Channels::Rgb, 8, widen(img.to_rgb8().into_raw())),
            DynamicImage::ImageLuma16(b) => (Channels::Gray, 16, b.into_raw()),
            DynamicImage::ImageLumaA16(_) => (Channels::Gray, 16, img.to_luma16().into_raw()),
            DynamicImage::ImageRgb16(b) => (Channels::Rgb, 16, b.into_raw()),
            DynamicImage::ImageRgba16(_) => (Channels::Rgb, 16, img.to_rgb16().into_raw()),
            other => {
                return Err(IqaError::InvalidImage(format!(
                    "unsupported pixel layout {:?}",
                    other.color()
                )))
            }
        };
        Raster::new(w, h, channels, depth, samples)
    }
}

/// Decodes a PNG or BMP file.
pub fn load_raster(path: impl AsRef<Path>) -> Result<Raster> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .map_err(|e| IqaError::io(path, e))?
        .with_guessed_format()
        .map_err(|e| IqaError::io(path, e))?;
    let img = reader
        .decode()
        .map_err(|e| IqaError::InvalidImage(format!("{}: {e}", path.display())))?;
    Raster::from_dynamic(img)
}

/// BT.601 luma scaled to `[0, 1]` by the maximum code value of the bit depth.
/// Grayscale rasters are only range-scaled.
pub fn to_grayscale(raster: &Raster) -> Result<ScalarField2D> {
    if raster.width == 0 || raster.height == 0 || raster.samples.is_empty() {
        return Err(IqaError::InvalidImage("empty raster".into()));
    }
    let max_code: u64 = match raster.bit_depth {
        8 => 255,
        16 => 65_535,
        d => {
            return Err(IqaError::InvalidImage(format!(
                "unsupported bit depth {d}"
            )))
        }
    };
    // Integer weights (per mille) keep the white point exact: 299 + 587 + 114 = 1000.
    let values = match raster.channels {
        Channels::Gray => raster
            .samples
            .iter()
            .map(|&v| v as f64 / max_code as f64)
            .collect(),
        Channels::Rgb => {
            let denom = (1000 * max_code) as f64;
            raster
                .samples
                .chunks_exact(3)
                .map(|px| {
                    let luma = 299 * px[0] as u64 + 587 * px[1] as u64 + 114 * px[2] as u64;
                    luma as f64 / denom
                })
                .collect()
        }
    };
    ScalarField2D::new(raster.width, raster.height, values)
}

/// Scale factor chosen for an image whose shorter side is `min_dim` pixels.
pub fn scale_factor_for(min_dim: usize) -> usize {
    ((min_dim as f64 / SCALE_REFERENCE_SIZE).round() as usize).max(1)
}

/// Non-overlapping `factor` x `factor` block means. Trailing partial blocks are dropped.
pub fn block_downsample(field: &ScalarField2D, factor: usize) -> Result<ScalarField2D> {
    if factor == 0 {
        return Err(IqaError::InvalidArgument("scale factor must be positive".into()));
    }
    if factor == 1 {
        return Ok(field.clone());
    }
    let (w, h) = (field.width() / factor, field.height() / factor);
    if w == 0 || h == 0 {
        return Err(IqaError::InvalidArgument(format!(
            "factor {factor} leaves nothing of a {}x{} field",
            field.width(),
            field.height()
        )));
    }
    let area = (factor * factor) as f64;
    Ok(ScalarField2D::from_fn(w, h, |bx, by| {
        let mut sum = 0.0;
        for y in by * factor..(by + 1) * factor {
            sum += field.row(y)[bx * factor..(bx + 1) * factor]
                .iter()
                .sum::<f64>();
        }
        sum / area
    }))
}

/// Automatic scale selection: `F = max(1, round(min(w, h) / 256))` followed by
/// `F`-block averaging.
pub fn auto_scale(field: &ScalarField2D) -> Result<(ScalarField2D, usize)> {
    let factor = scale_factor_for(field.width().min(field.height()));
    Ok((block_downsample(field, factor)?, factor))
}

/// Preprocessed reference/test luminance fields, co-registered and in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImagePair {
    pub reference: ScalarField2D,
    pub test: ScalarField2D,
    pub scale_factor: usize,
}

impl ImagePair {
    /// Wraps two already preprocessed fields after checking the pair invariants.
    pub fn from_fields(
        reference: ScalarField2D,
        test: ScalarField2D,
        scale_factor: usize,
    ) -> Result<Self> {
        if !reference.same_dims(&test) {
            return Err(mismatch(reference.dims(), test.dims()));
        }
        if reference.width() < 3 || reference.height() < 3 {
            return Err(IqaError::InvalidImage(format!(
                "preprocessed images must be at least 3x3, got {}x{}",
                reference.width(),
                reference.height()
            )));
        }
        let in_range = |f: &ScalarField2D| f.values().iter().all(|v| (0.0..=1.0).contains(v));
        if !in_range(&reference) || !in_range(&test) {
            return Err(IqaError::InvalidArgument(
                "image pair values must lie in [0, 1]".into(),
            ));
        }
        if scale_factor == 0 {
            return Err(IqaError::InvalidArgument("scale factor must be positive".into()));
        }
        Ok(Self {
            reference,
            test,
            scale_factor,
        })
    }

    pub fn width(&self) -> usize {
        self.reference.width()
    }

    pub fn height(&self) -> usize {
        self.reference.height()
    }
}

fn mismatch(r: (usize, usize), t: (usize, usize)) -> IqaError {
    IqaError::PairMismatch {
        ref_width: r.0,
        ref_height: r.1,
        test_width: t.0,
        test_height: t.1,
    }
}

/// Grayscale, scale selection (factor taken from the reference), then clamp to `[0, 1]`.
pub fn preprocess_pair(reference: &Raster, test: &Raster) -> Result<ImagePair> {
    if (reference.width, reference.height) != (test.width, test.height) {
        return Err(mismatch(
            (reference.width, reference.height),
            (test.width, test.height),
        ));
    }
    let gray_ref = to_grayscale(reference)?;
    let gray_test = to_grayscale(test)?;
    let (scaled_ref, factor) = auto_scale(&gray_ref)?;
    let scaled_test = block_downsample(&gray_test, factor)?;
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    ImagePair::from_fields(scaled_ref.map(clamp), scaled_test.map(clamp), factor)
}

/// Loads and preprocesses a reference/test pair from disk.
pub fn load_pair(reference: impl AsRef<Path>, test: impl AsRef<Path>) -> Result<ImagePair> {
    let r = load_raster(reference)?;
    let t = load_raster(test)?;
    preprocess_pair(&r, &t)
}
