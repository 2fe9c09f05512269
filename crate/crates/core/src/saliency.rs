//! Bottom-up spectral saliency: spectral residual (SR) and phase-only
//! reconstruction (PFT), each behind the [`SaliencyModel`] trait and looked up
//! by name through a [`SaliencyRegistry`].
//!
//! Both models run at a fixed working width of 64 pixels (aspect preserved),
//! square the magnitude of the reconstruction, smooth it with a 9x9 Gaussian
//! (sigma 2.5) and resample back to the input size. Maps are left unnormalized;
//! [`normalize_jointly`] rescales a reference/test pair by their common maximum.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{IqaError, Result};
use crate::fft::{fft2_forward, fft2_inverse_complex, Spectrum2D};
use crate::field::ScalarField2D;
use crate::filter::{gaussian_blur, mean3x3, resize_bilinear};

pub const WORKING_WIDTH: usize = 64;
pub const LOG_EPSILON: f64 = 1e-10;
pub const SMOOTHING_SIGMA: f64 = 2.5;
pub const SMOOTHING_SIZE: usize = 9;

/// Spectral bins whose magnitude is below this fraction of the largest bin
/// carry no usable phase and are dropped from the reconstruction.
const PHASE_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SaliencyMethod {
    Sr,
    Pft,
}

impl SaliencyMethod {
    pub const ALL: [SaliencyMethod; 2] = [SaliencyMethod::Sr, SaliencyMethod::Pft];

    pub fn as_str(self) -> &'static str {
        match self {
            SaliencyMethod::Sr => "sr",
            SaliencyMethod::Pft => "pft",
        }
    }

    /// The built-in model implementing this method.
    pub fn model(self) -> &'static dyn SaliencyModel {
        match self {
            SaliencyMethod::Sr => &SpectralResidual,
            SaliencyMethod::Pft => &PhaseSpectrum,
        }
    }
}

impl fmt::Display for SaliencyMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SaliencyMethod {
    type Err = IqaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sr" => Ok(SaliencyMethod::Sr),
            "pft" => Ok(SaliencyMethod::Pft),
            _ => Err(IqaError::UnknownMethod(s.to_string())),
        }
    }
}

/// A nonnegative saliency field with the method that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct SaliencyMap {
    pub field: ScalarField2D,
    pub method: SaliencyMethod,
}

pub trait SaliencyModel: Send + Sync {
    fn name(&self) -> &'static str;
    fn method(&self) -> SaliencyMethod;
    fn compute(&self, image: &ScalarField2D) -> SaliencyMap;
}

/// Spectral residual: log-amplitude minus its 3x3 local mean, recombined with
/// the original phase.
#[derive(Clone, Copy, Debug, Default)]
pub struct SpectralResidual;

/// Phase-only reconstruction: unit amplitude, original phase.
#[derive(Clone, Copy, Debug, Default)]
pub struct PhaseSpectrum;

impl SaliencyModel for SpectralResidual {
    fn name(&self) -> &'static str {
        "sr"
    }

    fn method(&self) -> SaliencyMethod {
        SaliencyMethod::Sr
    }

    fn compute(&self, image: &ScalarField2D) -> SaliencyMap {
        SaliencyMap {
            field: spectral_saliency(image, residual_spectrum),
            method: SaliencyMethod::Sr,
        }
    }
}

impl SaliencyModel for PhaseSpectrum {
    fn name(&self) -> &'static str {
        "pft"
    }

    fn method(&self) -> SaliencyMethod {
        SaliencyMethod::Pft
    }

    fn compute(&self, image: &ScalarField2D) -> SaliencyMap {
        SaliencyMap {
            field: spectral_saliency(image, phase_only_spectrum),
            method: SaliencyMethod::Pft,
        }
    }
}

pub fn spectral_residual(image: &ScalarField2D) -> SaliencyMap {
    SpectralResidual.compute(image)
}

pub fn pft_saliency(image: &ScalarField2D) -> SaliencyMap {
    PhaseSpectrum.compute(image)
}

/// Name-indexed set of saliency models.
#[derive(Clone)]
pub struct SaliencyRegistry {
    models: BTreeMap<String, Arc<dyn SaliencyModel>>,
}

impl SaliencyRegistry {
    pub fn empty() -> Self {
        Self {
            models: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, model: Arc<dyn SaliencyModel>) -> &mut Self {
        self.models.insert(model.name().to_string(), model);
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn SaliencyModel>> {
        self.models
            .get(&name.to_ascii_lowercase())
            .cloned()
            .ok_or_else(|| IqaError::UnknownMethod(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.models.keys().map(String::as_str)
    }
}

impl Default for SaliencyRegistry {
    fn default() -> Self {
        let mut registry = Self::empty();
        registry
            .register(Arc::new(SpectralResidual))
            .register(Arc::new(PhaseSpectrum));
        registry
    }
}

fn working_size(width: usize, height: usize) -> (usize, usize) {
    let h = (height as f64 * WORKING_WIDTH as f64 / width as f64).round() as usize;
    (WORKING_WIDTH, h.max(1))
}

fn spectral_saliency(
    image: &ScalarField2D,
    reconstruct: fn(&Spectrum2D) -> Spectrum2D,
) -> ScalarField2D {
    let (w, h) = image.dims();
    let (ww, wh) = working_size(w, h);
    let small = resize_bilinear(image, ww, wh);
    let spectrum = reconstruct(&fft2_forward(&small));
    let energy: Vec<f64> = fft2_inverse_complex(&spectrum)
        .into_iter()
        .map(|c| c.norm_sqr())
        .collect();
    let energy = ScalarField2D::from_parts(ww, wh, energy);
    let smoothed = gaussian_blur(&energy, SMOOTHING_SIGMA, SMOOTHING_SIZE);
    resize_bilinear(&smoothed, w, h).map(|v| v.max(0.0))
}

/// Unit phasors of every bin; bins without a meaningful magnitude get zero.
/// An all-zero spectrum (a black image) is treated as flat: DC phasor 1.
fn unit_phasors(spectrum: &Spectrum2D) -> Vec<Complex64> {
    let peak = spectrum.data.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        let mut out = vec![Complex64::default(); spectrum.data.len()];
        out[0] = Complex64::new(1.0, 0.0);
        return out;
    }
    let floor = peak * PHASE_FLOOR;
    spectrum
        .data
        .iter()
        .map(|&c| {
            let m = c.norm();
            if m > floor {
                c / m
            } else {
                Complex64::default()
            }
        })
        .collect()
}

fn residual_spectrum(spectrum: &Spectrum2D) -> Spectrum2D {
    let (w, h) = (spectrum.width, spectrum.height);
    let log_amp = ScalarField2D::from_parts(
        w,
        h,
        spectrum
            .data
            .iter()
            .map(|c| (c.norm() + LOG_EPSILON).ln())
            .collect(),
    );
    let local_mean = mean3x3(&log_amp);
    let data = unit_phasors(spectrum)
        .into_iter()
        .zip(log_amp.values().iter().zip(local_mean.values()))
        .map(|(phasor, (l, m))| phasor * (l - m).exp())
        .collect();
    Spectrum2D {
        width: w,
        height: h,
        data,
    }
}

fn phase_only_spectrum(spectrum: &Spectrum2D) -> Spectrum2D {
    Spectrum2D {
        width: spectrum.width,
        height: spectrum.height,
        data: unit_phasors(spectrum),
    }
}

/// Divides both maps by the largest value found in either, preserving their
/// relative magnitudes. All-zero pairs are left untouched.
pub fn normalize_jointly(a: &mut SaliencyMap, b: &mut SaliencyMap) {
    let peak = a.field.max().max(b.field.max());
    if peak > 0.0 {
        a.field = a.field.map(|v| v / peak);
        b.field = b.field.map(|v| v / peak);
    }
}
