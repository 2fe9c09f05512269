//! Full-reference image quality assessment by global/local distortion fusion.
//!
//! A reference/test pair is reduced to luminance, scale-normalized, and compared
//! through spectral saliency maps (global cues) and local contrast and gradient
//! fields (local cues). Windowed correlations between the two images gate and
//! weight the local differences into a per-pixel distortion map, which is
//! pooled by saliency into a single score `Q` (0 for identical images, larger
//! for worse quality).
//!
//! The [`eval`] module implements the benchmark protocol used to validate such
//! scores against subjective ratings, and [`dataset`] drives it from manifest
//! files.

pub mod correlation;
pub mod dataset;
pub mod distortion;
pub mod error;
pub mod eval;
pub mod features;
pub mod fft;
pub mod field;
pub mod filter;
pub mod image;
pub mod metric;
pub mod saliency;

pub use correlation::{combine_hc_lc, local_pearson, CorrelationMaps};
pub use distortion::{
    analyze_pair, final_map, gated_maps, pool, primary_map, psnr, psnr_with_cap, score_pair,
    DistortionMap, GldAnalysis, QualityRecord, POOLING_SCALE,
};
pub use error::{IqaError, Result};
pub use features::FeatureBundle;
pub use field::ScalarField2D;
pub use image::{load_pair, preprocess_pair, ImagePair, Raster};
pub use metric::{GldMetric, MetricRegistry, PsnrMetric, QualityMetric};
pub use saliency::{SaliencyMap, SaliencyMethod, SaliencyModel, SaliencyRegistry};
