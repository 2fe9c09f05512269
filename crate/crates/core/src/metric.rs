//! Full-reference metrics behind a common trait, resolved by name at runtime.
//!
//! Built-in names: `gld-sr`, `gld-pft`, `psnr`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::distortion::{analyze_pair, psnr_with_cap, DEFAULT_PSNR_CAP_DB};
use crate::error::{IqaError, Result};
use crate::image::ImagePair;
use crate::saliency::{SaliencyMethod, SaliencyModel};

pub trait QualityMetric: Send + Sync {
    fn name(&self) -> &str;

    /// Saliency model backing the metric, if any.
    fn saliency_method(&self) -> Option<SaliencyMethod> {
        None
    }

    fn score(&self, pair: &ImagePair) -> Result<f64>;
}

/// The global/local distortion score with a pluggable saliency model.
pub struct GldMetric {
    name: String,
    saliency: Arc<dyn SaliencyModel>,
}

impl GldMetric {
    pub fn new(saliency: Arc<dyn SaliencyModel>) -> Self {
        Self {
            name: format!("gld-{}", saliency.name()),
            saliency,
        }
    }

    pub fn with_method(method: SaliencyMethod) -> Self {
        let model: Arc<dyn SaliencyModel> = match method {
            SaliencyMethod::Sr => Arc::new(crate::saliency::SpectralResidual),
            SaliencyMethod::Pft => Arc::new(crate::saliency::PhaseSpectrum),
        };
        Self::new(model)
    }
}

impl QualityMetric for GldMetric {
    fn name(&self) -> &str {
        &self.name
    }

    fn saliency_method(&self) -> Option<SaliencyMethod> {
        Some(self.saliency.method())
    }

    fn score(&self, pair: &ImagePair) -> Result<f64> {
        Ok(analyze_pair(pair, self.saliency.as_ref())?.q)
    }
}

pub struct PsnrMetric {
    pub cap_db: f64,
}

impl Default for PsnrMetric {
    fn default() -> Self {
        Self {
            cap_db: DEFAULT_PSNR_CAP_DB,
        }
    }
}

impl QualityMetric for PsnrMetric {
    fn name(&self) -> &str {
        "psnr"
    }

    fn score(&self, pair: &ImagePair) -> Result<f64> {
        Ok(psnr_with_cap(pair, self.cap_db))
    }
}

#[derive(Clone)]
pub struct MetricRegistry {
    metrics: BTreeMap<String, Arc<dyn QualityMetric>>,
}

impl MetricRegistry {
    pub fn empty() -> Self {
        Self {
            metrics: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, metric: Arc<dyn QualityMetric>) -> &mut Self {
        self.metrics.insert(metric.name().to_string(), metric);
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn QualityMetric>> {
        self.metrics
            .get(&name.to_ascii_lowercase())
            .cloned()
            .ok_or_else(|| IqaError::UnknownMethod(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.metrics.keys().map(String::as_str)
    }
}

impl Default for MetricRegistry {
    fn default() -> Self {
        let mut registry = Self::empty();
        for method in SaliencyMethod::ALL {
            registry.register(Arc::new(GldMetric::with_method(method)));
        }
        registry.register(Arc::new(PsnrMetric::default()));
        registry
    }
}
