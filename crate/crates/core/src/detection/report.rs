use super::fft::{default_bins, fft_phase_bins, PhaseResult};
use super::pca::{pca_components, PcaResult};
use super::stack::{ImageStack, StackOrigin};
use crate::{Image, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapMethod {
    FirstFrame,
    FftPhase,
    FftAmplitude,
    Pca,
}

/// Provenance carried with every detection map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapMetadata {
    pub method: MapMethod,
    pub origin: StackOrigin,
    pub window: (usize, usize),
    pub frame_count: usize,
    pub frame_rate_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bin: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_hz: Option<f64>,
    /// 1-based principal component index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temporal_loading: Option<Vec<f64>>,
}

impl MapMetadata {
    fn base(stack: &ImageStack, method: MapMethod) -> Self {
        Self {
            method,
            origin: stack.origin(),
            window: stack.window(),
            frame_count: stack.len(),
            frame_rate_hz: stack.frame_rate_hz(),
            bin: None,
            frequency_hz: None,
            component: None,
            singular_value: None,
            temporal_loading: None,
        }
    }

    /// Short identifier such as `pca-pc2` or `fft-phase-k11`.
    pub fn id(&self) -> String {
        match self.method {
            MapMethod::FirstFrame => "first-frame".into(),
            MapMethod::FftPhase => format!("fft-phase-k{}", self.bin.unwrap_or(0)),
            MapMethod::FftAmplitude => format!("fft-amplitude-k{}", self.bin.unwrap_or(0)),
            MapMethod::Pca => format!("pca-pc{}", self.component.unwrap_or(0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionMap {
    pub image: Image,
    pub meta: MapMetadata,
}

impl DetectionMap {
    pub fn first_frame(stack: &ImageStack) -> Self {
        Self {
            image: stack.frames()[0].clone(),
            meta: MapMetadata::base(stack, MapMethod::FirstFrame),
        }
    }

    pub fn from_phase(stack: &ImageStack, r: &PhaseResult, amplitude: bool) -> Self {
        let method = if amplitude {
            MapMethod::FftAmplitude
        } else {
            MapMethod::FftPhase
        };
        let mut meta = MapMetadata::base(stack, method);
        meta.bin = Some(r.bin);
        meta.frequency_hz = Some(r.frequency_hz);
        Self {
            image: if amplitude { r.amplitude.clone() } else { r.phase.clone() },
            meta,
        }
    }

    /// Maps for every component of `r`.
    pub fn from_pca(stack: &ImageStack, r: &PcaResult) -> Vec<Self> {
        r.components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut meta = MapMetadata::base(stack, MapMethod::Pca);
                meta.component = Some(i + 1);
                meta.singular_value = Some(r.singular_values[i]);
                meta.temporal_loading = Some(r.temporal_loadings[i].clone());
                Self {
                    image: c.clone(),
                    meta,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    /// Phase-map bins; `None` tracks 0.23 / 2.51 / 4.8 Hz for the stack length.
    pub bins: Option<Vec<usize>>,
    pub num_pcs: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            bins: None,
            num_pcs: 2,
        }
    }
}

/// First frame, phase maps at the configured bins, then the leading
/// principal components.
pub fn detection_report(stack: &ImageStack, config: &ReportConfig) -> Result<Vec<DetectionMap>> {
    let bins = config
        .bins
        .clone()
        .unwrap_or_else(|| default_bins(stack.len(), stack.frame_rate_hz()));
    let mut maps = vec![DetectionMap::first_frame(stack)];
    for r in fft_phase_bins(stack, &bins)? {
        maps.push(DetectionMap::from_phase(stack, &r, false));
    }
    let pca = pca_components(stack, config.num_pcs)?;
    maps.extend(DetectionMap::from_pca(stack, &pca));
    Ok(maps)
}
