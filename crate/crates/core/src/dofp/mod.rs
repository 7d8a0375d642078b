//! Division-of-focal-plane processing: mosaic frames to polarization
//! channels, Stokes frames and DoLP images.

mod demosaic;
mod guided;
mod mosaic;
mod stokes;

pub use demosaic::{demosaic, Interpolation};
pub use guided::{box_filter, default_eps, guided_filter};
pub use mosaic::{MosaicFrame, MosaicStack, PolarAngle, SuperpixelLayout};
pub use stokes::{compute_dolp, compute_stokes, guidance_image, DolpImage, PolarChannels, StokesFrame};

use crate::{Image, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidedParams {
    pub radius: usize,
    /// Regularization; `None` picks `(0.01 * guide range)^2` per frame.
    pub eps: Option<f64>,
}

impl Default for GuidedParams {
    fn default() -> Self {
        Self {
            radius: 4,
            eps: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineConfig {
    pub interpolation: Interpolation,
    pub guided: Option<GuidedParams>,
}

impl PipelineConfig {
    pub fn with_guided_filter() -> Self {
        Self {
            guided: Some(GuidedParams::default()),
            ..Self::default()
        }
    }
}

/// DoLP image and intensity (four-channel mean) of one mosaic frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameProducts {
    pub dolp: DolpImage,
    pub intensity: Image,
}

pub fn process_frame(frame: &MosaicFrame, config: &PipelineConfig) -> Result<FrameProducts> {
    let channels = demosaic(frame, config.interpolation)?;
    let guide = guidance_image(&channels);
    let raw = compute_dolp(&compute_stokes(&channels))?;
    let dolp = match config.guided {
        Some(p) => {
            let eps = p.eps.unwrap_or_else(|| default_eps(&guide));
            guided_filter(&raw, &guide, p.radius, eps)?
        }
        None => raw,
    };
    Ok(FrameProducts {
        dolp,
        intensity: guide,
    })
}

/// Per-frame processing of a whole stack. Frames are independent, so with
/// the `parallel` feature they are processed concurrently; results are
/// identical either way.
pub fn process_stack(stack: &MosaicStack, config: &PipelineConfig) -> Result<Vec<FrameProducts>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        stack
            .frames()
            .par_iter()
            .map(|f| process_frame(f, config))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        stack.frames().iter().map(|f| process_frame(f, config)).collect()
    }
}
