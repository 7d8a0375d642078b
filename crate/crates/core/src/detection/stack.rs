use crate::{Error, Image, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StackOrigin {
    Intensity,
    Dolp,
}

impl StackOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Intensity => "intensity",
            Self::Dolp => "dolp",
        }
    }
}

impl std::str::FromStr for StackOrigin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intensity" => Ok(Self::Intensity),
            "dolp" => Ok(Self::Dolp),
            other => Err(Error::Schema(format!("unknown stack origin `{other}`"))),
        }
    }
}

/// `N_t >= 2` floating-point frames of equal size sampled at a fixed rate.
///
/// `window` is the `[start, end)` frame range of the recording this stack
/// covers, so truncations compose.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageStack {
    frames: Vec<Image>,
    frame_rate_hz: f64,
    origin: StackOrigin,
    window: (usize, usize),
}

impl ImageStack {
    pub fn new(frames: Vec<Image>, frame_rate_hz: f64, origin: StackOrigin) -> Result<Self> {
        let n = frames.len();
        Self::with_window(frames, frame_rate_hz, origin, (0, n))
    }

    pub fn with_window(
        frames: Vec<Image>,
        frame_rate_hz: f64,
        origin: StackOrigin,
        window: (usize, usize),
    ) -> Result<Self> {
        if frames.len() < 2 {
            return Err(Error::Schema(format!(
                "image stack needs at least 2 frames, got {}",
                frames.len()
            )));
        }
        if !(frame_rate_hz.is_finite() && frame_rate_hz > 0.0) {
            return Err(Error::Domain(format!("frame rate must be > 0, got {frame_rate_hz}")));
        }
        if window.1 < window.0 || window.1 - window.0 != frames.len() {
            return Err(Error::Schema(format!(
                "window {window:?} does not match {} frames",
                frames.len()
            )));
        }
        for (i, f) in frames.iter().enumerate().skip(1) {
            if f.dims() != frames[0].dims() {
                return Err(Error::DimensionMismatch(format!(
                    "frame {i} is {}x{}, frame 0 is {}x{}",
                    f.width(),
                    f.height(),
                    frames[0].width(),
                    frames[0].height()
                )));
            }
        }
        Ok(Self {
            frames,
            frame_rate_hz,
            origin,
            window,
        })
    }

    pub fn frames(&self) -> &[Image] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn width(&self) -> usize {
        self.frames[0].width()
    }

    pub fn height(&self) -> usize {
        self.frames[0].height()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.frames[0].dims()
    }

    pub fn frame_rate_hz(&self) -> f64 {
        self.frame_rate_hz
    }

    pub fn origin(&self) -> StackOrigin {
        self.origin
    }

    pub fn window(&self) -> (usize, usize) {
        self.window
    }

    pub fn duration_s(&self) -> f64 {
        self.len() as f64 / self.frame_rate_hz
    }

    /// Time series of pixel `p` (row-major index).
    pub fn pixel_series(&self, p: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f.data()[p]).collect()
    }

    /// Frames `start..end` of this stack.
    pub fn truncate_window(&self, start: usize, end: usize) -> Result<Self> {
        if start >= end || end > self.len() {
            return Err(Error::Range(format!(
                "window {start}..{end} invalid for a {}-frame stack",
                self.len()
            )));
        }
        Self::with_window(
            self.frames[start..end].to_vec(),
            self.frame_rate_hz,
            self.origin,
            (self.window.0 + start, self.window.0 + end),
        )
    }
}
