use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StackKind {
    /// Raw little-endian `u16` mosaic frames.
    Mosaic,
    /// Float-map frames.
    Float,
}

/// Provenance. Contains no timestamps so identical runs give identical
/// bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Creation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl Creation {
    pub fn new(seed: Option<u64>) -> Self {
        Self {
            seed,
            tool_version: crate::TOOL_VERSION.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackManifest {
    pub kind: StackKind,
    pub width: usize,
    pub height: usize,
    pub frame_count: usize,
    pub frame_rate_hz: f64,
    /// 16 for mosaic frames, 32 for float maps.
    pub bit_depth: u32,
    /// Superpixel layout of mosaic frames, e.g. `"135,0/90,45"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<String>,
    /// `intensity` or `dolp` for float stacks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
    /// Frame files relative to the manifest directory, in time order.
    pub frames: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<String>,
    /// Label-mask float map (truth bundles).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(usize, usize)>,
    pub created: Creation,
}

impl StackManifest {
    pub fn parse(text: &str, what: &Path) -> Result<Self> {
        let m: Self =
            serde_json::from_str(text).map_err(|e| Error::Schema(format!("{}: {e}", what.display())))?;
        m.validate(what)?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self, what: &Path) -> Result<()> {
        let err = |msg: String| Err(Error::Schema(format!("{}: {msg}", what.display())));
        if self.frames.len() != self.frame_count {
            return err(format!(
                "frame_count is {} but {} frame files are listed",
                self.frame_count,
                self.frames.len()
            ));
        }
        if self.width == 0 || self.height == 0 {
            return err(format!("width/height must be > 0, got {}x{}", self.width, self.height));
        }
        if !(self.frame_rate_hz.is_finite() && self.frame_rate_hz > 0.0) {
            return err(format!("frame_rate_hz must be > 0, got {}", self.frame_rate_hz));
        }
        let depth = match self.kind {
            StackKind::Mosaic => 16,
            StackKind::Float => 32,
        };
        if self.bit_depth != depth {
            return err(format!("bit_depth must be {depth} for {:?} stacks", self.kind));
        }
        if self.kind == StackKind::Mosaic && self.layout.is_none() {
            return err("mosaic stacks need a layout".into());
        }
        if let Some((a, b)) = self.window {
            if b < a || b - a != self.frame_count {
                return err(format!("window ({a}, {b}) does not span {} frames", self.frame_count));
            }
        }
        Ok(())
    }
}
