use super::fmap::{read_fmap, write_fmap};
use super::{read_file, write_atomic};
use crate::detection::{DetectionMap, MapMetadata};
use crate::{Error, Image, Result};
use serde::{Deserialize, Serialize};
use std::io::Cursor;
use std::path::{Path, PathBuf};

/// JSON written next to every detection map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSidecar {
    #[serde(flatten)]
    pub meta: MapMetadata,
    pub width: usize,
    pub height: usize,
    /// Map values sent to preview gray levels 0 and 255.
    pub normalization: (f64, f64),
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapFiles {
    pub fmap: PathBuf,
    pub preview: PathBuf,
    pub sidecar: PathBuf,
}

/// Min-max normalized 8-bit grayscale PNG and the normalization bounds.
/// A constant map previews as uniform gray 128.
pub fn preview_bytes(image: &Image) -> Result<(Vec<u8>, (f64, f64))> {
    let (lo, hi) = image.min_max();
    let span = hi - lo;
    let pixels: Vec<u8> = image
        .data()
        .iter()
        .map(|&v| {
            if span > 0.0 {
                (255.0 * (v - lo) / span).round().clamp(0.0, 255.0) as u8
            } else {
                128
            }
        })
        .collect();
    let gray = ::image::GrayImage::from_raw(image.width() as u32, image.height() as u32, pixels)
        .expect("buffer matches dimensions");
    let mut out = Cursor::new(Vec::new());
    gray.write_to(&mut out, ::image::ImageFormat::Png)
        .map_err(|e| Error::Range(format!("png encoding failed: {e}")))?;
    Ok((out.into_inner(), (lo, hi)))
}

/// Writes `<stem>.fmap`, `<stem>.png` and `<stem>.json` into `dir`.
pub fn write_map(map: &DetectionMap, dir: &Path, stem: &str) -> Result<MapFiles> {
    let files = MapFiles {
        fmap: dir.join(format!("{stem}.fmap")),
        preview: dir.join(format!("{stem}.png")),
        sidecar: dir.join(format!("{stem}.json")),
    };
    write_fmap(&files.fmap, &map.image)?;
    let (png, bounds) = preview_bytes(&map.image)?;
    write_atomic(&files.preview, &png)?;
    let side = MapSidecar {
        meta: map.meta.clone(),
        width: map.image.width(),
        height: map.image.height(),
        normalization: bounds,
        tool_version: crate::TOOL_VERSION.to_string(),
    };
    let mut json = serde_json::to_string_pretty(&side).expect("sidecar serializes");
    json.push('\n');
    write_atomic(&files.sidecar, json.as_bytes())?;
    Ok(files)
}

pub fn read_sidecar(path: &Path) -> Result<MapSidecar> {
    let bytes = read_file(path)?;
    serde_json::from_slice(&bytes).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

/// Reads a map written by [`write_map`] given its `.fmap` path.
pub fn read_map(fmap: &Path) -> Result<DetectionMap> {
    let image = read_fmap(fmap)?;
    let side = read_sidecar(&fmap.with_extension("json"))?;
    Ok(DetectionMap {
        image,
        meta: side.meta,
    })
}
