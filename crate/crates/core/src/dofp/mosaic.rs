use crate::{Error, Image, Result};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolarAngle {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl PolarAngle {
    pub const ALL: [PolarAngle; 4] = [Self::Deg0, Self::Deg45, Self::Deg90, Self::Deg135];

    pub fn degrees(self) -> f64 {
        match self {
            Self::Deg0 => 0.0,
            Self::Deg45 => 45.0,
            Self::Deg90 => 90.0,
            Self::Deg135 => 135.0,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "0" => Some(Self::Deg0),
            "45" => Some(Self::Deg45),
            "90" => Some(Self::Deg90),
            "135" => Some(Self::Deg135),
            _ => None,
        }
    }
}

/// Micro-polarizer orientation of each cell of the 2x2 superpixel,
/// `cells[row][col]`.
///
/// The default cycles clockwise 135°, 0°, 45°, 90° from the top-left cell,
/// written `"135,0/90,45"` (rows separated by `/`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuperpixelLayout {
    cells: [[PolarAngle; 2]; 2],
}

impl Default for SuperpixelLayout {
    fn default() -> Self {
        use PolarAngle::*;
        Self {
            cells: [[Deg135, Deg0], [Deg90, Deg45]],
        }
    }
}

impl SuperpixelLayout {
    pub fn new(cells: [[PolarAngle; 2]; 2]) -> Result<Self> {
        for a in PolarAngle::ALL {
            if !cells.iter().flatten().any(|&c| c == a) {
                return Err(Error::Layout(format!(
                    "superpixel has no {}° cell",
                    a.degrees()
                )));
            }
        }
        Ok(Self { cells })
    }

    #[inline]
    pub fn angle_at(&self, x: usize, y: usize) -> PolarAngle {
        self.cells[y & 1][x & 1]
    }

    /// `(row, col)` offset of an orientation inside the superpixel.
    pub fn offset_of(&self, angle: PolarAngle) -> (usize, usize) {
        for r in 0..2 {
            for c in 0..2 {
                if self.cells[r][c] == angle {
                    return (r, c);
                }
            }
        }
        unreachable!("layout validated on construction")
    }
}

impl FromStr for SuperpixelLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Layout(format!("cannot parse superpixel layout `{s}`"));
        let rows: Vec<&str> = s.split('/').collect();
        if rows.len() != 2 {
            return Err(bad());
        }
        let mut cells = [[PolarAngle::Deg0; 2]; 2];
        for (r, row) in rows.iter().enumerate() {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(bad());
            }
            for (c, v) in cols.iter().enumerate() {
                cells[r][c] = PolarAngle::parse(v).ok_or_else(bad)?;
            }
        }
        Self::new(cells)
    }
}

impl fmt::Display for SuperpixelLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.cells;
        write!(
            f,
            "{},{}/{},{}",
            c[0][0].degrees(),
            c[0][1].degrees(),
            c[1][0].degrees(),
            c[1][1].degrees()
        )
    }
}

/// One raw 16-bit DoFP frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MosaicFrame {
    width: usize,
    height: usize,
    data: Vec<u16>,
    layout: SuperpixelLayout,
}

impl MosaicFrame {
    pub fn new(width: usize, height: usize, data: Vec<u16>, layout: SuperpixelLayout) -> Result<Self> {
        if width == 0 || height == 0 || !width.is_multiple_of(2) || !height.is_multiple_of(2) {
            return Err(Error::Layout(format!(
                "mosaic dimensions must be even and non-zero, got {width}x{height}"
            )));
        }
        if width * height != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} mosaic needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
            layout,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    pub fn layout(&self) -> SuperpixelLayout {
        self.layout
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.data[y * self.width + x]
    }

    /// Raw intensities scaled to `[0, 1]`.
    pub fn to_image(&self) -> Image {
        Image::new(
            self.width,
            self.height,
            self.data.iter().map(|&v| v as f64 / 65535.0).collect(),
        )
        .expect("dimensions checked on construction")
    }
}

/// Time sequence of mosaic frames sharing size and layout.
#[derive(Debug, Clone, PartialEq)]
pub struct MosaicStack {
    frames: Vec<MosaicFrame>,
    frame_rate_hz: f64,
}

impl MosaicStack {
    pub fn new(frames: Vec<MosaicFrame>, frame_rate_hz: f64) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::Schema("mosaic stack has no frames".into()));
        }
        if !(frame_rate_hz.is_finite() && frame_rate_hz > 0.0) {
            return Err(Error::Domain(format!("frame rate must be > 0, got {frame_rate_hz}")));
        }
        let (w, h, l) = (frames[0].width, frames[0].height, frames[0].layout);
        if let Some(i) = frames
            .iter()
            .position(|f| f.width != w || f.height != h || f.layout != l)
        {
            return Err(Error::DimensionMismatch(format!(
                "frame {i} differs from frame 0 in size or layout"
            )));
        }
        Ok(Self {
            frames,
            frame_rate_hz,
        })
    }

    pub fn frames(&self) -> &[MosaicFrame] {
        &self.frames
    }

    pub fn frame_rate_hz(&self) -> f64 {
        self.frame_rate_hz
    }

    pub fn width(&self) -> usize {
        self.frames[0].width
    }

    pub fn height(&self) -> usize {
        self.frames[0].height
    }

    pub fn layout(&self) -> SuperpixelLayout {
        self.frames[0].layout
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}
