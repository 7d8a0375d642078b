use super::mosaic::{MosaicFrame, PolarAngle};
use super::stokes::PolarChannels;
use crate::{Image, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    #[default]
    Bilinear,
    /// Separable Catmull-Rom cubic.
    Bicubic,
}

impl std::str::FromStr for Interpolation {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bilinear" => Ok(Self::Bilinear),
            "bicubic" => Ok(Self::Bicubic),
            other => Err(crate::Error::Domain(format!("unknown interpolation `{other}`"))),
        }
    }
}

/// Sub-sampled lattice of one orientation: `w x h` samples located at
/// mosaic pixel `(2i + col, 2j + row)`.
struct Lattice {
    w: usize,
    h: usize,
    row: usize,
    col: usize,
    data: Vec<f64>,
}

impl Lattice {
    fn extract(frame: &MosaicFrame, angle: PolarAngle) -> Self {
        let (row, col) = frame.layout().offset_of(angle);
        let (w, h) = (frame.width() / 2, frame.height() / 2);
        let mut data = Vec::with_capacity(w * h);
        for j in 0..h {
            for i in 0..w {
                data.push(frame.get(2 * i + col, 2 * j + row) as f64 / 65535.0);
            }
        }
        Self { w, h, row, col, data }
    }

    #[inline]
    fn at(&self, i: isize, j: isize) -> f64 {
        let i = i.clamp(0, self.w as isize - 1) as usize;
        let j = j.clamp(0, self.h as isize - 1) as usize;
        self.data[j * self.w + i]
    }

    /// Lattice coordinate of a mosaic pixel along one axis.
    #[inline]
    fn coord(p: usize, offset: usize) -> f64 {
        (p as f64 - offset as f64) / 2.0
    }

    fn bilinear(&self, x: usize, y: usize) -> f64 {
        let u = Self::coord(x, self.col);
        let v = Self::coord(y, self.row);
        let (i0, j0) = (u.floor(), v.floor());
        let (fu, fv) = (u - i0, v - j0);
        let (i0, j0) = (i0 as isize, j0 as isize);
        let top = (1.0 - fu) * self.at(i0, j0) + fu * self.at(i0 + 1, j0);
        let bot = (1.0 - fu) * self.at(i0, j0 + 1) + fu * self.at(i0 + 1, j0 + 1);
        (1.0 - fv) * top + fv * bot
    }

    fn bicubic(&self, x: usize, y: usize) -> f64 {
        let u = Self::coord(x, self.col);
        let v = Self::coord(y, self.row);
        let (i0, j0) = (u.floor(), v.floor());
        let wu = catmull_rom(u - i0);
        let wv = catmull_rom(v - j0);
        let (i0, j0) = (i0 as isize, j0 as isize);
        let mut acc = 0.0;
        for (dj, wy) in wv.iter().enumerate() {
            let mut row = 0.0;
            for (di, wx) in wu.iter().enumerate() {
                row += wx * self.at(i0 + di as isize - 1, j0 + dj as isize - 1);
            }
            acc += wy * row;
        }
        acc
    }
}

/// Catmull-Rom weights for taps at -1, 0, 1, 2 given fractional offset `t`.
fn catmull_rom(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

fn interpolate(frame: &MosaicFrame, angle: PolarAngle, method: Interpolation) -> Image {
    let lat = Lattice::extract(frame, angle);
    Image::from_fn(frame.width(), frame.height(), |x, y| {
        let v = match method {
            Interpolation::Bilinear => lat.bilinear(x, y),
            Interpolation::Bicubic => lat.bicubic(x, y),
        };
        v.max(0.0)
    })
}

/// Splits a mosaic into four full-resolution channels scaled to `[0, 1]`.
/// Samples outside the lattice are edge-replicated.
pub fn demosaic(frame: &MosaicFrame, method: Interpolation) -> Result<PolarChannels> {
    PolarChannels::new(
        interpolate(frame, PolarAngle::Deg0, method),
        interpolate(frame, PolarAngle::Deg45, method),
        interpolate(frame, PolarAngle::Deg90, method),
        interpolate(frame, PolarAngle::Deg135, method),
    )
}
