use super::{read_file, write_atomic};
use crate::{Error, Image, Result};
use std::path::Path;

/// First eight bytes of every float map.
pub const FMAP_MAGIC: [u8; 8] = *b"PNDTFMAP";
const HEADER: usize = 16;

/// Magic, `u32` LE width and height, then row-major `f32` LE samples.
pub fn encode_fmap(image: &Image) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + 4 * image.data().len());
    out.extend_from_slice(&FMAP_MAGIC);
    out.extend_from_slice(&(image.width() as u32).to_le_bytes());
    out.extend_from_slice(&(image.height() as u32).to_le_bytes());
    for &v in image.data() {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

/// Inverse of [`encode_fmap`]; `what` names the source in errors.
pub fn decode_fmap(bytes: &[u8], what: &str) -> Result<Image> {
    if bytes.len() < HEADER || bytes[..8] != FMAP_MAGIC {
        return Err(Error::Schema(format!("{what}: not a float map (bad magic)")));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes")) as usize;
    let (w, h) = (u32_at(8), u32_at(12));
    let want = HEADER + 4 * w * h;
    if bytes.len() != want {
        return Err(Error::DimensionMismatch(format!(
            "{what}: header says {w}x{h} ({want} bytes), file has {} bytes",
            bytes.len()
        )));
    }
    let data = bytes[HEADER..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")) as f64)
        .collect();
    Image::new(w, h, data)
}

pub fn write_fmap(path: &Path, image: &Image) -> Result<()> {
    if !image.is_finite() {
        return Err(Error::Range(format!("{}: map has non-finite values", path.display())));
    }
    write_atomic(path, &encode_fmap(image))
}

pub fn read_fmap(path: &Path) -> Result<Image> {
    decode_fmap(&read_file(path)?, &path.display().to_string())
}
