//! On-disk formats: raw float maps, 8-bit previews with JSON sidecars, and
//! manifest-described frame bundles written atomically.

mod bundle;
mod fmap;
mod manifest;
mod maps;

pub use bundle::{
    read_any_stack, read_image_stack, read_mosaic_stack, read_truth, write_image_stack, write_mosaic_stack,
    write_synth_bundle, AnyStack, BundleWriter,
};
pub use fmap::{decode_fmap, encode_fmap, read_fmap, write_fmap, FMAP_MAGIC};
pub use manifest::{Creation, StackKind, StackManifest, MANIFEST_FILE};
pub use maps::{preview_bytes, read_map, read_sidecar, write_map, MapFiles, MapSidecar};

use crate::{Error, Result};
use std::fs;
use std::path::Path;

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Domain(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile(path.to_path_buf())
        } else {
            Error::io(path, e)
        }
    })
}

/// Fixed-point text with 9 significant digits (`0.228571429`, `2.51428571`).
pub fn format_sig9(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0.00000000".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // Rounding can carry into a new digit (9.999999999 -> 10.00000000).
    let digits = s.chars().filter(char::is_ascii_digit).collect::<String>();
    if digits.trim_start_matches('0').len() > 9 && decimals > 0 {
        let d = decimals - 1;
        return format!("{v:.d$}");
    }
    s
}

#[cfg(test)]
mod format_tests {
    use super::format_sig9;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(40.0 / 175.0), "0.228571429");
        assert_eq!(format_sig9(11.0 * 40.0 / 175.0), "2.51428571");
        assert_eq!(format_sig9(4.8), "4.80000000");
        assert_eq!(format_sig9(-1234.5), "-1234.50000");
        assert_eq!(format_sig9(0.0), "0.00000000");
        assert_eq!(format_sig9(9.9999999999), "10.0000000");
        assert_eq!(format_sig9(1e6), "1000000.00");
        assert_eq!(format_sig9(3.5e-5), "0.0000350000000");
    }
}
