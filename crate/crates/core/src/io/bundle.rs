use super::fmap::{decode_fmap, encode_fmap};
use super::manifest::{Creation, StackKind, StackManifest, MANIFEST_FILE};
use super::read_file;
use crate::detection::{ImageStack, StackOrigin};
use crate::dofp::{MosaicFrame, MosaicStack, SuperpixelLayout};
use crate::synth::{SynthFile, SynthOutput};
use crate::{Error, LabelMask, Result};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

static STAGING_COUNTER: AtomicUsize = AtomicUsize::new(0);

/// Stages a bundle directory next to its destination and moves it into
/// place on [`BundleWriter::commit`]. Dropping an uncommitted writer deletes
/// the staging directory, so readers never see a partial bundle.
#[derive(Debug)]
pub struct BundleWriter {
    dest: PathBuf,
    staging: PathBuf,
    committed: bool,
}

impl BundleWriter {
    pub fn create(dest: &Path) -> Result<Self> {
        let name = dest
            .file_name()
            .ok_or_else(|| Error::Domain(format!("{} has no directory name", dest.display())))?
            .to_string_lossy()
            .into_owned();
        let parent = dest.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        let n = STAGING_COUNTER.fetch_add(1, Ordering::Relaxed);
        let staging = parent.join(format!(".{name}.staging-{}-{n}", std::process::id()));
        if staging.exists() {
            fs::remove_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
        }
        fs::create_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;
        Ok(Self {
            dest: dest.to_path_buf(),
            staging,
            committed: false,
        })
    }

    pub fn staging_dir(&self) -> &Path {
        &self.staging
    }

    /// Writes `bytes` at `rel` inside the staged bundle.
    pub fn write_file(&self, rel: &str, bytes: &[u8]) -> Result<()> {
        let path = self.staging.join(rel);
        if let Some(p) = path.parent() {
            fs::create_dir_all(p).map_err(|e| Error::io(p, e))?;
        }
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))
    }

    /// Writes the manifest last, then replaces the destination directory.
    pub fn commit(mut self, manifest: &StackManifest) -> Result<PathBuf> {
        self.write_file(MANIFEST_FILE, manifest.to_json().as_bytes())?;
        let old = self.staging.with_extension("old");
        let had_old = self.dest.exists();
        if had_old {
            fs::rename(&self.dest, &old).map_err(|e| Error::io(&self.dest, e))?;
        }
        if let Err(e) = fs::rename(&self.staging, &self.dest) {
            if had_old {
                let _ = fs::rename(&old, &self.dest);
            }
            return Err(Error::io(&self.dest, e));
        }
        self.committed = true;
        if had_old {
            let _ = fs::remove_dir_all(&old);
        }
        Ok(self.dest.join(MANIFEST_FILE))
    }
}

impl Drop for BundleWriter {
    fn drop(&mut self) {
        if !self.committed {
            let _ = fs::remove_dir_all(&self.staging);
        }
    }
}

fn frame_name(i: usize, ext: &str) -> String {
    format!("frames/frame_{i:05}.{ext}")
}

fn stage_mosaic(w: &BundleWriter, stack: &MosaicStack, created: Creation) -> Result<StackManifest> {
    let mut frames = Vec::with_capacity(stack.len());
    for (i, f) in stack.frames().iter().enumerate() {
        let name = frame_name(i, "u16");
        let bytes: Vec<u8> = f.data().iter().flat_map(|v| v.to_le_bytes()).collect();
        w.write_file(&name, &bytes)?;
        frames.push(name);
    }
    Ok(StackManifest {
        kind: StackKind::Mosaic,
        width: stack.width(),
        height: stack.height(),
        frame_count: stack.len(),
        frame_rate_hz: stack.frame_rate_hz(),
        bit_depth: 16,
        layout: Some(stack.layout().to_string()),
        origin: None,
        frames,
        truth: None,
        mask: None,
        labels: None,
        window: None,
        created,
    })
}

fn stage_float(w: &BundleWriter, prefix: &str, stack: &ImageStack, created: Creation) -> Result<StackManifest> {
    let mut frames = Vec::with_capacity(stack.len());
    for (i, f) in stack.frames().iter().enumerate() {
        let name = frame_name(i, "fmap");
        w.write_file(&format!("{prefix}{name}"), &encode_fmap(f))?;
        frames.push(name);
    }
    Ok(StackManifest {
        kind: StackKind::Float,
        width: stack.width(),
        height: stack.height(),
        frame_count: stack.len(),
        frame_rate_hz: stack.frame_rate_hz(),
        bit_depth: 32,
        layout: None,
        origin: Some(stack.origin().as_str().to_string()),
        frames,
        truth: None,
        mask: None,
        labels: None,
        window: Some(stack.window()),
        created,
    })
}

pub fn write_mosaic_stack(dest: &Path, stack: &MosaicStack, created: Creation) -> Result<PathBuf> {
    let w = BundleWriter::create(dest)?;
    let m = stage_mosaic(&w, stack, created)?;
    w.commit(&m)
}

/// Float frames are stored as `f32`.
pub fn write_image_stack(dest: &Path, stack: &ImageStack, created: Creation) -> Result<PathBuf> {
    let w = BundleWriter::create(dest)?;
    let m = stage_float(&w, "", stack, created)?;
    w.commit(&m)
}

/// Mosaic frames plus a `truth/` float bundle of per-frame DoLP truth and
/// the label mask, and the generating `spec.json`.
pub fn write_synth_bundle(dest: &Path, out: &SynthOutput, spec: &SynthFile) -> Result<PathBuf> {
    let created = Creation::new(Some(spec.config.seed));
    let w = BundleWriter::create(dest)?;
    let mut top = stage_mosaic(&w, &out.stack, created.clone())?;
    let truth_stack = ImageStack::new(out.truth.dolp.clone(), spec.config.frame_rate_hz, StackOrigin::Dolp);
    // A single-frame render has no valid ImageStack; truth is then omitted.
    if let Ok(ts) = truth_stack {
        let mut tm = stage_float(&w, "truth/", &ts, created)?;
        w.write_file("truth/mask.fmap", &encode_fmap(&out.truth.mask.to_image()))?;
        tm.mask = Some("mask.fmap".into());
        tm.labels = Some(out.truth.mask.names().to_vec());
        w.write_file(&format!("truth/{MANIFEST_FILE}"), tm.to_json().as_bytes())?;
        top.truth = Some(format!("truth/{MANIFEST_FILE}"));
    }
    let mut spec_json = serde_json::to_string_pretty(spec).expect("spec serializes");
    spec_json.push('\n');
    w.write_file("spec.json", spec_json.as_bytes())?;
    w.commit(&top)
}

fn manifest_path(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join(MANIFEST_FILE)
    } else {
        p.to_path_buf()
    }
}

fn load_manifest(path: &Path) -> Result<(StackManifest, PathBuf)> {
    let path = manifest_path(path);
    let text = String::from_utf8(read_file(&path)?)
        .map_err(|_| Error::Schema(format!("{}: manifest is not UTF-8", path.display())))?;
    let m = StackManifest::parse(&text, &path)?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    Ok((m, base))
}

#[derive(Debug, Clone)]
pub enum AnyStack {
    Mosaic(MosaicStack),
    Float(ImageStack),
}

/// Reads and fully validates the bundle at `path` (manifest file or its
/// directory).
pub fn read_any_stack(path: &Path) -> Result<(AnyStack, StackManifest)> {
    let (m, base) = load_manifest(path)?;
    let stack = match m.kind {
        StackKind::Mosaic => {
            let layout: SuperpixelLayout = m.layout.as_deref().unwrap_or_default().parse()?;
            let want = m.width * m.height * 2;
            let mut frames = Vec::with_capacity(m.frame_count);
            for f in &m.frames {
                let p = base.join(f);
                let bytes = read_file(&p)?;
                if bytes.len() != want {
                    return Err(Error::DimensionMismatch(format!(
                        "{}: expected {want} bytes for {}x{} u16, found {}",
                        p.display(),
                        m.width,
                        m.height,
                        bytes.len()
                    )));
                }
                let data = bytes.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]])).collect();
                frames.push(MosaicFrame::new(m.width, m.height, data, layout)?);
            }
            AnyStack::Mosaic(MosaicStack::new(frames, m.frame_rate_hz)?)
        }
        StackKind::Float => {
            let origin: StackOrigin = m.origin.as_deref().unwrap_or("intensity").parse()?;
            let mut frames = Vec::with_capacity(m.frame_count);
            for f in &m.frames {
                let p = base.join(f);
                let img = decode_fmap(&read_file(&p)?, &p.display().to_string())?;
                if img.dims() != (m.width, m.height) {
                    return Err(Error::DimensionMismatch(format!(
                        "{}: frame is {}x{}, manifest declares {}x{}",
                        p.display(),
                        img.width(),
                        img.height(),
                        m.width,
                        m.height
                    )));
                }
                frames.push(img);
            }
            let window = m.window.unwrap_or((0, m.frame_count));
            AnyStack::Float(ImageStack::with_window(frames, m.frame_rate_hz, origin, window)?)
        }
    };
    Ok((stack, m))
}

pub fn read_mosaic_stack(path: &Path) -> Result<MosaicStack> {
    match read_any_stack(path)?.0 {
        AnyStack::Mosaic(s) => Ok(s),
        AnyStack::Float(_) => Err(Error::Schema(format!(
            "{}: expected a mosaic bundle, found a float bundle",
            path.display()
        ))),
    }
}

pub fn read_image_stack(path: &Path) -> Result<ImageStack> {
    match read_any_stack(path)?.0 {
        AnyStack::Float(s) => Ok(s),
        AnyStack::Mosaic(_) => Err(Error::Schema(format!(
            "{}: expected a float bundle, found a mosaic bundle",
            path.display()
        ))),
    }
}

/// DoLP truth stack and label mask of a synthetic bundle. Accepts the top
/// bundle (following its `truth` entry) or the truth bundle itself.
pub fn read_truth(path: &Path) -> Result<(ImageStack, LabelMask)> {
    let (m, base) = load_manifest(path)?;
    let (tm, tbase, tpath) = match &m.truth {
        Some(rel) => {
            let p = base.join(rel);
            let (tm, tb) = load_manifest(&p)?;
            (tm, tb, p)
        }
        None => (m, base, manifest_path(path)),
    };
    let mask_rel = tm
        .mask
        .clone()
        .ok_or_else(|| Error::Schema(format!("{}: truth manifest has no mask", tpath.display())))?;
    let names = tm.labels.clone().unwrap_or_default();
    let mask_img = decode_fmap(&read_file(&tbase.join(&mask_rel))?, &mask_rel)?;
    let mask = LabelMask::from_image(&mask_img, names)?;
    let stack = read_image_stack(&tpath)?;
    if stack.dims() != mask.dims() {
        return Err(Error::DimensionMismatch(format!(
            "{}: mask size differs from truth frames",
            tpath.display()
        )));
    }
    Ok((stack, mask))
}
