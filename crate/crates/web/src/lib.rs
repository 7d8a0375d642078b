//! wasm-bindgen bindings for the browser demo in `www/`.

use polarndt::detection::{default_bins, fft_phase_bins, pca_components, ImageStack, StackOrigin};
use polarndt::dofp::{process_stack, PipelineConfig};
use polarndt::eval::{cnr_between, edge_sharpness};
use polarndt::radiometry::{dolp_full, dolp_simplified, MaterialDb, QuadratureConfig, RadiometricScene};
use polarndt::synth::{render_mosaic_sequence, SpecimenSpec, SynthConfig};
use polarndt::{Error, Image, LabelMask, Result};
use wasm_bindgen::prelude::*;

fn js_err(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn material_names() -> Vec<String> {
    MaterialDb::builtin().iter().map(|m| m.name.clone()).collect()
}

fn curve(material: &str, alpha: f64, full: bool) -> Result<Vec<f64>> {
    let db = MaterialDb::builtin();
    let m = db.get(material)?;
    let q = QuadratureConfig::default();
    (0..90)
        .map(|deg| {
            let psi = f64::from(deg).to_radians();
            if full {
                dolp_full(m, 1.0, alpha, psi, &q)
            } else {
                dolp_simplified(m, &RadiometricScene::new(alpha, psi)?)
            }
        })
        .collect()
}

/// DoLP at incidence angles 0..=89 degrees. `full` selects the microfacet
/// model with `alpha` read as `I_E / I_obj`.
#[wasm_bindgen]
pub fn dolp_curve(material: &str, alpha: f64, full: bool) -> std::result::Result<Vec<f64>, JsError> {
    curve(material, alpha, full).map_err(js_err)
}

/// Min-max grey-scale RGBA; constant images become mid-grey.
fn to_rgba(img: &Image) -> Vec<u8> {
    let (lo, hi) = img.min_max();
    let span = hi - lo;
    let mut out = Vec::with_capacity(img.data().len() * 4);
    for &v in img.data() {
        let g = if span > 0.0 {
            ((v - lo) / span * 255.0).round() as u8
        } else {
            128
        };
        out.extend_from_slice(&[g, g, g, 255]);
    }
    out
}

const LABEL_COLOURS: [[u8; 3]; 6] = [
    [40, 40, 40],
    [200, 200, 210],
    [30, 30, 30],
    [150, 170, 90],
    [230, 220, 180],
    [120, 60, 160],
];

/// Rendered, processed synthetic cooling sequence.
#[wasm_bindgen]
pub struct Experiment {
    dolp: ImageStack,
    intensity: ImageStack,
    mask: LabelMask,
}

/// A detection map rendered for display, with its Al-rubber CNR and
/// boundary sharpness.
#[wasm_bindgen]
pub struct MapView {
    rgba: Vec<u8>,
    cnr: f64,
    sharpness: f64,
    label: String,
}

#[wasm_bindgen]
impl MapView {
    #[wasm_bindgen(getter)]
    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn cnr(&self) -> f64 {
        self.cnr
    }

    #[wasm_bindgen(getter)]
    pub fn sharpness(&self) -> f64 {
        self.sharpness
    }

    #[wasm_bindgen(getter)]
    pub fn label(&self) -> String {
        self.label.clone()
    }
}

impl Experiment {
    fn build(angle_deg: f64, noise_sigma: f64, seed: u32, frames: usize) -> Result<Self> {
        let db = MaterialDb::builtin();
        let spec = SpecimenSpec::default();
        let cfg = SynthConfig {
            psi_i_deg: angle_deg,
            noise_sigma,
            seed: u64::from(seed),
            frame_count: frames,
            ..SynthConfig::default()
        };
        let out = render_mosaic_sequence(&spec, &cfg, &db)?;
        let products = process_stack(&out.stack, &PipelineConfig::with_guided_filter())?;
        let rate = cfg.frame_rate_hz;
        let (dolp, intensity): (Vec<Image>, Vec<Image>) =
            products.into_iter().map(|p| (p.dolp.into_image(), p.intensity)).unzip();
        Ok(Self {
            dolp: ImageStack::new(dolp, rate, StackOrigin::Dolp)?,
            intensity: ImageStack::new(intensity, rate, StackOrigin::Intensity)?,
            mask: out.truth.mask,
        })
    }

    fn stack(&self, origin: &str) -> Result<&ImageStack> {
        match origin.parse::<StackOrigin>()? {
            StackOrigin::Dolp => Ok(&self.dolp),
            StackOrigin::Intensity => Ok(&self.intensity),
        }
    }

    fn frame(&self, origin: &str, index: usize) -> Result<Vec<u8>> {
        let s = self.stack(origin)?;
        let f = s.frames().get(index).ok_or_else(|| {
            Error::Domain(format!("frame {index} out of range (stack has {})", s.len()))
        })?;
        Ok(to_rgba(f))
    }

    fn map(&self, origin: &str, method: &str, index: usize) -> Result<MapView> {
        let s = self.stack(origin)?;
        let (image, label) = match method {
            "fft" => {
                let r = fft_phase_bins(s, &[index])?.remove(0);
                let label = format!("{origin} FFT phase, k={} ({:.2} Hz)", r.bin, r.frequency_hz);
                (r.phase, label)
            }
            "pca" => {
                if index == 0 {
                    return Err(Error::Domain("components are numbered from 1".into()));
                }
                let mut r = pca_components(s, index)?;
                (r.components.swap_remove(index - 1), format!("{origin} PC{index}"))
            }
            other => return Err(Error::Domain(format!("unknown method {other:?}, expected fft or pca"))),
        };
        let (al, ru) = (self.label("aluminum")?, self.label("rubber")?);
        Ok(MapView {
            rgba: to_rgba(&image),
            cnr: cnr_between(&image, &self.mask, al, ru)?,
            sharpness: edge_sharpness(&image, &self.mask)?,
            label,
        })
    }

    fn label(&self, name: &str) -> Result<u16> {
        self.mask
            .label_of(name)
            .ok_or_else(|| Error::Domain(format!("mask has no {name} region")))
    }
}

#[wasm_bindgen]
impl Experiment {
    #[wasm_bindgen(constructor)]
    pub fn new(angle_deg: f64, noise_sigma: f64, seed: u32, frames: usize) -> std::result::Result<Experiment, JsError> {
        Self::build(angle_deg, noise_sigma, seed, frames).map_err(js_err)
    }

    pub fn width(&self) -> usize {
        self.dolp.width()
    }

    pub fn height(&self) -> usize {
        self.dolp.height()
    }

    pub fn frame_count(&self) -> usize {
        self.dolp.len()
    }

    /// Bins tracking 0.23 / 2.51 / 4.8 Hz for this stack length.
    pub fn suggested_bins(&self) -> Vec<usize> {
        default_bins(self.dolp.len(), self.dolp.frame_rate_hz())
    }

    /// `origin` is `dolp` or `intensity`.
    pub fn frame_rgba(&self, origin: &str, index: usize) -> std::result::Result<Vec<u8>, JsError> {
        self.frame(origin, index).map_err(js_err)
    }

    /// `method` is `fft` (index = DFT bin) or `pca` (index = component, from 1).
    pub fn detect(&self, origin: &str, method: &str, index: usize) -> std::result::Result<MapView, JsError> {
        self.map(origin, method, index).map_err(js_err)
    }

    pub fn mask_rgba(&self) -> Vec<u8> {
        self.mask
            .labels()
            .iter()
            .flat_map(|&l| {
                let [r, g, b] = LABEL_COLOURS[usize::from(l) % LABEL_COLOURS.len()];
                [r, g, b, 255]
            })
            .collect()
    }

    pub fn region_names(&self) -> Vec<String> {
        self.mask.names().to_vec()
    }
}
