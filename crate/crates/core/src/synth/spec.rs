use crate::dofp::SuperpixelLayout;
use crate::radiometry::MaterialDb;
use crate::{Error, LabelMask, Result};
use serde::{Deserialize, Serialize};

/// Exponential cooling of the emitted intensity,
/// `I_obj(t) = I_E + delta_i * exp(-t / tau_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    pub tau_s: f64,
    pub delta_i: f64,
}

impl ThermalParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_s.is_finite() && self.tau_s > 0.0) {
            return Err(Error::Domain(format!("tau must be > 0, got {}", self.tau_s)));
        }
        if !(self.delta_i.is_finite() && self.delta_i >= 0.0) {
            return Err(Error::Domain(format!(
                "excitation amplitude must be >= 0, got {}",
                self.delta_i
            )));
        }
        Ok(())
    }
}

/// Pixel rectangle `[x, x + width) x [y, y + height)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl Rect {
    pub fn contains(&self, px: usize, py: usize) -> bool {
        px >= self.x && px < self.x + self.width && py >= self.y && py < self.y + self.height
    }

    fn overlaps(&self, o: &Rect) -> bool {
        self.x < o.x + o.width && o.x < self.x + self.width && self.y < o.y + o.height && o.y < self.y + self.height
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectRegion {
    pub rect: Rect,
    /// Subsurface material.
    pub material: String,
    pub thermal: ThermalParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecimenSpec {
    pub width: usize,
    pub height: usize,
    pub surface_material: String,
    pub background: ThermalParams,
    pub regions: Vec<DefectRegion>,
}

impl Default for SpecimenSpec {
    fn default() -> Self {
        Self::four_defect(96, 80)
    }
}

impl SpecimenSpec {
    /// CFRP plate with aluminum, rubber, nickel and paper inserts laid out
    /// in a 2x2 grid (top-left to bottom-right).
    ///
    /// Metals cool slightly faster than the polymer and paper inserts; all
    /// inserts share the excitation amplitude of the plate.
    pub fn four_defect(width: usize, height: usize) -> Self {
        let (cw, ch) = (width / 2, height / 2);
        let (ix, iy) = (width / 12, height / 10);
        let metal = ThermalParams {
            tau_s: 1.50,
            delta_i: 0.3,
        };
        let soft = ThermalParams {
            tau_s: 1.52,
            delta_i: 0.3,
        };
        let cells = [
            (0, 0, "aluminum", metal),
            (1, 0, "rubber", soft),
            (0, 1, "nickel", metal),
            (1, 1, "paper", soft),
        ];
        let regions = cells
            .iter()
            .map(|&(cx, cy, m, thermal)| DefectRegion {
                rect: Rect {
                    x: cx * cw + ix,
                    y: cy * ch + iy,
                    width: cw - 2 * ix,
                    height: ch - 2 * iy,
                },
                material: m.to_string(),
                thermal,
            })
            .collect();
        Self {
            width,
            height,
            surface_material: "cfrp".into(),
            background: ThermalParams {
                tau_s: 2.0,
                delta_i: 0.3,
            },
            regions,
        }
    }

    pub fn validate(&self, db: &MaterialDb) -> Result<()> {
        if self.width == 0 || self.height == 0 || !self.width.is_multiple_of(2) || !self.height.is_multiple_of(2) {
            return Err(Error::Layout(format!(
                "specimen must have even non-zero dimensions, got {}x{}",
                self.width, self.height
            )));
        }
        db.get(&self.surface_material)?;
        self.background.validate()?;
        for (i, r) in self.regions.iter().enumerate() {
            db.get(&r.material)?;
            r.thermal.validate()?;
            let q = r.rect;
            if q.width == 0 || q.height == 0 || q.x + q.width > self.width || q.y + q.height > self.height {
                return Err(Error::Range(format!("region {i} lies outside the image")));
            }
            if let Some(j) = self.regions[..i].iter().position(|o| o.rect.overlaps(&q)) {
                return Err(Error::Range(format!("regions {j} and {i} overlap")));
            }
        }
        if self.regions.len() >= u16::MAX as usize {
            return Err(Error::Range("too many regions".into()));
        }
        Ok(())
    }

    /// Label per pixel: 0 for the plate, `i + 1` for region `i`. Names are
    /// `"background"` followed by the region materials.
    pub fn mask(&self) -> LabelMask {
        let mut labels = vec![0u16; self.width * self.height];
        for (i, r) in self.regions.iter().enumerate() {
            for y in r.rect.y..r.rect.y + r.rect.height {
                for x in r.rect.x..r.rect.x + r.rect.width {
                    labels[y * self.width + x] = (i + 1) as u16;
                }
            }
        }
        let names = std::iter::once("background".to_string())
            .chain(self.regions.iter().map(|r| r.material.clone()))
            .collect();
        LabelMask::new(self.width, self.height, labels, names).expect("labels bounded by names")
    }

    /// Thermal parameters of each label.
    pub(crate) fn label_thermal(&self) -> Vec<ThermalParams> {
        std::iter::once(self.background)
            .chain(self.regions.iter().map(|r| r.thermal))
            .collect()
    }
}

fn default_frame_rate() -> f64 {
    40.0
}
fn default_environment() -> f64 {
    1.0
}
fn default_full_scale() -> f64 {
    0.6
}
fn default_layout() -> String {
    SuperpixelLayout::default().to_string()
}

/// Acquisition and rendering parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub frame_count: usize,
    #[serde(default = "default_frame_rate")]
    pub frame_rate_hz: f64,
    pub psi_i_deg: f64,
    #[serde(default = "default_environment")]
    pub environment_intensity: f64,
    /// Per-channel Gaussian noise std in 16-bit counts.
    pub noise_sigma: f64,
    #[serde(default)]
    pub aolp_rad: f64,
    pub seed: u64,
    /// Fraction of the 16-bit range that the peak S0 maps to.
    #[serde(default = "default_full_scale")]
    pub full_scale_fraction: f64,
    #[serde(default = "default_layout")]
    pub layout: String,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            frame_count: 175,
            frame_rate_hz: default_frame_rate(),
            psi_i_deg: 70.0,
            environment_intensity: default_environment(),
            noise_sigma: 50.0,
            aolp_rad: 0.3,
            seed: 0,
            full_scale_fraction: default_full_scale(),
            layout: default_layout(),
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.frame_count == 0 {
            return Err(Error::Domain("frame_count must be > 0".into()));
        }
        if !positive(self.frame_rate_hz) {
            return Err(Error::Domain("frame_rate_hz must be > 0".into()));
        }
        if !(self.psi_i_deg.is_finite() && (0.0..90.0).contains(&self.psi_i_deg)) {
            return Err(Error::Domain(format!(
                "psi_i_deg must be in [0, 90), got {}",
                self.psi_i_deg
            )));
        }
        if !positive(self.environment_intensity) {
            return Err(Error::Domain("environment_intensity must be > 0".into()));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::Domain("noise_sigma must be >= 0".into()));
        }
        if !self.aolp_rad.is_finite() {
            return Err(Error::Domain("aolp_rad must be finite".into()));
        }
        if !(positive(self.full_scale_fraction) && self.full_scale_fraction <= 1.0) {
            return Err(Error::Domain("full_scale_fraction must be in (0, 1]".into()));
        }
        self.layout()?;
        Ok(())
    }

    pub fn layout(&self) -> Result<SuperpixelLayout> {
        self.layout.parse()
    }

    pub fn psi_i(&self) -> f64 {
        self.psi_i_deg.to_radians()
    }

    pub fn frame_time(&self, n: usize) -> f64 {
        n as f64 / self.frame_rate_hz
    }
}

/// Specimen and configuration in one JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SynthFile {
    #[serde(default)]
    pub specimen: SpecimenSpec,
    #[serde(default)]
    pub config: SynthConfig,
}
