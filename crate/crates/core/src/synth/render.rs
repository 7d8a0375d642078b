use super::spec::{SpecimenSpec, SynthConfig, ThermalParams};
use crate::dofp::{MosaicFrame, MosaicStack};
use crate::radiometry::{dolp_mixture, dolp_simplified, MaterialDb, RadiometricScene};
use crate::{Image, LabelMask, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// `alpha(t) = I_E / (I_E + delta_i * exp(-t / tau))`; rises to 1 from below.
pub fn alpha_timeline(params: &ThermalParams, i_e: f64, t: f64) -> f64 {
    i_e / object_intensity(params, i_e, t)
}

fn object_intensity(params: &ThermalParams, i_e: f64, t: f64) -> f64 {
    i_e + params.delta_i * (-t / params.tau_s).exp()
}

/// Ground truth at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthFrame {
    pub dolp: Image,
    /// Proportional to the emitted intensity `I_obj(t)`.
    pub s0: Image,
}

/// Per-label `(dolp, s0)` at time `t`.
fn label_values(spec: &SpecimenSpec, config: &SynthConfig, db: &MaterialDb, t: f64) -> Result<Vec<(f64, f64)>> {
    let surface = db.get(&spec.surface_material)?;
    let psi = config.psi_i();
    let i_e = config.environment_intensity;
    spec.label_thermal()
        .iter()
        .enumerate()
        .map(|(label, p)| {
            let alpha = alpha_timeline(p, i_e, t);
            let scene = RadiometricScene::new(alpha, psi)?;
            let d_surf = dolp_simplified(surface, &scene)?;
            let dolp = if label == 0 {
                d_surf
            } else {
                let sub = db.get(&spec.regions[label - 1].material)?;
                dolp_mixture(d_surf, dolp_simplified(sub, &scene)?, alpha)
            };
            Ok((dolp, object_intensity(p, i_e, t)))
        })
        .collect()
}

/// Truth DoLP and S0 images at time `t`, plus the label mask.
pub fn render_truth(
    spec: &SpecimenSpec,
    config: &SynthConfig,
    db: &MaterialDb,
    t: f64,
) -> Result<(TruthFrame, LabelMask)> {
    spec.validate(db)?;
    config.validate()?;
    let mask = spec.mask();
    let frame = truth_from_values(&mask, &label_values(spec, config, db, t)?);
    Ok((frame, mask))
}

fn truth_from_values(mask: &LabelMask, values: &[(f64, f64)]) -> TruthFrame {
    let (w, h) = mask.dims();
    let pick = |k: usize| -> Image {
        let data = mask
            .labels()
            .iter()
            .map(|&l| {
                let v = values[l as usize];
                if k == 0 {
                    v.0
                } else {
                    v.1
                }
            })
            .collect();
        Image::new(w, h, data).expect("mask dims")
    };
    TruthFrame {
        dolp: pick(0),
        s0: pick(1),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruthSequence {
    pub dolp: Vec<Image>,
    pub s0: Vec<Image>,
    pub mask: LabelMask,
    pub times_s: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub stack: MosaicStack,
    pub truth: TruthSequence,
    /// Fraction of mosaic samples clipped at 0 or 65535.
    pub clipped_fraction: f64,
    pub warnings: Vec<String>,
}

/// Renders `frame_count` mosaic frames at `t = n / frame_rate`.
///
/// Each analyzer pixel receives `(S0/2)(1 + DoLP cos 2(theta - AoLP))` in
/// counts, Gaussian noise from a per-frame ChaCha stream of the seed, and
/// round-half-even quantization. Output is identical with or without the
/// `parallel` feature.
pub fn render_mosaic_sequence(spec: &SpecimenSpec, config: &SynthConfig, db: &MaterialDb) -> Result<SynthOutput> {
    spec.validate(db)?;
    config.validate()?;
    let layout = config.layout()?;
    let mask = spec.mask();
    let (w, h) = (spec.width, spec.height);
    let i_e = config.environment_intensity;
    let peak_s0 = i_e
        + spec
            .label_thermal()
            .iter()
            .map(|p| p.delta_i)
            .fold(0.0, f64::max);
    let scale = config.full_scale_fraction * 65535.0 / peak_s0;
    let cos_terms: Vec<f64> = (0..4)
        .map(|c| {
            let theta = layout.angle_at(c % 2, c / 2).degrees().to_radians();
            (2.0 * (theta - config.aolp_rad)).cos()
        })
        .collect();

    let render_one = |n: usize| -> Result<(Vec<u16>, usize, TruthFrame)> {
        let t = config.frame_time(n);
        let values = label_values(spec, config, db, t)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(n as u64);
        let mut clipped = 0;
        let mut data = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                let (dolp, s0) = values[mask.get(x, y) as usize];
                let c = cos_terms[(y % 2) * 2 + x % 2];
                let mut v = 0.5 * s0 * scale * (1.0 + dolp * c);
                if config.noise_sigma > 0.0 {
                    let z: f64 = rng.sample(StandardNormal);
                    v += config.noise_sigma * z;
                }
                let q = v.round_ties_even();
                if !(0.0..=65535.0).contains(&q) {
                    clipped += 1;
                }
                data.push(q.clamp(0.0, 65535.0) as u16);
            }
        }
        Ok((data, clipped, truth_from_values(&mask, &values)))
    };

    #[cfg(feature = "parallel")]
    let rendered: Vec<_> = {
        use rayon::prelude::*;
        (0..config.frame_count)
            .into_par_iter()
            .map(render_one)
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rendered: Vec<_> = (0..config.frame_count).map(render_one).collect::<Result<_>>()?;

    let mut frames = Vec::with_capacity(rendered.len());
    let mut dolp = Vec::with_capacity(rendered.len());
    let mut s0 = Vec::with_capacity(rendered.len());
    let mut clipped = 0usize;
    for (data, c, truth) in rendered {
        frames.push(MosaicFrame::new(w, h, data, layout)?);
        clipped += c;
        dolp.push(truth.dolp);
        s0.push(truth.s0);
    }
    let clipped_fraction = clipped as f64 / (w * h * config.frame_count) as f64;
    let mut warnings = Vec::new();
    if clipped_fraction > 0.01 {
        warnings.push(format!(
            "{:.2}% of samples clipped at the 16-bit rails",
            100.0 * clipped_fraction
        ));
    }
    Ok(SynthOutput {
        stack: MosaicStack::new(frames, config.frame_rate_hz)?,
        truth: TruthSequence {
            dolp,
            s0,
            mask,
            times_s: (0..config.frame_count).map(|n| config.frame_time(n)).collect(),
        },
        clipped_fraction,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dofp::{compute_dolp, compute_stokes, demosaic, Interpolation};
    use crate::radiometry::dolp_simplified;
    use crate::synth::{DefectRegion, Rect};

    fn small_config() -> SynthConfig {
        SynthConfig {
            frame_count: 6,
            noise_sigma: 0.0,
            ..SynthConfig::default()
        }
    }

    #[test]
    fn alpha_timeline_examples() {
        let p = ThermalParams {
            tau_s: 1.0,
            delta_i: 1.0,
        };
        assert_eq!(alpha_timeline(&p, 1.0, 0.0), 0.5);
        let zero = ThermalParams {
            tau_s: 1.0,
            delta_i: 0.0,
        };
        assert_eq!(alpha_timeline(&zero, 2.0, 3.0), 1.0);
        let p = ThermalParams {
            tau_s: 0.7,
            delta_i: 2.5,
        };
        let mut prev = 0.0;
        for k in 0..100 {
            let a = alpha_timeline(&p, 1.3, k as f64 * 0.05);
            assert!(a > prev && a < 1.0);
            prev = a;
        }
        assert!(alpha_timeline(&p, 1.3, 7.0) > 0.99);
    }

    #[test]
    fn equilibrium_truth_is_zero() {
        let db = MaterialDb::builtin();
        let (t, _) = render_truth(&SpecimenSpec::default(), &small_config(), &db, 1e4).unwrap();
        assert!(t.dolp.data().iter().all(|&v| v < 1e-12));
    }

    #[test]
    fn aluminum_above_rubber_at_60_degrees() {
        let db = MaterialDb::builtin();
        let mut spec = SpecimenSpec::default();
        let same = spec.regions[0].thermal;
        spec.regions.iter_mut().for_each(|r| r.thermal = same);
        let cfg = SynthConfig {
            psi_i_deg: 60.0,
            ..small_config()
        };
        let (t, mask) = render_truth(&spec, &cfg, &db, 0.5).unwrap();
        let at = |name: &str| {
            let l = mask.label_of(name).unwrap();
            let i = mask.labels().iter().position(|&v| v == l).unwrap();
            t.dolp.data()[i]
        };
        assert!(at("aluminum") > at("rubber"));
    }

    #[test]
    fn single_region_matches_direct_radiometry() {
        let db = MaterialDb::builtin();
        let p = ThermalParams {
            tau_s: 1.2,
            delta_i: 0.8,
        };
        let spec = SpecimenSpec {
            width: 8,
            height: 6,
            surface_material: "cfrp".into(),
            background: ThermalParams {
                tau_s: 3.0,
                delta_i: 0.5,
            },
            regions: vec![DefectRegion {
                rect: Rect {
                    x: 2,
                    y: 1,
                    width: 4,
                    height: 3,
                },
                material: "nickel".into(),
                thermal: p,
            }],
        };
        let cfg = small_config();
        let t = 0.4;
        let (truth, mask) = render_truth(&spec, &cfg, &db, t).unwrap();
        for y in 0..6 {
            for x in 0..8 {
                let (params, sub) = if mask.get(x, y) == 1 {
                    (p, Some("nickel"))
                } else {
                    (spec.background, None)
                };
                let a = alpha_timeline(&params, 1.0, t);
                let scene = RadiometricScene::new(a, cfg.psi_i()).unwrap();
                let surf = dolp_simplified(db.get("cfrp").unwrap(), &scene).unwrap();
                let want = match sub {
                    Some(m) => dolp_mixture(surf, dolp_simplified(db.get(m).unwrap(), &scene).unwrap(), a),
                    None => surf,
                };
                assert_eq!(truth.dolp.get(x, y), want);
                assert_eq!(truth.s0.get(x, y), 1.0 / a);
            }
        }
    }

    #[test]
    fn noiseless_zero_dolp_roundtrip() {
        let db = MaterialDb::builtin();
        let spec = SpecimenSpec::four_defect(32, 32);
        let mut spec = spec;
        spec.background.delta_i = 0.0;
        spec.regions.iter_mut().for_each(|r| r.thermal.delta_i = 0.0);
        let out = render_mosaic_sequence(&spec, &small_config(), &db).unwrap();
        for f in out.stack.frames() {
            let d = compute_dolp(&compute_stokes(&demosaic(f, Interpolation::Bilinear).unwrap())).unwrap();
            assert!(d.image().data().iter().all(|&v| v <= 1e-3));
        }
    }

    #[test]
    fn same_seed_same_stack() {
        let db = MaterialDb::builtin();
        let cfg = SynthConfig {
            frame_count: 4,
            seed: 42,
            ..SynthConfig::default()
        };
        let spec = SpecimenSpec::four_defect(24, 20);
        let a = render_mosaic_sequence(&spec, &cfg, &db).unwrap();
        let b = render_mosaic_sequence(&spec, &cfg, &db).unwrap();
        assert_eq!(a.stack, b.stack);
        let c = render_mosaic_sequence(&spec, &SynthConfig { seed: 43, ..cfg }, &db).unwrap();
        assert_ne!(a.stack, c.stack);
    }

    #[test]
    fn saturation_warning() {
        let db = MaterialDb::builtin();
        let cfg = SynthConfig {
            frame_count: 2,
            full_scale_fraction: 1.0,
            noise_sigma: 40000.0,
            ..SynthConfig::default()
        };
        let out = render_mosaic_sequence(&SpecimenSpec::four_defect(24, 20), &cfg, &db).unwrap();
        assert!(out.clipped_fraction > 0.01);
        assert_eq!(out.warnings.len(), 1);
    }
}
