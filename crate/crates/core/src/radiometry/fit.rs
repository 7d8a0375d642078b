use super::dolp::{dolp_mixture, dolp_simplified, mixture_weights};
use super::{Material, RadiometricScene};
use crate::{Error, Result};

/// Model used when fitting alpha to DoLP-vs-angle samples.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveModel {
    /// Surface material only.
    Simplified,
    /// Surface material mixed with a subsurface material.
    Mixture { subsurface: Material },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Largest acceptable residual norm `sqrt(sum r^2)`.
    pub residual_ceiling: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            residual_ceiling: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveFit {
    pub alpha: f64,
    pub residual_norm: f64,
    /// Subsurface weight at the fitted alpha.
    pub subsurface_weight: f64,
    /// Surface weight at the fitted alpha.
    pub surface_weight: f64,
    /// Fitted curve is identically zero (alpha at equilibrium).
    pub degenerate: bool,
    /// For the simplified model `alpha` and `2 - alpha` give the same curve;
    /// the below-equilibrium branch is reported and its mirror kept here.
    pub mirror_alpha: Option<f64>,
}

const ALPHA_MAX: f64 = 2.0;
const GRID_STEP: f64 = 0.01;
const REFINE_TOL: f64 = 1e-6;

/// Least-squares alpha for `(psi_i [rad], dolp)` samples: a coarse grid over
/// `(0, 2]` followed by golden-section refinement around the best node.
pub fn fit_dolp_curve(
    samples: &[(f64, f64)],
    material: &Material,
    model: &CurveModel,
    options: &FitOptions,
) -> Result<CurveFit> {
    if samples.len() < 3 {
        return Err(Error::Domain(format!(
            "curve fit needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    for (i, &(psi, d)) in samples.iter().enumerate() {
        super::check_incidence(psi)?;
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::Domain(format!("sample {i}: DoLP {d} outside [0, 1]")));
        }
        if samples[..i].iter().any(|&(p, _)| p == psi) {
            return Err(Error::Domain(format!("sample {i}: duplicate angle {psi}")));
        }
    }

    let ssr = |alpha: f64| -> f64 {
        let mut acc = 0.0;
        for &(psi, d) in samples {
            match model_value(material, model, alpha, psi) {
                Ok(m) => acc += (m - d) * (m - d),
                Err(_) => return f64::INFINITY,
            }
        }
        acc
    };

    // Strict improvement only, so ties keep the smaller alpha.
    let steps = (ALPHA_MAX / GRID_STEP).round() as usize;
    let mut best = (GRID_STEP, ssr(GRID_STEP));
    for i in 2..=steps {
        let a = i as f64 * GRID_STEP;
        let r = ssr(a);
        if r < best.1 * (1.0 - 1e-12) {
            best = (a, r);
        }
    }

    let lo = (best.0 - GRID_STEP).max(f64::EPSILON);
    let hi = (best.0 + GRID_STEP).min(ALPHA_MAX);
    let (alpha, r) = golden_section(&ssr, lo, hi, REFINE_TOL);
    let (alpha, r) = if r <= best.1 { (alpha, r) } else { best };

    let residual_norm = r.sqrt();
    if !(residual_norm <= options.residual_ceiling) {
        return Err(Error::FitFailure {
            residual: residual_norm,
            ceiling: options.residual_ceiling,
        });
    }

    let (w_sub, w_surf) = match model {
        CurveModel::Simplified => (0.0, 1.0),
        CurveModel::Mixture { .. } => mixture_weights(alpha),
    };
    let mirror_alpha = match model {
        CurveModel::Simplified if alpha < 1.0 => Some(2.0 - alpha),
        _ => None,
    };
    Ok(CurveFit {
        alpha,
        residual_norm,
        subsurface_weight: w_sub,
        surface_weight: w_surf,
        degenerate: (alpha - 1.0).abs() < 1e-4,
        mirror_alpha,
    })
}

/// Model DoLP at `psi_i` for a given alpha.
pub(crate) fn model_value(material: &Material, model: &CurveModel, alpha: f64, psi: f64) -> Result<f64> {
    let scene = RadiometricScene::new(alpha, psi)?;
    let surface = dolp_simplified(material, &scene)?;
    match model {
        CurveModel::Simplified => Ok(surface),
        CurveModel::Mixture { subsurface } => {
            let sub = dolp_simplified(subsurface, &scene)?;
            Ok(dolp_mixture(surface, sub, alpha))
        }
    }
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
