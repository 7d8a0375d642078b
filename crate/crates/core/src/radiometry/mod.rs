//! Polarization physics of thermal emission from a rough, heated surface.
//!
//! Everything here is parameterised by the ratio `alpha = I_E / I_obj` of the
//! environment radiance falling on the surface to the radiance the surface
//! emits, and by the observation zenith angle `psi_i`.

mod dolp;
mod fit;
mod fresnel;
mod material;
mod microfacet;
pub mod quadrature;

pub use dolp::{dolp_mixture, dolp_sensitivity, dolp_simplified, mixture_weights, DEGENERATE_DENOMINATOR};
pub use fit::{fit_dolp_curve, CurveFit, CurveModel, FitOptions};
pub use fresnel::{fresnel_components, snell_cos, FresnelPair};
pub use material::{Material, MaterialDb, N_AIR};
pub use microfacet::{dolp_full, microfacet_integrals, scattering_geometry, MicrofacetIntegrals, QuadratureConfig};

use crate::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// Environment/object intensity ratio together with the observation angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiometricScene {
    alpha: f64,
    psi_i: f64,
}

impl RadiometricScene {
    pub fn new(alpha: f64, psi_i: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be finite and > 0, got {alpha}")));
        }
        check_incidence(psi_i)?;
        Ok(Self { alpha, psi_i })
    }

    pub fn from_degrees(alpha: f64, psi_i_deg: f64) -> Result<Self> {
        Self::new(alpha, psi_i_deg.to_radians())
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn psi_i(&self) -> f64 {
        self.psi_i
    }
}

pub(crate) fn check_incidence(psi_i: f64) -> Result<()> {
    if !(0.0..FRAC_PI_2).contains(&psi_i) {
        return Err(Error::Domain(format!(
            "incidence angle must lie in [0, pi/2), got {psi_i} rad"
        )));
    }
    Ok(())
}
