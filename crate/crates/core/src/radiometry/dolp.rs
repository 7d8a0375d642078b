use super::fresnel::fresnel_unchecked;
use super::{Material, RadiometricScene};
use crate::{Error, Result};

/// Denominators at or below this value are reported as degenerate.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-12;

/// Returns `(numerator factor |R_S - R_P|, denominator, sign)` where the
/// sign is `+1` above equilibrium (`alpha > 1`) and `-1` below it.
fn simplified_terms(material: &Material, scene: &RadiometricScene) -> Result<(f64, f64, f64)> {
    let alpha = scene.alpha();
    let psi = scene.psi_i();
    let f = fresnel_unchecked(material, psi);
    let sign = if alpha > 1.0 { 1.0 } else { -1.0 };
    let base = 8.0 * material.sigma_m * psi.cos();
    let denom = base + sign * (alpha - 1.0) * f.sum();
    if !(denom > DEGENERATE_DENOMINATOR) {
        return Err(Error::Degenerate(format!(
            "DoLP denominator {denom:e} for {} at alpha={alpha}, psi_i={psi}",
            material.name
        )));
    }
    Ok((f.abs_diff(), denom, sign))
}

/// In-plane, small-tilt DoLP model
/// `|alpha-1| |R_S-R_P| / (8 sigma_m cos psi_i ± (alpha-1)(R_S+R_P))`.
pub fn dolp_simplified(material: &Material, scene: &RadiometricScene) -> Result<f64> {
    let (diff, denom, _) = simplified_terms(material, scene)?;
    if scene.alpha() == 1.0 {
        return Ok(0.0);
    }
    Ok(((scene.alpha() - 1.0).abs() * diff / denom).clamp(0.0, 1.0))
}

/// Analytic `d DoLP / d alpha` of [`dolp_simplified`]. Undefined at
/// `alpha == 1`, where the model has a kink.
pub fn dolp_sensitivity(material: &Material, scene: &RadiometricScene) -> Result<f64> {
    if scene.alpha() == 1.0 {
        return Err(Error::Domain(
            "DoLP sensitivity is undefined at alpha = 1".to_string(),
        ));
    }
    let (diff, denom, sign) = simplified_terms(material, scene)?;
    let base = 8.0 * material.sigma_m * scene.psi_i().cos();
    Ok(sign * base * diff / (denom * denom))
}

/// `(omega_1, omega_2)`: subsurface and surface weights for a given alpha.
pub fn mixture_weights(alpha: f64) -> (f64, f64) {
    let surface = alpha.clamp(0.0, 1.0);
    (1.0 - surface, surface)
}

/// Linear surface/subsurface mixture. The surface dominates as alpha
/// approaches 1, the subsurface as alpha approaches 0.
pub fn dolp_mixture(dolp_surface: f64, dolp_subsurface: f64, alpha: f64) -> f64 {
    let (w_sub, w_surf) = mixture_weights(alpha);
    w_sub * dolp_subsurface + w_surf * dolp_surface
}
