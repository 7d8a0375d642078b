use super::{check_incidence, Material, N_AIR};
use crate::Result;
use num_complex::Complex64;

/// Orthogonal (`rs`) and parallel (`rp`) Fresnel components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelPair {
    pub rs: f64,
    pub rp: f64,
}

impl FresnelPair {
    #[inline]
    pub fn sum(&self) -> f64 {
        self.rs + self.rp
    }

    #[inline]
    pub fn abs_diff(&self) -> f64 {
        (self.rs - self.rp).abs()
    }
}

/// Complex cosine of the refraction angle from Snell's law,
/// `sqrt(1 - (n_air/n_m)^2 sin^2 psi_i)`, on the branch with non-negative
/// real part.
pub fn snell_cos(material: &Material, psi_i: f64) -> Complex64 {
    let n = material.refractive_index();
    let ratio = Complex64::new(N_AIR, 0.0) / n;
    let s = psi_i.sin();
    let c = (Complex64::new(1.0, 0.0) - ratio * ratio * (s * s)).sqrt();
    if c.re < 0.0 {
        -c
    } else {
        c
    }
}

/// Fresnel components as magnitude ratios of the amplitude expressions
/// (not squared), evaluated with the complex refractive index.
pub fn fresnel_components(material: &Material, psi_i: f64) -> Result<FresnelPair> {
    check_incidence(psi_i)?;
    Ok(fresnel_unchecked(material, psi_i))
}

pub(crate) fn fresnel_unchecked(material: &Material, psi_i: f64) -> FresnelPair {
    let n = material.refractive_index();
    let cos_j = snell_cos(material, psi_i);
    let cos_i = Complex64::new(psi_i.cos(), 0.0);
    let n_air = Complex64::new(N_AIR, 0.0);
    let rs = (n_air * cos_i - n * cos_j).norm() / (n_air * cos_i + n * cos_j).norm();
    let rp = (n * cos_i - n_air * cos_j).norm() / (n * cos_i + n_air * cos_j).norm();
    FresnelPair { rs, rp }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radiometry::MaterialDb;
    use crate::Error;

    // Independent 40-digit evaluation of the same expressions.
    const AL_60_RS: f64 = 0.821_537_954_563_426_63;
    const AL_60_RP: f64 = 0.449_794_612_006_677_11;
    const NI_45_COS: (f64, f64) = (0.984_589_046_317_469_91, -0.005_953_631_868_127_494);

    #[test]
    fn paper_at_normal_incidence() {
        let db = MaterialDb::builtin();
        let f = fresnel_components(db.get("paper").unwrap(), 0.0).unwrap();
        assert!((f.rs - f.rp).abs() < 1e-15);
        assert!((f.rs - 0.4521).abs() < 1e-4);
        assert!((f.rs - 1.65 / 3.65).abs() < 1e-15);
    }

    #[test]
    fn aluminum_at_60_degrees() {
        let db = MaterialDb::builtin();
        let f = fresnel_components(db.get("aluminum").unwrap(), 60f64.to_radians()).unwrap();
        assert!((f.rs - AL_60_RS).abs() < 1e-13, "{}", f.rs);
        assert!((f.rp - AL_60_RP).abs() < 1e-13, "{}", f.rp);
    }

    #[test]
    fn snell_cos_cases() {
        let db = MaterialDb::builtin();
        for m in db.iter() {
            let c = snell_cos(m, 0.0);
            assert_eq!(c, Complex64::new(1.0, 0.0));
        }
        let ni = snell_cos(db.get("nickel").unwrap(), 45f64.to_radians());
        assert!((ni.re - NI_45_COS.0).abs() < 1e-14);
        assert!((ni.im - NI_45_COS.1).abs() < 1e-14);

        let paper = db.get("paper").unwrap();
        let near = snell_cos(paper, std::f64::consts::FRAC_PI_2 - 1e-9);
        let limit = (1.0 - (1.0 / 2.65f64).powi(2)).sqrt();
        assert!((near.re - limit).abs() < 1e-9);
        assert!(near.im.abs() < 1e-15);
    }

    #[test]
    fn normal_incidence_symmetry_for_all_materials() {
        for m in MaterialDb::builtin().iter() {
            let f = fresnel_components(m, 0.0).unwrap();
            assert!((f.rs - f.rp).abs() < 1e-12, "{}", m.name);
        }
    }

    #[test]
    fn components_are_bounded() {
        for m in MaterialDb::builtin().iter() {
            for deg in 0..90 {
                let f = fresnel_components(m, (deg as f64).to_radians()).unwrap();
                assert!((0.0..=1.0).contains(&f.rs) && (0.0..=1.0).contains(&f.rp));
            }
        }
    }

    #[test]
    fn out_of_range_angle() {
        let db = MaterialDb::builtin();
        let m = db.get("cfrp").unwrap();
        assert!(matches!(fresnel_components(m, -0.1), Err(Error::Domain(_))));
        assert!(matches!(
            fresnel_components(m, std::f64::consts::FRAC_PI_2),
            Err(Error::Domain(_))
        ));
    }
}
