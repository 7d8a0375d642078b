//! Full microfacet DoLP model, integrated numerically over the hemisphere of
//! scattering directions.
//!
//! Geometry: the observation direction is `v = (sin psi_i, 0, cos psi_i)` in
//! the frame of the macroscopic surface (normal `z`). Each integration
//! direction `r = (psi_r, phi_r)` pairs with `v` through the half-vector
//! `h = (v + r)/|v + r|`, whose tilt from `z` is the microfacet angle `psi_N`.
//! `eta_r` is the azimuth of `h` about `z`, measured from the viewing
//! meridian (the x-z plane): the rotation of the facet's plane of incidence
//! away from the observation plane. It vanishes for in-plane scattering.
//!
//! The Fresnel terms depend on `psi_i` only and factor out of the integrals.

use super::fresnel::fresnel_unchecked;
use super::quadrature::gauss_legendre_on;
use super::{check_incidence, Material};
use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub n_zenith: usize,
    pub n_azimuth: usize,
    /// Upper zenith limit in radians, strictly below `pi/2`.
    pub zenith_cap: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            n_zenith: 64,
            n_azimuth: 64,
            zenith_cap: 89.5f64.to_radians(),
        }
    }
}

impl QuadratureConfig {
    pub fn new(n_zenith: usize, n_azimuth: usize, zenith_cap: f64) -> Result<Self> {
        let q = Self {
            n_zenith,
            n_azimuth,
            zenith_cap,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_zenith < 16 || self.n_azimuth < 16 {
            return Err(Error::Domain(format!(
                "quadrature needs at least 16 nodes per axis, got {}x{}",
                self.n_zenith, self.n_azimuth
            )));
        }
        if !(self.zenith_cap > 0.0 && self.zenith_cap < FRAC_PI_2) {
            return Err(Error::Domain(format!(
                "zenith cap must lie in (0, pi/2), got {}",
                self.zenith_cap
            )));
        }
        Ok(())
    }

    /// Both node counts doubled.
    pub fn refined(&self) -> Self {
        Self {
            n_zenith: self.n_zenith * 2,
            n_azimuth: self.n_azimuth * 2,
            ..*self
        }
    }

    /// Zenith nodes/weights. The rule is split at `psi_i`, where the
    /// half-vector passes through `z` and `eta_r` is discontinuous.
    fn zenith_rule(&self, psi_i: f64) -> Vec<(f64, f64)> {
        let cap = self.zenith_cap;
        if psi_i > 0.0 && psi_i < cap {
            let n = self.n_zenith.div_ceil(2);
            gauss_legendre_on(n, 0.0, psi_i)
                .chain(gauss_legendre_on(n, psi_i, cap))
                .collect()
        } else {
            gauss_legendre_on(self.n_zenith, 0.0, cap).collect()
        }
    }

    fn azimuth_rule(&self) -> Vec<(f64, f64)> {
        let n = self.n_azimuth.div_ceil(2);
        gauss_legendre_on(n, 0.0, PI)
            .chain(gauss_legendre_on(n, PI, 2.0 * PI))
            .collect()
    }
}

/// Normalised hemisphere integrals of the slope-weighted kernel:
/// `total = k ∫∫ W`, `cos2eta = k ∫∫ W cos 2eta_r`, `sin2eta = k ∫∫ W sin 2eta_r`
/// with `k = 1/(8 pi sigma_m^2)` and
/// `W = exp(-tan^2 psi_N / (2 sigma_m^2)) / cos^4 psi_N / cos psi_i · sin psi_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicrofacetIntegrals {
    pub total: f64,
    pub cos2eta: f64,
    pub sin2eta: f64,
}

/// Microfacet tilt `psi_N` and rotation `eta_r` (folded into `(-pi/2, pi/2]`)
/// for observation zenith `psi_i` and scattering direction `(psi_r, phi_r)`.
pub fn scattering_geometry(psi_i: f64, psi_r: f64, phi_r: f64) -> (f64, f64) {
    let g = Geometry::new(psi_i, psi_r, phi_r);
    (g.cos_n.clamp(-1.0, 1.0).acos(), 0.5 * g.sin2eta.atan2(g.cos2eta))
}

struct Geometry {
    cos_n: f64,
    cos2eta: f64,
    sin2eta: f64,
}

impl Geometry {
    fn new(psi_i: f64, psi_r: f64, phi_r: f64) -> Self {
        let v = [psi_i.sin(), 0.0, psi_i.cos()];
        let (st, ct) = psi_r.sin_cos();
        let (sp, cp) = phi_r.sin_cos();
        let r = [st * cp, st * sp, ct];

        let h = [v[0] + r[0], v[1] + r[1], v[2] + r[2]];
        let hn = norm(h);
        let cos_n = if hn > 0.0 { h[2] / hn } else { 1.0 };

        let rr = h[0] * h[0] + h[1] * h[1];
        let (cos2eta, sin2eta) = if rr > 1e-24 {
            ((h[0] * h[0] - h[1] * h[1]) / rr, 2.0 * h[0] * h[1] / rr)
        } else {
            (1.0, 0.0)
        };
        Self {
            cos_n,
            cos2eta,
            sin2eta,
        }
    }
}

#[inline]
fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

pub fn microfacet_integrals(
    material: &Material,
    psi_i: f64,
    q: &QuadratureConfig,
) -> Result<MicrofacetIntegrals> {
    check_incidence(psi_i)?;
    q.validate()?;
    let two_s2 = 2.0 * material.sigma_m * material.sigma_m;
    let inv_cos_i = 1.0 / psi_i.cos();
    let azimuth = q.azimuth_rule();

    let (mut total, mut c2, mut s2) = (0.0, 0.0, 0.0);
    for (psi_r, wz) in q.zenith_rule(psi_i) {
        let sin_r = psi_r.sin();
        let (mut rt, mut rc, mut rs) = (0.0, 0.0, 0.0);
        for &(phi_r, wa) in &azimuth {
            let g = Geometry::new(psi_i, psi_r, phi_r);
            let c2n = g.cos_n * g.cos_n;
            let tan2 = (1.0 - c2n) / c2n;
            let w = wa * (-tan2 / two_s2).exp() / (c2n * c2n);
            rt += w;
            rc += w * g.cos2eta;
            rs += w * g.sin2eta;
        }
        let scale = wz * sin_r * inv_cos_i;
        total += scale * rt;
        c2 += scale * rc;
        s2 += scale * rs;
    }
    let k = 1.0 / (8.0 * PI * material.sigma_m * material.sigma_m);
    let out = MicrofacetIntegrals {
        total: k * total,
        cos2eta: k * c2,
        sin2eta: k * s2,
    };
    if !(out.total.is_finite() && out.cos2eta.is_finite() && out.sin2eta.is_finite()) {
        return Err(Error::Quadrature(format!(
            "non-finite hemisphere integral for {} at psi_i={psi_i}",
            material.name
        )));
    }
    Ok(out)
}

/// Full microfacet DoLP for object radiance `i_obj` and environment radiance
/// `i_e` (any consistent units).
///
/// `|I_E - I_obj| |R_S - R_P| sqrt(C^2 + S^2) / (I_obj + |I_E - I_obj| (R_S + R_P) T)`
/// with `T, C, S` from [`microfacet_integrals`]. The absolute difference in
/// the denominator keeps it positive on both sides of equilibrium.
pub fn dolp_full(
    material: &Material,
    i_obj: f64,
    i_e: f64,
    psi_i: f64,
    q: &QuadratureConfig,
) -> Result<f64> {
    if !(i_obj.is_finite() && i_obj > 0.0) {
        return Err(Error::Domain(format!("I_obj must be > 0, got {i_obj}")));
    }
    if !(i_e.is_finite() && i_e >= 0.0) {
        return Err(Error::Domain(format!("I_E must be >= 0, got {i_e}")));
    }
    check_incidence(psi_i)?;
    q.validate()?;
    if i_e == i_obj {
        return Ok(0.0);
    }
    let f = fresnel_unchecked(material, psi_i);
    let g = microfacet_integrals(material, psi_i, q)?;
    let delta = (i_e - i_obj).abs();
    let num = delta * f.abs_diff() * g.cos2eta.hypot(g.sin2eta);
    let den = i_obj + delta * f.sum() * g.total;
    let v = num / den;
    if !v.is_finite() {
        return Err(Error::Quadrature(format!(
            "non-finite DoLP for {} at psi_i={psi_i}",
            material.name
        )));
    }
    Ok(v.clamp(0.0, 1.0))
}
