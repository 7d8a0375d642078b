use crate::{Error, Image, Result};

/// Four full-resolution analyzer images.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarChannels {
    pub i0: Image,
    pub i45: Image,
    pub i90: Image,
    pub i135: Image,
}

impl PolarChannels {
    /// Errors on mismatched dimensions or negative / non-finite values.
    pub fn new(i0: Image, i45: Image, i90: Image, i135: Image) -> Result<Self> {
        for ch in [&i45, &i90, &i135] {
            i0.check_same_dims(ch)?;
        }
        for ch in [&i0, &i45, &i90, &i135] {
            if ch.data().iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::Range("polarization channels must be finite and >= 0".into()));
            }
        }
        Ok(Self { i0, i45, i90, i135 })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.i0.dims()
    }

    pub fn as_array(&self) -> [&Image; 4] {
        [&self.i0, &self.i45, &self.i90, &self.i135]
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(
            self.i0.map(|v| v * lambda),
            self.i45.map(|v| v * lambda),
            self.i90.map(|v| v * lambda),
            self.i135.map(|v| v * lambda),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StokesFrame {
    pub s0: Image,
    pub s1: Image,
    pub s2: Image,
}

impl StokesFrame {
    /// Largest violation of `sqrt(S1² + S2²) <= S0` over the frame (0 when
    /// physical everywhere).
    pub fn max_excess_polarization(&self) -> f64 {
        self.s0
            .data()
            .iter()
            .zip(self.s1.data())
            .zip(self.s2.data())
            .map(|((s0, s1), s2)| s1.hypot(*s2) - s0)
            .fold(0.0, f64::max)
    }
}

/// `S0 = (I0 + I45 + I90 + I135) / 2`, `S1 = I0 - I90`, `S2 = I45 - I135`.
pub fn compute_stokes(ch: &PolarChannels) -> StokesFrame {
    let (w, h) = ch.dims();
    let n = w * h;
    let (a, b, c, d) = (ch.i0.data(), ch.i45.data(), ch.i90.data(), ch.i135.data());
    let mut s0 = Vec::with_capacity(n);
    let mut s1 = Vec::with_capacity(n);
    let mut s2 = Vec::with_capacity(n);
    for k in 0..n {
        s0.push((a[k] + b[k] + c[k] + d[k]) / 2.0);
        s1.push(a[k] - c[k]);
        s2.push(b[k] - d[k]);
    }
    let img = |v| Image::new(w, h, v).expect("same dims as channels");
    StokesFrame {
        s0: img(s0),
        s1: img(s1),
        s2: img(s2),
    }
}

/// Four-channel mean, used as the guide for filtering.
pub fn guidance_image(ch: &PolarChannels) -> Image {
    let (w, h) = ch.dims();
    let (a, b, c, d) = (ch.i0.data(), ch.i45.data(), ch.i90.data(), ch.i135.data());
    let data = (0..w * h).map(|k| (a[k] + b[k] + c[k] + d[k]) / 4.0).collect();
    Image::new(w, h, data).expect("same dims as channels")
}

/// DoLP values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DolpImage {
    image: Image,
    filtered: bool,
}

impl DolpImage {
    /// Clamps values into `[0, 1]`; errors on NaN.
    pub fn new(image: Image, filtered: bool) -> Result<Self> {
        if image.data().iter().any(|v| v.is_nan()) {
            return Err(Error::Range("DoLP image contains NaN".into()));
        }
        Ok(Self {
            image: image.map(|v| v.clamp(0.0, 1.0)),
            filtered,
        })
    }

    pub fn image(&self) -> &Image {
        &self.image
    }

    pub fn into_image(self) -> Image {
        self.image
    }

    pub fn is_filtered(&self) -> bool {
        self.filtered
    }
}

/// `sqrt(S1² + S2²) / max(S0, 1e-6 * max S0)`, clamped to `[0, 1]`.
pub fn compute_dolp(st: &StokesFrame) -> Result<DolpImage> {
    let max_s0 = st.s0.data().iter().copied().fold(0.0, f64::max);
    if max_s0 <= 0.0 {
        return Err(Error::Degenerate("S0 is zero over the whole frame".into()));
    }
    let floor = 1e-6 * max_s0;
    let data = st
        .s0
        .data()
        .iter()
        .zip(st.s1.data())
        .zip(st.s2.data())
        .map(|((s0, s1), s2)| s1.hypot(*s2) / s0.max(floor))
        .collect();
    let (w, h) = st.s0.dims();
    DolpImage::new(Image::new(w, h, data)?, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn channels(v: [f64; 4], w: usize, h: usize) -> PolarChannels {
        PolarChannels::new(
            Image::filled(w, h, v[0]),
            Image::filled(w, h, v[1]),
            Image::filled(w, h, v[2]),
            Image::filled(w, h, v[3]),
        )
        .unwrap()
    }

    #[test]
    fn equal_channels_unpolarized() {
        let st = compute_stokes(&channels([0.3; 4], 2, 2));
        assert!(st.s0.data().iter().all(|&v| (v - 0.6).abs() < 1e-15));
        assert!(st.s1.data().iter().chain(st.s2.data()).all(|&v| v == 0.0));
        assert!(compute_dolp(&st).unwrap().image().data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn malus_input_fully_polarized() {
        let st = compute_stokes(&channels([1.0, 0.5, 0.0, 0.5], 2, 2));
        assert_eq!((st.s0.get(0, 0), st.s1.get(0, 0), st.s2.get(0, 0)), (1.0, 1.0, 0.0));
        assert!((compute_dolp(&st).unwrap().image().get(1, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hand_arithmetic_example() {
        let ch = channels([0.8, 0.9, 0.4, 0.3], 1, 1);
        let st = compute_stokes(&ch);
        assert!((st.s0.get(0, 0) - 1.2).abs() < 1e-12);
        assert!((st.s1.get(0, 0) - 0.4).abs() < 1e-12);
        assert!((st.s2.get(0, 0) - 0.6).abs() < 1e-12);
        let d = compute_dolp(&st).unwrap().image().get(0, 0);
        assert!((d - 0.6009).abs() < 5e-5, "{d}");
        assert!((d - 0.52f64.sqrt() / 1.2).abs() < 1e-12);
        assert!((guidance_image(&ch).get(0, 0) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn zero_frame_is_degenerate() {
        let st = compute_stokes(&channels([0.0; 4], 2, 2));
        assert!(matches!(compute_dolp(&st), Err(Error::Degenerate(_))));
    }

    #[test]
    fn negative_channel_rejected() {
        let r = PolarChannels::new(
            Image::filled(1, 1, -0.1),
            Image::filled(1, 1, 0.0),
            Image::filled(1, 1, 0.0),
            Image::filled(1, 1, 0.0),
        );
        assert!(r.is_err());
    }

    #[test]
    fn guide_noise_is_halved() {
        let (w, h) = (512, 512);
        let sigma = 4.0;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let noise = Normal::new(0.0, sigma).unwrap();
        let mut make = || Image::from_fn(w, h, |_, _| 100.0 + noise.sample(&mut rng));
        let ch = PolarChannels::new(make(), make(), make(), make()).unwrap();
        let g = guidance_image(&ch);
        let m = g.mean();
        let var = g.data().iter().map(|v| (v - m).powi(2)).sum::<f64>() / (g.data().len() - 1) as f64;
        let sd = var.sqrt();
        assert!((sd - 2.0).abs() <= 0.05 * 2.0, "{sd}");
    }

    fn malus(s0: f64, p: f64, aolp: f64, theta_deg: f64) -> f64 {
        0.5 * s0 * (1.0 + p * (2.0 * (theta_deg.to_radians() - aolp)).cos())
    }

    proptest! {
        #[test]
        fn physical_and_scale_invariant(
            s0 in 0.01f64..2.0, p in 0.0f64..=1.0, aolp in -3.2f64..3.2, lambda in 1e-3f64..1e3
        ) {
            let ch = channels(
                [malus(s0, p, aolp, 0.0), malus(s0, p, aolp, 45.0),
                 malus(s0, p, aolp, 90.0), malus(s0, p, aolp, 135.0)].map(|v| v.max(0.0)),
                2, 1,
            );
            let st = compute_stokes(&ch);
            prop_assert!(st.max_excess_polarization() <= 1e-9);
            let d1 = compute_dolp(&st).unwrap();
            prop_assert!((d1.image().get(0, 0) - p).abs() < 1e-9);
            let d2 = compute_dolp(&compute_stokes(&ch.scaled(lambda).unwrap())).unwrap();
            prop_assert!((d1.image().get(0, 0) - d2.image().get(0, 0)).abs() < 1e-9);
        }
    }
}
