use super::stack::ImageStack;
use crate::{Error, Image, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Analysis frequencies used for the default phase maps.
pub const REFERENCE_FREQUENCIES_HZ: [f64; 3] = [0.23, 2.51, 4.8];

/// Amplitude and phase images of one DFT bin.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResult {
    pub amplitude: Image,
    /// Radians in `(-pi, pi]`; 0 where the amplitude vanishes.
    pub phase: Image,
    pub bin: usize,
    pub frequency_hz: f64,
}

/// `k * frame_rate / n_frames`.
pub fn bin_frequency(k: usize, n_frames: usize, frame_rate_hz: f64) -> f64 {
    k as f64 * frame_rate_hz / n_frames as f64
}

/// Bins nearest to [`REFERENCE_FREQUENCIES_HZ`] for a stack of this length,
/// kept inside `1..n_frames`.
pub fn default_bins(n_frames: usize, frame_rate_hz: f64) -> Vec<usize> {
    REFERENCE_FREQUENCIES_HZ
        .iter()
        .map(|f| {
            let k = (f * n_frames as f64 / frame_rate_hz).round() as usize;
            k.clamp(1, n_frames.saturating_sub(1).max(1))
        })
        .collect()
}

fn wrap_phase(z: Complex64, scale: f64) -> f64 {
    if z.norm() <= 1e-12 * scale {
        return 0.0;
    }
    let p = z.im.atan2(z.re);
    if p <= -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        p
    }
}

/// Per-pixel DFT `F(k) = (1/N) sum_n T(n) exp(-2 pi i k n / N)` evaluated for
/// several bins with one transform per pixel.
pub fn fft_phase_bins(stack: &ImageStack, bins: &[usize]) -> Result<Vec<PhaseResult>> {
    let n = stack.len();
    if let Some(&k) = bins.iter().find(|&&k| k >= n) {
        return Err(Error::Range(format!("bin {k} out of range for {n} frames")));
    }
    let (w, h) = stack.dims();
    let npix = w * h;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let inv_n = 1.0 / n as f64;

    // Per pixel: (amplitude, phase) for each requested bin.
    let per_pixel = |p: usize, buf: &mut Vec<Complex64>, scratch: &mut Vec<Complex64>| {
        buf.clear();
        buf.extend(stack.frames().iter().map(|f| Complex64::new(f.data()[p], 0.0)));
        let scale = buf.iter().map(|z| z.re.abs()).sum::<f64>() * inv_n;
        fft.process_with_scratch(buf, scratch);
        bins.iter()
            .map(|&k| {
                let z = buf[k] * inv_n;
                (z.norm(), wrap_phase(z, scale))
            })
            .collect::<Vec<_>>()
    };
    let scratch_len = fft.get_inplace_scratch_len();

    #[cfg(feature = "parallel")]
    let results: Vec<Vec<(f64, f64)>> = {
        use rayon::prelude::*;
        (0..npix)
            .into_par_iter()
            .map_init(
                || (Vec::with_capacity(n), vec![Complex64::default(); scratch_len]),
                |(buf, scratch), p| per_pixel(p, buf, scratch),
            )
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Vec<(f64, f64)>> = {
        let mut buf = Vec::with_capacity(n);
        let mut scratch = vec![Complex64::default(); scratch_len];
        (0..npix).map(|p| per_pixel(p, &mut buf, &mut scratch)).collect()
    };

    Ok(bins
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            let amplitude = results.iter().map(|r| r[j].0).collect();
            let phase = results.iter().map(|r| r[j].1).collect();
            PhaseResult {
                amplitude: Image::new(w, h, amplitude).expect("pixel count"),
                phase: Image::new(w, h, phase).expect("pixel count"),
                bin: k,
                frequency_hz: bin_frequency(k, n, stack.frame_rate_hz()),
            }
        })
        .collect())
}

pub fn fft_phase(stack: &ImageStack, k: usize) -> Result<PhaseResult> {
    Ok(fft_phase_bins(stack, &[k])?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::StackOrigin;

    fn series_stack(series: &[f64]) -> ImageStack {
        let frames = series.iter().map(|&v| Image::filled(1, 1, v)).collect();
        ImageStack::new(frames, 40.0, StackOrigin::Intensity).unwrap()
    }

    #[test]
    fn impulse_has_flat_spectrum() {
        let s = series_stack(&[1.0, 0.0, 0.0, 0.0]);
        for r in fft_phase_bins(&s, &[0, 1, 2, 3]).unwrap() {
            assert!((r.amplitude.get(0, 0) - 0.25).abs() < 1e-15);
            assert!(r.phase.get(0, 0).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_stack_zero_amplitude_zero_phase() {
        let s = series_stack(&[3.7; 12]);
        let r = fft_phase(&s, 1).unwrap();
        assert!(r.amplitude.get(0, 0) <= 1e-12 * 3.7);
        assert_eq!(r.phase.get(0, 0), 0.0);
    }

    #[test]
    fn phase_of_negative_real_is_pi() {
        // x = [0, 1]: F(1) = (0 - 1) / 2 = -0.5.
        let r = fft_phase(&series_stack(&[0.0, 1.0]), 1).unwrap();
        assert_eq!(r.phase.get(0, 0), std::f64::consts::PI);
        assert!((r.amplitude.get(0, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reference_bin_frequencies() {
        assert!((bin_frequency(1, 175, 40.0) - 0.2286).abs() < 1e-4);
        assert!((bin_frequency(11, 175, 40.0) - 2.514).abs() < 1e-3);
        assert!((bin_frequency(21, 175, 40.0) - 4.8).abs() < 1e-12);
        assert_eq!(default_bins(175, 40.0), vec![1, 11, 21]);
        assert_eq!(default_bins(350, 40.0), vec![2, 22, 42]);
        assert_eq!(default_bins(8, 40.0), vec![1, 1, 1]);
    }

    #[test]
    fn out_of_range_bin() {
        assert!(matches!(fft_phase(&series_stack(&[1.0, 2.0]), 2), Err(Error::Range(_))));
    }
}
