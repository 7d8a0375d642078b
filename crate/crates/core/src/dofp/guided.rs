use super::stokes::DolpImage;
use crate::{Error, Image, Result};

/// Mean over a `(2r+1)²` window with edge replication.
pub fn box_filter(img: &Image, r: usize) -> Image {
    let (w, h) = img.dims();
    let norm = ((2 * r + 1) * (2 * r + 1)) as f64;
    let tmp = box_pass(img.data(), w, h, r, true);
    let out = box_pass(&tmp, w, h, r, false);
    Image::new(w, h, out.into_iter().map(|v| v / norm).collect()).expect("dims preserved")
}

/// One-dimensional windowed sum along rows (`horizontal`) or columns, using a
/// running sum over the clamped index sequence.
fn box_pass(src: &[f64], w: usize, h: usize, r: usize, horizontal: bool) -> Vec<f64> {
    let (len, lines) = if horizontal { (w, h) } else { (h, w) };
    let idx = |line: usize, k: usize| if horizontal { line * w + k } else { k * w + line };
    let r = r as isize;
    let mut out = vec![0.0; src.len()];
    for line in 0..lines {
        let at = |k: isize| src[idx(line, k.clamp(0, len as isize - 1) as usize)];
        let mut acc: f64 = (-r..=r).map(at).sum();
        out[idx(line, 0)] = acc;
        for k in 1..len as isize {
            acc += at(k + r) - at(k - r - 1);
            out[idx(line, k as usize)] = acc;
        }
    }
    out
}

/// `(0.01 * guide range)²`, or `1e-12` for a flat guide.
pub fn default_eps(guide: &Image) -> f64 {
    let (lo, hi) = guide.min_max();
    let e = (0.01 * (hi - lo)).powi(2);
    if e > 0.0 {
        e
    } else {
        1e-12
    }
}

/// Guided filter with local linear model `q = a * guide + b`.
pub fn guided_filter(input: &DolpImage, guide: &Image, radius: usize, eps: f64) -> Result<DolpImage> {
    let p = input.image();
    p.check_same_dims(guide)?;
    if radius == 0 {
        return Err(Error::Domain("guided filter radius must be >= 1".into()));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Domain(format!("guided filter eps must be > 0, got {eps}")));
    }
    let mean_i = box_filter(guide, radius);
    let mean_p = box_filter(p, radius);
    let corr_ip = box_filter(&guide.zip_map(p, |a, b| a * b)?, radius);
    let corr_ii = box_filter(&guide.map(|v| v * v), radius);
    let (w, h) = p.dims();
    let n = w * h;
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let mi = mean_i.data()[k];
        let mp = mean_p.data()[k];
        let var = (corr_ii.data()[k] - mi * mi).max(0.0);
        let cov = corr_ip.data()[k] - mi * mp;
        let ak = cov / (var + eps);
        a.push(ak);
        b.push(mp - ak * mi);
    }
    let mean_a = box_filter(&Image::new(w, h, a)?, radius);
    let mean_b = box_filter(&Image::new(w, h, b)?, radius);
    let q: Vec<f64> = (0..n)
        .map(|k| mean_a.data()[k] * guide.data()[k] + mean_b.data()[k])
        .collect();
    DolpImage::new(Image::new(w, h, q)?, true)
}
