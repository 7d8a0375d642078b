//! Detection-quality metrics of maps against label masks.

use crate::{Error, Image, LabelMask, Result};

/// Value reported when the pooled noise vanishes but the means differ.
pub const CNR_CAP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionStats {
    pub label: u16,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub count: usize,
}

/// Statistics for every label present in the mask, ascending by label.
pub fn region_stats(map: &Image, mask: &LabelMask) -> Result<Vec<RegionStats>> {
    check_dims(map, mask)?;
    let n_labels = mask.labels().iter().copied().max().unwrap_or(0) as usize + 1;
    let mut sum = vec![0.0; n_labels];
    let mut count = vec![0usize; n_labels];
    for (&l, &v) in mask.labels().iter().zip(map.data()) {
        sum[l as usize] += v;
        count[l as usize] += 1;
    }
    let mean: Vec<f64> = sum
        .iter()
        .zip(&count)
        .map(|(s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
        .collect();
    let mut ss = vec![0.0; n_labels];
    for (&l, &v) in mask.labels().iter().zip(map.data()) {
        ss[l as usize] += (v - mean[l as usize]).powi(2);
    }
    Ok((0..n_labels)
        .filter(|&l| count[l] > 0)
        .map(|l| RegionStats {
            label: l as u16,
            mean: mean[l],
            std: (ss[l] / count[l] as f64).sqrt(),
            count: count[l],
        })
        .collect())
}

fn check_dims(map: &Image, mask: &LabelMask) -> Result<()> {
    if map.dims() != mask.dims() {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, mask is {}x{}",
            map.width(),
            map.height(),
            mask.width(),
            mask.height()
        )));
    }
    Ok(())
}

fn stats_of(stats: &[RegionStats], label: u16) -> Result<RegionStats> {
    stats
        .iter()
        .find(|s| s.label == label)
        .copied()
        .ok_or_else(|| Error::EmptyRegion(format!("label {label} has no pixels")))
}

fn cnr_from(a: RegionStats, b: RegionStats) -> f64 {
    let num = (a.mean - b.mean).abs();
    let den = ((a.std * a.std + b.std * b.std) / 2.0).sqrt();
    if den == 0.0 {
        return if num == 0.0 { 0.0 } else { CNR_CAP };
    }
    (num / den).min(CNR_CAP)
}

/// `|mean_a - mean_b| / sqrt((std_a² + std_b²) / 2)` between two labels.
pub fn cnr_between(map: &Image, mask: &LabelMask, a: u16, b: u16) -> Result<f64> {
    let stats = region_stats(map, mask)?;
    Ok(cnr_from(stats_of(&stats, a)?, stats_of(&stats, b)?))
}

/// CNR of `label` against the background (label 0).
pub fn cnr(map: &Image, mask: &LabelMask, label: u16) -> Result<f64> {
    cnr_between(map, mask, label, 0)
}

/// Symmetric matrix of pairwise CNR between `labels`; zero diagonal.
pub fn separability(map: &Image, mask: &LabelMask, labels: &[u16]) -> Result<Vec<Vec<f64>>> {
    if labels.len() < 2 {
        return Err(Error::Domain("separability needs at least two labels".into()));
    }
    let stats = region_stats(map, mask)?;
    let per: Vec<RegionStats> = labels.iter().map(|&l| stats_of(&stats, l)).collect::<Result<_>>()?;
    let k = labels.len();
    let mut m = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let v = cnr_from(per[i], per[j]);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    Ok(m)
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Pixels with a 4-neighbour of a different label, dilated by one pixel
/// (4-neighbourhood).
pub fn boundary_band(mask: &LabelMask) -> Vec<bool> {
    let (w, h) = mask.dims();
    let mut edge = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let l = mask.get(x, y);
            let differs = (x > 0 && mask.get(x - 1, y) != l)
                || (x + 1 < w && mask.get(x + 1, y) != l)
                || (y > 0 && mask.get(x, y - 1) != l)
                || (y + 1 < h && mask.get(x, y + 1) != l);
            edge[y * w + x] = differs;
        }
    }
    let mut band = edge.clone();
    for y in 0..h {
        for x in 0..w {
            if edge[y * w + x] {
                if x > 0 {
                    band[y * w + x - 1] = true;
                }
                if x + 1 < w {
                    band[y * w + x + 1] = true;
                }
                if y > 0 {
                    band[(y - 1) * w + x] = true;
                }
                if y + 1 < h {
                    band[(y + 1) * w + x] = true;
                }
            }
        }
    }
    band
}

/// Mean central-difference gradient magnitude over [`boundary_band`],
/// divided by the map's interquartile range (full range if the IQR is 0).
/// A constant map scores 0.
pub fn edge_sharpness(map: &Image, mask: &LabelMask) -> Result<f64> {
    check_dims(map, mask)?;
    let band = boundary_band(mask);
    let n = band.iter().filter(|&&b| b).count();
    if n == 0 {
        return Err(Error::EmptyRegion("mask has no region boundary".into()));
    }
    let (w, h) = map.dims();
    let mut acc = 0.0;
    for y in 0..h {
        for x in 0..w {
            if !band[y * w + x] {
                continue;
            }
            let (xi, yi) = (x as isize, y as isize);
            let gx = (map.get_clamped(xi + 1, yi) - map.get_clamped(xi - 1, yi)) / 2.0;
            let gy = (map.get_clamped(xi, yi + 1) - map.get_clamped(xi, yi - 1)) / 2.0;
            acc += gx.hypot(gy);
        }
    }
    let mean_grad = acc / n as f64;
    let mut sorted = map.data().to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let range = sorted[sorted.len() - 1] - sorted[0];
    let norm = if iqr > 0.0 { iqr } else { range };
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(mean_grad / norm)
}
