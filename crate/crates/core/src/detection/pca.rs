use super::stack::ImageStack;
use crate::{Error, Image, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Principal-component decomposition of a standardized stack.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult {
    /// Spatial component images, unit Euclidean norm, largest-magnitude
    /// pixel positive.
    pub components: Vec<Image>,
    /// Descending, non-negative.
    pub singular_values: Vec<f64>,
    /// Matching right singular vectors (length `N_t`).
    pub temporal_loadings: Vec<Vec<f64>>,
    pub mean: Image,
    pub std: Image,
    /// Pixels whose temporal std was negligible and were zeroed.
    pub zeroed_pixels: usize,
}

/// Components below this fraction of the leading singular value are treated
/// as null: their singular value is reported as 0 and their spatial vector
/// completes the orthonormal set.
const NULL_RATIO: f64 = 1e-7;
const SIGMA_FLOOR: f64 = 1e-12;

struct Standardized {
    z: DMatrix<f64>,
    mean: Vec<f64>,
    std: Vec<f64>,
    zeroed: usize,
}

fn standardize(stack: &ImageStack) -> Result<Standardized> {
    let n = stack.len();
    let (w, h) = stack.dims();
    let p = w * h;
    let mut mean = vec![0.0; p];
    let mut std = vec![0.0; p];
    for f in stack.frames() {
        for (m, v) in mean.iter_mut().zip(f.data()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    for f in stack.frames() {
        for ((s, m), v) in std.iter_mut().zip(&mean).zip(f.data()) {
            *s += (v - m) * (v - m);
        }
    }
    std.iter_mut().for_each(|s| *s = (*s / (n - 1) as f64).sqrt());
    let max_std = std.iter().copied().fold(0.0, f64::max);
    let scale = mean.iter().fold(0.0f64, |a, m| a.max(m.abs()));
    // Rounding in the mean leaves ~1e-17 relative spread on constant rows.
    if !(max_std > SIGMA_FLOOR * scale) {
        return Err(Error::Degenerate("every pixel is constant over time".into()));
    }
    let floor = SIGMA_FLOOR * max_std;
    let zeroed = std.iter().filter(|&&s| s < floor).count();
    let frames = stack.frames();
    let z = DMatrix::from_fn(p, n, |r, t| {
        if std[r] < floor {
            0.0
        } else {
            (frames[t].data()[r] - mean[r]) / std[r]
        }
    });
    Ok(Standardized { z, mean, std, zeroed })
}

/// Orthonormalizes `x` against `basis` (two passes).
fn orthogonalize(mut x: DVector<f64>, basis: &[DVector<f64>]) -> DVector<f64> {
    for _ in 0..2 {
        for b in basis {
            let d = b.dot(&x);
            x.axpy(-d, b, 1.0);
        }
    }
    x
}

/// First `num_components` principal components of the pixel-standardized
/// `m*n x N_t` matrix.
///
/// Tall matrices are decomposed through the `N_t x N_t` Gram matrix; the
/// others by a direct SVD.
pub fn pca_components(stack: &ImageStack, num_components: usize) -> Result<PcaResult> {
    let n = stack.len();
    let (w, h) = stack.dims();
    let p = w * h;
    if num_components == 0 || num_components > p.min(n) {
        return Err(Error::Domain(format!(
            "num_components must be in 1..={}, got {num_components}",
            p.min(n)
        )));
    }
    let st = standardize(stack)?;
    let z = &st.z;

    // (singular value, u, v), descending.
    let mut triples: Vec<(f64, DVector<f64>, DVector<f64>)> = if p > n {
        let gram = z.transpose() * z;
        let eig = SymmetricEigen::new(gram);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        order
            .into_iter()
            .map(|i| {
                let v = eig.eigenvectors.column(i).into_owned();
                let u = z * &v;
                (u.norm(), u, v)
            })
            .collect()
    } else {
        let svd = z.clone().svd(true, true);
        let u = svd.u.expect("requested");
        let vt = svd.v_t.expect("requested");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        order
            .into_iter()
            .map(|i| {
                (
                    svd.singular_values[i],
                    u.column(i).into_owned(),
                    vt.row(i).transpose(),
                )
            })
            .collect()
    };
    triples.truncate(num_components);

    let s0 = triples[0].0;
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(num_components);
    let mut out_s = Vec::with_capacity(num_components);
    let mut out_v = Vec::with_capacity(num_components);
    let mut cursor = 0;
    for (s, u, v) in triples {
        let (s, mut u, mut v) = if s > NULL_RATIO * s0 {
            let u = orthogonalize(u, &basis);
            let norm = u.norm();
            (s, u / norm, v)
        } else {
            // Null direction: any unit vector orthogonal to the basis.
            let mut found = None;
            while cursor < p {
                let e = DVector::from_fn(p, |i, _| if i == cursor { 1.0 } else { 0.0 });
                cursor += 1;
                let x = orthogonalize(e, &basis);
                let norm = x.norm();
                if norm > 0.5 {
                    found = Some(x / norm);
                    break;
                }
            }
            (0.0, found.expect("p > basis size"), DVector::zeros(n))
        };
        let imax = u.iamax();
        if u[imax] < 0.0 {
            u.neg_mut();
            v.neg_mut();
        }
        basis.push(u);
        out_s.push(s);
        out_v.push(v.iter().copied().collect());
    }

    Ok(PcaResult {
        components: basis
            .iter()
            .map(|u| Image::new(w, h, u.iter().copied().collect()).expect("pixel count"))
            .collect(),
        singular_values: out_s,
        temporal_loadings: out_v,
        mean: Image::new(w, h, st.mean)?,
        std: Image::new(w, h, st.std)?,
        zeroed_pixels: st.zeroed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::StackOrigin;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_stack(w: usize, h: usize, n: usize, seed: u64) -> ImageStack {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frames = (0..n)
            .map(|_| Image::from_fn(w, h, |_, _| rng.random::<f64>()))
            .collect();
        ImageStack::new(frames, 40.0, StackOrigin::Intensity).unwrap()
    }

    /// Eigenvectors of `Z Z^T` built independently from the raw stack.
    fn oracle(stack: &ImageStack) -> (Vec<f64>, Vec<DVector<f64>>) {
        let n = stack.len();
        let p = stack.width() * stack.height();
        let mut z = DMatrix::zeros(p, n);
        for r in 0..p {
            let s = stack.pixel_series(r);
            let m = s.iter().sum::<f64>() / n as f64;
            let sd = (s.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
            for t in 0..n {
                z[(r, t)] = (s[t] - m) / sd;
            }
        }
        let eig = SymmetricEigen::new(&z * z.transpose());
        let mut idx: Vec<usize> = (0..p).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let vals = idx.iter().map(|&i| eig.eigenvalues[i].max(0.0).sqrt()).collect();
        let vecs = idx
            .iter()
            .map(|&i| {
                let mut v = eig.eigenvectors.column(i).into_owned();
                if v[v.iamax()] < 0.0 {
                    v.neg_mut();
                }
                v
            })
            .collect();
        (vals, vecs)
    }

    fn check_against_oracle(stack: &ImageStack, k: usize) {
        let r = pca_components(stack, k).unwrap();
        let (vals, vecs) = oracle(stack);
        for i in 0..k {
            assert!((r.singular_values[i] - vals[i]).abs() < 1e-8 * vals[0].max(1.0));
            for (a, b) in r.components[i].data().iter().zip(vecs[i].iter()) {
                assert!((a - b).abs() < 1e-8, "component {i}");
            }
        }
    }

    #[test]
    fn gram_route_matches_oracle() {
        // 64 pixels > 16 frames; rank is at most 15 after centring.
        check_against_oracle(&random_stack(8, 8, 16, 3), 15);
    }

    #[test]
    fn svd_route_matches_oracle() {
        check_against_oracle(&random_stack(3, 2, 20, 4), 6);
    }

    #[test]
    fn components_orthonormal_including_null_completion() {
        let s = random_stack(8, 8, 16, 5);
        let r = pca_components(&s, 16).unwrap();
        assert_eq!(r.singular_values[15], 0.0);
        for i in 0..16 {
            for j in 0..16 {
                let d: f64 = r.components[i]
                    .data()
                    .iter()
                    .zip(r.components[j].data())
                    .map(|(a, b)| a * b)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-9);
            }
        }
        assert!(r.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rank_one_stack() {
        let pattern = Image::from_fn(6, 5, |x, y| 1.0 + (x + 2 * y) as f64 * 0.1);
        let frames = (0..12)
            .map(|t| {
                let c = 1.0 + (t as f64 * 0.7).exp().ln_1p();
                Image::from_fn(6, 5, |x, y| c * pattern.get(x, y) + 0.3 * x as f64 - 0.2 * y as f64)
            })
            .collect();
        let s = ImageStack::new(frames, 40.0, StackOrigin::Intensity).unwrap();
        let r = pca_components(&s, 2).unwrap();
        assert!(r.singular_values[1] / r.singular_values[0] < 1e-6);
    }

    #[test]
    fn two_regions_two_decays_separate() {
        let (w, h, n) = (8, 4, 30);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let frames = (0..n)
            .map(|t| {
                let t = t as f64 * 0.1;
                Image::from_fn(w, h, |x, _| {
                    let noise = 1e-3 * (rng.random::<f64>() - 0.5);
                    if x < 4 {
                        (-t / 0.3).exp() + noise
                    } else {
                        (-t / 2.0).exp() + (t * 3.0).sin() * 0.2 + noise
                    }
                })
            })
            .collect();
        let s = ImageStack::new(frames, 40.0, StackOrigin::Intensity).unwrap();
        let r = pca_components(&s, 2).unwrap();
        let region_mean = |img: &Image, left: bool| -> f64 {
            let mut acc = 0.0;
            for y in 0..h {
                for x in 0..w {
                    if (x < 4) == left {
                        acc += img.get(x, y).abs();
                    }
                }
            }
            acc / 16.0
        };
        let a = [region_mean(&r.components[0], true), region_mean(&r.components[0], false)];
        let b = [region_mean(&r.components[1], true), region_mean(&r.components[1], false)];
        // Each region dominates in exactly one of the two components.
        let pc1_left = a[0] > a[1];
        let pc2_left = b[0] > b[1];
        assert_ne!(pc1_left, pc2_left, "{a:?} {b:?}");
    }

    #[test]
    fn standardized_rows_have_zero_mean_unit_std() {
        let s = random_stack(4, 4, 10, 6);
        let st = standardize(&s).unwrap();
        for r in 0..16 {
            let row: Vec<f64> = st.z.row(r).iter().copied().collect();
            let m = row.iter().sum::<f64>() / 10.0;
            let sd = (row.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 9.0).sqrt();
            assert!(m.abs() < 1e-9);
            assert!((sd - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn constant_stack_is_degenerate_and_dead_pixels_zeroed() {
        let frames = (0..5).map(|_| Image::filled(3, 3, 2.0)).collect();
        let s = ImageStack::new(frames, 40.0, StackOrigin::Dolp).unwrap();
        assert!(matches!(pca_components(&s, 1), Err(Error::Degenerate(_))));

        let frames = (0..5)
            .map(|t| Image::from_fn(3, 3, |x, y| if x == 0 && y == 0 { 1.0 } else { (t * (x + y)) as f64 }))
            .collect();
        let s = ImageStack::new(frames, 40.0, StackOrigin::Dolp).unwrap();
        let r = pca_components(&s, 2).unwrap();
        assert_eq!(r.zeroed_pixels, 1);
        assert!(r.components.iter().all(|c| c.data().iter().all(|v| v.is_finite())));
        assert_eq!(r.components[0].get(0, 0), 0.0);
    }

    #[test]
    fn component_count_bounds() {
        let s = random_stack(2, 2, 5, 1);
        assert!(pca_components(&s, 0).is_err());
        assert!(pca_components(&s, 5).is_err());
        assert!(pca_components(&s, 4).is_ok());
    }
}
