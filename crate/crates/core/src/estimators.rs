//! Depth-based location and scatter estimators.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, LpWeight, MethodDescriptor};
use crate::depth::closed::lp_unchecked;
use crate::depth::depth_values;
use crate::error::{DepthError, Result};
use crate::geometry::ConvexHull;
use crate::rng::{stream_rng, STREAM_BOOTSTRAP_BASE};

/// Coordinate-wise mean of the rows attaining the maximal depth.
fn average_of_maximizers(x: &DataMatrix, depths: &[f64]) -> Vec<f64> {
    let best = depths.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = vec![0.0; x.ncols()];
    let mut count = 0usize;
    for (row, &d) in x.rows().zip(depths) {
        if d == best {
            sum.iter_mut().zip(row).for_each(|(s, v)| *s += v);
            count += 1;
        }
    }
    sum.iter_mut().for_each(|s| *s /= count as f64);
    sum
}

/// Deepest sample point; several maxima are averaged.
pub fn depth_median(x: &DataMatrix, method: &MethodDescriptor) -> Result<Vec<f64>> {
    if x.nrows() == 0 {
        return Err(DepthError::EmptyInput);
    }
    let depths = depth_values(x, x, method)?;
    Ok(average_of_maximizers(x, &depths))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedLocationScatter {
    pub location: Vec<f64>,
    /// Row-major d×d.
    pub scatter: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

/// Location and scatter weighted by `a + b·D_i`, with `D_i` the plain L^p
/// depth of each observation in the sample.
pub fn cov_lp(x: &DataMatrix, p: f64, a: f64, b: f64) -> Result<WeightedLocationScatter> {
    if x.nrows() < 2 {
        return Err(DepthError::invalid("weighted scatter needs at least 2 observations"));
    }
    if !(p >= 1.0) {
        return Err(DepthError::invalid(format!("p must be >= 1, got {p}")));
    }
    let weight = LpWeight::Affine { a, b };
    weight.validate()?;
    let plain = LpWeight::Affine { a: 0.0, b: 1.0 };
    let rows: Vec<&[f64]> = x.rows().collect();
    let weights: Vec<f64> = rows
        .par_iter()
        .map(|r| weight.eval(lp_unchecked(r, x, p, plain)))
        .collect();
    weighted_location_scatter(x, weights)
}

/// `Σ wᵢXᵢ / Σ wᵢ` and `Σ wᵢ(Xᵢ − T)(Xᵢ − T)ᵀ / Σ wᵢ`.
pub fn weighted_location_scatter(x: &DataMatrix, weights: Vec<f64>) -> Result<WeightedLocationScatter> {
    let d = x.ncols();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(DepthError::degenerate("total weight is zero"));
    }
    let mut location = vec![0.0; d];
    for (row, w) in x.rows().zip(&weights) {
        location.iter_mut().zip(row).for_each(|(l, v)| *l += w * v);
    }
    location.iter_mut().for_each(|l| *l /= total);
    let mut scatter = vec![vec![0.0; d]; d];
    for (row, w) in x.rows().zip(&weights) {
        for i in 0..d {
            let ci = row[i] - location[i];
            for j in i..d {
                scatter[i][j] += w * ci * (row[j] - location[j]);
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            scatter[i][j] /= total;
            scatter[j][i] = scatter[i][j];
        }
    }
    Ok(WeightedLocationScatter {
        location,
        scatter,
        weights,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MedianRegion {
    /// The retained bootstrap medians, deepest first.
    pub points: DataMatrix,
    /// Convex hull of `points` when d = 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hull: Option<ConvexHull>,
}

/// Central `gamma` fraction, by depth, of `resamples` bootstrap depth
/// medians. Resample `b` draws from its own random stream.
pub fn bootstrap_median_region(
    x: &DataMatrix,
    method: &MethodDescriptor,
    resamples: usize,
    gamma: f64,
) -> Result<MedianRegion> {
    if resamples < 100 {
        return Err(DepthError::invalid(format!(
            "bootstrap needs at least 100 resamples, got {resamples}"
        )));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(DepthError::invalid(format!("confidence must lie in (0, 1), got {gamma}")));
    }
    if x.nrows() == 0 {
        return Err(DepthError::EmptyInput);
    }
    let n = x.nrows();
    let medians: Vec<Vec<f64>> = (0..resamples)
        .into_par_iter()
        .map(|b| {
            use rand::Rng;
            let mut rng = stream_rng(method.seed, STREAM_BOOTSTRAP_BASE + b as u64);
            let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            depth_median(&x.select_rows(&idx)?, method)
        })
        .collect::<Result<_>>()?;
    let cloud = DataMatrix::from_rows(&medians)?;
    let depths = depth_values(&cloud, &cloud, method)?;
    let mut order: Vec<usize> = (0..resamples).collect();
    order.sort_by(|&i, &j| depths[j].total_cmp(&depths[i]).then(i.cmp(&j)));
    let keep = ((gamma * resamples as f64).ceil() as usize).min(resamples);
    let points = cloud.select_rows(&order[..keep])?;
    let hull = (x.ncols() == 2).then(|| {
        let pts: Vec<[f64; 2]> = points.rows().map(|r| [r[0], r[1]]).collect();
        ConvexHull::of(&pts)
    });
    Ok(MedianRegion { points, hull })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DepthKind;
    use crate::linalg::{column_means, sample_mvnorm};

    fn normal(n: usize, seed: u64, cov: &[f64]) -> DataMatrix {
        sample_mvnorm(n, &[0.0, 0.0], cov, &mut stream_rng(seed, 1)).unwrap()
    }

    #[test]
    fn cross_median() {
        let cross = DataMatrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).unwrap();
        let m = MethodDescriptor::new(DepthKind::Euclidean);
        assert_eq!(depth_median(&cross, &m).unwrap(), vec![0.0, 0.0]);
        let with_center = cross.vstack(&DataMatrix::from_rows(&[[0.0, 0.0]]).unwrap()).unwrap();
        assert_eq!(depth_median(&with_center, &m).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn univariate_tukey_median() {
        let v = [4.0, -1.0, 9.0, 2.5, 3.0, 7.0, 0.5];
        let x = DataMatrix::from_column(&v).unwrap();
        let m = MethodDescriptor::new(DepthKind::Tukey).with_nproj(10);
        assert_eq!(depth_median(&x, &m).unwrap(), vec![3.0]);
    }

    #[test]
    fn median_is_permutation_invariant_and_deterministic() {
        let x = normal(80, 3, &[1.0, 0.3, 0.3, 2.0]);
        let mut idx: Vec<usize> = (0..80).rev().collect();
        idx.swap(0, 40);
        let m = MethodDescriptor::new(DepthKind::Projection).with_nproj(300);
        let a = depth_median(&x, &m).unwrap();
        assert_eq!(a, depth_median(&x.select_rows(&idx).unwrap(), &m).unwrap());
        assert_eq!(a, depth_median(&x, &m).unwrap());
    }

    #[test]
    fn constant_weights_give_plain_moments() {
        let x = normal(50, 4, &[2.0, 0.5, 0.5, 1.0]);
        let est = cov_lp(&x, 2.0, 1.0, 0.0).unwrap();
        let mean = column_means(&x);
        for k in 0..2 {
            assert!((est.location[k] - mean[k]).abs() < 1e-12);
        }
        let cov = crate::linalg::sample_covariance(&x, &mean).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((est.scatter[i][j] - cov[i * 2 + j] * 49.0 / 50.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn standard_normal_weighted_moments() {
        let x = normal(5000, 11, &[1.0, 0.0, 0.0, 1.0]);
        let est = cov_lp(&x, 2.0, 1.0, 1.0).unwrap();
        assert!(est.location.iter().all(|v| v.abs() < 0.08), "{:?}", est.location);
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((est.scatter[i][j] - target).abs() < 0.1, "{:?}", est.scatter);
            }
        }
    }

    #[test]
    fn contamination_moves_location_boundedly() {
        let clean = sample_mvnorm(425, &[0.0, 0.0], &[10.0, 3.0, 3.0, 2.0], &mut stream_rng(5, 1)).unwrap();
        let spike = DataMatrix::from_rows(&vec![[-10.0, 6.0]; 75]).unwrap();
        let est = cov_lp(&clean.vstack(&spike).unwrap(), 1.0, 1.0, 1.0).unwrap();
        assert!(est.location[0].hypot(est.location[1]) < 2.5, "{:?}", est.location);
    }

    #[test]
    fn scatter_is_symmetric_psd() {
        for (a, b, seed) in [(0.0, 1.0, 1), (1.0, 5.0, 2), (0.2, 0.0, 3)] {
            let x = normal(60, seed, &[3.0, -1.0, -1.0, 1.0]);
            let s = cov_lp(&x, 1.5, a, b).unwrap().scatter;
            assert!((s[0][1] - s[1][0]).abs() <= 1e-12);
            let tr = s[0][0] + s[1][1];
            let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
            let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
            assert!(tr / 2.0 - disc >= -1e-10);
        }
        assert!(cov_lp(&normal(5, 1, &[1.0, 0.0, 0.0, 1.0]), 2.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn bootstrap_region_shapes() {
        let x = normal(60, 9, &[1.0, 0.0, 0.0, 1.0]);
        let m = MethodDescriptor::new(DepthKind::Euclidean);
        let r = bootstrap_median_region(&x, &m, 200, 0.999).unwrap();
        assert_eq!(r.points.nrows(), 200);
        let r = bootstrap_median_region(&x, &m, 200, 0.9).unwrap();
        assert_eq!(r.points.nrows(), 180);
        assert!(r.hull.is_some());
        assert_eq!(r, bootstrap_median_region(&x, &m, 200, 0.9).unwrap());
        assert!(bootstrap_median_region(&x, &m, 1, 0.9).is_err());
    }
}
