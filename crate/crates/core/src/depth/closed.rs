//! Depths with closed-form sample expressions.

use crate::data::{DataMatrix, LpWeight};
use crate::error::{DepthError, Result};
use crate::linalg::{column_means, sample_covariance, Cholesky};

/// `1 / (1 + ‖y − x̄‖²)`
pub fn depth_euclidean(y: &[f64], x: &DataMatrix) -> Result<f64> {
    x.check_cols(y.len())?;
    let mean = column_means(x);
    Ok(euclidean_from_mean(y, &mean))
}

pub(crate) fn euclidean_from_mean(y: &[f64], mean: &[f64]) -> f64 {
    let dist2: f64 = y.iter().zip(mean).map(|(a, b)| (a - b) * (a - b)).sum();
    1.0 / (1.0 + dist2)
}

/// Sample mean and factored covariance, reusable across query points.
pub(crate) struct MahalanobisModel {
    mean: Vec<f64>,
    chol: Cholesky,
}

impl MahalanobisModel {
    pub(crate) fn fit(x: &DataMatrix) -> Result<Self> {
        if x.nrows() <= x.ncols() {
            return Err(DepthError::Singular {
                rank: x.nrows().saturating_sub(1).min(x.ncols()),
                dim: x.ncols(),
            });
        }
        let mean = column_means(x);
        let cov = sample_covariance(x, &mean)?;
        let chol = Cholesky::factor(&cov, x.ncols())?;
        Ok(Self { mean, chol })
    }

    pub(crate) fn depth(&self, y: &[f64]) -> f64 {
        let centered: Vec<f64> = y.iter().zip(&self.mean).map(|(a, b)| a - b).collect();
        1.0 / (1.0 + self.chol.quad_form_inv(&centered))
    }
}

/// `1 / (1 + (y − x̄)ᵀ S⁻¹ (y − x̄))` with the unbiased sample covariance S.
pub fn depth_mahalanobis(y: &[f64], x: &DataMatrix) -> Result<f64> {
    x.check_cols(y.len())?;
    Ok(MahalanobisModel::fit(x)?.depth(y))
}

#[inline]
pub(crate) fn lp_distance(a: &[f64], b: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
    } else if p == 1.0 {
        a.iter().zip(b).map(|(u, v)| (u - v).abs()).sum()
    } else if p.is_infinite() {
        a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
    } else {
        a.iter()
            .zip(b)
            .map(|(u, v)| (u - v).abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

/// Weighted L^p depth `1 / (1 + (1/n) Σ w(‖y − X_i‖_p))`.
pub fn depth_lp(y: &[f64], x: &DataMatrix, p: f64, weight: LpWeight) -> Result<f64> {
    x.check_cols(y.len())?;
    if !(p >= 1.0) {
        return Err(DepthError::invalid(format!("p must be >= 1, got {p}")));
    }
    weight.validate()?;
    Ok(lp_unchecked(y, x, p, weight))
}

pub(crate) fn lp_unchecked(y: &[f64], x: &DataMatrix, p: f64, weight: LpWeight) -> f64 {
    let total: f64 = x.rows().map(|r| weight.eval(lp_distance(y, r, p))).sum();
    1.0 / (1.0 + total / x.nrows() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLAIN: LpWeight = LpWeight::Affine { a: 0.0, b: 1.0 };

    #[test]
    fn euclidean_examples() {
        let x = DataMatrix::from_column(&[0.0, 2.0]).unwrap();
        assert_eq!(depth_euclidean(&[1.0], &x).unwrap(), 1.0);
        assert_eq!(depth_euclidean(&[0.0], &x).unwrap(), 0.5);
        assert!(depth_euclidean(&[1e8], &x).unwrap() < 1e-15);
        assert!(depth_euclidean(&[0.0, 1.0], &x).is_err());
    }

    #[test]
    fn mahalanobis_examples() {
        let x = DataMatrix::from_column(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        // mean 3, variance 2.5
        assert_eq!(depth_mahalanobis(&[3.0], &x).unwrap(), 1.0);
        let s = 2.5f64.sqrt();
        assert!((depth_mahalanobis(&[3.0 + s], &x).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mahalanobis_singular_sample() {
        let x = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        match depth_mahalanobis(&[0.0, 0.0], &x).unwrap_err() {
            DepthError::Singular { rank, dim } => assert_eq!((rank, dim), (1, 2)),
            e => panic!("{e:?}"),
        }
        let tiny = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 3.0]]).unwrap();
        assert!(matches!(
            depth_mahalanobis(&[0.0, 0.0], &tiny).unwrap_err(),
            DepthError::Singular { .. }
        ));
    }

    #[test]
    fn lp_examples() {
        let single = DataMatrix::from_rows(&[[0.0, 0.0]]).unwrap();
        assert_eq!(depth_lp(&[0.0, 0.0], &single, 2.0, PLAIN).unwrap(), 1.0);
        let pair = DataMatrix::from_rows(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        assert_eq!(depth_lp(&[1.0, 0.0], &pair, 2.0, PLAIN).unwrap(), 0.5);
        // L1 vs L∞ on a diagonal offset.
        let x = DataMatrix::from_rows(&[[0.0, 0.0]]).unwrap();
        assert_eq!(depth_lp(&[1.0, 1.0], &x, 1.0, PLAIN).unwrap(), 1.0 / 3.0);
        assert_eq!(depth_lp(&[1.0, 1.0], &x, f64::INFINITY, PLAIN).unwrap(), 0.5);
        let w = LpWeight::Power { exponent: 2.0 };
        assert!((depth_lp(&[1.0, 1.0], &x, 2.0, w).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(depth_lp(&[1.0, 1.0], &x, 0.5, PLAIN).is_err());
    }

    #[test]
    fn lp_decreases_far_along_rays() {
        use rand::Rng;
        let mut rng = crate::rng::stream_rng(5, 0);
        for _ in 0..20 {
            let rows: Vec<[f64; 2]> = (0..30)
                .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
                .collect();
            let x = DataMatrix::from_rows(&rows).unwrap();
            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let dir = [theta.cos(), theta.sin()];
            let mut prev = f64::INFINITY;
            for step in 0..50 {
                let r = 3.0 + step as f64;
                let d = depth_lp(&[r * dir[0], r * dir[1]], &x, 2.0, PLAIN).unwrap();
                assert!(d < prev);
                prev = d;
            }
        }
    }
}
