//! Small dense linear algebra for d×d scatter matrices.

use crate::data::DataMatrix;
use crate::error::{DepthError, Result};

pub fn column_means(x: &DataMatrix) -> Vec<f64> {
    let d = x.ncols();
    let mut mean = vec![0.0; d];
    for row in x.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    let n = x.nrows() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    mean
}

/// Unbiased sample covariance (divisor n − 1), row-major d×d.
pub fn sample_covariance(x: &DataMatrix, mean: &[f64]) -> Result<Vec<f64>> {
    let n = x.nrows();
    if n < 2 {
        return Err(DepthError::degenerate(
            "covariance needs at least two observations",
        ));
    }
    let d = x.ncols();
    let mut cov = vec![0.0; d * d];
    let mut centered = vec![0.0; d];
    for row in x.rows() {
        for k in 0..d {
            centered[k] = row[k] - mean[k];
        }
        for i in 0..d {
            for j in i..d {
                cov[i * d + j] += centered[i] * centered[j];
            }
        }
    }
    let denom = (n - 1) as f64;
    for i in 0..d {
        for j in i..d {
            let v = cov[i * d + j] / denom;
            cov[i * d + j] = v;
            cov[j * d + i] = v;
        }
    }
    Ok(cov)
}

/// Cholesky factor of a symmetric positive definite matrix.
///
/// Factorization uses diagonal pivoting so that a rank-deficient input is
/// reported with its numerical rank. A pivot is accepted when it exceeds
/// `1e-10 · max(diag)`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    dim: usize,
    /// Lower-triangular factor of the permuted matrix, row-major.
    lower: Vec<f64>,
    /// `perm[k]` is the original index placed at position k.
    perm: Vec<usize>,
}

impl Cholesky {
    pub fn factor(a: &[f64], dim: usize) -> Result<Self> {
        debug_assert_eq!(a.len(), dim * dim);
        let max_diag = (0..dim).map(|i| a[i * dim + i]).fold(0.0f64, f64::max);
        let tol = 1e-10 * max_diag;
        let mut m = a.to_vec();
        let mut perm: Vec<usize> = (0..dim).collect();
        let mut lower = vec![0.0; dim * dim];
        for k in 0..dim {
            // Pick the largest remaining diagonal of the Schur complement.
            let (piv, &best) = (k..dim)
                .map(|i| (i, &m[i * dim + i]))
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("non-empty range");
            if !(best > tol) || max_diag <= 0.0 {
                return Err(DepthError::Singular { rank: k, dim });
            }
            if piv != k {
                swap_sym(&mut m, dim, k, piv);
                perm.swap(k, piv);
                for j in 0..k {
                    lower.swap(k * dim + j, piv * dim + j);
                }
            }
            let lkk = m[k * dim + k].sqrt();
            lower[k * dim + k] = lkk;
            for i in k + 1..dim {
                lower[i * dim + k] = m[i * dim + k] / lkk;
            }
            for i in k + 1..dim {
                for j in k + 1..=i {
                    let v = m[i * dim + j] - lower[i * dim + k] * lower[j * dim + k];
                    m[i * dim + j] = v;
                    m[j * dim + i] = v;
                }
            }
        }
        Ok(Self { dim, lower, perm })
    }

    /// vᵀ A⁻¹ v
    pub fn quad_form_inv(&self, v: &[f64]) -> f64 {
        let z = self.forward(v);
        z.iter().map(|t| t * t).sum()
    }

    /// Solve L z = P v.
    fn forward(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut z = vec![0.0; d];
        for i in 0..d {
            let mut s = v[self.perm[i]];
            for j in 0..i {
                s -= self.lower[i * d + j] * z[j];
            }
            z[i] = s / self.lower[i * d + i];
        }
        z
    }

    /// Multiply by the factor: returns x with x xᵀ distributed as A when
    /// `z` is standard normal.
    pub fn mul_lower(&self, z: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for i in 0..d {
            let mut s = 0.0;
            for j in 0..=i {
                s += self.lower[i * d + j] * z[j];
            }
            out[self.perm[i]] = s;
        }
        out
    }
}

fn swap_sym(m: &mut [f64], dim: usize, a: usize, b: usize) {
    for j in 0..dim {
        m.swap(a * dim + j, b * dim + j);
    }
    for i in 0..dim {
        m.swap(i * dim + a, i * dim + b);
    }
}

/// `n` draws from N(mean, cov), one row each.
pub fn sample_mvnorm<R: rand::Rng>(n: usize, mean: &[f64], cov: &[f64], rng: &mut R) -> Result<DataMatrix> {
    let d = mean.len();
    if cov.len() != d * d {
        return Err(DepthError::DimensionMismatch {
            expected: d * d,
            found: cov.len(),
        });
    }
    let chol = Cholesky::factor(cov, d)?;
    let mut values = Vec::with_capacity(n * d);
    let mut z = vec![0.0; d];
    for _ in 0..n {
        z.iter_mut().for_each(|v| *v = rng.sample(rand_distr::StandardNormal));
        values.extend(chol.mul_lower(&z).iter().zip(mean).map(|(a, m)| a + m));
    }
    DataMatrix::new(n, d, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covariance_of_small_sample() {
        let x = DataMatrix::from_rows(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [2.0, 2.0]]).unwrap();
        let mean = column_means(&x);
        assert_eq!(mean, vec![1.0, 1.0]);
        let cov = sample_covariance(&x, &mean).unwrap();
        assert_eq!(cov, vec![4.0 / 3.0, 0.0, 0.0, 4.0 / 3.0]);
    }

    #[test]
    fn quadratic_form_matches_explicit_inverse() {
        let a = [4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0];
        let chol = Cholesky::factor(&a, 3).unwrap();
        let inv = nalgebra::Matrix3::from_row_slice(&a).try_inverse().unwrap();
        let v = nalgebra::Vector3::new(0.3, -1.2, 2.0);
        let expected = (v.transpose() * inv * v)[0];
        let got = chol.quad_form_inv(v.as_slice());
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn factor_reproduces_matrix() {
        let a = [2.0, 0.3, 0.3, 5.0];
        let chol = Cholesky::factor(&a, 2).unwrap();
        // Columns of L P mapped back reconstruct A.
        let c0 = chol.mul_lower(&[1.0, 0.0]);
        let c1 = chol.mul_lower(&[0.0, 1.0]);
        let rebuilt = [
            c0[0] * c0[0] + c1[0] * c1[0],
            c0[0] * c0[1] + c1[0] * c1[1],
            c0[1] * c0[1] + c1[1] * c1[1],
        ];
        assert!((rebuilt[0] - 2.0).abs() < 1e-12);
        assert!((rebuilt[1] - 0.3).abs() < 1e-12);
        assert!((rebuilt[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn singular_reports_rank() {
        let a = [1.0, 2.0, 2.0, 4.0];
        match Cholesky::factor(&a, 2).unwrap_err() {
            DepthError::Singular { rank, dim } => assert_eq!((rank, dim), (1, 2)),
            e => panic!("{e:?}"),
        }
        let zero = [0.0; 4];
        assert!(matches!(
            Cholesky::factor(&zero, 2).unwrap_err(),
            DepthError::Singular { rank: 0, .. }
        ));
    }
}
