//! Regression depth for simple linear regression.
//!
//! A fit is a nonfit when some vertical split of the x-axis leaves strictly
//! positive residuals on one side and strictly negative ones on the other.
//! Its depth is the smallest fraction of observations whose removal turns it
//! into a nonfit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, DepthKind, MethodDescriptor, ProjectionSet};
use crate::depth::PreparedDepth;
use crate::error::{DepthError, Result};
use crate::univariate::{interpolated_quantile, sort_values};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimpleFit {
    pub intercept: f64,
    pub slope: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<f64>,
}

impl SimpleFit {
    pub fn new(intercept: f64, slope: f64) -> Self {
        Self {
            intercept,
            slope,
            depth: None,
        }
    }

    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Residual sign with values within rounding of the fitted line treated as 0.
pub(crate) fn residual_sign(fit: &SimpleFit, x: f64, y: f64) -> i8 {
    let fitted = fit.predict(x);
    let r = y - fitted;
    let scale = 1f64.max(y.abs()).max(fit.intercept.abs() + (fit.slope * x).abs());
    if r.abs() <= 1e-12 * scale {
        0
    } else if r > 0.0 {
        1
    } else {
        -1
    }
}

fn check_pairs(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(DepthError::invalid(format!(
            "x and y differ in length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(DepthError::EmptyInput);
    }
    if let Some(i) = x.iter().chain(y).position(|v| !v.is_finite()) {
        let row = i % x.len();
        return Err(DepthError::NonFinite {
            row: row + 1,
            col: i / x.len() + 1,
        });
    }
    Ok(())
}

/// Observation order by x, shared by every fit on the same data.
fn x_order(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    order
}

/// Nonfit removal count, sweeping split positions between distinct x values.
fn depth_count(fit: &SimpleFit, x: &[f64], y: &[f64], order: &[usize]) -> usize {
    let signs: Vec<i8> = order.iter().map(|&i| residual_sign(fit, x[i], y[i])).collect();
    // Right side starts with everything.
    let mut r_nonneg = signs.iter().filter(|&&s| s >= 0).count();
    let mut r_nonpos = signs.iter().filter(|&&s| s <= 0).count();
    let (mut l_nonneg, mut l_nonpos) = (0usize, 0usize);
    let mut best = r_nonneg.min(r_nonpos);
    let n = order.len();
    let mut k = 0;
    while k < n {
        let xv = x[order[k]];
        while k < n && x[order[k]] == xv {
            let s = signs[k];
            if s >= 0 {
                l_nonneg += 1;
                r_nonneg -= 1;
            }
            if s <= 0 {
                l_nonpos += 1;
                r_nonpos -= 1;
            }
            k += 1;
        }
        best = best.min(l_nonneg + r_nonpos).min(l_nonpos + r_nonneg);
    }
    best
}

/// Regression depth of `fit` as a proportion of the sample.
pub fn regression_depth(fit: &SimpleFit, x: &[f64], y: &[f64]) -> Result<f64> {
    check_pairs(x, y)?;
    let order = x_order(x);
    Ok(depth_count(fit, x, y, &order) as f64 / x.len() as f64)
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

/// Deepest regression over lines through pairs of observations with distinct
/// x. A line through two observations is at least as deep as every nearby
/// line, so this set attains the maximum.
///
/// When several distinct lines attain the maximal depth, the one with the
/// (lower) median slope among them is returned.
pub fn deepest_regression(x: &[f64], y: &[f64]) -> Result<SimpleFit> {
    check_pairs(x, y)?;
    if x.len() < 2 {
        return Err(DepthError::invalid("deepest regression needs at least 2 observations"));
    }
    if x.iter().all(|&v| v == x[0]) {
        return Err(DepthError::degenerate("all x values are equal (vertical data)"));
    }
    let n = x.len();
    let order = x_order(x);
    let mut candidates: Vec<SimpleFit> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            if x[i] != x[j] {
                let slope = (y[j] - y[i]) / (x[j] - x[i]);
                candidates.push(SimpleFit::new(y[i] - slope * x[i], slope));
            }
        }
    }
    let counts: Vec<usize> = candidates
        .par_iter()
        .map(|f| depth_count(f, x, y, &order))
        .collect();
    let best_count = counts.iter().copied().max().unwrap_or(0);
    let mut tied: Vec<SimpleFit> = candidates
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c == best_count)
        .map(|(f, _)| *f)
        .collect();
    tied.sort_by(|a, b| a.slope.total_cmp(&b.slope).then(a.intercept.total_cmp(&b.intercept)));
    tied.dedup_by(|a, b| near(a.slope, b.slope) && near(a.intercept, b.intercept));
    let mut best = tied[(tied.len() - 1) / 2];
    best.depth = Some(best_count as f64 / n as f64);
    Ok(best)
}

/// Ordinary least squares fit.
pub fn ols(x: &[f64], y: &[f64]) -> Result<SimpleFit> {
    check_pairs(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 0.0) {
        return Err(DepthError::degenerate("least squares needs at least two distinct x values"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok(SimpleFit::new(my - slope * mx, slope))
}

/// Least squares on the observations whose bivariate projection depth
/// exceeds the `alpha` quantile of all such depths. `alpha = 0` trims
/// nothing.
pub fn trim_proj_reg(x: &[f64], y: &[f64], alpha: f64, method: &MethodDescriptor) -> Result<SimpleFit> {
    check_pairs(x, y)?;
    if !(0.0..0.5).contains(&alpha) {
        return Err(DepthError::invalid(format!("trim fraction must lie in [0, 0.5), got {alpha}")));
    }
    let mut fit = if alpha == 0.0 {
        ols(x, y)?
    } else {
        let data = DataMatrix::from_pairs(x, y)?;
        let proj = ProjectionSet::sample(2, method.nproj, method.seed)?;
        let prepared = PreparedDepth::new(DepthKind::Projection, &data, method, Some(&proj))?;
        let depths: Vec<f64> = data.rows().map(|r| prepared.depth(r)).collect();
        let mut sorted = depths.clone();
        sort_values(&mut sorted);
        let cut = interpolated_quantile(&sorted, alpha)?;
        let keep: Vec<usize> = (0..x.len()).filter(|&i| depths[i] > cut).collect();
        if keep.len() < 2 {
            return Err(DepthError::degenerate(format!(
                "trimming leaves {} observations",
                keep.len()
            )));
        }
        let kx: Vec<f64> = keep.iter().map(|&i| x[i]).collect();
        let ky: Vec<f64> = keep.iter().map(|&i| y[i]).collect();
        ols(&kx, &ky)?
    };
    fit.depth = Some(regression_depth(&fit, x, y)?);
    Ok(fit)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use rand::Rng;

    /// Smallest number of removals leaving a nonfit, by enumerating subsets
    /// in increasing size.
    pub(crate) fn brute_force_count(fit: &SimpleFit, x: &[f64], y: &[f64]) -> usize {
        let n = x.len();
        let is_nonfit = |mask: u32| {
            let kept: Vec<(f64, i8)> = (0..n)
                .filter(|i| mask & (1 << i) == 0)
                .map(|i| (x[i], residual_sign(fit, x[i], y[i])))
                .collect();
            if kept.is_empty() {
                return true;
            }
            if kept.iter().all(|p| p.1 > 0) || kept.iter().all(|p| p.1 < 0) {
                return true;
            }
            let mut xs: Vec<f64> = kept.iter().map(|p| p.0).collect();
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            xs.windows(2).any(|w| {
                let t = 0.5 * (w[0] + w[1]);
                [1i8, -1].iter().any(|&s| {
                    kept.iter().all(|p| if p.0 < t { p.1 == s } else { p.1 == -s })
                })
            })
        };
        (0..=n)
            .find(|&k| (0u32..1 << n).any(|m| m.count_ones() as usize == k && is_nonfit(m)))
            .unwrap()
    }

    pub(crate) fn stars() -> (Vec<f64>, Vec<f64>) {
        let text = include_str!("../data/starsCYG.csv");
        let m = crate::data::load_matrix(text.as_bytes(), true).unwrap();
        (m.column(0), m.column(1))
    }

    #[test]
    fn three_points_fit_through_two() {
        let (x, y) = ([0.0, 1.0, 2.0], [0.0, 1.0, 5.0]);
        let fit = SimpleFit::new(0.0, 1.0);
        // Both on-line points must go before the third is a nonfit.
        assert_eq!(regression_depth(&fit, &x, &y).unwrap(), 2.0 / 3.0);
        assert_eq!(brute_force_count(&fit, &x, &y), 2);
    }

    #[test]
    fn exact_line_and_far_line() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 0.5 * v).collect();
        assert_eq!(regression_depth(&SimpleFit::new(2.0, -0.5), &x, &y).unwrap(), 1.0);
        let y = [0.3, 1.7, -0.4, 2.2, 0.9];
        assert_eq!(regression_depth(&SimpleFit::new(-1.7 - 1e6, 0.0), &x, &y).unwrap(), 0.0);
    }

    #[test]
    fn sweep_matches_subset_oracle() {
        let mut rng = crate::rng::stream_rng(31, 0);
        for trial in 0..500 {
            let n = rng.random_range(1..=12);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3..4) as f64).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-3..4) as f64).collect();
            // Lines through data points produce zero residuals and ties.
            let fit = if n >= 2 && x[0] != x[1] && trial % 2 == 0 {
                let s = (y[1] - y[0]) / (x[1] - x[0]);
                SimpleFit::new(y[0] - s * x[0], s)
            } else {
                SimpleFit::new(rng.random_range(-2..3) as f64 * 0.5, rng.random_range(-2..3) as f64 * 0.5)
            };
            let got = regression_depth(&fit, &x, &y).unwrap();
            assert_eq!(got, brute_force_count(&fit, &x, &y) as f64 / n as f64, "trial {trial}");
        }
    }

    #[test]
    fn stars_deepest_regression() {
        let (x, y) = stars();
        let fit = deepest_regression(&x, &y).unwrap();
        assert!((fit.intercept + 7.903043).abs() < 1e-3, "{fit:?}");
        assert!((fit.slope - 2.913043).abs() < 1e-3, "{fit:?}");
        let ls = ols(&x, &y).unwrap();
        assert!(fit.depth.unwrap() >= regression_depth(&ls, &x, &y).unwrap());
    }

    #[test]
    fn stars_trimmed_regression() {
        let (x, y) = stars();
        for seed in [crate::data::DEFAULT_SEED, 1, 2, 3] {
            let m = MethodDescriptor::new(DepthKind::Projection).with_seed(seed);
            let fit = trim_proj_reg(&x, &y, 0.1, &m).unwrap();
            assert!((fit.intercept + 7.403531).abs() < 2e-2, "{fit:?}");
            assert!((fit.slope - 2.802837).abs() < 2e-2, "{fit:?}");
        }
    }

    #[test]
    fn small_deepest_regressions() {
        let fit = deepest_regression(&[1.0, 3.0], &[2.0, 6.0]).unwrap();
        assert_eq!((fit.intercept, fit.slope, fit.depth), (0.0, 2.0, Some(1.0)));
        let x = [0.0, 1.0, 2.0, 3.0];
        // Collinear pairs yield the same line many times over.
        let y = [1.0, 4.0, 7.0, 10.0];
        let fit = deepest_regression(&x, &y).unwrap();
        assert_eq!((fit.intercept, fit.slope, fit.depth), (1.0, 3.0, Some(1.0)));
        assert!(matches!(
            deepest_regression(&[1.0, 1.0], &[0.0, 2.0]).unwrap_err(),
            DepthError::Degenerate(_)
        ));
    }

    #[test]
    fn deepest_regression_is_regression_equivariant() {
        let mut rng = crate::rng::stream_rng(8, 0);
        for _ in 0..20 {
            let x: Vec<f64> = (0..15).map(|_| rng.random_range(-10..11) as f64).collect();
            let y: Vec<f64> = (0..15).map(|_| rng.random_range(-10..11) as f64).collect();
            let (c, d) = (2.0, -3.0);
            let moved: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b + c * a + d).collect();
            let f = deepest_regression(&x, &y).unwrap();
            let g = deepest_regression(&x, &moved).unwrap();
            assert_eq!(f.depth, g.depth);
            assert!((g.slope - f.slope - c).abs() < 1e-9 && (g.intercept - f.intercept - d).abs() < 1e-9, "{f:?} {g:?} {x:?} {y:?}");
        }
    }

    #[test]
    fn trimming_resists_gross_outliers() {
        let x: Vec<f64> = (0..40).map(|i| i as f64 * 0.25).collect();
        let mut y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, v)| 1.0 + 2.0 * v + 0.05 * ((i * 7 % 11) as f64 - 5.0))
            .collect();
        for i in [33, 35, 37, 39] {
            y[i] -= 40.0;
        }
        let m = MethodDescriptor::default();
        let ls = ols(&x, &y).unwrap();
        let trimmed = trim_proj_reg(&x, &y, 0.15, &m).unwrap();
        assert!((ls.slope - 2.0).abs() > 0.5, "{ls:?}");
        assert!((trimmed.slope - 2.0).abs() < 0.05, "{trimmed:?}");
        let clean = &y[..30];
        assert_eq!(trim_proj_reg(&x[..30], clean, 0.0, &m).unwrap().slope, ols(&x[..30], clean).unwrap().slope);
    }
}
