//! Depth-based inference: DD-plots, the rank-sum test and depth curves.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::data::{DataMatrix, MethodDescriptor};
use crate::depth::closed::lp_unchecked;
use crate::depth::depth_values;
use crate::error::{DepthError, Result};
use crate::estimators::{depth_median, weighted_location_scatter};
use crate::geometry::ConvexHull;
use crate::linalg::{column_means, sample_covariance, sample_mvnorm};
use crate::rng::{stream_rng, STREAM_MVNORM};
use crate::univariate::{interpolated_quantile, sort_values};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleLabel {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DDPlotData {
    /// Depth of each combined-sample point w.r.t. the first sample.
    pub points_x: Vec<f64>,
    /// Depth of each combined-sample point w.r.t. the second sample.
    pub points_y: Vec<f64>,
    pub labels: Vec<SampleLabel>,
}

fn centered_at_median(x: &DataMatrix, method: &MethodDescriptor) -> Result<DataMatrix> {
    let med = depth_median(x, method)?;
    x.map_rows(|src, dst| {
        for ((d, s), m) in dst.iter_mut().zip(src).zip(&med) {
            *d = s - m;
        }
    })
}

/// Depths of every point of `X ∪ Y` w.r.t. each sample. With `center`, both
/// samples are first shifted so their depth medians sit at the origin.
pub fn dd_plot(x: &DataMatrix, y: &DataMatrix, method: &MethodDescriptor, center: bool) -> Result<DDPlotData> {
    x.check_cols(y.ncols())?;
    let (x, y) = if center {
        (centered_at_median(x, method)?, centered_at_median(y, method)?)
    } else {
        (x.clone(), y.clone())
    };
    let z = x.vstack(&y)?;
    let mut labels = vec![SampleLabel::X; x.nrows()];
    labels.resize(z.nrows(), SampleLabel::Y);
    Ok(DDPlotData {
        points_x: depth_values(&z, &x, method)?,
        points_y: depth_values(&z, &y, method)?,
        labels,
    })
}

/// Fitted normal model of a sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFit {
    pub mean: Vec<f64>,
    /// Row-major d×d.
    pub covariance: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DDNormData {
    pub fit: NormalFit,
    pub plot: DDPlotData,
}

/// Mean and covariance from L^p-depth weights `a + b·D_i`, with observations
/// below the `alpha_cut` depth quantile given weight zero.
fn robust_normal_fit(x: &DataMatrix, method: &MethodDescriptor, alpha_cut: f64) -> Result<NormalFit> {
    let plain = crate::data::LpWeight::Affine { a: 0.0, b: 1.0 };
    let depths: Vec<f64> = x
        .rows()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|r| lp_unchecked(r, x, method.p, plain))
        .collect();
    let mut sorted = depths.clone();
    sort_values(&mut sorted);
    let cut = interpolated_quantile(&sorted, alpha_cut)?;
    let weights = depths
        .iter()
        .map(|&d| {
            if alpha_cut > 0.0 && d < cut {
                0.0
            } else {
                method.weight_a + method.weight_b * d
            }
        })
        .collect();
    let est = weighted_location_scatter(x, weights)?;
    Ok(NormalFit {
        mean: est.location,
        covariance: est.scatter.concat(),
    })
}

/// DD-plot of `x` against `size` draws from a normal model fitted to `x`.
pub fn dd_mvnorm(
    x: &DataMatrix,
    size: usize,
    robust: bool,
    alpha_cut: f64,
    method: &MethodDescriptor,
) -> Result<DDNormData> {
    if size == 0 {
        return Err(DepthError::invalid("reference sample size must be positive"));
    }
    if !(0.0..0.5).contains(&alpha_cut) {
        return Err(DepthError::invalid(format!("alpha cut must lie in [0, 0.5), got {alpha_cut}")));
    }
    let d = x.ncols();
    if x.nrows() <= d {
        return Err(DepthError::Singular {
            rank: x.nrows().saturating_sub(1),
            dim: d,
        });
    }
    let fit = if robust {
        robust_normal_fit(x, method, alpha_cut)?
    } else {
        let mean = column_means(x);
        let covariance = sample_covariance(x, &mean)?;
        NormalFit { mean, covariance }
    };
    let mut rng = stream_rng(method.seed, STREAM_MVNORM);
    let theory = sample_mvnorm(size, &fit.mean, &fit.covariance, &mut rng)?;
    Ok(DDNormData {
        plot: dd_plot(x, &theory, method, false)?,
        fit,
    })
}

/// `R_l = #{j : D_j ≤ D_l}` for every `l` in `sub`.
pub fn rank_by_depth(depths: &[f64], sub: &[usize]) -> Result<Vec<usize>> {
    if let Some(&bad) = sub.iter().find(|&&i| i >= depths.len()) {
        return Err(DepthError::invalid(format!(
            "index {bad} outside a sample of {}",
            depths.len()
        )));
    }
    let mut sorted = depths.to_vec();
    sort_values(&mut sorted);
    Ok(sub
        .iter()
        .map(|&i| sorted.partition_point(|&d| d <= depths[i]))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    Greater,
    Less,
    TwoSided,
}

impl std::str::FromStr for Alternative {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "greater" => Ok(Alternative::Greater),
            "less" => Ok(Alternative::Less),
            "two-sided" | "two.sided" | "twosided" => Ok(Alternative::TwoSided),
            _ => Err(DepthError::invalid(format!(
                "unknown alternative {s:?}; expected greater, less or two-sided"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WilcoxonResult {
    #[serde(rename = "S")]
    pub statistic: f64,
    #[serde(rename = "p")]
    pub p_value: f64,
    pub expected: f64,
    pub variance: f64,
    pub alternative: Alternative,
}

/// Null mean and variance of the rank sum of `m` out of `m + n` ranks.
pub fn rank_sum_moments(m: usize, n: usize) -> (f64, f64) {
    let (m, n) = (m as f64, n as f64);
    (m * (m + n + 1.0) / 2.0, m * n * (m + n + 1.0) / 12.0)
}

/// Normal approximation with continuity correction.
pub fn rank_sum_p_value(s: f64, m: usize, n: usize, alternative: Alternative) -> f64 {
    let (e, v) = rank_sum_moments(m, n);
    let sd = v.sqrt();
    let z = Normal::standard();
    let upper = 1.0 - z.cdf((s - e - 0.5) / sd);
    let lower = z.cdf((s - e + 0.5) / sd);
    match alternative {
        Alternative::Greater => upper,
        Alternative::Less => lower,
        Alternative::TwoSided => (2.0 * upper.min(lower)).min(1.0),
    }
}

/// Rank-sum test on depths in the pooled sample: large S means `x` sits
/// deeper in the pooled sample than `y`.
pub fn m_wilcoxon_test(
    x: &DataMatrix,
    y: &DataMatrix,
    method: &MethodDescriptor,
    alternative: Alternative,
) -> Result<WilcoxonResult> {
    x.check_cols(y.ncols())?;
    let (m, n) = (x.nrows(), y.nrows());
    if m < 2 || n < 2 {
        return Err(DepthError::invalid("both samples need at least 2 observations"));
    }
    let z = x.vstack(y)?;
    let depths = depth_values(&z, &z, method)?;
    let sub: Vec<usize> = (0..m).collect();
    let statistic = rank_by_depth(&depths, &sub)?.iter().sum::<usize>() as f64;
    let (expected, variance) = rank_sum_moments(m, n);
    Ok(WilcoxonResult {
        statistic,
        p_value: rank_sum_p_value(statistic, m, n, alternative),
        expected,
        variance,
        alternative,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    Scale,
    Asymmetry,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveData {
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: CurveKind,
}

fn check_curve_input(x: &DataMatrix, alphas: &[f64]) -> Result<()> {
    if x.ncols() != 2 {
        return Err(DepthError::invalid(format!(
            "depth curves need d = 2 for exact region areas, got d = {}",
            x.ncols()
        )));
    }
    if let Some(a) = alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(DepthError::invalid(format!("curve levels must lie in [0, 1], got {a}")));
    }
    Ok(())
}

fn region(x: &DataMatrix, depths: &[f64], alpha: f64) -> Vec<usize> {
    (0..x.nrows()).filter(|&i| depths[i] >= alpha).collect()
}

fn hull_of(x: &DataMatrix, idx: &[usize]) -> ConvexHull {
    let pts: Vec<[f64; 2]> = idx.iter().map(|&i| [x.row(i)[0], x.row(i)[1]]).collect();
    ConvexHull::of(&pts)
}

/// Area of the convex hull of the sample points with depth ≥ α.
pub fn scale_curve(x: &DataMatrix, alphas: &[f64], method: &MethodDescriptor) -> Result<CurveData> {
    check_curve_input(x, alphas)?;
    let depths = depth_values(x, x, method)?;
    let values = alphas
        .par_iter()
        .map(|&a| hull_of(x, &region(x, &depths, a)).area())
        .collect();
    Ok(CurveData {
        alphas: alphas.to_vec(),
        values,
        kind: CurveKind::Scale,
    })
}

/// `‖mean(D_α) − med‖ / sqrt(area(D_α))`, where `med` is the depth median of
/// the whole sample or, with `moving_median`, of the region itself. Levels
/// whose region has zero area are omitted.
pub fn asymmetry_curve(
    x: &DataMatrix,
    alphas: &[f64],
    method: &MethodDescriptor,
    moving_median: bool,
) -> Result<CurveData> {
    check_curve_input(x, alphas)?;
    let depths = depth_values(x, x, method)?;
    let global = depth_median(x, method)?;
    let points: Vec<Option<(f64, f64)>> = alphas
        .iter()
        .map(|&a| {
            let idx = region(x, &depths, a);
            let area = hull_of(x, &idx).area();
            if !(area > 0.0) {
                return Ok(None);
            }
            let sub = x.select_rows(&idx)?;
            let mean = column_means(&sub);
            let med = if moving_median {
                depth_median(&sub, method)?
            } else {
                global.clone()
            };
            let dist = (mean[0] - med[0]).hypot(mean[1] - med[1]);
            Ok(Some((a, dist / area.sqrt())))
        })
        .collect::<Result<_>>()?;
    let (alphas, values) = points.into_iter().flatten().unzip();
    Ok(CurveData {
        alphas,
        values,
        kind: CurveKind::Asymmetry,
    })
}
