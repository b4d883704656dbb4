//! Statistical data depth: depth functions, depth-based estimators and
//! depth-based inference for multivariate samples.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod binning;
pub mod cli;
pub mod data;
pub mod depth;
pub mod error;
pub mod estimators;
pub mod geometry;
pub mod inference;
pub mod linalg;
pub mod local;
pub mod lsdepth;
pub mod regression;
pub mod rng;
pub mod svg;
pub mod univariate;

pub use data::{
    load_matrix, save_matrix, DataMatrix, DepthKind, DepthVector, LpWeight, MethodDescriptor,
    ProjectionSet, DEFAULT_NPROJ, DEFAULT_SEED,
};
pub use depth::{contour_grid, depth_dispatch, depth_values, DepthGrid, DepthRequest};
pub use error::{DepthError, Result};
pub use local::{local_depth, symmetrize, LocalDepthConfig};
pub use lsdepth::{ls_depth, ls_depth_contour, ls_gradients, ls_max_depth, LsDepthValue, LsFit};
pub use regression::{deepest_regression, ols, regression_depth, trim_proj_reg, SimpleFit};
pub use estimators::{bootstrap_median_region, cov_lp, depth_median, MedianRegion, WeightedLocationScatter};
pub use geometry::ConvexHull;
pub use binning::{binning_depth_2d, lag_pairs, BinGrid2D};
pub use inference::{
    asymmetry_curve, dd_mvnorm, dd_plot, m_wilcoxon_test, rank_by_depth, scale_curve, Alternative,
    CurveData, CurveKind, DDNormData, DDPlotData, SampleLabel, WilcoxonResult,
};
