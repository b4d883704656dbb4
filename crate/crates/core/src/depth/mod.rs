//! Multivariate depth evaluation.
//!
//! Closed-form depths live in [`closed`], the projection-approximated family
//! in [`projected`] and the exact bivariate halfspace depth in
//! [`halfspace`]. [`depth_dispatch`] routes a [`DepthRequest`] to the right
//! routine and evaluates rows in parallel; the output does not depend on the
//! number of worker threads.

pub mod closed;
pub mod halfspace;
pub mod projected;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, DepthKind, DepthVector, LpWeight, MethodDescriptor, ProjectionSet};
use crate::error::{DepthError, Result};
use crate::linalg::column_means;

pub use closed::{depth_euclidean, depth_lp, depth_mahalanobis};
pub use halfspace::{depth_tukey_exact_2d, halfspace_count_2d};
pub use projected::{depth_projection, depth_tukey_approx, depth_zonoid_approx};

use closed::MahalanobisModel;
use projected::ProjectedReference;

/// Rows of `points` to evaluate against the sample `reference`.
#[derive(Clone, Debug)]
pub struct DepthRequest {
    pub points: DataMatrix,
    pub reference: DataMatrix,
    pub method: MethodDescriptor,
}

/// Reference sample preprocessed for repeated depth queries.
pub(crate) enum PreparedDepth<'a> {
    Euclidean(Vec<f64>),
    Mahalanobis(MahalanobisModel),
    Lp {
        reference: &'a DataMatrix,
        p: f64,
        weight: LpWeight,
    },
    Projected(ProjectedReference<'a>),
}

impl<'a> PreparedDepth<'a> {
    /// `proj` must be supplied for projection-based kinds.
    pub(crate) fn new(
        kind: DepthKind,
        reference: &'a DataMatrix,
        method: &MethodDescriptor,
        proj: Option<&'a ProjectionSet>,
    ) -> Result<Self> {
        Ok(match kind {
            DepthKind::Euclidean => PreparedDepth::Euclidean(column_means(reference)),
            DepthKind::Mahalanobis => PreparedDepth::Mahalanobis(MahalanobisModel::fit(reference)?),
            DepthKind::LP => PreparedDepth::Lp {
                reference,
                p: method.p,
                weight: method.lp_weight(),
            },
            DepthKind::Projection | DepthKind::Tukey | DepthKind::Zonoid => {
                let proj = proj.ok_or_else(|| DepthError::invalid("missing projection set"))?;
                PreparedDepth::Projected(ProjectedReference::build(reference, proj, kind)?)
            }
            DepthKind::Local | DepthKind::StudentLS => {
                return Err(DepthError::invalid(format!(
                    "{} depth has no single-sample preparation",
                    kind.name()
                )))
            }
        })
    }

    pub(crate) fn depth(&self, y: &[f64]) -> f64 {
        match self {
            PreparedDepth::Euclidean(mean) => closed::euclidean_from_mean(y, mean),
            PreparedDepth::Mahalanobis(model) => model.depth(y),
            PreparedDepth::Lp {
                reference,
                p,
                weight,
            } => closed::lp_unchecked(y, reference, *p, *weight),
            PreparedDepth::Projected(r) => r.depth(y),
        }
    }
}

/// Depth of each row of `points` w.r.t. `reference` using a simple (non-local)
/// kind and an optional shared projection set.
pub(crate) fn simple_depths(
    kind: DepthKind,
    points: &DataMatrix,
    reference: &DataMatrix,
    method: &MethodDescriptor,
    proj: Option<&ProjectionSet>,
) -> Result<Vec<f64>> {
    reference.check_cols(points.ncols())?;
    let prepared = PreparedDepth::new(kind, reference, method, proj)?;
    Ok(points
        .rows()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|y| prepared.depth(y))
        .collect())
}

/// Projection set for `method` in dimension `dim`, when the method uses one.
pub(crate) fn projections_for(
    kind: DepthKind,
    dim: usize,
    method: &MethodDescriptor,
) -> Result<Option<ProjectionSet>> {
    if kind.uses_projections() {
        Ok(Some(ProjectionSet::for_method(dim, method)?))
    } else {
        Ok(None)
    }
}

/// Depth values for raw point/reference matrices.
pub fn depth_values(
    points: &DataMatrix,
    reference: &DataMatrix,
    method: &MethodDescriptor,
) -> Result<Vec<f64>> {
    method.validate()?;
    reference.check_cols(points.ncols())?;
    match method.kind {
        DepthKind::Local => {
            let proj = projections_for(method.local_base, reference.ncols(), method)?;
            crate::local::local_depths(points, reference, method, proj.as_ref())
        }
        DepthKind::StudentLS => student_depths(points, reference, method.nu),
        kind => {
            let proj = projections_for(kind, reference.ncols(), method)?;
            simple_depths(kind, points, reference, method, proj.as_ref())
        }
    }
}

/// Rows of `points` are `(mu, sigma)` fits; `reference` is a univariate sample.
fn student_depths(points: &DataMatrix, reference: &DataMatrix, nu: f64) -> Result<Vec<f64>> {
    if points.ncols() != 2 || reference.ncols() != 1 {
        return Err(DepthError::invalid(
            "StudentLS depth evaluates (mu, sigma) rows against a one-column sample",
        ));
    }
    let y = reference.column(0);
    points
        .rows()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|r| {
            let fit = crate::lsdepth::LsFit::new(r[0], r[1], nu)?;
            Ok(crate::lsdepth::ls_depth(&fit, &y)?.value)
        })
        .collect()
}

/// Evaluate a [`DepthRequest`].
pub fn depth_dispatch(req: &DepthRequest) -> Result<DepthVector> {
    if req.method.kind != DepthKind::StudentLS {
        req.reference.check_cols(req.points.ncols())?;
    }
    let values = if req.method.kind == DepthKind::StudentLS {
        req.method.validate()?;
        student_depths(&req.points, &req.reference, req.method.nu)?
    } else {
        depth_values(&req.points, &req.reference, &req.method)?
    };
    Ok(DepthVector {
        values,
        method: req.method.clone(),
    })
}

/// Depth evaluated on a regular grid over a bivariate sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `z[i][j]` is the depth at `(xs[j], ys[i])`.
    pub z: Vec<Vec<f64>>,
}

fn extend_range(values: &[f64], f: f64) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = if hi > lo { f * (hi - lo) } else { f * (1.0 + lo.abs()) };
    (lo - pad, hi + pad)
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// Grid extension on each side, as a fraction of the data range.
pub const GRID_EXTENSION: f64 = 0.1;

/// `grid_n × grid_n` depth values over the bounding box of `x` widened by
/// 10% of the range on every side.
pub fn contour_grid(x: &DataMatrix, grid_n: usize, method: &MethodDescriptor) -> Result<DepthGrid> {
    if x.ncols() != 2 {
        return Err(DepthError::invalid(format!(
            "contour grids need d = 2, got d = {}",
            x.ncols()
        )));
    }
    if grid_n < 2 {
        return Err(DepthError::invalid("grid size must be at least 2"));
    }
    let (x0, x1) = extend_range(&x.column(0), GRID_EXTENSION);
    let (y0, y1) = extend_range(&x.column(1), GRID_EXTENSION);
    let xs = linspace(x0, x1, grid_n);
    let ys = linspace(y0, y1, grid_n);
    let cells: Vec<f64> = ys
        .iter()
        .flat_map(|&yv| xs.iter().flat_map(move |&xv| [xv, yv]))
        .collect();
    let points = DataMatrix::new(grid_n * grid_n, 2, cells)?;
    let values = depth_values(&points, x, method)?;
    let z = values.chunks(grid_n).map(|c| c.to_vec()).collect();
    Ok(DepthGrid { xs, ys, z })
}
