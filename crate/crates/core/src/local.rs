//! Local depth through symmetrization about the query point.
//!
//! For a query y the sample is augmented with its reflections 2y − x_i. The
//! original observations are ranked by their depth in that symmetrized
//! sample, the deepest ⌈nβ⌉ of them (extended through ties) form the
//! neighbourhood of y, and the local depth is the base depth of y in that
//! neighbourhood.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, DepthKind, MethodDescriptor, ProjectionSet};
use crate::depth::{projections_for, PreparedDepth};
use crate::error::{DepthError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalDepthConfig {
    /// Fraction of the sample kept as the neighbourhood, in (0, 1].
    pub beta: f64,
    /// The global depth being localized.
    pub base: MethodDescriptor,
}

impl LocalDepthConfig {
    pub fn new(beta: f64, base: MethodDescriptor) -> Result<Self> {
        let cfg = Self { beta, base };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(DepthError::invalid(format!(
                "locality beta must lie in (0, 1], got {}",
                self.beta
            )));
        }
        if matches!(self.base.kind, DepthKind::Local | DepthKind::StudentLS) {
            return Err(DepthError::invalid(format!(
                "{} cannot be localized",
                self.base.kind.name()
            )));
        }
        self.base.validate()
    }
}

/// Local depth together with the size of the neighbourhood it used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalDepthDetail {
    pub depth: f64,
    pub retained: usize,
}

/// The rows of `x` followed by their reflections `2y − x_i`.
pub fn symmetrize(y: &[f64], x: &DataMatrix) -> Result<DataMatrix> {
    x.check_cols(y.len())?;
    let reflected = x.map_rows(|src, dst| {
        for ((d, s), c) in dst.iter_mut().zip(src).zip(y) {
            *d = 2.0 * c - s;
        }
    })?;
    x.vstack(&reflected)
}

/// Number of deepest observations kept: ⌈nβ⌉, then extended while the next
/// depth ties the last kept one.
fn neighbourhood_size(sorted_depths: &[f64], beta: f64) -> usize {
    let n = sorted_depths.len();
    let mut k = ((n as f64) * beta).ceil().clamp(1.0, n as f64) as usize;
    while k < n && sorted_depths[k] == sorted_depths[k - 1] {
        k += 1;
    }
    k
}

fn min_rows(kind: DepthKind, dim: usize) -> usize {
    match kind {
        DepthKind::Mahalanobis => dim + 1,
        _ => 1,
    }
}

pub(crate) fn local_depth_detail(
    y: &[f64],
    x: &DataMatrix,
    beta: f64,
    base: &MethodDescriptor,
    proj: Option<&ProjectionSet>,
) -> Result<LocalDepthDetail> {
    x.check_cols(y.len())?;
    let n = x.nrows();
    let retained = if beta >= 1.0 {
        None
    } else {
        let sym = symmetrize(y, x)?;
        let ranking = PreparedDepth::new(base.kind, &sym, base, proj)?;
        let depths: Vec<f64> = x.rows().map(|r| ranking.depth(r)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| depths[b].total_cmp(&depths[a]).then(a.cmp(&b)));
        let sorted: Vec<f64> = order.iter().map(|&i| depths[i]).collect();
        let k = neighbourhood_size(&sorted, beta);
        let mut keep = order[..k].to_vec();
        keep.sort_unstable();
        Some(keep)
    };
    let size = retained.as_ref().map_or(n, Vec::len);
    let need = min_rows(base.kind, x.ncols());
    if size < need {
        return Err(DepthError::degenerate(format!(
            "local neighbourhood holds {size} observations but {} depth needs at least {need}",
            base.kind.name()
        )));
    }
    let depth = match &retained {
        None => PreparedDepth::new(base.kind, x, base, proj)?.depth(y),
        Some(keep) => {
            let sub = x.select_rows(keep)?;
            PreparedDepth::new(base.kind, &sub, base, proj)?.depth(y)
        }
    };
    Ok(LocalDepthDetail {
        depth,
        retained: size,
    })
}

/// Local depth of `y` w.r.t. `x`.
pub fn local_depth(y: &[f64], x: &DataMatrix, cfg: &LocalDepthConfig) -> Result<f64> {
    cfg.validate()?;
    let proj = projections_for(cfg.base.kind, x.ncols(), &cfg.base)?;
    Ok(local_depth_detail(y, x, cfg.beta, &cfg.base, proj.as_ref())?.depth)
}

/// Local depths for every row of `points`, with the base kind and locality
/// taken from a `Local` method descriptor.
pub(crate) fn local_depths(
    points: &DataMatrix,
    reference: &DataMatrix,
    method: &MethodDescriptor,
    proj: Option<&ProjectionSet>,
) -> Result<Vec<f64>> {
    let base = MethodDescriptor {
        kind: method.local_base,
        ..method.clone()
    };
    points
        .rows()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|y| Ok(local_depth_detail(y, reference, method.beta, &base, proj)?.depth))
        .collect()
}
