//! Exact bivariate halfspace depth by angular sweep.

use crate::data::DataMatrix;
use crate::error::{DepthError, Result};

/// Minimum number of `points` in a closed halfplane whose boundary passes
/// through `center`.
///
/// Points equal to `center` lie in every such halfplane. The rest are sorted
/// by angle around the center; the answer is `m − (largest number of
/// directions inside an open half-circle)`, found with a two-pointer sweep.
/// Runs in O(n log n).
pub fn halfspace_count_2d(center: [f64; 2], points: impl IntoIterator<Item = [f64; 2]>) -> usize {
    let mut at_center = 0usize;
    let mut dirs: Vec<(f64, [f64; 2])> = Vec::new();
    for p in points {
        let v = [p[0] - center[0], p[1] - center[1]];
        if v[0] == 0.0 && v[1] == 0.0 {
            at_center += 1;
        } else {
            dirs.push((v[1].atan2(v[0]), v));
        }
    }
    let m = dirs.len();
    if m == 0 {
        return at_center;
    }
    dirs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // v_j lies in the half-open half-circle starting at v_i.
    let ahead = |a: [f64; 2], b: [f64; 2]| {
        let cross = a[0] * b[1] - a[1] * b[0];
        cross > 0.0 || (cross == 0.0 && a[0] * b[0] + a[1] * b[1] > 0.0)
    };
    let mut best = 0usize;
    let mut end = 0usize;
    for i in 0..m {
        end = end.max(i + 1);
        while end < i + m && ahead(dirs[i].1, dirs[end % m].1) {
            end += 1;
        }
        best = best.max(end - i);
    }
    at_center + (m - best)
}

/// Exact Tukey depth of `y` with respect to a bivariate sample.
pub fn depth_tukey_exact_2d(y: &[f64], x: &DataMatrix) -> Result<f64> {
    if x.ncols() != 2 || y.len() != 2 {
        return Err(DepthError::invalid(format!(
            "exact halfspace depth needs d = 2, got d = {}",
            x.ncols()
        )));
    }
    let count = halfspace_count_2d([y[0], y[1]], x.rows().map(|r| [r[0], r[1]]));
    Ok(count as f64 / x.nrows() as f64)
}
