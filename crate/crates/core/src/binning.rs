//! Robust 2D binning on a grid fitted to the deepest observations.

use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, DepthKind, MethodDescriptor};
use crate::depth::depth_values;
use crate::error::{DepthError, Result};

/// Rows `(w[t − k], w[t])` for every valid `t`.
pub fn lag_pairs(w: &[f64], k: usize) -> Result<DataMatrix> {
    if k == 0 || k >= w.len() {
        return Err(DepthError::invalid(format!(
            "lag must lie in [1, {}) for a window of {}",
            w.len(),
            w.len()
        )));
    }
    DataMatrix::from_pairs(&w[..w.len() - k], &w[k..])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BinGrid2D {
    pub breaks_x: Vec<f64>,
    pub breaks_y: Vec<f64>,
    /// `(m + 1) × (m + 1)` counts, `counts[iy][ix]`; index 0 and m are the
    /// open border classes.
    pub counts: Vec<Vec<usize>>,
    /// Cell centres, x fastest. Border cells sit half a step outside the grid.
    pub midpoints_retained: Vec<[f64; 2]>,
    pub counts_retained: Vec<usize>,
}

/// Class of `v`: 0 below `l₁`, `m` above `l_m`, else `j` with
/// `l_j ≤ v < l_{j+1}`; `v = l_m` falls in the last interior class.
fn class(breaks: &[f64], v: f64) -> usize {
    let m = breaks.len();
    let k = breaks.partition_point(|&b| b <= v);
    if k == m && v == breaks[m - 1] {
        m - 1
    } else {
        k
    }
}

fn midpoint(breaks: &[f64], step: f64, c: usize) -> f64 {
    let m = breaks.len();
    match c {
        0 => breaks[0] - 0.5 * step,
        c if c == m => breaks[m - 1] + 0.5 * step,
        c => 0.5 * (breaks[c - 1] + breaks[c]),
    }
}

/// Bins every row of `z` on `nbins` shared breaks spanning the deepest
/// `⌈βn⌉` rows under the L^p depth of `method`.
pub fn binning_depth_2d(
    z: &DataMatrix,
    nbins: usize,
    beta: f64,
    remove_borders: bool,
    method: &MethodDescriptor,
) -> Result<BinGrid2D> {
    if z.ncols() != 2 {
        return Err(DepthError::invalid(format!("binning needs d = 2, got d = {}", z.ncols())));
    }
    let n = z.nrows();
    if nbins < 2 || n < nbins {
        return Err(DepthError::invalid(format!(
            "need 2 <= nbins <= n, got nbins = {nbins} with n = {n}"
        )));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(DepthError::invalid(format!("coverage must lie in (0, 1], got {beta}")));
    }
    let lp = MethodDescriptor {
        kind: DepthKind::LP,
        ..method.clone()
    };
    let depths = depth_values(z, z, &lp)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| depths[b].total_cmp(&depths[a]).then(a.cmp(&b)));
    let keep = ((beta * n as f64).ceil() as usize).clamp(1, n);
    let central = &order[..keep];
    let (lo, hi) = central
        .iter()
        .flat_map(|&i| z.row(i).iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !(hi > lo) {
        return Err(DepthError::degenerate("central region has zero extent"));
    }
    let step = (hi - lo) / (nbins - 1) as f64;
    let breaks: Vec<f64> = (0..nbins)
        .map(|j| if j == nbins - 1 { hi } else { lo + step * j as f64 })
        .collect();
    let mut counts = vec![vec![0usize; nbins + 1]; nbins + 1];
    for r in z.rows() {
        counts[class(&breaks, r[1])][class(&breaks, r[0])] += 1;
    }
    let range = if remove_borders { 1..nbins } else { 0..nbins + 1 };
    let mut midpoints_retained = Vec::new();
    let mut counts_retained = Vec::new();
    for iy in range.clone() {
        for ix in range.clone() {
            midpoints_retained.push([midpoint(&breaks, step, ix), midpoint(&breaks, step, iy)]);
            counts_retained.push(counts[iy][ix]);
        }
    }
    Ok(BinGrid2D {
        breaks_x: breaks.clone(),
        breaks_y: breaks,
        counts,
        midpoints_retained,
        counts_retained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn lag_examples() {
        let p = lag_pairs(&[1.0, 2.0, 3.0], 1).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(lag_pairs(&[1.0, 2.0, 3.0], 2).unwrap().nrows(), 1);
        assert!(lag_pairs(&[1.0, 2.0, 3.0], 3).is_err());
        let c = lag_pairs(&[4.0; 5], 2).unwrap();
        assert!(c.rows().all(|r| r == [4.0, 4.0]));
    }

    #[test]
    fn cell_centre_fixture() {
        // Breaks 0..m−1; one point per interior cell centre plus the four
        // corners that pin the breaks.
        let m = 6;
        let mut pts: Vec<[f64; 2]> = Vec::new();
        for iy in 0..m - 1 {
            for ix in 0..m - 1 {
                pts.push([ix as f64 + 0.5, iy as f64 + 0.5]);
            }
        }
        let top = (m - 1) as f64;
        pts.extend([[0.0, 0.0], [top, 0.0], [0.0, top], [top, top]]);
        let z = DataMatrix::from_rows(&pts).unwrap();
        let g = binning_depth_2d(&z, m, 1.0, true, &MethodDescriptor::default()).unwrap();
        assert_eq!(g.breaks_x, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(g.counts_retained.len(), (m - 1) * (m - 1));
        let corners = [0, m - 2, (m - 2) * (m - 1), (m - 1) * (m - 1) - 1];
        for (k, &c) in g.counts_retained.iter().enumerate() {
            assert_eq!(c, if corners.contains(&k) { 2 } else { 1 }, "cell {k}");
        }
        assert_eq!(g.midpoints_retained[0], [0.5, 0.5]);
        assert!(g.counts[0].iter().all(|&c| c == 0));
    }

    #[test]
    fn borders_and_conservation() {
        let mut rng = crate::rng::stream_rng(3, 0);
        let pts: Vec<[f64; 2]> = (0..400)
            .map(|_| [rng.random_range(-3.0..3.0), rng.random_range(-2.0..2.0)])
            .collect();
        let z = DataMatrix::from_rows(&pts).unwrap();
        let m = MethodDescriptor::default();
        let with = binning_depth_2d(&z, 8, 0.6, false, &m).unwrap();
        let without = binning_depth_2d(&z, 8, 0.6, true, &m).unwrap();
        let total: usize = with.counts.iter().flatten().sum();
        assert_eq!(total, 400);
        assert_eq!(with.counts_retained.iter().sum::<usize>(), 400);
        let interior: usize = without.counts_retained.iter().sum();
        let border = total - interior;
        assert!(border > 0);
        assert_eq!(with.counts, without.counts);
        assert_eq!(without.counts_retained.len(), 49);

        let wider = binning_depth_2d(&z, 8, 0.9, false, &m).unwrap();
        assert!(wider.breaks_x[0] <= with.breaks_x[0] && wider.breaks_x[7] >= with.breaks_x[7]);

        let rev: Vec<usize> = (0..400).rev().collect();
        let shuffled = binning_depth_2d(&z.select_rows(&rev).unwrap(), 8, 0.6, false, &m).unwrap();
        assert_eq!(shuffled.counts, with.counts);
    }

    #[test]
    fn rejects_degenerate_input() {
        let z = DataMatrix::from_rows(&[[1.0, 1.0]; 5]).unwrap();
        assert!(matches!(
            binning_depth_2d(&z, 3, 1.0, true, &MethodDescriptor::default()).unwrap_err(),
            DepthError::Degenerate(_)
        ));
        let z = DataMatrix::from_rows(&[[1.0, 1.0], [2.0, 3.0]]).unwrap();
        assert!(binning_depth_2d(&z, 3, 1.0, true, &MethodDescriptor::default()).is_err());
    }
}
