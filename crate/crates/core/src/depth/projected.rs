//! Depths approximated through a finite set of one-dimensional projections.
//!
//! Each direction u reduces the reference sample to uᵀX, where a univariate
//! depth is cheap. Taking the extreme over directions replaces the sup/inf
//! over the whole sphere, so the result over-states the true depth.

use rayon::prelude::*;

use crate::data::{dot, DataMatrix, DepthKind, ProjectionSet};
use crate::error::{DepthError, Result};
use crate::univariate::{median_select, sort_values, RegionFamily1D, RegionFlavor};

/// Reference sample reduced along every non-degenerate direction.
pub(crate) struct ProjectedReference<'a> {
    proj: &'a ProjectionSet,
    kind: DepthKind,
    /// Indices of retained directions.
    kept: Vec<usize>,
    /// Projection depth: (median, MAD) per retained direction.
    med_mad: Vec<(f64, f64)>,
    /// Tukey / zonoid: region family per retained direction.
    families: Vec<RegionFamily1D>,
}

fn project(x: &DataMatrix, u: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = x.rows().map(|r| dot(r, u)).collect();
    sort_values(&mut v);
    v
}

impl<'a> ProjectedReference<'a> {
    pub(crate) fn build(x: &DataMatrix, proj: &'a ProjectionSet, kind: DepthKind) -> Result<Self> {
        x.check_cols(proj.dim())?;
        let flavor = match kind {
            DepthKind::Projection => None,
            DepthKind::Tukey => Some(RegionFlavor::TukeyIntervals),
            DepthKind::Zonoid => Some(RegionFlavor::ZonoidIntervals),
            other => {
                return Err(DepthError::invalid(format!(
                    "{} is not a projection-based depth",
                    other.name()
                )))
            }
        };
        let per_dir: Vec<Option<Reduced>> = (0..proj.len())
            .into_par_iter()
            .map(|k| {
                let u = proj.direction(k);
                match flavor {
                    None => {
                        let mut v: Vec<f64> = x.rows().map(|r| dot(r, u)).collect();
                        let med = median_select(&mut v);
                        v.iter_mut().for_each(|t| *t = (*t - med).abs());
                        let mad = median_select(&mut v);
                        (mad > 0.0).then_some(Reduced::MedMad(med, mad))
                    }
                    Some(fl) => {
                        let sorted = project(x, u);
                        (sorted[sorted.len() - 1] > sorted[0])
                            .then(|| Reduced::Family(RegionFamily1D::from_sorted(fl, sorted)))
                    }
                }
            })
            .collect();
        let mut out = Self {
            proj,
            kind,
            kept: Vec::new(),
            med_mad: Vec::new(),
            families: Vec::new(),
        };
        for (k, r) in per_dir.into_iter().enumerate() {
            match r {
                Some(Reduced::MedMad(m, s)) => {
                    out.kept.push(k);
                    out.med_mad.push((m, s));
                }
                Some(Reduced::Family(f)) => {
                    out.kept.push(k);
                    out.families.push(f);
                }
                None => {}
            }
        }
        if out.kept.is_empty() {
            return Err(DepthError::degenerate(match kind {
                DepthKind::Projection => "projected MAD is zero along every direction",
                _ => "sample is a single point along every direction",
            }));
        }
        Ok(out)
    }

    pub(crate) fn depth(&self, y: &[f64]) -> f64 {
        match self.kind {
            DepthKind::Projection => {
                let outlying = self
                    .kept
                    .iter()
                    .zip(&self.med_mad)
                    .map(|(&k, &(med, mad))| (dot(y, self.proj.direction(k)) - med).abs() / mad)
                    .fold(0.0, f64::max);
                1.0 / (1.0 + outlying)
            }
            _ => self
                .kept
                .iter()
                .zip(&self.families)
                .map(|(&k, fam)| fam.depth(dot(y, self.proj.direction(k))))
                .fold(1.0, f64::min),
        }
    }
}

enum Reduced {
    MedMad(f64, f64),
    Family(RegionFamily1D),
}

fn single(y: &[f64], x: &DataMatrix, proj: &ProjectionSet, kind: DepthKind) -> Result<f64> {
    x.check_cols(y.len())?;
    Ok(ProjectedReference::build(x, proj, kind)?.depth(y))
}

/// `[1 + max_u |uᵀy − Med(uᵀX)| / MAD(uᵀX)]⁻¹` over the directions of `proj`.
pub fn depth_projection(y: &[f64], x: &DataMatrix, proj: &ProjectionSet) -> Result<f64> {
    single(y, x, proj, DepthKind::Projection)
}

/// Minimum over directions of the univariate halfspace depth of uᵀy in uᵀX.
pub fn depth_tukey_approx(y: &[f64], x: &DataMatrix, proj: &ProjectionSet) -> Result<f64> {
    single(y, x, proj, DepthKind::Tukey)
}

/// Minimum over directions of the univariate zonoid depth of uᵀy in uᵀX.
pub fn depth_zonoid_approx(y: &[f64], x: &DataMatrix, proj: &ProjectionSet) -> Result<f64> {
    single(y, x, proj, DepthKind::Zonoid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::halfspace::depth_tukey_exact_2d;
    use crate::linalg::column_means;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn gaussian(n: usize, seed: u64) -> DataMatrix {
        let mut rng = crate::rng::stream_rng(seed, 3);
        let rows: Vec<[f64; 2]> = (0..n)
            .map(|_| [rng.sample(StandardNormal), rng.sample(StandardNormal)])
            .collect();
        DataMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn projection_depth_in_one_dimension() {
        let x = DataMatrix::from_column(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let proj = ProjectionSet::sample(1, 10, 1).unwrap();
        assert_eq!(depth_projection(&[5.0], &x, &proj).unwrap(), 1.0 / 3.0);
        assert_eq!(depth_projection(&[3.0], &x, &proj).unwrap(), 1.0);
        assert_eq!(depth_tukey_approx(&[3.0], &x, &proj).unwrap(), 0.6);
    }

    #[test]
    fn symmetric_center_has_full_projection_depth() {
        let x = DataMatrix::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0], [0.0, -2.0], [0.0, 0.0]])
            .unwrap();
        let proj = ProjectionSet::sample(2, 200, 4).unwrap();
        assert_eq!(depth_projection(&[0.0, 0.0], &x, &proj).unwrap(), 1.0);
    }

    #[test]
    fn projection_depth_overstates_richer_direction_sets() {
        let x = gaussian(60, 8);
        let proj = ProjectionSet::sample(2, 1000, 2).unwrap();
        let mut grid: Vec<f64> = (0..10_000)
            .flat_map(|i| {
                let t = std::f64::consts::PI * i as f64 / 10_000.0;
                [t.cos(), t.sin()]
            })
            .collect();
        grid.extend(proj.iter().flatten());
        let dense = ProjectionSet::from_directions(2, grid).unwrap();
        for i in 0..10 {
            let y = x.row(i);
            let approx = depth_projection(y, &x, &proj).unwrap();
            let fine = depth_projection(y, &x, &dense).unwrap();
            assert!(approx >= fine, "row {i}: {approx} < {fine}");
            assert!(approx - fine < 0.05, "row {i}: {approx} vs {fine}");
        }
    }

    #[test]
    fn tukey_approx_bounds_exact_and_vanishes_outside_hull() {
        let x = gaussian(80, 21);
        let proj = ProjectionSet::sample(2, 1000, 6).unwrap();
        for i in 0..x.nrows() {
            let y = x.row(i);
            let exact = depth_tukey_exact_2d(y, &x).unwrap();
            assert!(depth_tukey_approx(y, &x, &proj).unwrap() >= exact);
        }
        for y in [[10.0, 0.0], [0.0, -9.0], [6.0, 6.0]] {
            assert_eq!(depth_tukey_approx(&y, &x, &proj).unwrap(), 0.0);
            assert_eq!(depth_zonoid_approx(&y, &x, &proj).unwrap(), 0.0);
        }
    }

    #[test]
    fn zonoid_mean_is_deepest() {
        let x = gaussian(50, 2);
        let proj = ProjectionSet::sample(2, 500, 3).unwrap();
        let mean = column_means(&x);
        let d = depth_zonoid_approx(&mean, &x, &proj).unwrap();
        assert!((d - 1.0).abs() < 1e-9, "{d}");
        for i in 0..x.nrows() {
            assert!(depth_zonoid_approx(x.row(i), &x, &proj).unwrap() <= d + 1e-12);
        }
    }

    #[test]
    fn zonoid_regions_shrink_toward_mean() {
        // Level sets {depth >= α} of sample points: the farthest member from
        // the mean is non-increasing in α.
        let x = gaussian(120, 17);
        let proj = ProjectionSet::sample(2, 300, 9).unwrap();
        let reference = ProjectedReference::build(&x, &proj, DepthKind::Zonoid).unwrap();
        let mean = column_means(&x);
        let depths: Vec<f64> = x.rows().map(|r| reference.depth(r)).collect();
        let mut prev = f64::INFINITY;
        for step in 0..20 {
            let alpha = step as f64 / 20.0;
            let radius = x
                .rows()
                .zip(&depths)
                .filter(|(_, &d)| d >= alpha)
                .map(|(r, _)| (r[0] - mean[0]).hypot(r[1] - mean[1]))
                .fold(0.0, f64::max);
            assert!(radius <= prev);
            prev = radius;
        }
    }

    #[test]
    fn degenerate_samples_are_rejected() {
        let x = DataMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]]).unwrap();
        let proj = ProjectionSet::sample(2, 50, 1).unwrap();
        assert!(matches!(
            depth_projection(&[1.0, 1.0], &x, &proj).unwrap_err(),
            DepthError::Degenerate(_)
        ));
        assert!(matches!(
            depth_tukey_approx(&[1.0, 1.0], &x, &proj).unwrap_err(),
            DepthError::Degenerate(_)
        ));
    }

    #[test]
    fn more_directions_never_raise_tukey_depth() {
        let x = gaussian(40, 31);
        let full = ProjectionSet::sample(2, 1000, 77).unwrap();
        for i in 0..x.nrows() {
            let mut prev = f64::INFINITY;
            for k in [10, 50, 200, 1000] {
                let d = depth_tukey_approx(x.row(i), &x, &full.prefix(k)).unwrap();
                assert!(d <= prev);
                prev = d;
            }
        }
    }
}
