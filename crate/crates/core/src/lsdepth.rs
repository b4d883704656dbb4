//! Tangent depth of location-scale fits under the Student-t likelihood.
//!
//! A fit (μ, σ) is summarized by the gradient cloud
//! g_i = (τ_i, ν/(ν+1)(τ_i² − 1)) with τ_i = (y_i − μ)/σ, and its depth is the
//! smallest fraction of gradients in a closed halfplane through the origin.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::depth::{halfspace_count_2d, linspace, DepthGrid};
use crate::error::{DepthError, Result};
use crate::univariate::{mad_sorted, median_sorted, sort_values};

/// Default degrees of freedom (Cauchy).
pub const DEFAULT_NU: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LsFit {
    pub mu: f64,
    pub sigma: f64,
    pub nu: f64,
}

impl LsFit {
    pub fn new(mu: f64, sigma: f64, nu: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(DepthError::invalid(format!("location must be finite, got {mu}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(DepthError::invalid(format!("scale must be positive, got {sigma}")));
        }
        if !(nu >= 1.0 && nu.is_finite()) {
            return Err(DepthError::invalid(format!(
                "degrees of freedom must be at least 1, got {nu}"
            )));
        }
        Ok(Self { mu, sigma, nu })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LsDepthValue {
    /// Proportion in [0, 1].
    pub value: f64,
}

fn gradient(fit: &LsFit, c: f64, yi: f64) -> [f64; 2] {
    let tau = (yi - fit.mu) / fit.sigma;
    [tau, c * (tau * tau - 1.0)]
}

/// Gradient points `(τ_i, ν/(ν+1)(τ_i² − 1))`.
pub fn ls_gradients(fit: &LsFit, y: &[f64]) -> Vec<[f64; 2]> {
    let c = fit.nu / (fit.nu + 1.0);
    y.iter().map(|&yi| gradient(fit, c, yi)).collect()
}

fn depth_with_constant(fit: &LsFit, y: &[f64], c: f64) -> f64 {
    let count = halfspace_count_2d([0.0, 0.0], y.iter().map(|&yi| gradient(fit, c, yi)));
    count as f64 / y.len() as f64
}

/// Exact tangent depth of `fit` in the sample `y`.
pub fn ls_depth(fit: &LsFit, y: &[f64]) -> Result<LsDepthValue> {
    if y.is_empty() {
        return Err(DepthError::EmptyInput);
    }
    Ok(LsDepthValue {
        value: depth_with_constant(fit, y, fit.nu / (fit.nu + 1.0)),
    })
}

/// Depth over a (μ, σ) grid: `z[i][j]` is the depth of `(mu[j], sigma[i])`.
pub fn ls_depth_contour(y: &[f64], mu: &[f64], sigma: &[f64], nu: f64) -> Result<DepthGrid> {
    if y.is_empty() {
        return Err(DepthError::EmptyInput);
    }
    if mu.is_empty() || sigma.is_empty() {
        return Err(DepthError::invalid("location and scale grids must be non-empty"));
    }
    let fits: Vec<LsFit> = sigma
        .iter()
        .flat_map(|&s| mu.iter().map(move |&m| LsFit::new(m, s, nu)))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = fits
        .par_iter()
        .map(|f| depth_with_constant(f, y, nu / (nu + 1.0)))
        .collect();
    Ok(DepthGrid {
        xs: mu.to_vec(),
        ys: sigma.to_vec(),
        z: values.chunks(mu.len()).map(|c| c.to_vec()).collect(),
    })
}

/// Points per axis of the coarse grid.
const COARSE: usize = 41;
/// Points per axis in each refinement round.
const FINE: usize = 21;
const ROUNDS: usize = 2;

struct Search<'a> {
    y: &'a [f64],
    nu: f64,
    best: LsFit,
    depth: f64,
}

impl Search<'_> {
    /// Evaluates candidates in parallel; the first strictly better one in
    /// candidate order wins.
    fn offer(&mut self, mus: &[f64], log_sigmas: &[f64]) {
        let nu = self.nu;
        let fits: Vec<LsFit> = log_sigmas
            .iter()
            .flat_map(|&ls| {
                mus.iter().map(move |&m| LsFit {
                    mu: m,
                    sigma: ls.exp(),
                    nu,
                })
            })
            .collect();
        let c = self.nu / (self.nu + 1.0);
        let depths: Vec<f64> = fits
            .par_iter()
            .map(|f| depth_with_constant(f, self.y, c))
            .collect();
        for (f, d) in fits.into_iter().zip(depths) {
            if d > self.depth {
                self.best = f;
                self.depth = d;
            }
        }
    }
}

/// Student median: the deepest fit found by a coarse (μ, log σ) grid over
/// the sample range followed by two rounds of 10× local refinement.
pub fn ls_max_depth(y: &[f64], nu: f64) -> Result<(LsFit, LsDepthValue)> {
    if y.len() < 2 {
        return Err(DepthError::invalid("the Student median needs at least 2 observations"));
    }
    LsFit::new(0.0, 1.0, nu)?;
    let mut sorted = y.to_vec();
    sort_values(&mut sorted);
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    if !(hi > lo) {
        return Err(DepthError::degenerate("all observations are identical"));
    }
    let min_gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&g| g > 0.0)
        .fold(f64::INFINITY, f64::min);
    let range = hi - lo;

    let mut search = Search {
        y,
        nu,
        best: LsFit {
            mu: lo,
            sigma: range,
            nu,
        },
        depth: -1.0,
    };
    let med = median_sorted(&sorted);
    let mad = mad_sorted(&sorted, med);
    if mad > 0.0 {
        search.offer(&[med], &[mad.ln()]);
    }
    let (ls0, ls1) = (min_gap.ln(), range.ln());
    let mut mu_step = range / (COARSE - 1) as f64;
    let mut ls_step = if ls1 > ls0 { (ls1 - ls0) / (COARSE - 1) as f64 } else { 1.0 };
    search.offer(&linspace(lo, hi, COARSE), &linspace(ls0, ls1.max(ls0 + ls_step), COARSE));
    for _ in 0..ROUNDS {
        let (m, ls) = (search.best.mu, search.best.sigma.ln());
        search.offer(
            &linspace(m - mu_step, m + mu_step, FINE),
            &linspace(ls - ls_step, ls + ls_step, FINE),
        );
        mu_step /= 10.0;
        ls_step /= 10.0;
    }
    Ok((search.best, LsDepthValue { value: search.depth }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    /// Minimum closed-halfplane fraction over `k` equally spaced normals.
    fn brute_force(g: &[[f64; 2]], k: usize) -> f64 {
        (0..k)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / k as f64;
                let u = [t.cos(), t.sin()];
                g.iter().filter(|v| u[0] * v[0] + u[1] * v[1] >= 0.0).count()
            })
            .min()
            .unwrap() as f64
            / g.len() as f64
    }

    #[test]
    fn gradient_examples() {
        let fit = LsFit::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(ls_gradients(&fit, &[-1.0, 1.0]), vec![[-1.0, 0.0], [1.0, 0.0]]);
        assert_eq!(ls_gradients(&fit, &[0.0]), vec![[0.0, -0.5]]);
        let wide = LsFit::new(0.0, 2.0, 1.0).unwrap();
        assert_eq!(ls_gradients(&wide, &[3.0])[0][0], 1.5);
    }

    #[test]
    fn depth_examples() {
        let fit = LsFit::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(ls_depth(&fit, &[-1.0, 1.0]).unwrap().value, 0.5);
        assert_eq!(ls_depth(&fit, &[0.0]).unwrap().value, 0.0);
        // All τ_i > 1 puts every gradient in the open first quadrant.
        assert_eq!(ls_depth(&fit, &[2.0, 3.0, 5.0]).unwrap().value, 0.0);
        assert!(LsFit::new(0.0, 0.0, 1.0).is_err());
        assert!(LsFit::new(0.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn sweep_matches_dense_directions() {
        let mut rng = crate::rng::stream_rng(12, 0);
        for case in 0..60 {
            let n = rng.random_range(1..=40);
            let y: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal) * 2.0).collect();
            let fit = LsFit::new(
                rng.random_range(-1.5..1.5),
                rng.random_range(0.2..3.0),
                rng.random_range(1.0..6.0),
            )
            .unwrap();
            let exact = ls_depth(&fit, &y).unwrap().value;
            let brute = brute_force(&ls_gradients(&fit, &y), 100_000);
            assert!(brute >= exact && brute - exact <= 1.0 / n as f64, "case {case}");
        }
    }

    #[test]
    fn permutation_and_equivariance() {
        let y = [-3.0, -1.0, 0.5, 0.75, 2.0, 4.0, 7.5, -0.25];
        let mut rev = y;
        rev.reverse();
        for (mu, sigma) in [(0.5, 1.0), (1.0, 2.5), (-1.0, 0.125)] {
            let fit = LsFit::new(mu, sigma, 1.0).unwrap();
            let d = ls_depth(&fit, &y).unwrap();
            assert_eq!(d, ls_depth(&fit, &rev).unwrap());
            // Dyadic data keep the transform exact in floating point.
            let (a, b) = (3.0, 4.0);
            let moved: Vec<f64> = y.iter().map(|v| a + b * v).collect();
            let fit2 = LsFit::new(a + b * mu, b * sigma, 1.0).unwrap();
            assert_eq!(d, ls_depth(&fit2, &moved).unwrap());
        }
    }

    #[test]
    fn constant_can_be_absorbed() {
        let mut rng = crate::rng::stream_rng(4, 0);
        for _ in 0..200 {
            let y: Vec<f64> = (0..25).map(|_| rng.sample(StandardNormal)).collect();
            let fit = LsFit::new(rng.random_range(-1.0..1.0), rng.random_range(0.3..2.0), 3.0).unwrap();
            let kept = ls_depth(&fit, &y).unwrap().value;
            assert_eq!(kept, depth_with_constant(&fit, &y, 1.0));
        }
    }

    #[test]
    fn contour_properties() {
        let y = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
        let mu = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let sigma = [0.5, 1.0, 2.0];
        let grid = ls_depth_contour(&y, &mu, &sigma, 1.0).unwrap();
        for row in &grid.z {
            for j in 0..mu.len() {
                assert_eq!(row[j], row[mu.len() - 1 - j]);
            }
        }
        let tiny = ls_depth_contour(&y, &[0.25], &[1e-6], 1.0).unwrap();
        assert_eq!(tiny.z, vec![vec![0.0]]);
        let one = ls_depth_contour(&y, &[0.0], &[1.0], 1.0).unwrap();
        let fit = LsFit::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(one.z[0][0], ls_depth(&fit, &y).unwrap().value);
        assert!(ls_depth_contour(&y, &[0.0], &[-1.0], 1.0).is_err());
    }

    #[test]
    fn student_median_on_normal_sample() {
        let mut rng = crate::rng::stream_rng(2014, 0);
        let y: Vec<f64> = (0..500).map(|_| rng.sample(StandardNormal)).collect();
        let (fit, depth) = ls_max_depth(&y, 1.0).unwrap();
        assert!(depth.value >= 0.30, "{}", depth.value);
        let mut s = y.clone();
        sort_values(&mut s);
        let med = median_sorted(&s);
        let seed = LsFit::new(med, mad_sorted(&s, med), 1.0).unwrap();
        assert!(depth.value >= ls_depth(&seed, &y).unwrap().value);
        assert_eq!(depth.value, ls_depth(&fit, &y).unwrap().value);
    }

    #[test]
    fn student_median_is_scale_equivariant() {
        let mut rng = crate::rng::stream_rng(77, 0);
        let y: Vec<f64> = (0..60).map(|_| rng.sample(StandardNormal)).collect();
        let (fit, d) = ls_max_depth(&y, 2.0).unwrap();
        let scaled: Vec<f64> = y.iter().map(|v| 4.0 * v).collect();
        let (fit2, d2) = ls_max_depth(&scaled, 2.0).unwrap();
        assert_eq!(d, d2);
        assert_eq!(fit2.mu, 4.0 * fit.mu);
        assert!((fit2.sigma - 4.0 * fit.sigma).abs() <= 1e-12 * fit2.sigma);
        let shifted: Vec<f64> = y.iter().map(|v| v + 10.0).collect();
        let (fit3, d3) = ls_max_depth(&shifted, 2.0).unwrap();
        assert_eq!(d, d3);
        assert!((fit3.mu - (fit.mu + 10.0)).abs() < 1e-9);
        assert!((fit3.sigma - fit.sigma).abs() < 1e-9 * fit.sigma);
    }

    #[test]
    fn student_median_rejects_constant_samples() {
        assert!(matches!(ls_max_depth(&[2.0, 2.0, 2.0], 1.0).unwrap_err(), DepthError::Degenerate(_)));
        assert!(ls_max_depth(&[1.0], 1.0).is_err());
    }
}
