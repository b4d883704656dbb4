//! Univariate quantiles and the one-dimensional central regions used to build
//! multivariate depths through projections.

use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// `None` when the bounds cross, i.e. the empty interval.
    pub fn new(lo: f64, hi: f64) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn contains(&self, z: f64) -> bool {
        self.lo <= z && z <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

fn check_prob(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(DepthError::invalid(format!(
            "probability must lie in (0, 1), got {p}"
        )));
    }
    Ok(())
}

/// Smallest k in 1..=n with k/n >= p, for p in (0, 1].
fn lower_rank(n: usize, p: f64) -> usize {
    let nf = n as f64;
    let mut k = (p * nf).ceil().clamp(1.0, nf) as usize;
    while k > 1 && (k - 1) as f64 / nf >= p {
        k -= 1;
    }
    while k < n && (k as f64) / nf < p {
        k += 1;
    }
    k
}

/// `min{x : F_n(x) >= p}` over a sorted sample.
pub fn lower_quantile(sorted: &[f64], p: f64) -> Result<f64> {
    check_prob(p)?;
    if sorted.is_empty() {
        return Err(DepthError::EmptyInput);
    }
    Ok(sorted[lower_rank(sorted.len(), p) - 1])
}

/// `max{x : P(X >= x) >= p}` over a sorted sample.
pub fn upper_quantile(sorted: &[f64], p: f64) -> Result<f64> {
    check_prob(p)?;
    if sorted.is_empty() {
        return Err(DepthError::EmptyInput);
    }
    let n = sorted.len();
    Ok(sorted[n - lower_rank(n, p)])
}

/// Median of a sorted, non-empty slice; mean of the central pair for even n.
pub fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

pub fn sort_values(values: &mut [f64]) {
    values.sort_unstable_by(f64::total_cmp);
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    sort_values(&mut v);
    median_sorted(&v)
}

/// Sample quantile by linear interpolation between order statistics at
/// position `(n − 1)p`, for `p` in [0, 1].
pub fn interpolated_quantile(sorted: &[f64], p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(DepthError::invalid(format!("probability must lie in [0, 1], got {p}")));
    }
    if sorted.is_empty() {
        return Err(DepthError::EmptyInput);
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    Ok(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

/// Median absolute deviation about the median, without consistency constant.
/// Median by selection; reorders `values`. Equal to [`median_sorted`] of
/// the sorted values.
pub fn median_select(values: &mut [f64]) -> f64 {
    let n = values.len();
    let (lower, upper, _) = values.select_nth_unstable_by(n / 2, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (below + upper)
    }
}

pub fn mad_sorted(sorted: &[f64], med: f64) -> f64 {
    let mut dev: Vec<f64> = sorted.iter().map(|x| (x - med).abs()).collect();
    sort_values(&mut dev);
    median_sorted(&dev)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionFlavor {
    /// `[Q(α), Q̄(α)]`
    TukeyIntervals,
    /// Tail means `[(1/α)∫₀^α Q, (1/α)∫₀^α Q̄]`
    ZonoidIntervals,
    /// `med ± c(α)·MAD` with `c(α) = (1 − α)/α`
    ProjectionIntervals,
}

/// A univariate sample together with the family of nested central intervals
/// of one flavor.
#[derive(Clone, Debug)]
pub struct RegionFamily1D {
    flavor: RegionFlavor,
    sorted: Vec<f64>,
    /// prefix[k] = sum of the k smallest values (zonoid only).
    prefix: Vec<f64>,
    med: f64,
    mad: f64,
}

impl RegionFamily1D {
    pub fn new(flavor: RegionFlavor, mut sample: Vec<f64>) -> Result<Self> {
        if sample.is_empty() {
            return Err(DepthError::EmptyInput);
        }
        if sample.iter().any(|v| !v.is_finite()) {
            return Err(DepthError::invalid("sample contains non-finite values"));
        }
        sort_values(&mut sample);
        Ok(Self::from_sorted(flavor, sample))
    }

    pub(crate) fn from_sorted(flavor: RegionFlavor, sorted: Vec<f64>) -> Self {
        let (med, mad) = if flavor == RegionFlavor::ProjectionIntervals {
            let med = median_sorted(&sorted);
            (med, mad_sorted(&sorted, med))
        } else {
            (f64::NAN, f64::NAN)
        };
        let prefix = if flavor == RegionFlavor::ZonoidIntervals {
            let mut acc = 0.0;
            std::iter::once(0.0)
                .chain(sorted.iter().map(|v| {
                    acc += v;
                    acc
                }))
                .collect()
        } else {
            Vec::new()
        };
        Self {
            flavor,
            sorted,
            prefix,
            med,
            mad,
        }
    }

    pub fn flavor(&self) -> RegionFlavor {
        self.flavor
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    fn n(&self) -> usize {
        self.sorted.len()
    }

    /// Central interval at level `alpha ∈ (0, 1]`; `None` is the empty set.
    pub fn region(&self, alpha: f64) -> Result<Option<Interval>> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(DepthError::invalid(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        let n = self.n();
        Ok(match self.flavor {
            RegionFlavor::TukeyIntervals => {
                let k = lower_rank(n, alpha);
                Interval::new(self.sorted[k - 1], self.sorted[n - k])
            }
            RegionFlavor::ZonoidIntervals => {
                Interval::new(self.lower_tail_mean(alpha), self.upper_tail_mean(alpha))
            }
            RegionFlavor::ProjectionIntervals => {
                let c = (1.0 - alpha) / alpha;
                Interval::new(self.med - c * self.mad, self.med + c * self.mad)
            }
        })
    }

    /// `(1/α)∫₀^α Q(p) dp`, exact for the step-function empirical quantile.
    fn lower_tail_mean(&self, alpha: f64) -> f64 {
        let n = self.n();
        let nf = n as f64;
        let k = ((alpha * nf).floor() as usize).min(n);
        let mut integral = self.prefix[k] / nf;
        if k < n {
            integral += (alpha - k as f64 / nf) * self.sorted[k];
        }
        integral / alpha
    }

    fn upper_tail_mean(&self, alpha: f64) -> f64 {
        let n = self.n();
        let nf = n as f64;
        let k = ((alpha * nf).floor() as usize).min(n);
        let total = self.prefix[n];
        let mut integral = (total - self.prefix[n - k]) / nf;
        if k < n {
            integral += (alpha - k as f64 / nf) * self.sorted[n - 1 - k];
        }
        integral / alpha
    }

    /// `sup{α : z ∈ Z_α}`, zero when z lies outside every region.
    pub fn depth(&self, z: f64) -> f64 {
        match self.flavor {
            RegionFlavor::TukeyIntervals => self.tukey_depth(z),
            RegionFlavor::ZonoidIntervals => self.zonoid_depth(z),
            RegionFlavor::ProjectionIntervals => {
                if self.mad > 0.0 {
                    1.0 / (1.0 + (z - self.med).abs() / self.mad)
                } else if z == self.med {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Regions are constant on ((k−1)/n, k/n], so the sup is k/n for the
    /// largest k whose region still contains z. Membership is monotone in k.
    fn tukey_depth(&self, z: f64) -> f64 {
        let n = self.n();
        let s = &self.sorted;
        let contains = |k: usize| s[k - 1] <= z && z <= s[n - k];
        if !contains(1) {
            return 0.0;
        }
        let (mut lo, mut hi) = (1, n);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if contains(mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo as f64 / n as f64
    }

    fn zonoid_depth(&self, z: f64) -> f64 {
        let n = self.n();
        let s = &self.sorted;
        if z < s[0] || z > s[n - 1] {
            return 0.0;
        }
        let total = self.prefix[n];
        let nf = n as f64;
        let mean = total / nf;
        if z <= mean {
            // Largest k with mean of the k smallest values <= z.
            let below = |k: usize| self.prefix[k] <= z * k as f64;
            let k = last_true(n, below);
            if k == n {
                return 1.0;
            }
            let next = s[k];
            let alpha = (k as f64 * next - self.prefix[k]) / (nf * (next - z));
            alpha.clamp(k as f64 / nf, (k + 1) as f64 / nf)
        } else {
            let above = |k: usize| total - self.prefix[n - k] >= z * k as f64;
            let k = last_true(n, above);
            if k == n {
                return 1.0;
            }
            let next = s[n - 1 - k];
            let upper_sum = total - self.prefix[n - k];
            let alpha = (upper_sum - k as f64 * next) / (nf * (z - next));
            alpha.clamp(k as f64 / nf, (k + 1) as f64 / nf)
        }
    }
}

/// Largest k in 1..=n with pred(k), given pred(1) holds and pred is monotone
/// (true then false).
fn last_true(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (1, n);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}
