//! Sample containers, method descriptors and projection sets shared by every
//! depth routine.

use std::io::{Read, Write};

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};
use crate::rng::{stream_rng, STREAM_PROJECTIONS};

/// Dense row-major matrix of `rows` observations in `cols` coordinates.
///
/// Construction rejects empty shapes and non-finite entries, so every
/// downstream routine may assume finite data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(DepthError::EmptyInput);
        }
        if values.len() != rows * cols {
            return Err(DepthError::invalid(format!(
                "{} values do not fill a {rows}x{cols} matrix",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(DepthError::NonFinite {
                row: pos / cols + 1,
                col: pos % cols + 1,
            });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(DepthError::EmptyInput)?;
        let cols = first.as_ref().len();
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(DepthError::RaggedRow {
                    row: i + 1,
                    expected: cols,
                    found: r.len(),
                });
            }
            values.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, values)
    }

    /// A single-column matrix.
    pub fn from_column(values: &[f64]) -> Result<Self> {
        Self::new(values.len(), 1, values.to_vec())
    }

    /// Two-column matrix from paired coordinate vectors.
    pub fn from_pairs(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(DepthError::invalid(format!(
                "paired vectors differ in length ({} vs {})",
                x.len(),
                y.len()
            )));
        }
        let values = x.iter().zip(y).flat_map(|(a, b)| [*a, *b]).collect();
        Self::new(x.len(), 2, values)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.cols)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Rows at `indices`, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Self::new(indices.len(), self.cols, values)
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &DataMatrix) -> Result<Self> {
        self.check_cols(other.cols)?;
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        Self::new(self.rows + other.rows, self.cols, values)
    }

    /// Apply `f` to every row, producing a matrix of the same shape.
    pub fn map_rows(&self, mut f: impl FnMut(&[f64], &mut [f64])) -> Result<Self> {
        let mut values = vec![0.0; self.values.len()];
        for (src, dst) in self.rows().zip(values.chunks_exact_mut(self.cols)) {
            f(src, dst);
        }
        Self::new(self.rows, self.cols, values)
    }

    pub(crate) fn check_cols(&self, cols: usize) -> Result<()> {
        if self.cols != cols {
            return Err(DepthError::DimensionMismatch {
                expected: self.cols,
                found: cols,
            });
        }
        Ok(())
    }
}

/// Parse a CSV stream of numeric fields into a [`DataMatrix`].
///
/// Rows must all have the same number of fields. Row numbers in errors are
/// 1-based line numbers of the input.
pub fn load_matrix<R: Read>(source: R, has_header: bool) -> Result<DataMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut cols = None;
    let mut values = Vec::new();
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| DepthError::Csv {
            row: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let expected = *cols.get_or_insert(record.len());
        if record.len() != expected {
            return Err(DepthError::RaggedRow {
                row: line,
                expected,
                found: record.len(),
            });
        }
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| DepthError::NonNumeric {
                row: line,
                col: j + 1,
                text: field.to_string(),
            })?;
            if !v.is_finite() {
                return Err(DepthError::NonFinite { row: line, col: j + 1 });
            }
            values.push(v);
        }
        rows += 1;
    }
    let cols = cols.ok_or(DepthError::EmptyInput)?;
    DataMatrix::new(rows, cols, values)
}

/// Write `m` as CSV using shortest round-trip float formatting.
pub fn save_matrix<W: Write>(mut sink: W, m: &DataMatrix, header: Option<&[&str]>) -> Result<()> {
    if let Some(h) = header {
        writeln!(sink, "{}", h.join(","))?;
    }
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(sink, "{}", line.join(","))?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DepthKind {
    Euclidean,
    Mahalanobis,
    Projection,
    Tukey,
    Zonoid,
    LP,
    Local,
    StudentLS,
}

impl DepthKind {
    pub fn name(self) -> &'static str {
        match self {
            DepthKind::Euclidean => "Euclidean",
            DepthKind::Mahalanobis => "Mahalanobis",
            DepthKind::Projection => "Projection",
            DepthKind::Tukey => "Tukey",
            DepthKind::Zonoid => "Zonoid",
            DepthKind::LP => "LP",
            DepthKind::Local => "Local",
            DepthKind::StudentLS => "StudentLS",
        }
    }

    /// Whether evaluating this kind draws random projection directions.
    pub fn uses_projections(self) -> bool {
        matches!(
            self,
            DepthKind::Projection | DepthKind::Tukey | DepthKind::Zonoid
        )
    }
}

impl std::str::FromStr for DepthKind {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "euclidean" => DepthKind::Euclidean,
            "mahalanobis" => DepthKind::Mahalanobis,
            "projection" => DepthKind::Projection,
            "tukey" | "halfspace" => DepthKind::Tukey,
            "zonoid" => DepthKind::Zonoid,
            "lp" => DepthKind::LP,
            "local" => DepthKind::Local,
            "studentls" | "student" => DepthKind::StudentLS,
            other => return Err(DepthError::invalid(format!("unknown depth method {other:?}"))),
        })
    }
}

/// Weight function applied to distances in the weighted L^p depth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LpWeight {
    /// w(x) = a + b·x
    Affine { a: f64, b: f64 },
    /// w(x) = x^exponent
    Power { exponent: f64 },
}

impl LpWeight {
    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self {
            LpWeight::Affine { a, b } => a + b * x,
            LpWeight::Power { exponent } => x.powf(exponent),
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            LpWeight::Affine { a, b } => {
                if !(a >= 0.0 && b >= 0.0 && a + b > 0.0) {
                    return Err(DepthError::invalid(format!(
                        "weight w(x)=a+b*x needs a,b >= 0 and a+b > 0 (a={a}, b={b})"
                    )));
                }
            }
            LpWeight::Power { exponent } => {
                if !(exponent > 0.0 && exponent.is_finite()) {
                    return Err(DepthError::invalid(format!(
                        "power weight exponent must be positive, got {exponent}"
                    )));
                }
            }
        }
        Ok(())
    }
}

pub const DEFAULT_SEED: u64 = 20140214;
pub const DEFAULT_NPROJ: usize = 1000;

/// Which depth to compute and with which tuning parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MethodDescriptor {
    pub kind: DepthKind,
    /// Exponent of the L^p norm.
    pub p: f64,
    /// Locality for `Local`.
    pub beta: f64,
    pub nproj: usize,
    pub seed: u64,
    pub weight_a: f64,
    pub weight_b: f64,
    /// When set, the L^p weight is `x^weight_power` instead of `a + b·x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_power: Option<f64>,
    /// Global depth localized by `Local`.
    pub local_base: DepthKind,
    /// Degrees of freedom for `StudentLS`.
    pub nu: f64,
}

impl Default for MethodDescriptor {
    fn default() -> Self {
        Self {
            kind: DepthKind::Projection,
            p: 2.0,
            beta: 0.5,
            nproj: DEFAULT_NPROJ,
            seed: DEFAULT_SEED,
            weight_a: 1.0,
            weight_b: 1.0,
            weight_power: None,
            local_base: DepthKind::Projection,
            nu: 1.0,
        }
    }
}

impl MethodDescriptor {
    pub fn new(kind: DepthKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_nproj(mut self, nproj: usize) -> Self {
        self.nproj = nproj;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_local_base(mut self, base: DepthKind) -> Self {
        self.local_base = base;
        self
    }

    pub fn with_weight(mut self, a: f64, b: f64) -> Self {
        self.weight_a = a;
        self.weight_b = b;
        self.weight_power = None;
        self
    }

    pub fn lp_weight(&self) -> LpWeight {
        match self.weight_power {
            Some(exponent) => LpWeight::Power { exponent },
            None => LpWeight::Affine {
                a: self.weight_a,
                b: self.weight_b,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0) {
            return Err(DepthError::invalid(format!("p must be >= 1, got {}", self.p)));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(DepthError::invalid(format!(
                "beta must lie in (0, 1], got {}",
                self.beta
            )));
        }
        if self.nproj == 0 {
            return Err(DepthError::invalid("nproj must be at least 1"));
        }
        if !(self.nu >= 1.0 && self.nu.is_finite()) {
            return Err(DepthError::invalid(format!("nu must be >= 1, got {}", self.nu)));
        }
        if matches!(self.local_base, DepthKind::Local | DepthKind::StudentLS) {
            return Err(DepthError::invalid(format!(
                "{} cannot serve as the base of a local depth",
                self.local_base.name()
            )));
        }
        self.lp_weight().validate()
    }
}

/// Depth values of a set of evaluated points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthVector {
    pub values: Vec<f64>,
    pub method: MethodDescriptor,
}

/// `nproj` unit directions in R^d drawn from a seeded stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSet {
    dim: usize,
    seed: u64,
    directions: Vec<f64>,
}

impl ProjectionSet {
    /// Draw `nproj` i.i.d. uniform directions on the unit sphere of R^d.
    ///
    /// Directions are normalized standard Gaussian vectors taken in order
    /// from a single stream, so a smaller set is always a prefix of a larger
    /// one with the same seed.
    pub fn sample(dim: usize, nproj: usize, seed: u64) -> Result<Self> {
        if dim == 0 || nproj == 0 {
            return Err(DepthError::invalid(format!(
                "sphere sampling needs d >= 1 and nproj >= 1 (d={dim}, nproj={nproj})"
            )));
        }
        let mut rng = stream_rng(seed, STREAM_PROJECTIONS);
        let mut directions = Vec::with_capacity(dim * nproj);
        let mut buf = vec![0.0; dim];
        while directions.len() < dim * nproj {
            for v in buf.iter_mut() {
                *v = StandardNormal.sample(&mut rng);
            }
            let norm = buf.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-300 {
                continue;
            }
            directions.extend(buf.iter().map(|v| v / norm));
        }
        Ok(Self {
            dim,
            seed,
            directions,
        })
    }

    /// Wrap explicit directions; each must have unit Euclidean norm.
    pub fn from_directions(dim: usize, directions: Vec<f64>) -> Result<Self> {
        if dim == 0 || directions.is_empty() || !directions.len().is_multiple_of(dim) {
            return Err(DepthError::invalid("directions must fill whole d-vectors"));
        }
        for u in directions.chunks_exact(dim) {
            let norm = dot(u, u).sqrt();
            if !((norm - 1.0).abs() <= 1e-12) {
                return Err(DepthError::invalid(format!("direction norm {norm} is not 1")));
            }
        }
        Ok(Self {
            dim,
            seed: 0,
            directions,
        })
    }

    pub fn for_method(dim: usize, method: &MethodDescriptor) -> Result<Self> {
        Self::sample(dim, method.nproj, method.seed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.directions.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn direction(&self, k: usize) -> &[f64] {
        &self.directions[k * self.dim..(k + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.directions.chunks_exact(self.dim)
    }

    /// The first `k` directions.
    pub fn prefix(&self, k: usize) -> Self {
        let k = k.min(self.len());
        Self {
            dim: self.dim,
            seed: self.seed,
            directions: self.directions[..k * self.dim].to_vec(),
        }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_plain_csv() {
        let m = load_matrix("1,2\n3,4".as_bytes(), false).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (2, 2));
        assert_eq!(m.as_slice(), &[1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn skips_header() {
        let m = load_matrix("x,y\n1,2".as_bytes(), true).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (1, 2));
        assert_eq!(m.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn crlf_and_spaces() {
        let m = load_matrix("1, 2\r\n3 ,4\r\n".as_bytes(), false).unwrap();
        assert_eq!(m.as_slice(), &[1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn ragged_row_reports_position() {
        let err = load_matrix("1,2\n3".as_bytes(), false).unwrap_err();
        match err {
            DepthError::RaggedRow {
                row,
                expected,
                found,
            } => assert_eq!((row, expected, found), (2, 2, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_numeric_and_empty() {
        let err = load_matrix("1,2\n3,abc".as_bytes(), false).unwrap_err();
        assert!(matches!(err, DepthError::NonNumeric { row: 2, col: 2, .. }));
        assert!(matches!(
            load_matrix("".as_bytes(), false).unwrap_err(),
            DepthError::EmptyInput
        ));
        assert!(matches!(
            load_matrix("a,b\n".as_bytes(), true).unwrap_err(),
            DepthError::EmptyInput
        ));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            load_matrix("1,NaN".as_bytes(), false).unwrap_err(),
            DepthError::NonFinite { row: 1, col: 2 }
        ));
        assert!(DataMatrix::new(1, 1, vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn sphere_directions_are_unit_and_reproducible() {
        let a = ProjectionSet::sample(3, 1000, 42).unwrap();
        let b = ProjectionSet::sample(3, 1000, 42).unwrap();
        assert_eq!(a, b);
        for u in a.iter() {
            let n = dot(u, u).sqrt();
            assert!((n - 1.0).abs() <= 1e-12);
        }
        let small = ProjectionSet::sample(3, 10, 42).unwrap();
        assert_eq!(small, a.prefix(10));
    }

    #[test]
    fn sphere_in_one_dimension_is_signs() {
        let s = ProjectionSet::sample(1, 200, 3).unwrap();
        assert!(s.iter().all(|u| u[0] == 1.0 || u[0] == -1.0));
        assert!(s.iter().any(|u| u[0] == 1.0) && s.iter().any(|u| u[0] == -1.0));
    }

    #[test]
    fn sphere_mean_vanishes() {
        let nproj = 100_000;
        let s = ProjectionSet::sample(2, nproj, 7).unwrap();
        let mut mean = [0.0; 2];
        for u in s.iter() {
            mean[0] += u[0];
            mean[1] += u[1];
        }
        mean.iter_mut().for_each(|m| *m /= nproj as f64);
        let bound = 3.0 / (nproj as f64).sqrt();
        assert!(mean[0].abs() < bound && mean[1].abs() < bound, "{mean:?}");
        assert!((mean[0].hypot(mean[1])) < 0.02);
    }

    #[test]
    fn sphere_rejects_bad_shape() {
        assert!(ProjectionSet::sample(0, 5, 1).is_err());
        assert!(ProjectionSet::sample(2, 0, 1).is_err());
    }

    #[test]
    fn method_validation() {
        assert!(MethodDescriptor::default().validate().is_ok());
        let m = MethodDescriptor {
            p: 0.5,
            ..MethodDescriptor::default()
        };
        assert!(m.validate().is_err());
        let m = MethodDescriptor::default().with_beta(0.0);
        assert!(m.validate().is_err());
        let m = MethodDescriptor::default().with_nproj(0);
        assert!(m.validate().is_err());
        let m = MethodDescriptor::default().with_weight(0.0, 0.0);
        assert!(m.validate().is_err());
        assert_eq!("tukey".parse::<DepthKind>().unwrap(), DepthKind::Tukey);
        assert!("oja".parse::<DepthKind>().is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip(rows in 1usize..8, cols in 1usize..5, seed in any::<u64>()) {
            use rand::Rng;
            let mut rng = stream_rng(seed, 9);
            let values: Vec<f64> = (0..rows * cols)
                .map(|_| rng.random_range(-1e6..1e6) * 10f64.powi(rng.random_range(-8..8)))
                .collect();
            let m = DataMatrix::new(rows, cols, values).unwrap();
            let mut buf = Vec::new();
            save_matrix(&mut buf, &m, None).unwrap();
            let back = load_matrix(buf.as_slice(), false).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
