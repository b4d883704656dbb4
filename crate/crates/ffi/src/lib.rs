//! C ABI for depthlab.
//!
//! Every fallible function returns a [`DlStatus`]; on failure the message is
//! available from [`dl_last_error_message`] on the same thread until the next
//! failing call. Matrices cross the boundary as opaque [`DlMatrix`] handles
//! owned by the caller and released with [`dl_matrix_free`]. Output buffers
//! are caller-allocated and their lengths are checked.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use depthlab::inference::Alternative;
use depthlab::{DataMatrix, DepthError, DepthKind, MethodDescriptor, SimpleFit};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Malformed or non-numeric input data.
    Data = 3,
    DimensionMismatch = 4,
    Singular = 5,
    Degenerate = 6,
    Io = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlDepthKind {
    Euclidean = 0,
    Mahalanobis = 1,
    Projection = 2,
    Tukey = 3,
    Zonoid = 4,
    Lp = 5,
    Local = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlAlternative {
    TwoSided = 0,
    Greater = 1,
    Less = 2,
}

/// Depth method and tuning parameters; start from [`dl_method_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DlMethod {
    pub kind: DlDepthKind,
    /// Depth localized when `kind` is `Local`.
    pub local_base: DlDepthKind,
    pub p: f64,
    pub beta: f64,
    pub nproj: usize,
    pub seed: u64,
    pub weight_a: f64,
    pub weight_b: f64,
}

/// Simple regression line `y = intercept + slope·x`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct DlFit {
    pub intercept: f64,
    pub slope: f64,
    /// Regression depth of the line on the fitted data.
    pub depth: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct DlWilcoxon {
    pub statistic: f64,
    pub p_value: f64,
    pub expected: f64,
    pub variance: f64,
}

/// Opaque row-major numeric matrix.
pub struct DlMatrix(DataMatrix);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(DlStatus, String);

impl From<DepthError> for Failure {
    fn from(e: DepthError) -> Self {
        let status = match &e {
            DepthError::InvalidArgument(_) => DlStatus::InvalidArgument,
            DepthError::DimensionMismatch { .. } => DlStatus::DimensionMismatch,
            DepthError::Singular { .. } => DlStatus::Singular,
            DepthError::Degenerate(_) => DlStatus::Degenerate,
            DepthError::Io(_) => DlStatus::Io,
            _ => DlStatus::Data,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> DlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DlStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            DlStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(DlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn matrix<'a>(m: *const DlMatrix, what: &str) -> Result<&'a DataMatrix, Failure> {
    m.as_ref().map(|m| &m.0).ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, need: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    if len < need {
        return Err(Failure(
            DlStatus::BufferTooSmall,
            format!("{what} holds {len} values, {need} needed"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(p, need))
}

unsafe fn write<T>(p: *mut T, v: T, what: &str) -> Outcome {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

fn kind(k: DlDepthKind) -> DepthKind {
    match k {
        DlDepthKind::Euclidean => DepthKind::Euclidean,
        DlDepthKind::Mahalanobis => DepthKind::Mahalanobis,
        DlDepthKind::Projection => DepthKind::Projection,
        DlDepthKind::Tukey => DepthKind::Tukey,
        DlDepthKind::Zonoid => DepthKind::Zonoid,
        DlDepthKind::Lp => DepthKind::LP,
        DlDepthKind::Local => DepthKind::Local,
    }
}

unsafe fn method(m: *const DlMethod) -> Result<MethodDescriptor, Failure> {
    let m = m.as_ref().ok_or_else(|| null("method"))?;
    let d = MethodDescriptor {
        kind: kind(m.kind),
        local_base: kind(m.local_base),
        p: m.p,
        beta: m.beta,
        nproj: m.nproj,
        seed: m.seed,
        weight_a: m.weight_a,
        weight_b: m.weight_b,
        ..MethodDescriptor::default()
    };
    d.validate()?;
    Ok(d)
}

fn fit(f: SimpleFit) -> DlFit {
    DlFit {
        intercept: f.intercept,
        slope: f.slope,
        depth: f.depth.unwrap_or(f64::NAN),
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Projection depth with 1000 directions and the default seed.
#[no_mangle]
pub extern "C" fn dl_method_default() -> DlMethod {
    let d = MethodDescriptor::default();
    DlMethod {
        kind: DlDepthKind::Projection,
        local_base: DlDepthKind::Projection,
        p: d.p,
        beta: d.beta,
        nproj: d.nproj,
        seed: d.seed,
        weight_a: d.weight_a,
        weight_b: d.weight_b,
    }
}

/// Copies `rows × cols` row-major values into a new matrix.
#[no_mangle]
pub unsafe extern "C" fn dl_matrix_new(
    rows: usize,
    cols: usize,
    values: *const f64,
    out: *mut *mut DlMatrix,
) -> DlStatus {
    guard(|| {
        let len = rows.checked_mul(cols).ok_or_else(|| Failure(DlStatus::InvalidArgument, "matrix too large".into()))?;
        let v = slice(values, len, "values")?.to_vec();
        let m = DataMatrix::new(rows, cols, v)?;
        write(out, Box::into_raw(Box::new(DlMatrix(m))), "out")
    })
}

/// Reads a numeric CSV file; `header` non-zero skips the first row.
#[no_mangle]
pub unsafe extern "C" fn dl_matrix_from_csv(path: *const c_char, header: i32, out: *mut *mut DlMatrix) -> DlStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure(DlStatus::InvalidArgument, "path is not valid UTF-8".into()))?;
        let file = std::fs::File::open(path).map_err(|e| Failure(DlStatus::Io, format!("{path}: {e}")))?;
        let m = depthlab::load_matrix(std::io::BufReader::new(file), header != 0)?;
        write(out, Box::into_raw(Box::new(DlMatrix(m))), "out")
    })
}

/// Releases a matrix; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dl_matrix_free(m: *mut DlMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Zero for a null handle.
#[no_mangle]
pub unsafe extern "C" fn dl_matrix_rows(m: *const DlMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.nrows())
}

/// Zero for a null handle.
#[no_mangle]
pub unsafe extern "C" fn dl_matrix_cols(m: *const DlMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.ncols())
}

/// Copies the values row-major into `out`, which must hold rows × cols.
#[no_mangle]
pub unsafe extern "C" fn dl_matrix_data(m: *const DlMatrix, out: *mut f64, out_len: usize) -> DlStatus {
    guard(|| {
        let m = matrix(m, "matrix")?;
        out_slice(out, out_len, m.as_slice().len(), "out")?.copy_from_slice(m.as_slice());
        Ok(())
    })
}

/// Depth of every row of `points` w.r.t. `reference`; `out` holds one value
/// per row of `points`.
#[no_mangle]
pub unsafe extern "C" fn dl_depth(
    points: *const DlMatrix,
    reference: *const DlMatrix,
    method: *const DlMethod,
    out: *mut f64,
    out_len: usize,
) -> DlStatus {
    guard(|| {
        let (p, r) = (matrix(points, "points")?, matrix(reference, "reference")?);
        let m = self::method(method)?;
        let dst = out_slice(out, out_len, p.nrows(), "out")?;
        dst.copy_from_slice(&depthlab::depth_values(p, r, &m)?);
        Ok(())
    })
}

/// Deepest point; `out` holds one value per column.
#[no_mangle]
pub unsafe extern "C" fn dl_depth_median(x: *const DlMatrix, method: *const DlMethod, out: *mut f64, out_len: usize) -> DlStatus {
    guard(|| {
        let x = matrix(x, "x")?;
        let m = self::method(method)?;
        let dst = out_slice(out, out_len, x.ncols(), "out")?;
        dst.copy_from_slice(&depthlab::depth_median(x, &m)?);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn dl_deepest_regression(x: *const f64, y: *const f64, n: usize, out: *mut DlFit) -> DlStatus {
    guard(|| {
        let f = depthlab::deepest_regression(slice(x, n, "x")?, slice(y, n, "y")?)?;
        write(out, fit(f), "out")
    })
}

/// Least squares on the observations whose projection depth of (x, y)
/// exceeds the `alpha` depth quantile.
#[no_mangle]
pub unsafe extern "C" fn dl_trim_proj_reg(
    x: *const f64,
    y: *const f64,
    n: usize,
    alpha: f64,
    method: *const DlMethod,
    out: *mut DlFit,
) -> DlStatus {
    guard(|| {
        let m = self::method(method)?;
        let f = depthlab::trim_proj_reg(slice(x, n, "x")?, slice(y, n, "y")?, alpha, &m)?;
        write(out, fit(f), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn dl_wilcoxon(
    x: *const DlMatrix,
    y: *const DlMatrix,
    method: *const DlMethod,
    alternative: DlAlternative,
    out: *mut DlWilcoxon,
) -> DlStatus {
    guard(|| {
        let m = self::method(method)?;
        let alt = match alternative {
            DlAlternative::TwoSided => Alternative::TwoSided,
            DlAlternative::Greater => Alternative::Greater,
            DlAlternative::Less => Alternative::Less,
        };
        let r = depthlab::inference::m_wilcoxon_test(matrix(x, "x")?, matrix(y, "y")?, &m, alt)?;
        write(
            out,
            DlWilcoxon {
                statistic: r.statistic,
                p_value: r.p_value,
                expected: r.expected,
                variance: r.variance,
            },
            "out",
        )
    })
}

/// L^p depth weighted location (d values) and scatter (d×d, row-major).
#[no_mangle]
pub unsafe extern "C" fn dl_cov_lp(
    x: *const DlMatrix,
    p: f64,
    a: f64,
    b: f64,
    location: *mut f64,
    location_len: usize,
    scatter: *mut f64,
    scatter_len: usize,
) -> DlStatus {
    guard(|| {
        let x = matrix(x, "x")?;
        let d = x.ncols();
        let loc = out_slice(location, location_len, d, "location")?;
        let sc = out_slice(scatter, scatter_len, d * d, "scatter")?;
        let est = depthlab::cov_lp(x, p, a, b)?;
        loc.copy_from_slice(&est.location);
        for (dst, row) in sc.chunks_mut(d).zip(&est.scatter) {
            dst.copy_from_slice(row);
        }
        Ok(())
    })
}

/// Student median of a univariate sample.
#[no_mangle]
pub unsafe extern "C" fn dl_ls_max_depth(
    y: *const f64,
    n: usize,
    nu: f64,
    mu: *mut f64,
    sigma: *mut f64,
    depth: *mut f64,
) -> DlStatus {
    guard(|| {
        if mu.is_null() || sigma.is_null() || depth.is_null() {
            return Err(null("output"));
        }
        let (fit, value) = depthlab::ls_max_depth(slice(y, n, "y")?, nu)?;
        write(mu, fit.mu, "mu")?;
        write(sigma, fit.sigma, "sigma")?;
        write(depth, value.value, "depth")
    })
}
