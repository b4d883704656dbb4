//! Command-line front end.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for errors caused
//! by the input data.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::binning::{binning_depth_2d, lag_pairs};
use crate::data::{load_matrix, DataMatrix, DepthKind, MethodDescriptor, DEFAULT_NPROJ, DEFAULT_SEED};
use crate::depth::{contour_grid, depth_values, linspace, DepthGrid};
use crate::error::{DepthError, Result};
use crate::estimators::{bootstrap_median_region, cov_lp, depth_median};
use crate::inference::{asymmetry_curve, dd_mvnorm, dd_plot, m_wilcoxon_test, scale_curve, Alternative, CurveData, DDPlotData};
use crate::lsdepth::{ls_depth_contour, ls_max_depth};
use crate::regression::{deepest_regression, trim_proj_reg, SimpleFit};
use crate::svg::{self, Line, Overlay};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "depthlab", version, about = "Statistical data depth toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

fn parse_kind(s: &str) -> std::result::Result<DepthKind, String> {
    s.parse::<DepthKind>().map_err(|e| e.to_string())
}

fn parse_alternative(s: &str) -> std::result::Result<Alternative, String> {
    s.parse::<Alternative>().map_err(|e| e.to_string())
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Depth function: euclidean, mahalanobis, projection, tukey, zonoid, lp, local.
    #[arg(long, default_value = "projection", value_parser = parse_kind)]
    pub method: DepthKind,
    /// Depth localized by `--method local`.
    #[arg(long = "local-base", default_value = "projection", value_parser = parse_kind)]
    pub local_base: DepthKind,
    /// Exponent of the L^p norm.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// L^p weight w(x) = a + b·x: intercept.
    #[arg(long = "weight-a", default_value_t = 1.0, allow_negative_numbers = true)]
    pub weight_a: f64,
    /// L^p weight w(x) = a + b·x: slope.
    #[arg(long = "weight-b", default_value_t = 1.0, allow_negative_numbers = true)]
    pub weight_b: f64,
    /// Student-t degrees of freedom.
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    /// Number of random projection directions.
    #[arg(long, default_value_t = DEFAULT_NPROJ)]
    pub projections: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; zero or negative uses all cores.
    #[arg(long, env = "DEPTHLAB_THREADS", allow_negative_numbers = true)]
    pub threads: Option<i64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Input files start with a header row. Without the flag a first row
    /// with no numeric field is still taken as a header.
    #[arg(long)]
    pub header: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Depth of each row of --in w.r.t. --ref (default: --in itself).
    Depth {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "ref")]
        reference: Option<PathBuf>,
        /// Locality of local depth.
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Deepest sample point.
    Median {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Depth on a square grid over a bivariate sample.
    Contour {
        #[arg(long = "in")]
        input: PathBuf,
        /// Grid points per axis.
        #[arg(long, default_value_t = 50)]
        nbins: usize,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Student depth over a (mu, sigma) grid for a univariate sample.
    Lscontour {
        #[arg(long = "in")]
        input: PathBuf,
        /// Grid points per axis.
        #[arg(long, default_value_t = 50)]
        nbins: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Student median of a univariate sample.
    Lsmedian {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// DD-plot of two samples.
    Ddplot {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Center both samples at their depth medians first.
        #[arg(long)]
        center: bool,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// DD-plot against a fitted multivariate normal sample.
    Ddnorm {
        #[arg(long = "in")]
        input: PathBuf,
        /// Size of the normal sample (default: same as the input).
        #[arg(long)]
        size: Option<usize>,
        /// Fit the normal model with depth-weighted moments.
        #[arg(long)]
        robust: bool,
        /// Depth quantile below which observations get zero weight.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Depth-based rank-sum test.
    Wilcoxon {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// greater, less or two-sided.
        #[arg(long, default_value = "two-sided", value_parser = parse_alternative)]
        alternative: Alternative,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Area of the depth regions against the depth level.
    Scalecurve {
        #[arg(long = "in")]
        input: PathBuf,
        /// Number of equally spaced levels in [0, 1].
        #[arg(long, default_value_t = 50)]
        nbins: usize,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Standardized mean-median distance of the depth regions.
    Asymcurve {
        #[arg(long = "in")]
        input: PathBuf,
        /// Number of equally spaced levels in [0, 1].
        #[arg(long, default_value_t = 50)]
        nbins: usize,
        /// Use each region's own depth median.
        #[arg(long = "moving-median")]
        moving_median: bool,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Deepest simple regression of column 2 on column 1.
    Deepreg {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Least squares after trimming the least deep observations.
    Trimreg {
        #[arg(long = "in")]
        input: PathBuf,
        /// Trimming level in [0, 0.5).
        #[arg(long, default_value_t = 0.1)]
        trim: f64,
        #[command(flatten)]
        common: Common,
    },
    /// L^p depth weighted location and scatter.
    Covlp {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Robust 2D binning of a bivariate sample or of lagged pairs.
    Binning {
        #[arg(long = "in")]
        input: PathBuf,
        /// Number of breaks per axis.
        #[arg(long, default_value_t = 12)]
        nbins: usize,
        /// Bin lagged pairs of a single-column series.
        #[arg(long)]
        lag: Option<usize>,
        /// Fraction of deepest points spanned by the breaks.
        #[arg(long, default_value_t = 0.9)]
        beta: f64,
        #[arg(long = "remove-borders")]
        remove_borders: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Bootstrap region for the depth median.
    Bootmedian {
        #[arg(long = "in")]
        input: PathBuf,
        /// Number of bootstrap resamples.
        #[arg(long, default_value_t = 500)]
        bootstrap: usize,
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Depth { common, .. }
            | Command::Median { common, .. }
            | Command::Contour { common, .. }
            | Command::Lscontour { common, .. }
            | Command::Lsmedian { common, .. }
            | Command::Ddplot { common, .. }
            | Command::Ddnorm { common, .. }
            | Command::Wilcoxon { common, .. }
            | Command::Scalecurve { common, .. }
            | Command::Asymcurve { common, .. }
            | Command::Deepreg { common, .. }
            | Command::Trimreg { common, .. }
            | Command::Covlp { common, .. }
            | Command::Binning { common, .. }
            | Command::Bootmedian { common, .. } => common,
        }
    }
}

fn method(common: &Common, beta: f64) -> Result<MethodDescriptor> {
    let m = MethodDescriptor {
        kind: common.method,
        p: common.p,
        beta,
        nproj: common.projections,
        seed: common.seed,
        weight_a: common.weight_a,
        weight_b: common.weight_b,
        weight_power: None,
        local_base: common.local_base,
        nu: common.nu,
    };
    m.validate()?;
    Ok(m)
}

/// A first line with no numeric field is a header.
fn looks_like_header(text: &str) -> bool {
    text.lines()
        .find(|l| !l.trim().is_empty())
        .is_some_and(|l| l.split(',').all(|f| f.trim().parse::<f64>().is_err()))
}

fn read_matrix(path: &Path, header: bool) -> Result<DataMatrix> {
    // An unreadable input is a usage error; its contents are data.
    let text = std::fs::read_to_string(path)
        .map_err(|e| DepthError::invalid(format!("cannot read {}: {e}", path.display())))?;
    load_matrix(text.as_bytes(), header || looks_like_header(&text))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| DepthError::invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn unsupported(cmd: &str, format: Format) -> DepthError {
    DepthError::invalid(format!("{cmd} does not support --format {format:?}").to_lowercase())
}

fn csv_grid(grid: &DepthGrid, names: [&str; 3]) -> String {
    let mut s = format!("{}\n", names.join(","));
    for (i, y) in grid.ys.iter().enumerate() {
        for (j, x) in grid.xs.iter().enumerate() {
            let _ = writeln!(s, "{x:?},{y:?},{:?}", grid.z[i][j]);
        }
    }
    s
}

fn csv_dd(dd: &DDPlotData) -> String {
    let mut s = String::from("dx,dy,label\n");
    for ((a, b), l) in dd.points_x.iter().zip(&dd.points_y).zip(&dd.labels) {
        let _ = writeln!(s, "{a:?},{b:?},{l:?}");
    }
    s
}

fn csv_curve(c: &CurveData) -> String {
    let mut s = String::from("alpha,value\n");
    for (a, v) in c.alphas.iter().zip(&c.values) {
        let _ = writeln!(s, "{a:?},{v:?}");
    }
    s
}

fn csv_rows<'a>(header: &str, rows: impl Iterator<Item = &'a [f64]>) -> String {
    let mut s = format!("{header}\n");
    for r in rows {
        let cells: Vec<String> = r.iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

fn columns_header(prefix: &str, d: usize) -> String {
    (1..=d).map(|j| format!("{prefix}{j}")).collect::<Vec<_>>().join(",")
}

fn fit_output(name: &str, fit: &SimpleFit, data: &DataMatrix, format: Format) -> Result<String> {
    match format {
        Format::Json => json(fit),
        Format::Csv => Ok(format!(
            "intercept,slope,depth\n{:?},{:?},{:?}\n",
            fit.intercept,
            fit.slope,
            fit.depth.unwrap_or(f64::NAN)
        )),
        Format::Svg => {
            let line = Line {
                intercept: fit.intercept,
                slope: fit.slope,
                label: format!("{name}: {:.4} + {:.4}x", fit.intercept, fit.slope),
            };
            let lines = [line];
            svg::render_scatter(
                data,
                &Overlay {
                    lines: &lines,
                    ..Overlay::default()
                },
                name,
                "regression depth",
            )
        }
    }
}

fn two_columns(m: &DataMatrix, what: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    if m.ncols() != 2 {
        return Err(DepthError::DimensionMismatch {
            expected: 2,
            found: m.ncols(),
        })
        .map_err(|e| DepthError::invalid(format!("{what} needs two columns (x, y): {e}")));
    }
    Ok((m.column(0), m.column(1)))
}

fn one_column(m: &DataMatrix, what: &str) -> Result<Vec<f64>> {
    if m.ncols() != 1 {
        return Err(DepthError::invalid(format!(
            "{what} needs a single-column sample, got {} columns",
            m.ncols()
        )));
    }
    Ok(m.column(0))
}

fn levels(nbins: usize) -> Result<Vec<f64>> {
    if nbins < 2 {
        return Err(DepthError::invalid("--nbins must be at least 2"));
    }
    Ok(linspace(0.0, 1.0, nbins))
}

#[derive(Serialize)]
struct MedianOutput<'a> {
    median: Vec<f64>,
    method: &'a MethodDescriptor,
}

#[derive(Serialize)]
struct StudentMedianOutput {
    mu: f64,
    sigma: f64,
    nu: f64,
    depth: f64,
}

#[derive(Serialize)]
struct CovOutput {
    location: Vec<f64>,
    scatter: Vec<Vec<f64>>,
}

fn execute(cmd: &Command) -> Result<String> {
    let c = cmd.common();
    let h = c.header;
    let fmt = c.format;
    match cmd {
        Command::Depth {
            input,
            reference,
            beta,
            ..
        } => {
            let m = method(c, *beta)?;
            let points = read_matrix(input, h)?;
            let reference = match reference {
                Some(r) => read_matrix(r, h)?,
                None => points.clone(),
            };
            let values = depth_values(&points, &reference, &m)?;
            match fmt {
                Format::Json => json(&crate::data::DepthVector { values, method: m }),
                Format::Csv => {
                    let mut s = String::from("depth\n");
                    values.iter().for_each(|v| {
                        let _ = writeln!(s, "{v:?}");
                    });
                    Ok(s)
                }
                Format::Svg => {
                    let top = values.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
                    let shading: Vec<f64> = values.iter().map(|v| v / top).collect();
                    svg::render_scatter(
                        &points,
                        &Overlay {
                            shading: Some(&shading),
                            ..Overlay::default()
                        },
                        "Depth",
                        m.kind.name(),
                    )
                }
            }
        }
        Command::Median { input, beta, .. } => {
            let m = method(c, *beta)?;
            let x = read_matrix(input, h)?;
            let median = depth_median(&x, &m)?;
            match fmt {
                Format::Json => json(&MedianOutput { median, method: &m }),
                Format::Csv => Ok(csv_rows(&columns_header("x", x.ncols()), std::iter::once(median.as_slice()))),
                Format::Svg => {
                    if median.len() != 2 {
                        return Err(DepthError::invalid("svg output needs a bivariate sample"));
                    }
                    let markers = [[median[0], median[1]]];
                    svg::render_scatter(
                        &x,
                        &Overlay {
                            markers: &markers,
                            ..Overlay::default()
                        },
                        "Depth median",
                        m.kind.name(),
                    )
                }
            }
        }
        Command::Contour { input, nbins, beta, .. } => {
            let m = method(c, *beta)?;
            let x = read_matrix(input, h)?;
            let grid = contour_grid(&x, *nbins, &m)?;
            match fmt {
                Format::Json => json(&grid),
                Format::Csv => Ok(csv_grid(&grid, ["x", "y", "depth"])),
                Format::Svg => svg::render_grid(&grid, "Depth contours", m.kind.name()),
            }
        }
        Command::Lscontour { input, nbins, .. } => {
            let y = one_column(&read_matrix(input, h)?, "lscontour")?;
            if *nbins < 2 {
                return Err(DepthError::invalid("--nbins must be at least 2"));
            }
            let grid = student_grid(&y, *nbins, c.nu)?;
            match fmt {
                Format::Json => json(&grid),
                Format::Csv => Ok(csv_grid(&grid, ["mu", "sigma", "depth"])),
                Format::Svg => svg::render_grid(&grid, "Student depth contours", &format!("StudentLS (nu = {})", c.nu)),
            }
        }
        Command::Lsmedian { input, .. } => {
            let y = one_column(&read_matrix(input, h)?, "lsmedian")?;
            let (fit, depth) = ls_max_depth(&y, c.nu)?;
            let out = StudentMedianOutput {
                mu: fit.mu,
                sigma: fit.sigma,
                nu: fit.nu,
                depth: depth.value,
            };
            match fmt {
                Format::Json => json(&out),
                Format::Csv => Ok(format!("mu,sigma,nu,depth\n{:?},{:?},{:?},{:?}\n", out.mu, out.sigma, out.nu, out.depth)),
                Format::Svg => Err(unsupported("lsmedian", fmt)),
            }
        }
        Command::Ddplot { x, y, center, beta, .. } => {
            let m = method(c, *beta)?;
            let dd = dd_plot(&read_matrix(x, h)?, &read_matrix(y, h)?, &m, *center)?;
            match fmt {
                Format::Json => json(&dd),
                Format::Csv => Ok(csv_dd(&dd)),
                Format::Svg => svg::render_ddplot(&dd, "DD-plot", m.kind.name()),
            }
        }
        Command::Ddnorm {
            input,
            size,
            robust,
            alpha,
            beta,
            ..
        } => {
            let m = method(c, *beta)?;
            let x = read_matrix(input, h)?;
            let out = dd_mvnorm(&x, size.unwrap_or(x.nrows()), *robust, *alpha, &m)?;
            match fmt {
                Format::Json => json(&out),
                Format::Csv => Ok(csv_dd(&out.plot)),
                Format::Svg => svg::render_ddplot(&out.plot, "Normality DD-plot", m.kind.name()),
            }
        }
        Command::Wilcoxon {
            x, y, alternative, beta, ..
        } => {
            let m = method(c, *beta)?;
            let r = m_wilcoxon_test(&read_matrix(x, h)?, &read_matrix(y, h)?, &m, *alternative)?;
            match fmt {
                Format::Json => json(&r),
                Format::Csv => Ok(format!("S,p\n{:?},{:?}\n", r.statistic, r.p_value)),
                Format::Svg => Err(unsupported("wilcoxon", fmt)),
            }
        }
        Command::Scalecurve { input, nbins, beta, .. } => {
            let m = method(c, *beta)?;
            let curve = scale_curve(&read_matrix(input, h)?, &levels(*nbins)?, &m)?;
            curve_output(&curve, fmt, m.kind.name())
        }
        Command::Asymcurve {
            input,
            nbins,
            moving_median,
            beta,
            ..
        } => {
            let m = method(c, *beta)?;
            let curve = asymmetry_curve(&read_matrix(input, h)?, &levels(*nbins)?, &m, *moving_median)?;
            curve_output(&curve, fmt, m.kind.name())
        }
        Command::Deepreg { input, .. } => {
            let data = read_matrix(input, h)?;
            let (x, y) = two_columns(&data, "deepreg")?;
            fit_output("Deepest regression", &deepest_regression(&x, &y)?, &data, fmt)
        }
        Command::Trimreg { input, trim, .. } => {
            let m = method(c, 0.5)?;
            let data = read_matrix(input, h)?;
            let (x, y) = two_columns(&data, "trimreg")?;
            fit_output("Trimmed regression", &trim_proj_reg(&x, &y, *trim, &m)?, &data, fmt)
        }
        Command::Covlp { input, .. } => {
            let x = read_matrix(input, h)?;
            let est = cov_lp(&x, c.p, c.weight_a, c.weight_b)?;
            match fmt {
                Format::Json => json(&CovOutput {
                    location: est.location,
                    scatter: est.scatter,
                }),
                Format::Csv => {
                    let mut s = format!("row,{}\n", columns_header("c", x.ncols()));
                    let line = |name: &str, v: &[f64]| {
                        let cells: Vec<String> = v.iter().map(|t| format!("{t:?}")).collect();
                        format!("{name},{}\n", cells.join(","))
                    };
                    s.push_str(&line("location", &est.location));
                    for r in &est.scatter {
                        s.push_str(&line("scatter", r));
                    }
                    Ok(s)
                }
                Format::Svg => {
                    if x.ncols() != 2 {
                        return Err(DepthError::invalid("svg output needs a bivariate sample"));
                    }
                    let markers = [[est.location[0], est.location[1]]];
                    svg::render_scatter(
                        &x,
                        &Overlay {
                            markers: &markers,
                            ..Overlay::default()
                        },
                        "L^p depth weighted location",
                        "LP",
                    )
                }
            }
        }
        Command::Binning {
            input,
            nbins,
            lag,
            beta,
            remove_borders,
            ..
        } => {
            let m = method(c, 0.5)?;
            let raw = read_matrix(input, h)?;
            let z = match lag {
                Some(k) => lag_pairs(&one_column(&raw, "binning with --lag")?, *k)?,
                None => raw,
            };
            let grid = binning_depth_2d(&z, *nbins, *beta, *remove_borders, &m)?;
            match fmt {
                Format::Json => json(&grid),
                Format::Csv => {
                    let mut s = String::from("cell_x_mid,cell_y_mid,count\n");
                    for (p, n) in grid.midpoints_retained.iter().zip(&grid.counts_retained) {
                        let _ = writeln!(s, "{:?},{:?},{n}", p[0], p[1]);
                    }
                    Ok(s)
                }
                Format::Svg => svg::render_bins(&grid, "LP"),
            }
        }
        Command::Bootmedian {
            input,
            bootstrap,
            confidence,
            beta,
            ..
        } => {
            let m = method(c, *beta)?;
            let x = read_matrix(input, h)?;
            let region = bootstrap_median_region(&x, &m, *bootstrap, *confidence)?;
            match fmt {
                Format::Json => json(&region),
                Format::Csv => Ok(csv_rows(&columns_header("x", x.ncols()), region.points.rows())),
                Format::Svg => {
                    if x.ncols() != 2 {
                        return Err(DepthError::invalid("svg output needs a bivariate sample"));
                    }
                    svg::render_scatter(
                        &x,
                        &Overlay {
                            hull: region.hull.as_ref(),
                            ..Overlay::default()
                        },
                        "Bootstrap median region",
                        m.kind.name(),
                    )
                }
            }
        }
    }
}

fn curve_output(curve: &CurveData, fmt: Format, method: &str) -> Result<String> {
    match fmt {
        Format::Json => json(curve),
        Format::Csv => Ok(csv_curve(curve)),
        Format::Svg => svg::render_curve(curve, method),
    }
}

/// Location over the sample range and scale log-spaced from the smallest
/// positive gap to the range.
fn student_grid(y: &[f64], n: usize, nu: f64) -> Result<DepthGrid> {
    let mut s = y.to_vec();
    crate::univariate::sort_values(&mut s);
    let (lo, hi) = (s[0], s[s.len() - 1]);
    if !(hi > lo) {
        return Err(DepthError::degenerate("all observations are identical"));
    }
    let gap = s.windows(2).map(|w| w[1] - w[0]).filter(|&g| g > 0.0).fold(f64::INFINITY, f64::min);
    let mu = linspace(lo, hi, n);
    let sigma: Vec<f64> = if hi - lo > gap {
        linspace(gap.ln(), (hi - lo).ln(), n).into_iter().map(f64::exp).collect()
    } else {
        linspace(0.5 * gap, 2.0 * gap, n)
    };
    ls_depth_contour(y, &mu, &sigma, nu)
}

fn thread_pool(threads: Option<i64>) -> Result<rayon::ThreadPool> {
    let n = match threads {
        Some(t) if t > 0 => t as usize,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| DepthError::invalid(format!("cannot start worker threads: {e}")))
}

fn run_parsed(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let common = cli.command.common();
    let pool = thread_pool(common.threads)?;
    let text = pool.install(|| execute(&cli.command))?;
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            DepthError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match run_parsed(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_data_error() {
                EXIT_DATA
            } else {
                EXIT_USAGE
            }
        }
    }
}
