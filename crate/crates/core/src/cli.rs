//! The `pcakit` command line front end.
//!
//! ```text
//! pcakit simulate <spring|pair|ferris|nonorth> --seed S --out data.csv [scenario flags]
//! pcakit analyze  --in data.csv --out report.json [--route eigen|svd|both] [--norm n|n-1]
//! pcakit project  --in data.csv --model report.json --out y.csv [--k K] [--reconstruct]
//! pcakit plotdata --in data.csv --model report.json --out prefix
//! ```
//!
//! CSV files are UTF-8, comma separated, with a header line. By default each
//! row is a sample and each column a measurement type; `--rows measurements`
//! reads the transposed layout (`name,v1,v2,…` per line). Numbers are written
//! with 17 significant digits.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
//! Diagnostics go to stderr; data only ever goes to files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datagen::{
    generate_correlated_pair, generate_failure, generate_spring, FailureConfig, FailureKind,
    SpringConfig,
};
use crate::error::Error;
use crate::matrix::Matrix;
use crate::pca::{
    center, compare_models, covariance_matrix, explained_variance_ratio, fit_eigen, fit_svd,
    project, reconstruct, Dataset, ModelDocument, Normalization, PcaModel, RouteAgreement,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}: line {line}: {message}", path.display())]
    Csv {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{}: {message}", path.display())]
    Json { path: PathBuf, message: String },

    #[error("{}: no samples", path.display())]
    NoSamples { path: PathBuf },

    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(
                Error::NoConvergence { .. }
                | Error::PowerIterationStalled { .. }
                | Error::NoSpectralGap { .. },
            ) => EXIT_NUMERICAL,
            _ => EXIT_DATA,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pcakit",
    version,
    about = "Principal component analysis toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic data set
    Simulate(SimulateArgs),
    /// Fit principal components and write a JSON report
    Analyze(AnalyzeArgs),
    /// Project data onto the leading components (or reconstruct from them)
    Project(ProjectArgs),
    /// Write plot-ready text files (scatter, scree, component overlay)
    Plotdata(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    /// Ball on a spring filmed by three cameras (6 measurements)
    Spring,
    /// Two measurements with a chosen correlation
    Pair,
    /// Person on a ferris wheel (uniform circle)
    Ferris,
    /// Two clusters along non-perpendicular axes
    Nonorth,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Orientation {
    /// One row per sample, one column per measurement type
    #[default]
    Samples,
    /// One row per measurement type: `name,v1,v2,…`
    Measurements,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum RouteChoice {
    #[default]
    Eigen,
    Svd,
    Both,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum NormChoice {
    /// Divide by n
    #[default]
    #[value(name = "n")]
    N,
    /// Divide by n − 1
    #[value(name = "n-1")]
    NMinusOne,
}

impl From<NormChoice> for Normalization {
    fn from(c: NormChoice) -> Self {
        match c {
            NormChoice::N => Normalization::Population,
            NormChoice::NMinusOne => Normalization::Sample,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub scenario: Scenario,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Recording length in seconds (spring)
    #[arg(long)]
    pub duration: Option<f64>,
    /// Frame rate in Hz (spring)
    #[arg(long)]
    pub rate: Option<f64>,
    /// Oscillation amplitude (spring)
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Oscillation frequency in Hz (spring)
    #[arg(long)]
    pub frequency: Option<f64>,
    /// Signal-to-noise ratio along the direction of motion (spring)
    #[arg(long, conflicts_with = "noise_sigma")]
    pub snr: Option<f64>,
    /// Standard deviation of additive measurement noise
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// Number of samples (pair, ferris, nonorth)
    #[arg(long)]
    pub n: Option<usize>,
    /// Correlation coefficient (pair)
    #[arg(long)]
    pub rho: Option<f64>,
    /// Wheel radius (ferris)
    #[arg(long)]
    pub radius: Option<f64>,
    /// Angle of the second axis in degrees, the first is at 0° (nonorth)
    #[arg(long)]
    pub angle: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = RouteChoice::Eigen)]
    pub route: RouteChoice,
    #[arg(long, value_enum, default_value_t = NormChoice::N)]
    pub norm: NormChoice,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Orientation::Samples)]
    pub rows: Orientation,
    /// Include wall-clock timings in the report (makes it non-reproducible)
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Model or analyze report (JSON)
    #[arg(long)]
    pub model: PathBuf,
    /// Number of leading components to keep (default: all)
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    /// Write the rank-k reconstruction instead of the projection
    #[arg(long)]
    pub reconstruct: bool,
    #[arg(long, value_enum, default_value_t = Orientation::Samples)]
    pub rows: Orientation,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Output prefix; files are written as `<prefix>.<kind>.tsv`
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Orientation::Samples)]
    pub rows: Orientation,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Analyze(a) => analyze(a),
        Command::Project(a) => project_cmd(a),
        Command::Plotdata(a) => plotdata(a),
    }
}

fn reject_flags(scenario: &str, flags: &[(&str, bool)]) -> Result<(), CliError> {
    let given: Vec<&str> = flags
        .iter()
        .filter(|(_, set)| *set)
        .map(|(f, _)| *f)
        .collect();
    if given.is_empty() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{} not applicable to the {scenario} scenario",
            given.join(", ")
        )))
    }
}

pub fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let spring_only = [
        ("--duration", a.duration.is_some()),
        ("--rate", a.rate.is_some()),
        ("--amplitude", a.amplitude.is_some()),
        ("--frequency", a.frequency.is_some()),
        ("--snr", a.snr.is_some()),
    ];
    let dataset = match a.scenario {
        Scenario::Spring => {
            reject_flags(
                "spring",
                &[
                    ("--n", a.n.is_some()),
                    ("--rho", a.rho.is_some()),
                    ("--radius", a.radius.is_some()),
                    ("--angle", a.angle.is_some()),
                ],
            )?;
            let defaults = SpringConfig::default();
            let mut cfg = SpringConfig {
                duration: a.duration.unwrap_or(defaults.duration),
                sample_rate: a.rate.unwrap_or(defaults.sample_rate),
                amplitude: a.amplitude.unwrap_or(defaults.amplitude),
                frequency: a.frequency.unwrap_or(defaults.frequency),
                noise_sigma: a.noise_sigma.unwrap_or(0.0),
                seed: a.seed,
                ..defaults
            };
            if let Some(snr) = a.snr {
                cfg = cfg.with_snr(snr)?;
            }
            let d = generate_spring(&cfg)?;
            eprintln!("motion axis (world): {:?}", cfg.motion_axis);
            eprintln!(
                "signal direction ({}): {:?}",
                d.names().join(","),
                cfg.signal_direction()
            );
            eprintln!("noise sigma: {}", cfg.noise_sigma);
            d
        }
        Scenario::Pair => {
            let mut flags = spring_only.to_vec();
            flags.extend([
                ("--noise-sigma", a.noise_sigma.is_some()),
                ("--radius", a.radius.is_some()),
                ("--angle", a.angle.is_some()),
            ]);
            reject_flags("pair", &flags)?;
            let rho = a
                .rho
                .ok_or_else(|| CliError::Usage("the pair scenario requires --rho".into()))?;
            generate_correlated_pair(rho, a.n.unwrap_or(1000), a.seed)?
        }
        Scenario::Ferris | Scenario::Nonorth => {
            let mut flags = spring_only.to_vec();
            flags.push(("--rho", a.rho.is_some()));
            let n = a.n.unwrap_or(1000);
            let mut cfg = if a.scenario == Scenario::Ferris {
                flags.push(("--angle", a.angle.is_some()));
                reject_flags("ferris", &flags)?;
                let mut cfg = FailureConfig::ferris_wheel(n, a.seed);
                if let Some(radius) = a.radius {
                    cfg.kind = FailureKind::FerrisWheel { radius };
                }
                cfg
            } else {
                flags.push(("--radius", a.radius.is_some()));
                reject_flags("nonorth", &flags)?;
                let mut cfg = FailureConfig::non_orthogonal(n, a.seed);
                if let (Some(angle), FailureKind::NonOrthogonal { axes_deg, .. }) =
                    (a.angle, &mut cfg.kind)
                {
                    axes_deg[1] = angle;
                }
                cfg
            };
            cfg.noise_sigma = a.noise_sigma.unwrap_or(0.0);
            generate_failure(&cfg)?
        }
    };
    eprintln!("m = {}, n = {}", dataset.measurements(), dataset.samples());
    write_dataset(&a.out, &dataset)
}

/// Output of `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub dataset: DatasetSummary,
    pub model: ModelDocument,
    pub explained_variance_ratio: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternate_model: Option<ModelDocument>,
    pub diagnostics: Diagnostics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub m: usize,
    pub n: usize,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Largest off-diagonal entry of `C_Y = P·C_X·Pᵀ`.
    pub max_off_diagonal_cy: f64,
    /// The same, divided by `trace(C_Y)`.
    pub relative_off_diagonal_cy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route_agreement: Option<RouteAgreement>,
}

/// Fits the requested route(s) and assembles a [`Report`]. With
/// [`RouteChoice::Both`] the eigen fit is the primary model and the SVD fit
/// the alternate.
pub fn analyze_dataset(
    d: &Dataset,
    route: RouteChoice,
    normalization: Normalization,
) -> Result<Report, CliError> {
    let (primary, alternate) = match route {
        RouteChoice::Eigen => (fit_eigen(d, normalization)?, None),
        RouteChoice::Svd => (fit_svd(d, normalization)?, None),
        RouteChoice::Both => (
            fit_eigen(d, normalization)?,
            Some(fit_svd(d, normalization)?),
        ),
    };
    let (centered, _) = center(d);
    let cov = covariance_matrix(&centered, normalization)?;
    let p = primary.components();
    let cy = p.multiply(&cov)?.multiply(&p.transpose())?;
    let max_off = cy.max_off_diagonal();
    let route_agreement = match &alternate {
        Some(alt) => Some(compare_models(&primary, alt)?),
        None => None,
    };
    Ok(Report {
        version: REPORT_FORMAT_VERSION,
        dataset: DatasetSummary {
            m: d.measurements(),
            n: d.samples(),
            names: d.names().to_vec(),
        },
        explained_variance_ratio: explained_variance_ratio(&primary)?,
        model: primary.to_document(),
        alternate_model: alternate.map(|m| m.to_document()),
        diagnostics: Diagnostics {
            max_off_diagonal_cy: max_off,
            relative_off_diagonal_cy: max_off / cy.trace(),
            route_agreement,
        },
        timing_ms: None,
    })
}

pub fn analyze(a: &AnalyzeArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let d = read_dataset(&a.input, a.rows)?;
    let mut report = analyze_dataset(&d, a.route, a.norm.into())?;
    if a.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    eprintln!(
        "m = {}, n = {}, explained variance ratio of PC1 = {}",
        report.dataset.m, report.dataset.n, report.explained_variance_ratio[0]
    );
    if let Some(agreement) = &report.diagnostics.route_agreement {
        eprintln!(
            "route agreement: variances {:e}, components {:e}",
            agreement.max_variance_delta, agreement.max_component_delta
        );
    }
    write_json(&a.out, &report)
}

pub fn project_cmd(a: &ProjectArgs) -> Result<(), CliError> {
    let d = read_dataset(&a.input, a.rows)?;
    let model = load_model(&a.model)?;
    let m = model.measurements();
    if d.measurements() != m {
        return Err(Error::InvalidDataset(format!(
            "data has {} measurement types but the model has {m}",
            d.measurements()
        ))
        .into());
    }
    let k = a.k.unwrap_or(m);
    if k > m {
        return Err(Error::TooManyComponents {
            requested: k,
            available: m,
        }
        .into());
    }
    let y = project(&model, &d)?;
    if a.reconstruct {
        let x_hat = reconstruct(&model, &y, k)?;
        write_matrix_csv(&a.out, model.names(), &x_hat)
    } else {
        let names: Vec<String> = (1..=k).map(|i| format!("pc{i}")).collect();
        let rows: Vec<&[f64]> = (0..k).map(|i| y.row(i)).collect();
        write_rows_as_samples(&a.out, &names, &rows, y.cols())
    }
}

pub fn plotdata(a: &PlotArgs) -> Result<(), CliError> {
    let d = read_dataset(&a.input, a.rows)?;
    let model = load_model(&a.model)?;
    let m = model.measurements();
    if d.measurements() != m {
        return Err(Error::InvalidDataset(format!(
            "data has {} measurement types but the model has {m}",
            d.measurements()
        ))
        .into());
    }
    let written = write_plot_files(&a.out, &d, &model)?;
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// Measurement pairs plotted against each other: `(0,1), (2,3), …`, with a
/// trailing odd measurement paired with its predecessor.
pub fn scatter_planes(m: usize) -> Vec<(usize, usize)> {
    if m < 2 {
        return Vec::new();
    }
    let mut planes: Vec<(usize, usize)> = (0..m / 2).map(|j| (2 * j, 2 * j + 1)).collect();
    if m % 2 == 1 {
        planes.push((m - 2, m - 1));
    }
    planes
}

/// Writes `<prefix>.scree.tsv`, `<prefix>.overlay.tsv` and one
/// `<prefix>.scatter<j>.tsv` per measurement plane. Returns the paths written.
pub fn write_plot_files(
    prefix: &Path,
    d: &Dataset,
    model: &PcaModel,
) -> Result<Vec<PathBuf>, CliError> {
    let with_suffix = |suffix: &str| -> PathBuf {
        let mut s = prefix.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    let names = d.names();
    let planes = scatter_planes(d.measurements());
    let mut written = Vec::new();

    for (j, &(a, b)) in planes.iter().enumerate() {
        let path = with_suffix(&format!(".scatter{}.tsv", j + 1));
        let mut w = create(&path)?;
        let mut body = format!("{}\t{}\n", names[a], names[b]);
        for k in 0..d.samples() {
            body.push_str(&format!(
                "{}\t{}\n",
                fmt_num(d.data().get(a, k)),
                fmt_num(d.data().get(b, k))
            ));
        }
        w.write_all(body.as_bytes())
            .map_err(|e| CliError::io(&path, e))?;
        finish(w, &path)?;
        written.push(path);
    }

    let ratios = explained_variance_ratio(model)?;
    let path = with_suffix(".scree.tsv");
    let mut body = String::from("component\tvariance\tratio\tcumulative\n");
    let mut cumulative = 0.0;
    for (i, (v, r)) in model.variances().iter().zip(&ratios).enumerate() {
        cumulative += r;
        body.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            i + 1,
            fmt_num(*v),
            fmt_num(*r),
            fmt_num(cumulative)
        ));
    }
    let mut w = create(&path)?;
    w.write_all(body.as_bytes())
        .map_err(|e| CliError::io(&path, e))?;
    finish(w, &path)?;
    written.push(path);

    let path = with_suffix(".overlay.tsv");
    let mut body = String::from("component\tplane\tcenter_x\tcenter_y\tdx\tdy\tscale\n");
    for i in 0..model.measurements() {
        let p = model.component(i);
        let scale = model.variances()[i].sqrt();
        for &(a, b) in &planes {
            body.push_str(&format!(
                "{}\t{}/{}\t{}\t{}\t{}\t{}\t{}\n",
                i + 1,
                names[a],
                names[b],
                fmt_num(model.mean()[a]),
                fmt_num(model.mean()[b]),
                fmt_num(p[a]),
                fmt_num(p[b]),
                fmt_num(scale)
            ));
        }
    }
    let mut w = create(&path)?;
    w.write_all(body.as_bytes())
        .map_err(|e| CliError::io(&path, e))?;
    finish(w, &path)?;
    written.push(path);

    Ok(written)
}

/// 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::io(path, source),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => CliError::Csv {
            path: path.to_path_buf(),
            line,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        other => CliError::Csv {
            path: path.to_path_buf(),
            line,
            message: format!("{other:?}"),
        },
    }
}

/// Reads a CSV data set (see the module docs for the layout).
pub fn read_dataset(path: &Path, orientation: Orientation) -> Result<Dataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();

    let mut rows: Vec<(String, Vec<f64>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let parse = |field: &str, col: usize| -> Result<f64, CliError> {
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(CliError::Csv {
                    path: path.to_path_buf(),
                    line,
                    message: format!("column {}: {field:?} is not a finite number", col + 1),
                }),
            }
        };
        match orientation {
            Orientation::Samples => {
                let values = record
                    .iter()
                    .enumerate()
                    .map(|(c, f)| parse(f, c))
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push((String::new(), values));
            }
            Orientation::Measurements => {
                let mut fields = record.iter();
                let name = fields.next().unwrap_or_default().to_string();
                let values = fields
                    .enumerate()
                    .map(|(c, f)| parse(f, c + 1))
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push((name, values));
            }
        }
    }

    let empty = match orientation {
        Orientation::Samples => rows.is_empty() || header.is_empty(),
        Orientation::Measurements => rows.first().is_none_or(|(_, v)| v.is_empty()),
    };
    if empty {
        return Err(CliError::NoSamples {
            path: path.to_path_buf(),
        });
    }

    let dataset = match orientation {
        Orientation::Samples => {
            let samples: Vec<Vec<f64>> = rows.into_iter().map(|(_, v)| v).collect();
            Dataset::from_samples(&samples, header)?
        }
        Orientation::Measurements => {
            let (names, values): (Vec<String>, Vec<Vec<f64>>) = rows.into_iter().unzip();
            Dataset::new(Matrix::from_rows(&values)?, names)?
        }
    };
    Ok(dataset)
}

/// Writes a data set with one row per sample.
pub fn write_dataset(path: &Path, d: &Dataset) -> Result<(), CliError> {
    write_matrix_csv(path, d.names(), d.data())
}

/// Writes an `m×n` measurement-major matrix as CSV with one row per sample.
pub fn write_matrix_csv(path: &Path, names: &[String], x: &Matrix) -> Result<(), CliError> {
    let rows: Vec<&[f64]> = (0..x.rows()).map(|i| x.row(i)).collect();
    write_rows_as_samples(path, names, &rows, x.cols())
}

fn write_rows_as_samples(
    path: &Path,
    names: &[String],
    rows: &[&[f64]],
    n: usize,
) -> Result<(), CliError> {
    let file = create(path)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(names).map_err(|e| csv_error(path, e))?;
    let mut record = Vec::with_capacity(rows.len());
    for k in 0..n {
        record.clear();
        record.extend(rows.iter().map(|r| fmt_num(r[k])));
        w.write_record(&record).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    w.write_all(b"\n").map_err(|e| CliError::io(path, e))?;
    finish(w, path)
}

/// Loads a model from either a bare model document or an `analyze` report
/// (whose primary `model` is used).
pub fn load_model(path: &Path) -> Result<PcaModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let json_err = |e: serde_json::Error| CliError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(json_err)?;
    let doc: ModelDocument = match value.get("model") {
        Some(inner) => serde_json::from_value(inner.clone()).map_err(json_err)?,
        None => serde_json::from_value(value).map_err(json_err)?,
    };
    Ok(PcaModel::from_document(doc)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planes_cover_every_measurement() {
        assert_eq!(scatter_planes(1), vec![]);
        assert_eq!(scatter_planes(2), vec![(0, 1)]);
        assert_eq!(scatter_planes(5), vec![(0, 1), (2, 3), (3, 4)]);
        assert_eq!(scatter_planes(6), vec![(0, 1), (2, 3), (4, 5)]);
    }

    #[test]
    fn numbers_round_trip_through_text() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0, -0.0] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_num(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::Core(Error::ZeroVariance).exit_code(), EXIT_DATA);
        assert_eq!(
            CliError::Core(Error::NoConvergence {
                sweeps: 1,
                residual: 1.0
            })
            .exit_code(),
            EXIT_NUMERICAL
        );
    }

    #[test]
    fn report_for_both_routes() {
        let d = Dataset::unnamed(
            Matrix::from_rows(&[&[1.0, 2.0, 4.0, 3.0, -2.0], &[0.0, 3.0, -1.0, 2.0, 1.0]]).unwrap(),
        )
        .unwrap();
        let r = analyze_dataset(&d, RouteChoice::Both, Normalization::Population).unwrap();
        assert!((r.explained_variance_ratio.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        assert_eq!(r.model.components.len(), 2);
        let agreement = r.diagnostics.route_agreement.unwrap();
        assert!(agreement.max_component_delta <= 1e-8);
        assert!(r.diagnostics.relative_off_diagonal_cy <= 1e-10);
        assert!(r.alternate_model.is_some());
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("timing_ms"));
    }
}
