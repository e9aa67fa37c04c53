//! Command-line front end: argument handling, dispatch and report rendering.
//!
//! Exit codes: `0` success, `1` any error (including usage errors), `2` when
//! `diagnose --strict-exit` finds troubling multicollinearity.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tvif::datasets::{self, FeatureSelection, NamedDataset, BUILTIN_NAMES};
use tvif::regression::fit_both;
use tvif::{
    diagnose, CollinearityReport, Error, ModelSpec, OlsFit, OrthonormalFit, TailProbability,
};

mod render;

pub use render::{fmt_sig, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_TROUBLING: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tvif",
    version,
    about = "Diagnose statistically troubling multicollinearity in linear regressions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// VIF, TVIF, Stewart index, significance thresholds and per-variable verdicts.
    Diagnose {
        #[command(flatten)]
        model: ModelArgs,
        /// Exit with status 2 when any variable is affected.
        #[arg(long)]
        strict_exit: bool,
    },
    /// Coefficient tables of the original and orthonormal models.
    Fit {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// List the built-in datasets.
    Datasets {
        #[arg(long, value_enum, default_value_t = Format::TextTable)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// CSV file with a header row.
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "builtin",
        required_unless_present = "builtin"
    )]
    pub data: Option<PathBuf>,
    /// Built-in dataset name (see `tvif datasets`).
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<String>,
    /// Response column; built-in datasets have a default.
    #[arg(long, value_name = "COL")]
    pub response: Option<String>,
    /// Comma-separated regressor columns (default: every other non-metadata column).
    #[arg(long, value_name = "COLS", value_delimiter = ',')]
    pub features: Option<Vec<String>>,
    /// Two-sided significance level.
    #[arg(long, default_value = "0.05", value_parser = parse_alpha)]
    pub alpha: TailProbability,
    #[arg(long, value_enum, default_value_t = Format::TextTable)]
    pub format: Format,
    /// Fit without the constant column.
    #[arg(long)]
    pub no_intercept: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    TextTable,
    Csv,
    Json,
}

fn parse_alpha(s: &str) -> Result<TailProbability, String> {
    let v: f64 = s
        .parse()
        .map_err(|e| format!("`{s}` is not a number: {e}"))?;
    TailProbability::new(v).map_err(|e| e.to_string())
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{source} (column `{column}`)")]
    Column {
        column: String,
        #[source]
        source: Error,
    },
    #[error("--response is required with --data")]
    MissingResponse,
    #[error("failed to write output: {0}")]
    Output(#[from] std::io::Error),
    #[error("failed to encode output: {0}")]
    Encode(String),
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

/// Attaches the column name to errors that only carry a position.
fn with_column(spec: &ModelSpec, err: Error) -> CliError {
    let index = match &err {
        Error::UndefinedForIntercept { index }
        | Error::ZeroTStatistic { index }
        | Error::ZeroOrthonormalCoefficient { index }
        | Error::ColumnOutOfRange { index, .. } => *index,
        Error::Linalg(tvif::LinalgError::RankDeficient { column }) => *column,
        _ => return CliError::Core(err),
    };
    match spec.column_names().get(index) {
        Some(name) => CliError::Column {
            column: name.clone(),
            source: err,
        },
        None => CliError::Core(err),
    }
}

impl ModelArgs {
    fn feature_selection(&self) -> FeatureSelection {
        match &self.features {
            Some(cols) => {
                FeatureSelection::Columns(cols.iter().map(|c| c.trim().to_string()).collect())
            }
            None => FeatureSelection::AllOthers,
        }
    }

    /// Resolves the data source into a model specification.
    pub fn model_spec(&self) -> Result<ModelSpec, CliError> {
        let features = self.feature_selection();
        let intercept = !self.no_intercept;
        if let Some(path) = &self.data {
            let response = self.response.as_deref().ok_or(CliError::MissingResponse)?;
            return Ok(datasets::read_csv(path, response, &features, intercept)?);
        }
        let name = self.builtin.as_deref().unwrap_or_default();
        let table = datasets::builtin(name)?;
        let response = match (&self.response, &table.default_response) {
            (Some(r), _) | (None, Some(r)) => r.clone(),
            (None, None) => return Err(CliError::MissingResponse),
        };
        Ok(table.model_spec(&response, &features, intercept)?)
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_ERROR
                }
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Diagnose { model, strict_exit } => {
            let report = cmd_diagnose(model)?;
            write_report(&report, model.format, out)?;
            Ok(if *strict_exit && report.overall_troubling {
                EXIT_TROUBLING
            } else {
                EXIT_OK
            })
        }
        Command::Fit { model } => {
            let fit = cmd_fit(model)?;
            write_fit(&fit, model.format, out)?;
            Ok(EXIT_OK)
        }
        Command::Datasets { format } => {
            write_datasets(&cmd_datasets()?, *format, out)?;
            Ok(EXIT_OK)
        }
    }
}

pub fn cmd_diagnose(model: &ModelArgs) -> Result<CollinearityReport, CliError> {
    let spec = model.model_spec()?;
    let (fit, ofit) = fit_both(&spec).map_err(|e| with_column(&spec, e))?;
    diagnose(&spec, &fit, &ofit, model.alpha).map_err(|e| with_column(&spec, e))
}

/// Both parameterizations of one fitted model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutput {
    pub response_name: String,
    pub column_names: Vec<String>,
    pub original: OlsFit,
    pub orthonormal: OrthonormalFit,
}

pub fn cmd_fit(model: &ModelArgs) -> Result<FitOutput, CliError> {
    let spec = model.model_spec()?;
    let (original, orthonormal) = fit_both(&spec).map_err(|e| with_column(&spec, e))?;
    Ok(FitOutput {
        response_name: spec.response_name().to_string(),
        column_names: spec.column_names().to_vec(),
        original,
        orthonormal,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub name: String,
    pub observations: usize,
    pub columns: Vec<String>,
    pub default_response: Option<String>,
    /// Regressors of the default model, intercept excluded.
    pub regressors: usize,
    /// Design columns of the default model, intercept included.
    pub k: usize,
    pub provenance: String,
}

fn summarize(d: &NamedDataset) -> Result<DatasetSummary, Error> {
    let regressors = match &d.default_response {
        Some(r) => d.feature_names(r, &FeatureSelection::AllOthers)?.len(),
        None => d.column_names.len() - d.metadata_columns.len(),
    };
    Ok(DatasetSummary {
        name: d.name.clone(),
        observations: d.n_rows(),
        columns: d.column_names.clone(),
        default_response: d.default_response.clone(),
        regressors,
        k: regressors + 1,
        provenance: d.provenance.clone(),
    })
}

pub fn cmd_datasets() -> Result<Vec<DatasetSummary>, CliError> {
    let mut names = BUILTIN_NAMES.to_vec();
    names.sort_unstable();
    names
        .into_iter()
        .map(|n| Ok(summarize(&datasets::builtin(n)?)?))
        .collect()
}

pub fn write_report(
    report: &CollinearityReport,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::TextTable => out.write_all(render::report_text(report).as_bytes())?,
        Format::Csv => render::report_csv(report, out)?,
        Format::Json => write_json(report, out)?,
    }
    Ok(())
}

pub fn write_fit(fit: &FitOutput, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::TextTable => out.write_all(render::fit_text(fit).as_bytes())?,
        Format::Csv => render::fit_csv(fit, out)?,
        Format::Json => write_json(fit, out)?,
    }
    Ok(())
}

pub fn write_datasets(
    list: &[DatasetSummary],
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::TextTable => out.write_all(render::datasets_text(list).as_bytes())?,
        Format::Csv => render::datasets_csv(list, out)?,
        Format::Json => write_json(&list, out)?,
    }
    Ok(())
}

fn write_json<T: Serialize + ?Sized>(value: &T, out: &mut dyn Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}
