//! Command-line front end for the divider toolkit.
//!
//! Subcommands: `synth`, `paper-design`, `analyze`, `metrics`, `optimize`,
//! `export`. Results go to stdout unless an output path is given;
//! diagnostics always go to stderr. Exit codes: 0 on success (including a
//! tuning run that stops on its evaluation budget), 1 for validation or
//! parse problems, 2 when a numerical evaluation fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use teesplit::{csvout, geometry, touchstone, units};
use teesplit_core::constants::COPPER_CONDUCTIVITY;
use teesplit_core::divider::{reference_design, synthesize_divider, DEFAULT_LINE_LENGTH};
use teesplit_core::microstrip::{MAX_ASPECT_RATIO, MIN_ASPECT_RATIO};
use teesplit_core::network::assemble_divider_s;
use teesplit_core::optimize::{optimize, OptimizationProblem};
use teesplit_core::{
    metrics, DividerDesign, DividerError, DividerSpec, FrequencyError, FrequencyGrid, MetricsError,
    MicrostripError, NetworkError, ObjectiveKind, OptimizeError, Substrate, SubstrateError,
    Variable,
};
use thiserror::Error;

use touchstone::TsFormat;

#[derive(Parser)]
#[command(
    name = "teesplit",
    version,
    about = "Synthesize and analyse microstrip T-junction power dividers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize an equal-split divider for a substrate
    Synth(SynthArgs),
    /// Emit the built-in published reference geometry
    PaperDesign(PaperDesignArgs),
    /// Sweep a design and write Touchstone (and optionally CSV) data
    Analyze(AnalyzeArgs),
    /// Summarize performance figures from swept data
    Metrics(MetricsArgs),
    /// Tune the transformer dimensions over a band
    Optimize(OptimizeArgs),
    /// Export a design as board artwork or JSON
    Export(ExportArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Design frequency, e.g. 28GHz
    #[arg(long, value_parser = units::parse_frequency)]
    f0: f64,
    /// System impedance in ohms
    #[arg(long, default_value_t = 50.0)]
    z0: f64,
    /// Substrate relative permittivity
    #[arg(long)]
    er: f64,
    /// Substrate height, e.g. 0.5mm
    #[arg(long, value_parser = units::parse_length)]
    h: f64,
    /// Metal thickness
    #[arg(long, default_value = "17um", value_parser = units::parse_length)]
    t: f64,
    /// Dielectric loss tangent
    #[arg(long, default_value_t = 0.0013, conflicts_with = "lossless")]
    tand: f64,
    /// Metal conductivity in S/m
    #[arg(long, default_value_t = COPPER_CONDUCTIVITY, conflicts_with = "lossless")]
    sigma: f64,
    /// Model the laminate without dielectric or conductor loss
    #[arg(long)]
    lossless: bool,
    /// Write the design JSON here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PaperDesignArgs {
    /// Write the design JSON here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Design JSON file
    design: PathBuf,
    /// Sweep start frequency
    #[arg(long, value_parser = units::parse_frequency)]
    fstart: f64,
    /// Sweep stop frequency
    #[arg(long, value_parser = units::parse_frequency)]
    fstop: f64,
    /// Number of sweep points
    #[arg(long, default_value_t = 401)]
    points: usize,
    /// Touchstone value encoding
    #[arg(long, value_enum, default_value_t = FormatArg::Ma)]
    format: FormatArg,
    /// Write Touchstone data here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write a CSV table here
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Swept S-parameter file (.s3p)
    input: PathBuf,
    /// Centre frequency the report is taken at
    #[arg(long, value_parser = units::parse_frequency)]
    f0: f64,
    /// Reflection threshold for the bandwidth, in dB
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    threshold: f64,
    /// Design JSON for the geometry columns of the summary row
    #[arg(long)]
    design: Option<PathBuf>,
    /// Emit machine-readable JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Design JSON file
    design: PathBuf,
    /// Frequency band as lo:hi, e.g. 26GHz:30GHz
    #[arg(long, value_parser = parse_band)]
    band: (f64, f64),
    /// Goal for the in-band input reflection
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Minimax)]
    objective: ObjectiveArg,
    /// Evaluation budget
    #[arg(long, default_value_t = 500)]
    budget: usize,
    /// Convergence tolerance on the relative objective spread
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Write the tuned design here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Append one JSON line per iteration to this file
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// Design JSON file
    design: PathBuf,
    /// Artwork or data format
    #[arg(long, value_enum)]
    format: ExportFormat,
    /// Write here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Ma,
    Ri,
    Db,
}

impl From<FormatArg> for TsFormat {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::Ma => TsFormat::Ma,
            FormatArg::Ri => TsFormat::Ri,
            FormatArg::Db => TsFormat::Db,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    /// Minimize the worst reflection in the band
    Minimax,
    /// Minimize the mean-square reflection over the band
    MeanSquare,
}

impl From<ObjectiveArg> for ObjectiveKind {
    fn from(arg: ObjectiveArg) -> Self {
        match arg {
            ObjectiveArg::Minimax => ObjectiveKind::MinimaxS11,
            ObjectiveArg::MeanSquare => ObjectiveKind::MeanSquareS11,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Svg,
    Json,
}

fn parse_band(text: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("band '{text}' must be lo:hi, e.g. 26GHz:30GHz"))?;
    Ok((units::parse_frequency(lo)?, units::parse_frequency(hi)?))
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<SubstrateError> for CliError {
    fn from(err: SubstrateError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<DividerError> for CliError {
    fn from(err: DividerError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<MicrostripError> for CliError {
    fn from(err: MicrostripError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<FrequencyError> for CliError {
    fn from(err: FrequencyError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<MetricsError> for CliError {
    fn from(err: MetricsError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<touchstone::ParseError> for CliError {
    fn from(err: touchstone::ParseError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<NetworkError> for CliError {
    fn from(err: NetworkError) -> Self {
        match err {
            NetworkError::SingularConversion { .. } | NetworkError::NonFiniteResult { .. } => {
                CliError::Numerical(err.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<OptimizeError> for CliError {
    fn from(err: OptimizeError) -> Self {
        match err {
            OptimizeError::Network(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|err| CliError::Validation(format!("cannot read {}: {err}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|err| CliError::Validation(format!("cannot write {}: {err}", path.display())))
}

/// Writes to the given path, or to stdout when none was given.
fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_design(path: &Path) -> Result<DividerDesign, CliError> {
    let text = read_file(path)?;
    geometry::from_json(&text).map_err(|err| {
        CliError::Validation(format!("invalid design file {}: {err}", path.display()))
    })
}

fn report_warnings(design: &DividerDesign) {
    for warning in design.warnings() {
        eprintln!("warning: {warning}");
    }
}

fn run_synth(args: SynthArgs) -> Result<(), CliError> {
    let substrate = if args.lossless {
        Substrate::lossless(args.er, args.h, args.t)?
    } else {
        Substrate::new(args.er, args.h, args.tand, args.t, args.sigma)?
    };
    let spec = DividerSpec::new(
        args.f0,
        args.z0,
        substrate,
        DEFAULT_LINE_LENGTH,
        DEFAULT_LINE_LENGTH,
    )?;
    let design = synthesize_divider(&spec)?;
    report_warnings(&design);
    emit(&geometry::to_json(&design), args.output.as_ref())
}

fn run_paper_design(args: PaperDesignArgs) -> Result<(), CliError> {
    let design = reference_design();
    report_warnings(&design);
    emit(&geometry::to_json(&design), args.output.as_ref())
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let design = load_design(&args.design)?;
    let grid = FrequencyGrid::uniform(args.fstart, args.fstop, args.points)?;
    let block = assemble_divider_s(&design, &grid)?;
    emit(
        &touchstone::write_touchstone(&block, args.format.into()),
        args.output.as_ref(),
    )?;
    if let Some(csv_path) = &args.csv {
        write_file(csv_path, &csvout::write_csv(&block))?;
    }
    Ok(())
}

fn run_metrics(args: MetricsArgs) -> Result<(), CliError> {
    let text = read_file(&args.input)?;
    let block = touchstone::parse_touchstone(&text)?;
    let report = metrics::report(&block, args.f0, args.threshold)?;
    let row = match &args.design {
        Some(path) => {
            let design = load_design(path)?;
            Some(metrics::comparison_row(&design, &report))
        }
        None => None,
    };
    if args.json {
        let doc = serde_json::json!({ "report": report, "row": row });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("report serializes")
        );
    } else {
        println!("{report}");
        if let Some(row) = row {
            println!();
            println!("{row}");
        }
    }
    Ok(())
}

/// Symmetric tuning window around a base value, clamped to `[lo, hi]`.
fn bounds_around(base: f64, rel: f64, lo: f64, hi: f64) -> (f64, f64) {
    ((base * (1.0 - rel)).max(lo), (base * (1.0 + rel)).min(hi))
}

fn run_optimize(args: OptimizeArgs) -> Result<(), CliError> {
    let design = load_design(&args.design)?;
    let h = design.spec().substrate().height();
    let width = design.transformer_a().width();
    let length = design.transformer_a().length();
    // Tune both transformer dimensions within +/-20% of the loaded design,
    // keeping the width inside the validity window of the line model.
    let variables = vec![Variable::TransformerWidth, Variable::TransformerLength];
    let bounds = vec![
        bounds_around(width, 0.2, MIN_ASPECT_RATIO * h, MAX_ASPECT_RATIO * h),
        bounds_around(length, 0.2, 0.0, f64::INFINITY),
    ];
    let (band_lo, band_hi) = args.band;
    let problem = OptimizationProblem::new(
        design,
        band_lo,
        band_hi,
        variables,
        bounds,
        args.objective.into(),
    )?
    .with_budget(args.budget)?
    .with_tolerance(args.tol)?;
    let result = optimize(&problem)?;

    if let Some(trace_path) = &args.trace {
        let mut text = String::new();
        for record in &result.trace {
            text.push_str(&serde_json::to_string(record).expect("trace serializes"));
            text.push('\n');
        }
        write_file(trace_path, &text)?;
    }
    if result.converged {
        eprintln!(
            "converged: objective {:.6e} after {} evaluations",
            result.objective, result.evaluations
        );
    } else {
        eprintln!(
            "warning: evaluation budget of {} exhausted before convergence; \
             best objective {:.6e}",
            args.budget, result.objective
        );
    }
    emit(&geometry::to_json(&result.design), args.output.as_ref())
}

fn run_export(args: ExportArgs) -> Result<(), CliError> {
    let design = load_design(&args.design)?;
    let text = match args.format {
        ExportFormat::Svg => geometry::svg_export(&design),
        ExportFormat::Json => geometry::to_json(&design),
    };
    emit(&text, args.output.as_ref())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Synth(args) => run_synth(args),
        Command::PaperDesign(args) => run_paper_design(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Metrics(args) => run_metrics(args),
        Command::Optimize(args) => run_optimize(args),
        Command::Export(args) => run_export(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Usage problems are validation failures (exit 1); --help and
            // --version are successful runs.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_parsing() {
        assert_eq!(parse_band("26GHz:30GHz").unwrap(), (26e9, 30e9));
        assert_eq!(parse_band("26e9:30e9").unwrap(), (26e9, 30e9));
        assert!(parse_band("26GHz").is_err());
        assert!(parse_band("a:b").is_err());
    }

    #[test]
    fn command_line_parses_the_documented_flags() {
        Cli::try_parse_from([
            "teesplit", "synth", "--f0", "28GHz", "--er", "3.0", "--h", "0.5mm",
        ])
        .unwrap();
        Cli::try_parse_from(["teesplit", "paper-design", "-o", "design.json"]).unwrap();
        Cli::try_parse_from([
            "teesplit",
            "analyze",
            "design.json",
            "--fstart",
            "14GHz",
            "--fstop",
            "42GHz",
            "--points",
            "401",
            "-o",
            "out.s3p",
            "--csv",
            "out.csv",
        ])
        .unwrap();
        Cli::try_parse_from([
            "teesplit",
            "metrics",
            "sweep.s3p",
            "--f0",
            "28GHz",
            "--threshold",
            "-10",
        ])
        .unwrap();
        Cli::try_parse_from([
            "teesplit",
            "optimize",
            "design.json",
            "--band",
            "26GHz:30GHz",
            "--objective",
            "minimax",
            "--budget",
            "200",
            "--trace",
            "trace.jsonl",
        ])
        .unwrap();
        Cli::try_parse_from(["teesplit", "export", "design.json", "--format", "svg"]).unwrap();
    }

    #[test]
    fn lossless_conflicts_with_loss_parameters() {
        let parsed = Cli::try_parse_from([
            "teesplit",
            "synth",
            "--f0",
            "28GHz",
            "--er",
            "3.0",
            "--h",
            "0.5mm",
            "--lossless",
            "--tand",
            "0.001",
        ]);
        match parsed {
            Err(err) => assert_eq!(err.kind(), clap::error::ErrorKind::ArgumentConflict),
            Ok(_) => panic!("--lossless together with --tand should be rejected"),
        }
    }

    #[test]
    fn exit_codes_partition_the_error_kinds() {
        assert_eq!(CliError::Validation("x".into()).exit_code(), 1);
        assert_eq!(CliError::Numerical("x".into()).exit_code(), 2);
        let singular: CliError = NetworkError::SingularConversion { freq: 1e9 }.into();
        assert_eq!(singular.exit_code(), 2);
        let bad_ref: CliError = NetworkError::InvalidReferenceImpedance { value: -1.0 }.into();
        assert_eq!(bad_ref.exit_code(), 1);
    }
}
