//! `qeslab`: batch front end for recurrence derivation, Favard and
//! orthogonality checks, truncation scans and finite-difference spectra.

mod commands;
mod families;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qes_core::algebra::Rat;

use families::{DeriveModel, Family};
use output::{render_csv, render_json, write_atomic, CliError};

#[derive(Debug, Parser)]
#[command(name = "qeslab", version, about = "Exact recurrences and numerical checks for QES Heun-type problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file (written atomically); stdout when absent.
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,

    /// Add a time and version stamp to the output header.
    #[arg(long, global = true)]
    pub stamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    s.parse::<Rat>().map_err(|e| e.to_string())
}

/// Parameter bindings shared by the recurrence-based commands.
#[derive(Debug, Clone, Args)]
pub struct Bind {
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    pub eps2: Option<Rat>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    pub a: Option<Rat>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    pub b: Option<Rat>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    pub c: Option<Rat>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the coefficient recurrence of a model ODE.
    Derive(DeriveArgs),
    /// Check a family against the three-term normal form.
    Favard(FavardArgs),
    /// Generate the polynomial family.
    Sequence(SequenceArgs),
    /// Gram matrix of the family under its moment functional.
    Gram(GramArgs),
    /// Scan for QES truncation points.
    Truncate(TruncateArgs),
    /// Lowest eigenvalues of a finite-difference Hamiltonian.
    Spectrum(SpectrumArgs),
    /// Pointwise Schrödinger residual of a closed-form QES state.
    Residual(ResidualArgs),
    /// Check that the periodic potential is minus the kink potential at x = iθ.
    AntiisoCheck(AntiisoArgs),
    /// Compare radial spectra with E = 2 n_r + β + 2.
    RadialCheck(RadialArgs),
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[arg(long, value_enum)]
    pub model: DeriveModel,
    /// Spectral variable; defaults to s for the kink and beta for bhaduri.
    #[arg(long)]
    pub spectral: Option<String>,
    #[arg(long, value_enum, default_value_t = ScalingArg::Factorial)]
    pub scaling: ScalingArg,
    /// Also split a step-2 recurrence into parity sectors.
    #[arg(long)]
    pub sectors: bool,
    /// Diff against the recurrences as printed.
    #[arg(long)]
    pub compare_printed: bool,
    #[command(flatten)]
    pub bind: Bind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalingArg {
    Plain,
    Factorial,
}

#[derive(Debug, Args)]
pub struct FavardArgs {
    #[arg(long, value_enum)]
    pub model: Family,
    #[arg(short = 'N', long = "n-max", default_value_t = 20)]
    pub n_max: usize,
    /// Also require the trailing coefficient at n = 1 to vanish.
    #[arg(long)]
    pub strict_c1: bool,
    #[command(flatten)]
    pub bind: Bind,
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    #[arg(long, value_enum)]
    pub model: Family,
    #[arg(short = 'N', long = "n-max", default_value_t = 10)]
    pub n_max: usize,
    #[command(flatten)]
    pub bind: Bind,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    #[arg(long, value_enum)]
    pub model: Family,
    #[arg(long, default_value_t = 6)]
    pub size: usize,
    /// Highest index generated; defaults to 2·size.
    #[arg(short = 'N', long = "n-max")]
    pub n_max: Option<usize>,
    #[command(flatten)]
    pub bind: Bind,
}

#[derive(Debug, Args)]
pub struct TruncateArgs {
    #[arg(long, value_enum)]
    pub model: Family,
    #[arg(long, default_value_t = 10)]
    pub m_max: usize,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true, default_value = "0")]
    pub lo: Rat,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true, default_value = "2")]
    pub hi: Rat,
    #[command(flatten)]
    pub bind: Bind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Potential {
    Kink,
    Periodic,
    Radial,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Bc {
    Dirichlet,
    Periodic,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub potential: Potential,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, value_parser = parse_rat, default_value = "1/2")]
    pub eps2: Rat,
    /// Radial problem only.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Kink: [-L, L]; periodic: [0, L) with default 4π/μ; radial: [0, L]
    /// with default 10; zero: [0, L] with default π.
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(short = 'N', long = "points", default_value_t = 2000)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub bc: Option<Bc>,
    #[arg(short = 'k', long, default_value_t = 5)]
    pub k: usize,
    /// Extrapolate with a second grid of half the spacing.
    #[arg(long)]
    pub richardson: bool,
    /// Count eigenvector nodes (Dirichlet only).
    #[arg(long)]
    pub nodes: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    Line,
    Periodic,
}

#[derive(Debug, Args)]
pub struct ResidualArgs {
    #[arg(long, value_enum, default_value_t = SystemArg::Line)]
    pub system: SystemArg,
    #[arg(long, value_parser = parse_rat)]
    pub s: Rat,
    #[arg(long, value_parser = parse_rat, default_value = "1/2")]
    pub eps2: Rat,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Line: [-L, L], default 25; periodic: [0, L), default 4π/μ.
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(short = 'N', long = "points", default_value_t = 4001)]
    pub n: usize,
    /// Use this energy instead of the state's own.
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AntiisoArgs {
    #[arg(long, value_parser = parse_rat, num_args = 1.., default_values = ["1/3", "1/2", "2"])]
    pub eps2: Vec<Rat>,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 10_000)]
    pub points: usize,
    /// θ range; defaults to one period [−2π/μ, 2π/μ].
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RadialArgs {
    #[arg(long, num_args = 1.., default_values_t = [1.0, 2.0])]
    pub beta: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub r_max: f64,
    #[arg(short = 'N', long = "points", default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub levels: usize,
    /// Skip Richardson extrapolation.
    #[arg(long)]
    pub no_richardson: bool,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Derive(_) => "derive",
            Command::Favard(_) => "favard",
            Command::Sequence(_) => "sequence",
            Command::Gram(_) => "gram",
            Command::Truncate(_) => "truncate",
            Command::Spectrum(_) => "spectrum",
            Command::Residual(_) => "residual",
            Command::AntiisoCheck(_) => "antiiso-check",
            Command::RadialCheck(_) => "radial-check",
        }
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let artifact = match &cli.command {
        Command::Derive(a) => commands::derive(a)?,
        Command::Favard(a) => commands::favard(a)?,
        Command::Sequence(a) => commands::sequence(a)?,
        Command::Gram(a) => commands::gram(a)?,
        Command::Truncate(a) => commands::truncate(a)?,
        Command::Spectrum(a) => commands::spectrum(a)?,
        Command::Residual(a) => commands::residual(a)?,
        Command::AntiisoCheck(a) => commands::antiiso(a)?,
        Command::RadialCheck(a) => commands::radial(a)?,
    };
    let name = cli.command.name();
    Ok(match cli.format {
        Format::Json => render_json(name, &artifact, cli.stamp),
        Format::Csv => render_csv(name, &artifact, cli.stamp),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(path) => write_atomic(path, &text)
            .map_err(|e| CliError::new("IO_ERROR", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.usage => {
            eprintln!("error: {}", e.message);
            ExitCode::from(2)
        }
        Err(e) => {
            let body = serde_json::json!({ "error": e });
            eprintln!("{}", serde_json::to_string(&body).expect("json"));
            ExitCode::from(1)
        }
    }
}
