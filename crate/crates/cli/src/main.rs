use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::Settings;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("grid undersampled: {0}")]
    Undersampled(String),
    #[error("analysis failed [{stage}]: {source}")]
    Analysis {
        stage: &'static str,
        source: subzurek::Error,
    },
    #[error("validation failed: {}", .0.join(", "))]
    ValidateFailed(Vec<String>),
    #[error(transparent)]
    Core(#[from] subzurek::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use subzurek::Error as E;
        match self {
            CliError::Invalid(_) => 2,
            CliError::Undersampled(_) => 3,
            CliError::Analysis { .. } => 4,
            CliError::ValidateFailed(_) => 5,
            CliError::Core(
                E::InvalidParameter(_)
                | E::CoefficientOverflow { .. }
                | E::TableMismatch { .. }
                | E::MixedWidths(..)
                | E::EmptyState
                | E::InvalidGrid(_)
                | E::Parse(_),
            ) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "subzurek",
    version,
    about = "Superoscillating phase-space states: coefficients, Wigner grids, scale analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fourier coefficients C_j and the derived D_j, K_j.
    Coeffs(CommonArgs),
    /// Wigner distribution on a grid, or a cut through the origin.
    Wigner(CommonArgs),
    /// Crossing spacings, superoscillation factor, patch area and overspill.
    Analyze(CommonArgs),
    /// Closed form against quadrature, normalization and marginal gates.
    Validate(CommonArgs),
    /// Overlap decay under phase-space displacement, against a compass state.
    Sensitivity(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// fig1, fig2a, fig2b, fig2c, cat or custom.
    #[arg(long)]
    preset: Option<String>,
    /// superosc or cat (custom scenarios).
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long = "delta-x")]
    delta_x: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    /// Use the cross-state mixture instead of the pure state.
    #[arg(long)]
    cross: Option<bool>,
    /// x0:x1:nx,p0:p1:np
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Evaluate a 1-D cut through the origin along x or p.
    #[arg(long)]
    cut: Option<String>,
    /// csv or pgm (pgm also writes the csv).
    #[arg(long)]
    format: Option<String>,
    /// linear, signed or logabs.
    #[arg(long)]
    map: Option<String>,
    /// PGM bit depth, 8 or 16.
    #[arg(long)]
    depth: Option<u32>,
    /// Output path prefix; without it text output goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "allow-undersampled")]
    allow_undersampled: bool,
    /// Number of random oracle points (validate).
    #[arg(long)]
    points: Option<usize>,
    /// Displacement along x at which to report the overlap (sensitivity).
    #[arg(long = "shift-x", allow_hyphen_values = true)]
    shift_x: Option<f64>,
    /// Displacement along p at which to report the overlap (sensitivity).
    #[arg(long = "shift-p", allow_hyphen_values = true)]
    shift_p: Option<f64>,
}

impl CommonArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        let mut put = |k: &str, v: Option<String>| -> Result<(), CliError> {
            if let Some(v) = v {
                s.set(k, v)?;
            }
            Ok(())
        };
        put("preset", self.preset.clone())?;
        put("state", self.state.clone())?;
        put("n", self.n.map(|v| v.to_string()))?;
        put("alpha", self.alpha.map(|v| v.to_string()))?;
        put("xi", self.xi.map(|v| v.to_string()))?;
        put("delta-x", self.delta_x.map(|v| v.to_string()))?;
        put("hbar", self.hbar.map(|v| v.to_string()))?;
        put("cross", self.cross.map(|v| v.to_string()))?;
        put("grid", self.grid.clone())?;
        put("cut", self.cut.clone())?;
        put("format", self.format.clone())?;
        put("map", self.map.clone())?;
        put("depth", self.depth.map(|v| v.to_string()))?;
        put("out", self.out.as_ref().map(|p| p.display().to_string()))?;
        put(
            "allow-undersampled",
            self.allow_undersampled.then(|| "true".to_string()),
        )?;
        put("points", self.points.map(|v| v.to_string()))?;
        put("shift-x", self.shift_x.map(|v| v.to_string()))?;
        put("shift-p", self.shift_p.map(|v| v.to_string()))?;
        Settings::resolve(self.config.as_deref(), &s)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Coeffs(a) => commands::coeffs(&a.settings()?),
        Command::Wigner(a) => commands::wigner(&a.settings()?),
        Command::Analyze(a) => commands::analyze(&a.settings()?),
        Command::Validate(a) => commands::validate(&a.settings()?),
        Command::Sensitivity(a) => commands::sensitivity(&a.settings()?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
