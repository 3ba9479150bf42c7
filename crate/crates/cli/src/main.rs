use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use convfem_cli::{
    run_solve, run_stability, run_tables, CliError, ForcingSpec, PartialConfig, RunConfig,
    SchemeChoice,
};

/// Harmonic oscillator solved by a convolved-action finite element method
/// and the equivalent one-step scheme.
#[derive(Debug, Parser)]
#[command(name = "convfem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one initial value problem and write nodal values as CSV.
    Solve(SolveArgs),
    /// Regenerate one of the validation tables.
    Tables {
        /// Table number: 1 (free), 2 (forced) or 3 (FEM vs one-step).
        which: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the critical time step and, with --tau, the amplification
    /// eigenvalues.
    Stability {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Mass.
    #[arg(long)]
    m: Option<f64>,
    /// Spring stiffness.
    #[arg(long)]
    k: Option<f64>,
    /// Initial displacement.
    #[arg(long, allow_hyphen_values = true)]
    u0: Option<f64>,
    /// Initial velocity.
    #[arg(long, allow_hyphen_values = true)]
    v0: Option<f64>,
    /// Final time.
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Element length; must divide the final time.
    #[arg(long, conflicts_with = "n")]
    tau: Option<f64>,
    /// Number of elements.
    #[arg(long)]
    n: Option<usize>,
    /// `none` or `sin:F0,OMEGA`.
    #[arg(long)]
    forcing: Option<ForcingSpec>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeChoice>,
    /// Add exact solution and error columns.
    #[arg(long)]
    exact: bool,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with any of the run settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl SolveArgs {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => PartialConfig::from_json_file(path)?,
            None => PartialConfig::default(),
        };
        let flags = PartialConfig {
            m: self.m,
            k: self.k,
            u0: self.u0,
            v0: self.v0,
            horizon: self.t_end,
            tau: self.tau,
            n: self.n,
            forcing: self.forcing,
            scheme: self.scheme,
            output: self.out,
            emit_exact: self.exact.then_some(true),
        };
        RunConfig::try_from(flags.over(file))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => run_solve(&args.into_config()?),
        Command::Tables { which, out } => run_tables(which, out.as_deref()),
        Command::Stability { m, k, tau, out } => run_stability(m, k, tau, out.as_deref()),
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
