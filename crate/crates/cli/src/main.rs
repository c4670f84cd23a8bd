use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use biopepa_cli::{cmd_check, cmd_simulate, parse_override, MethodArg, RunConfig, EXIT_RUNTIME};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "biopepa", version, about = "Check and simulate Bio-PEPA models with locations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and statically check a model; diagnostics go to stderr.
    Check { file: PathBuf },
    /// Simulate a model and write a CSV time series.
    Simulate(SimulateArgs),
}

#[derive(clap::Args)]
struct SimulateArgs {
    file: PathBuf,
    /// ode-rk4, ode-dopri, ssa, nrm or tau.
    #[arg(long)]
    method: MethodArg,
    /// Final time.
    #[arg(long)]
    stop: f64,
    /// Number of output grid points, including both ends.
    #[arg(long)]
    points: usize,
    /// Stochastic runs to average.
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fixed step for ode-rk4.
    #[arg(long, default_value_t = RunConfig::DEFAULT_STEP)]
    step: f64,
    #[arg(long, default_value_t = 1e-6)]
    rtol: f64,
    #[arg(long, default_value_t = 1e-9)]
    atol: f64,
    /// Leap size for tau.
    #[arg(long, default_value_t = RunConfig::DEFAULT_TAU)]
    tau: f64,
    /// Parameter override, repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE", value_parser = parse_override)]
    overrides: Vec<(String, f64)>,
    /// Comma-separated `name@location` species and observable names.
    #[arg(long, value_delimiter = ',')]
    species: Option<Vec<String>>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl From<SimulateArgs> for RunConfig {
    fn from(a: SimulateArgs) -> Self {
        RunConfig {
            input: a.file,
            method: a.method,
            stop: a.stop,
            points: a.points,
            runs: a.runs,
            seed: a.seed,
            step: a.step,
            rtol: a.rtol,
            atol: a.atol,
            tau: a.tau,
            overrides: a.overrides,
            selection: a.species,
            output: a.out,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_RUNTIME } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let stderr = &mut io::stderr();
    let status = match cli.command {
        Command::Check { file } => cmd_check(&file, stderr),
        Command::Simulate(args) => cmd_simulate(&args.into(), &mut io::stdout().lock(), stderr),
    };
    ExitCode::from(status as u8)
}
