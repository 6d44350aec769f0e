use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stagflow::{cmd_flowlines, cmd_solve, cmd_stream, cmd_sweep, cmd_verify, CliError, Format, Status};

/// Stationary 2D Euler flows with one elliptic stagnation point.
#[derive(Parser)]
#[command(name = "stagflow", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and write the solution.
    Solve {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write flow lines ψ = level of a solution as CSV.
    Flowlines {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample the stream function on a Cartesian grid.
    Stream {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value_t = 64)]
        nx: usize,
        #[arg(long, default_value_t = 64)]
        ny: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a diagnostics suite: hardy, cokernel, linear or all.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Solve a problem for several values of one numeric field.
    Sweep {
        #[arg(long)]
        problem: PathBuf,
        /// JSON pointer to the field, e.g. /boundary/fourier_cos/1
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let status = match cli.command {
        Command::Solve { problem, out } => cmd_solve(&problem, &out)?,
        Command::Flowlines { solution, levels, out } => {
            cmd_flowlines(&solution, &levels, &out)?;
            Status::Success
        }
        Command::Stream { solution, nx, ny, out, format } => {
            let outside = cmd_stream(&solution, nx, ny, &out, format)?;
            eprintln!("outside points: {outside}");
            Status::Success
        }
        Command::Verify { suite, seed, format } => {
            let pass = cmd_verify(&suite, seed, format, &mut std::io::stdout().lock())?;
            return Ok(if pass { 0 } else { 2 });
        }
        Command::Sweep { problem, param, values, out } => cmd_sweep(&problem, &param, &values, &out)?,
    };
    Ok(status.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
