mod args;
mod commands;
mod error;
mod input;
mod manifest;

use std::process::ExitCode;

use clap::Parser;
use qleak_core::par::Execution;

use args::{Cli, Command};
use error::{CliError, CliResult};

fn execution(threads: Option<usize>) -> CliResult<Execution> {
    match threads {
        Some(0) => Err(CliError::Input("--threads must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Numeric(format!("thread pool: {e}")))?;
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Execution::Sequential),
        None => Ok(Execution::default()),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let exec = execution(cli.threads)?;
    match cli.command {
        Command::Compute(a) => {
            let out = commands::compute(&a, exec)?;
            println!("leakage_bits {:.9}", out.leakage_bits);
            if !out.converged.iter().all(|&c| c) {
                eprintln!("warning: not every restart converged within --max-iters");
            }
        }
        Command::NoiseSweep(a) => {
            let out = commands::noise_sweep(&a, exec)?;
            println!("p,direct_leakage_bits,formula_bits,ratio");
            for r in &out.rows {
                println!("{},{:.9},{:.9},{:.9}", r.p, r.direct_leakage_bits, r.formula_bits, r.ratio);
            }
        }
        Command::Verify(a) => {
            let out = commands::verify(&a, exec)?;
            let failed = out.report.failures().count();
            if failed > 0 {
                return Err(CliError::PropertyFailure(failed));
            }
        }
        Command::Export(a) => println!("{}", commands::export(&a)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qleak: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
