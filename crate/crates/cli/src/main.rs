use std::process::ExitCode;

use clap::Parser;
use qholo_cli::args::Cli;
use qholo_cli::{run, UsageError, EXIT_ERROR, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: could not start {n} threads: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    }
    let (report, summary) = match run(&cli) {
        Ok(r) => r,
        Err(e) if e.downcast_ref::<UsageError>().is_some() => {
            eprintln!("usage error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    let to_stdout = cli.common.out.as_deref().is_some_and(|p| p.as_os_str() == "-");
    if !to_stdout {
        for line in &summary {
            println!("{line}");
        }
    }
    if let Some(path) = &cli.common.out {
        if let Err(e) = report.write(path) {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_ERROR);
        }
    }
    ExitCode::from(if report.passed { EXIT_PASS } else { EXIT_FAIL })
}
