use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rigidity_lab::{run, write_report, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run(&cli.command, &cli.common) {
        Ok(outcome) => match write_report(&cli.common, &outcome.report) {
            Ok(()) => {
                if outcome.unexpected > 0 {
                    eprintln!("{} unexpected violation(s)", outcome.unexpected);
                }
                outcome.exit_code()
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    // timing stays off the report so reports are byte-identical across runs
    eprintln!(
        "{}: {:.3}s",
        cli.command.name(),
        start.elapsed().as_secs_f64()
    );
    ExitCode::from(code as u8)
}
