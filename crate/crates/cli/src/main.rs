use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use graphseq_cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = run(&config);
    if config.out.is_none() {
        print!("{}", outcome.report.to_json());
    }
    if let Some(err) = &outcome.report.error {
        eprintln!("graphseq: {err}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
