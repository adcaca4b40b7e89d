use std::process::ExitCode;

use qfisher_cli::{run_from_args, CliError};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    match run_from_args(&argv, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        // help, version and usage errors print and exit the clap way
        Err(CliError::Parse(e)) => e.exit(),
        Err(e) => {
            eprintln!("qfisher: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
