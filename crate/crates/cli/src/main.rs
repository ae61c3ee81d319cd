use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use fqmodsym_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            1
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
