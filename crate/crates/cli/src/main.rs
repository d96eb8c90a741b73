use std::process::ExitCode;

use clap::Parser;
use upspec_cli::cli::Cli;
use upspec_cli::{run, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let reason = first.trim_start_matches("error: ");
            return fail(&CliError::Usage(reason.to_string()));
        }
    };
    match cli.command.into_config().and_then(|cfg| run(&cfg)) {
        Ok(out) => {
            for f in &out.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {}", e.one_line());
    ExitCode::from(e.exit_code() as u8)
}
