use std::process::ExitCode;

use imhd::cli::{parse_cli, run_command};
use imhd::Error;

fn main() -> ExitCode {
    match parse_cli(std::env::args_os()) {
        Ok(spec) => ExitCode::from(run_command(&spec) as u8),
        Err(Error::Help(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
