use std::io;
use std::process::ExitCode;

use clap::Parser;
use krulldim_cli::{run, ParsedCommand};

fn main() -> ExitCode {
    let cmd = ParsedCommand::parse();
    let code = run(&cmd, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
