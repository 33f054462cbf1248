use std::process::ExitCode;

fn main() -> ExitCode {
    pancake::cli::main_with(std::env::args_os())
}
