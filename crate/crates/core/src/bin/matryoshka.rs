use std::process::ExitCode;

fn main() -> ExitCode {
    matryoshka::cli::main_with_args(std::env::args_os())
}
