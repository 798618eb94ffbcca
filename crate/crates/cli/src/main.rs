use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(torus_lefschetz_cli::run(std::env::args_os()))
}
