use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(aomm_cli::run(std::env::args_os()))
}
