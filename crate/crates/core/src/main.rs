use std::process::ExitCode;

fn main() -> ExitCode {
    let code = spacelike_drops::cli::run_from(std::env::args_os());
    ExitCode::from(code as u8)
}
