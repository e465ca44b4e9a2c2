use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    ExitCode::from(rcnwave::cli::run_cli(&args) as u8)
}
