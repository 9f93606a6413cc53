use std::process::ExitCode;

fn main() -> ExitCode {
    let status = heis_experiments::cli::main_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(status as u8)
}
