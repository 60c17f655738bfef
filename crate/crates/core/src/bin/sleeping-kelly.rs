use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    let outcome = sleeping_kelly::cli::run(std::env::args_os(), &mut stdout);
    ExitCode::from(outcome.exit_code as u8)
}
