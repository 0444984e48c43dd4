use std::process::ExitCode;

fn main() -> ExitCode {
    fftduty::cli::run()
}
