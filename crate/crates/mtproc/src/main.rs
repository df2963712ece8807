use std::process::ExitCode;

fn main() -> ExitCode {
    mtproc::cli::run()
}
