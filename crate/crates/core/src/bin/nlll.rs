use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = nlll::cli::init_threads_from_env() {
        eprintln!("nlll: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    ExitCode::from(nlll::cli::main_with_args(std::env::args_os()) as u8)
}
