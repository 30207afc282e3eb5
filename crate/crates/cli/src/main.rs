use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fermat_k3_cli::run(std::env::args_os()))
}
