use std::process::ExitCode;

fn main() -> ExitCode {
    latentgeom::cli::main_with_args(std::env::args_os())
}
