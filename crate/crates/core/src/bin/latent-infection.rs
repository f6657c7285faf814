use std::process::ExitCode;

fn main() -> ExitCode {
    let code = latent_infection::cli::main_from_args(std::env::args_os());
    ExitCode::from(code.clamp(0, 255) as u8)
}
