use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = menergy::cli::run_cli(std::env::args_os());
    if code == menergy::cli::EXIT_ERROR {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    ExitCode::from(code as u8)
}
