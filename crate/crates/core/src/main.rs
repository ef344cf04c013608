use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out, err) = opharm::cli::main_with_args(std::env::args_os());
    print!("{out}");
    eprint!("{err}");
    ExitCode::from(code as u8)
}
