use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = delpezzo_cli::run(std::env::args_os());
    if code == 0 {
        print!("{out}");
    } else {
        eprint!("{out}");
    }
    ExitCode::from(code as u8)
}
