use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::init();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = gh_atom::cli::main_with(std::env::args_os(), &mut out, &mut io::stderr());
    let _ = out.flush();
    ExitCode::from(code as u8)
}
