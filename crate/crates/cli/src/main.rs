use std::io::{BufWriter, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // Unlocked handles: bench worker threads log to stderr while this runs.
    let mut out = BufWriter::new(std::io::stdout());
    let code = paritydfi_cli::main_with(std::env::args_os(), &mut out, &mut std::io::stderr());
    if out.flush().is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
