use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cfg = match pdyn_cli::load_config() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let out = pdyn_cli::run(std::env::args_os(), &cfg);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
