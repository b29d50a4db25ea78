use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = loopspace_cli::run(std::env::args().skip(1));
    let written = if outcome.code == loopspace_cli::EXIT_OK {
        std::io::stdout().write_all(outcome.output.as_bytes())
    } else {
        std::io::stderr().write_all(outcome.output.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.code as u8)
}
