use std::process::ExitCode;

fn main() -> ExitCode {
    tdl::cli::configure_threads_from_env();
    let mut stdout = std::io::stdout().lock();
    let code = tdl::cli::run(std::env::args(), &mut stdout);
    ExitCode::from(code as u8)
}
