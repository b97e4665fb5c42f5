use std::io;
use std::process::ExitCode;

fn configure_threads() {
    let Ok(text) = std::env::var("ZETASPEC_THREADS") else {
        return;
    };
    match text.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            // Only fails if a pool was already built, which cannot happen here.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring ZETASPEC_THREADS={text:?} (expected a positive integer)"),
    }
}

fn main() -> ExitCode {
    configure_threads();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = zetaspec::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code as u8)
}
