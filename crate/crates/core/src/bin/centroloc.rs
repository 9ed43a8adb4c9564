use std::io::Write;

fn main() {
    let mut stdout = std::io::stdout().lock();
    let code = centroloc::cli::dispatch(std::env::args().collect(), &mut stdout);
    let _ = stdout.flush();
    std::process::exit(code);
}
