use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use mdwindow::cli::{run, SEED_ENV};

fn main() -> ExitCode {
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(std::env::args_os(), env_seed.as_deref(), &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mdwindow: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
