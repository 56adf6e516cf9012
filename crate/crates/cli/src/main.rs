use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use tailbound::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = tailbound::run(&cli, &mut out);
    let flushed = out.flush();
    match result.and(flushed.map_err(Into::into)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tailbound: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
