use std::process::ExitCode;

use clap::Parser;
use qwalk::cli::{resolve, run, Args};

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = resolve(args).and_then(|config| run(&config));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.failed_rows > 0 {
                eprintln!("qwalk: {} sweep size(s) failed", outcome.failed_rows);
                return ExitCode::from(7);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
