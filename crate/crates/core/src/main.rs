use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use modgraph::cli::{run, Cli};

fn main() -> ExitCode {
    let result = Cli::parse().into_config().and_then(|c| run(&c).map(|out| (c, out)));
    match result {
        Ok((config, out)) => {
            if config.output.is_none() {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(out.text.as_bytes());
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.code)
        }
    }
}
