use clap::Parser;
use coriolis_dsp::cli::{run, Cli};

fn main() {
    // Exit codes: 0 success, 1 usage error, 2 runtime failure.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap uses exit code 2 for usage errors by default; remap.
            let is_usage = e.use_stderr();
            let _ = e.print();
            std::process::exit(if is_usage { 1 } else { 0 });
        }
    };
    std::process::exit(run(cli));
}
