use clap::error::ErrorKind;
use clap::Parser;
use cyclecx::cli::{run, Cli, CliError};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let err = CliError { name: "UsageError".into(), message: e.kind().to_string() };
            println!("{}", err.to_json());
            eprint!("{e}");
            std::process::exit(err.exit_code());
        }
    };
    std::process::exit(run(&cli));
}
