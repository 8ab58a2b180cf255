use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use firmlab::cli::{run_from_path, Subcommand, EXIT_USAGE};

/// Firm optimization under monopsony, minimum wage and informality, plus
/// FAT-PET meta-regression.
#[derive(Parser, Debug)]
#[command(name = "firmlab", version)]
struct Args {
    /// simulate | sweep | owe | threshold | classify | metareg | biasdemo
    subcommand: String,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output_dir` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = args
        .subcommand
        .parse::<Subcommand>()
        .and_then(|cmd| run_from_path(cmd, &args.config, args.out.as_deref()));
    match result {
        Ok(report) => {
            for f in &report.files {
                println!("{}", report.out_dir.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("firmlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
