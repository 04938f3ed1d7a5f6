//! Structural quality of a generated test against a reference adaptation.

use clap::Parser;
use std::path::PathBuf;

use testadapt::appmodel::load_test;
use testadapt_cli::qs::structural_quality;
use testadapt_cli::CliError;

#[derive(Parser)]
#[command(
    name = "eval-qs",
    about = "Score a generated test against a reference test: 1 - missing/|reference|"
)]
struct Args {
    /// Generated test file (JSON)
    #[arg(long)]
    generated: PathBuf,
    /// Reference (manually adapted) test file (JSON)
    #[arg(long)]
    reference: PathBuf,
}

fn run(args: &Args) -> Result<f64, CliError> {
    let generated = load_test(&args.generated)?;
    let reference = load_test(&args.reference)?;
    structural_quality(&generated, &reference)
}

fn main() {
    let args = Args::parse();
    match run(&args) {
        Ok(qs) => println!("{qs}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
