//! Adapt a donor GUI test to a recipient application.

use clap::Parser;
use std::path::PathBuf;

use testadapt::evolve::SearchMode;
use testadapt_cli::run::{run_adapt, AdaptOptions};

#[derive(Parser)]
#[command(
    name = "adapt",
    about = "Adapt a GUI test from a donor app to a semantically similar recipient app"
)]
struct Args {
    /// Donor app model (JSON)
    #[arg(long)]
    donor_app: PathBuf,
    /// Donor test file (JSON)
    #[arg(long)]
    donor_test: PathBuf,
    /// Recipient app model (JSON)
    #[arg(long)]
    recipient_app: PathBuf,
    /// Word-embedding file ("<count> <dimension>" header, one word plus
    /// vector per line)
    #[arg(long)]
    embeddings: PathBuf,
    /// JSON config file; keys match the search-config field names
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for the run
    #[arg(long)]
    seed: Option<u64>,
    /// Search mode: full, basic or random
    #[arg(long, value_parser = parse_mode)]
    mode: Option<SearchMode>,
    /// Generation budget
    #[arg(long)]
    generations: Option<usize>,
    /// Wall-clock budget in seconds (checked between generations)
    #[arg(long)]
    time_budget: Option<f64>,
    /// Output directory for the report files
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Evaluate individuals in parallel (results are identical either way)
    #[arg(long)]
    parallel: Option<bool>,
}

fn parse_mode(s: &str) -> Result<SearchMode, String> {
    s.parse()
}

fn main() {
    let args = Args::parse();
    let opts = AdaptOptions {
        donor_app: args.donor_app,
        donor_test: args.donor_test,
        recipient_app: args.recipient_app,
        embeddings: args.embeddings,
        config: args.config,
        seed: args.seed,
        mode: args.mode,
        generations: args.generations,
        time_budget: args.time_budget,
        out: args.out,
        parallel: args.parallel,
    };
    match run_adapt(&opts) {
        Ok(artifacts) => {
            println!(
                "best fitness {} after {} generations; adapted test has {} events and {} assertions",
                artifacts.summary.results.best_fitness,
                artifacts.summary.results.generations_completed,
                artifacts.summary.results.adapted_event_count,
                artifacts.summary.results.adapted_assertion_count,
            );
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
