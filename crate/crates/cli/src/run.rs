//! The full adaptation pipeline behind the `adapt` binary: load and validate
//! inputs, run the search, post-process the fittest test, and emit the
//! report files.

use std::path::{Path, PathBuf};

use testadapt::appmodel::{load_app, load_test, Action};
use testadapt::evolve::{run_search, SearchConfig, SearchMode};
use testadapt::matching::SemSim;
use testadapt::postprocess::post_process;
use testadapt::textsem::{EmbeddingStore, SimilarityConfig};

use crate::config::ConfigFile;
use crate::report::{
    write_report, FileDigest, Inputs, MappingRow, Results, RunArtifacts, Summary,
};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct AdaptOptions {
    pub donor_app: PathBuf,
    pub donor_test: PathBuf,
    pub recipient_app: PathBuf,
    pub embeddings: PathBuf,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub mode: Option<SearchMode>,
    pub generations: Option<usize>,
    pub time_budget: Option<f64>,
    pub out: PathBuf,
    pub parallel: Option<bool>,
}

/// Defaults, then the config file, then command-line flags.
pub fn resolve_config(opts: &AdaptOptions) -> Result<SearchConfig, CliError> {
    let mut cfg = SearchConfig::default();
    if let Some(path) = &opts.config {
        ConfigFile::load(path)?.apply(&mut cfg);
    }
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    if let Some(mode) = opts.mode {
        cfg.mode = mode;
    }
    if let Some(generations) = opts.generations {
        cfg.budget_generations = generations;
    }
    if let Some(seconds) = opts.time_budget {
        cfg.budget_wall_clock = Some(seconds);
    }
    if let Some(parallel) = opts.parallel {
        cfg.parallel = parallel;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn require_file(path: &Path, what: &str) -> Result<(), CliError> {
    if !path.is_file() {
        return Err(CliError::Input(format!(
            "{what} {} does not exist",
            path.display()
        )));
    }
    Ok(())
}

/// Run the five phases end to end and write the report. Returns the
/// artifacts for callers that want to inspect them programmatically.
pub fn run_adapt(opts: &AdaptOptions) -> Result<RunArtifacts, CliError> {
    let cfg = resolve_config(opts)?;
    for (path, what) in [
        (&opts.donor_app, "donor app"),
        (&opts.donor_test, "donor test"),
        (&opts.recipient_app, "recipient app"),
        (&opts.embeddings, "embedding file"),
    ] {
        require_file(path, what)?;
    }

    let donor_app = load_app(&opts.donor_app)?;
    let donor_test = load_test(&opts.donor_test)?;
    let recipient_app = load_app(&opts.recipient_app)?;
    let store = EmbeddingStore::load(&opts.embeddings)?;

    let outcome = run_search(&cfg, &donor_app, &donor_test, &recipient_app, &store)?;

    let sim = SemSim::new(&store, SimilarityConfig::new(cfg.tau)?);
    let (final_test, final_report) = post_process(
        &outcome.best_test,
        &outcome.best_report,
        &recipient_app,
        &outcome.profile,
        &sim,
        cfg.seed,
    );

    let mapping: Vec<MappingRow> = final_report
        .mapping
        .pairs()
        .map(|(r, d)| {
            let recipient = &final_report.recipient_events[r];
            let donor = &outcome.profile.events[d];
            let (rule, similarity) = match (donor.action, recipient.action) {
                (Action::Fill, Action::Click) => (
                    "fill_to_click",
                    sim.similarity(
                        donor.input_norm.as_ref().expect("donor fill"),
                        &recipient.descriptor.text,
                    ),
                ),
                (Action::Fill, Action::Fill) => (
                    "fill_fill",
                    sim.similarity(&recipient.descriptor.text, &donor.descriptor.text),
                ),
                _ => (
                    "click_click",
                    sim.similarity(&recipient.descriptor.text, &donor.descriptor.text),
                ),
            };
            MappingRow {
                recipient_index: r,
                donor_index: d,
                recipient_descriptor: recipient.descriptor.text.joined(),
                donor_descriptor: donor.descriptor.text.joined(),
                rule,
                similarity,
            }
        })
        .collect();

    let inputs = Inputs {
        donor_app: FileDigest::of(&opts.donor_app)?,
        donor_test: FileDigest::of(&opts.donor_test)?,
        recipient_app: FileDigest::of(&opts.recipient_app)?,
        embeddings: FileDigest::of(&opts.embeddings)?,
    };
    let results = Results {
        best_fitness: final_report.score,
        matched_events: final_report.matched_events,
        applicable_assertions: final_report.applicable_assertions.len(),
        donor_events: final_report.donor_events,
        donor_assertions: final_report.donor_assertions,
        generations_completed: outcome.generations_completed,
        adapted_event_count: final_test.events.len(),
        adapted_assertion_count: final_test.assertions.len(),
    };
    let artifacts = RunArtifacts {
        summary: Summary::new(&cfg, outcome.resolved_initial_length, inputs, results),
        adapted_test: final_test,
        mapping,
        trajectory: outcome.trajectory,
        graph_dump: outcome.graph.dump(),
    };
    write_report(&opts.out, &artifacts)?;
    Ok(artifacts)
}
