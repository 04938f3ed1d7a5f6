//! Output artifacts of an adaptation run. Every file is deterministic given
//! the seed: the adapted test, the mapping report, the per-generation
//! trajectory CSV, the learned GUI-model dump, and a machine-readable
//! summary carrying everything needed to reproduce the run.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

use testadapt::appmodel::TestCase;
use testadapt::evolve::{SearchConfig, SearchMode};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        Ok(Self {
            path: path.display().to_string(),
            sha256: hex::encode(hasher.finalize()),
        })
    }
}

/// The nine tuning parameters, echoed with the resolved initial length.
#[derive(Debug, Serialize)]
pub struct Parameters {
    pub tau: f64,
    pub population_size: usize,
    pub elite_size: usize,
    pub max_initial_length: usize,
    pub n_random: usize,
    pub n_greedy: usize,
    pub crossover_prob: f64,
    pub random_mut_prob: f64,
    pub fitness_mut_prob: f64,
}

#[derive(Debug, Serialize)]
pub struct Inputs {
    pub donor_app: FileDigest,
    pub donor_test: FileDigest,
    pub recipient_app: FileDigest,
    pub embeddings: FileDigest,
}

#[derive(Debug, Serialize)]
pub struct Results {
    pub best_fitness: f64,
    pub matched_events: usize,
    pub applicable_assertions: usize,
    pub donor_events: usize,
    pub donor_assertions: usize,
    pub generations_completed: usize,
    pub adapted_event_count: usize,
    pub adapted_assertion_count: usize,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub parameters: Parameters,
    pub mode: SearchMode,
    pub seed: u64,
    pub budget_generations: usize,
    pub budget_wall_clock: Option<f64>,
    pub parallel: bool,
    pub inputs: Inputs,
    pub results: Results,
}

impl Summary {
    pub fn new(
        cfg: &SearchConfig,
        resolved_initial_length: usize,
        inputs: Inputs,
        results: Results,
    ) -> Self {
        Self {
            parameters: Parameters {
                tau: cfg.tau,
                population_size: cfg.population_size,
                elite_size: cfg.elite_size,
                max_initial_length: resolved_initial_length,
                n_random: cfg.n_random,
                n_greedy: cfg.n_greedy,
                crossover_prob: cfg.crossover_prob,
                random_mut_prob: cfg.random_mut_prob,
                fitness_mut_prob: cfg.fitness_mut_prob,
            },
            mode: cfg.mode,
            seed: cfg.seed,
            budget_generations: cfg.budget_generations,
            budget_wall_clock: cfg.budget_wall_clock,
            parallel: cfg.parallel,
            inputs,
            results,
        }
    }
}

/// One matched pair of the final mapping, with both descriptors and the
/// similarity value the match rule compared against tau.
#[derive(Debug, Serialize)]
pub struct MappingRow {
    pub recipient_index: usize,
    pub donor_index: usize,
    pub recipient_descriptor: String,
    pub donor_descriptor: String,
    pub rule: &'static str,
    pub similarity: f64,
}

#[derive(Debug)]
pub struct RunArtifacts {
    pub summary: Summary,
    pub adapted_test: TestCase,
    pub mapping: Vec<MappingRow>,
    /// Best-ever fitness after generation 0 and after each generation.
    pub trajectory: Vec<f64>,
    pub graph_dump: String,
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

pub fn trajectory_csv(trajectory: &[f64]) -> String {
    let mut csv = String::from("generation,best_fitness\n");
    for (generation, best) in trajectory.iter().enumerate() {
        csv.push_str(&format!("{generation},{best}\n"));
    }
    csv
}

/// Write all artifacts into `out_dir` (created if needed). Returns the paths
/// written: adapted_test.json, mapping.json, trajectory.csv, gui_graph.txt,
/// summary.json.
pub fn write_report(out_dir: &Path, artifacts: &RunArtifacts) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut written = Vec::new();

    let test_path = out_dir.join("adapted_test.json");
    let test_json = serde_json::to_string_pretty(&artifacts.adapted_test)
        .expect("test serialization cannot fail");
    write(&test_path, format!("{test_json}\n").as_bytes())?;
    written.push(test_path);

    let mapping_path = out_dir.join("mapping.json");
    let mapping_json =
        serde_json::to_string_pretty(&artifacts.mapping).expect("mapping serialization");
    write(&mapping_path, format!("{mapping_json}\n").as_bytes())?;
    written.push(mapping_path);

    let trajectory_path = out_dir.join("trajectory.csv");
    write(&trajectory_path, trajectory_csv(&artifacts.trajectory).as_bytes())?;
    written.push(trajectory_path);

    let graph_path = out_dir.join("gui_graph.txt");
    write(&graph_path, artifacts.graph_dump.as_bytes())?;
    written.push(graph_path);

    let summary_path = out_dir.join("summary.json");
    let summary_json =
        serde_json::to_string_pretty(&artifacts.summary).expect("summary serialization");
    write(&summary_path, format!("{summary_json}\n").as_bytes())?;
    written.push(summary_path);

    Ok(written)
}
