//! Configuration layering: built-in defaults, then the optional JSON config
//! file (keys match the search-config field names exactly), then command
//! line flags.

use serde::Deserialize;
use std::path::Path;

use testadapt::evolve::{SearchConfig, SearchMode};

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub tau: Option<f64>,
    pub population_size: Option<usize>,
    pub elite_size: Option<usize>,
    pub max_initial_length: Option<usize>,
    pub n_random: Option<usize>,
    pub n_greedy: Option<usize>,
    pub crossover_prob: Option<f64>,
    pub random_mut_prob: Option<f64>,
    pub fitness_mut_prob: Option<f64>,
    pub budget_generations: Option<usize>,
    pub budget_wall_clock: Option<f64>,
    pub mode: Option<SearchMode>,
    pub seed: Option<u64>,
    pub parallel: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
    }

    pub fn apply(&self, cfg: &mut SearchConfig) {
        if let Some(v) = self.tau {
            cfg.tau = v;
        }
        if let Some(v) = self.population_size {
            cfg.population_size = v;
        }
        if let Some(v) = self.elite_size {
            cfg.elite_size = v;
        }
        if let Some(v) = self.max_initial_length {
            cfg.max_initial_length = Some(v);
        }
        if let Some(v) = self.n_random {
            cfg.n_random = v;
        }
        if let Some(v) = self.n_greedy {
            cfg.n_greedy = v;
        }
        if let Some(v) = self.crossover_prob {
            cfg.crossover_prob = v;
        }
        if let Some(v) = self.random_mut_prob {
            cfg.random_mut_prob = v;
        }
        if let Some(v) = self.fitness_mut_prob {
            cfg.fitness_mut_prob = v;
        }
        if let Some(v) = self.budget_generations {
            cfg.budget_generations = v;
        }
        if let Some(v) = self.budget_wall_clock {
            cfg.budget_wall_clock = Some(v);
        }
        if let Some(v) = self.mode {
            cfg.mode = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.parallel {
            cfg.parallel = v;
        }
    }
}
