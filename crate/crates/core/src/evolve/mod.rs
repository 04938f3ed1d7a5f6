//! The evolutionary search: population initialization, elitism, selection,
//! crossover, mutation, termination, and the Random/Basic baseline modes.

mod generate;
mod operators;
pub(crate) mod streams;

pub use generate::{generate_greedy_test, generate_random_test, InputPool};
pub use operators::{crossover, length_cap, mutate, select_pairs, MutationCtx};
pub use streams::{stream, StreamKind};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

use crate::appmodel::{AppModel, TestCase};
use crate::donoranalysis::{extract_donor_profile, DonorProfile};
use crate::error::{Error, Result};
use crate::fitness::{evaluate, FitnessReport};
use crate::guigraph::{GuiGraph, SharedGuiGraph};
use crate::matching::SemSim;
use crate::textsem::{EmbeddingStore, SimilarityConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Greedy seeding, roulette selection, elitism, both mutation kinds.
    Full,
    /// Full minus greedy seeding and fitness-driven mutation.
    Basic,
    /// Fully random: uniform selection, no elitism, random seeding only.
    Random,
}

impl std::str::FromStr for SearchMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "full" => Ok(SearchMode::Full),
            "basic" => Ok(SearchMode::Basic),
            "random" => Ok(SearchMode::Random),
            other => Err(format!("unknown mode {other:?} (full|basic|random)")),
        }
    }
}

/// Search parameters. The defaults are the standard configuration: tau 0.65,
/// population 100 with 10 elites, 90 random plus 10 greedy seeds, crossover
/// 0.40, random mutation 0.35, fitness-driven mutation 0.35, and an initial
/// length equal to the donor test's.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub tau: f64,
    pub population_size: usize,
    pub elite_size: usize,
    /// `None` resolves to the donor test length at run start.
    pub max_initial_length: Option<usize>,
    pub n_random: usize,
    pub n_greedy: usize,
    pub crossover_prob: f64,
    pub random_mut_prob: f64,
    pub fitness_mut_prob: f64,
    pub budget_generations: usize,
    /// Optional wall-clock budget in seconds, checked between generations so
    /// a generation budget alone stays deterministic.
    pub budget_wall_clock: Option<f64>,
    pub mode: SearchMode,
    pub seed: u64,
    /// Evaluate individuals in parallel; results are identical either way.
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            tau: 0.65,
            population_size: 100,
            elite_size: 10,
            max_initial_length: None,
            n_random: 90,
            n_greedy: 10,
            crossover_prob: 0.40,
            random_mut_prob: 0.35,
            fitness_mut_prob: 0.35,
            budget_generations: 100,
            budget_wall_clock: None,
            mode: SearchMode::Full,
            seed: 0,
            parallel: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_random + self.n_greedy != self.population_size {
            return Err(Error::Config(format!(
                "n_random ({}) + n_greedy ({}) must equal population_size ({})",
                self.n_random, self.n_greedy, self.population_size
            )));
        }
        if self.elite_size == 0 || self.elite_size >= self.population_size {
            return Err(Error::Config(format!(
                "elite_size ({}) must satisfy 0 < E < N ({})",
                self.elite_size, self.population_size
            )));
        }
        for (name, p) in [
            ("tau", self.tau),
            ("crossover_prob", self.crossover_prob),
            ("random_mut_prob", self.random_mut_prob),
            ("fitness_mut_prob", self.fitness_mut_prob),
        ] {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(Error::Config(format!("{name} must be in [0,1], got {p}")));
            }
        }
        if let Some(s) = self.budget_wall_clock {
            if s <= 0.0 || s.is_nan() {
                return Err(Error::Config("budget_wall_clock must be positive".into()));
            }
        }
        Ok(())
    }

    /// Mode-resolved parameters: random mode seeds everything randomly,
    /// selects uniformly, disables elitism and fitness-driven mutation;
    /// basic mode disables exactly greedy seeding and fitness-driven
    /// mutation.
    pub fn effective(&self) -> EffectiveParams {
        match self.mode {
            SearchMode::Full => EffectiveParams {
                n_random: self.n_random,
                n_greedy: self.n_greedy,
                fitness_mut_prob: self.fitness_mut_prob,
                roulette: true,
                elitism: true,
            },
            SearchMode::Basic => EffectiveParams {
                n_random: self.population_size,
                n_greedy: 0,
                fitness_mut_prob: 0.0,
                roulette: true,
                elitism: true,
            },
            SearchMode::Random => EffectiveParams {
                n_random: self.population_size,
                n_greedy: 0,
                fitness_mut_prob: 0.0,
                roulette: false,
                elitism: false,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveParams {
    pub n_random: usize,
    pub n_greedy: usize,
    pub fitness_mut_prob: f64,
    pub roulette: bool,
    pub elitism: bool,
}

pub type Individual = (TestCase, FitnessReport);

/// Best-E individuals ever observed, ordered by score descending with
/// earlier observations winning ties.
#[derive(Debug, Default)]
struct EliteArchive {
    entries: Vec<Individual>,
    capacity: usize,
}

impl EliteArchive {
    fn new(capacity: usize) -> Self {
        Self {
            entries: Vec::new(),
            capacity,
        }
    }

    fn insert(&mut self, individual: &Individual) {
        let pos = self
            .entries
            .partition_point(|(_, r)| r.score >= individual.1.score);
        if pos >= self.capacity {
            return;
        }
        self.entries.insert(pos, individual.clone());
        self.entries.truncate(self.capacity);
    }

    fn top(&self) -> &[Individual] {
        &self.entries
    }
}

/// Tracks the single best individual ever observed; ties keep the earliest.
#[derive(Debug, Default)]
struct BestTracker {
    best: Option<Individual>,
}

impl BestTracker {
    fn update(&mut self, individual: &Individual) {
        let better = match &self.best {
            None => true,
            Some((_, r)) => individual.1.score > r.score,
        };
        if better {
            self.best = Some(individual.clone());
        }
    }

    fn score(&self) -> f64 {
        self.best.as_ref().map(|(_, r)| r.score).unwrap_or(0.0)
    }
}

pub struct SearchOutcome {
    pub best_test: TestCase,
    pub best_report: FitnessReport,
    /// Best-ever score after generation 0 (initialization) and after each
    /// completed generation.
    pub trajectory: Vec<f64>,
    pub generations_completed: usize,
    pub graph: GuiGraph,
    pub profile: DonorProfile,
    /// The donor-length-resolved maximum initial test length.
    pub resolved_initial_length: usize,
}

struct SearchState<'a> {
    cfg: &'a SearchConfig,
    app: &'a AppModel,
    profile: &'a DonorProfile,
    sim: &'a SemSim<'a>,
    graph: &'a SharedGuiGraph,
    pool: InputPool,
    archive: EliteArchive,
    best: BestTracker,
    population: Vec<Individual>,
}

impl<'a> SearchState<'a> {
    fn evaluate_at(&self, test: &TestCase, kind: StreamKind, gen: u64, idx: u64) -> FitnessReport {
        let mut rng = stream(self.cfg.seed, kind, gen, idx);
        evaluate(test, self.app, self.profile, self.sim, self.graph, &mut rng)
    }

    /// Evaluate, mutate with the fresh report, and re-evaluate if the
    /// mutation changed anything. Both evaluations count as observed
    /// individuals. Each index draws its own streams, so the map can run in
    /// parallel without affecting results.
    fn grow_offspring(&self, test: TestCase, gen: u64, idx: u64, ep: &EffectiveParams) -> Vec<Individual> {
        let report = self.evaluate_at(&test, StreamKind::Eval, gen, idx);
        // the individual carried forward is the normalized (fully
        // executable) form of the offspring
        let first = (report.normalized_test.clone(), report);
        let mut rng = stream(self.cfg.seed, StreamKind::Mutate, gen, idx);
        let ctx = MutationCtx {
            profile: self.profile,
            app: self.app,
            sim: self.sim,
            pool: &self.pool,
        };
        let mutated = mutate(
            &first.0,
            &first.1,
            &ctx,
            self.cfg.random_mut_prob,
            ep.fitness_mut_prob,
            &mut rng,
        );
        if mutated.events == first.0.events {
            return vec![first];
        }
        let report2 = self.evaluate_at(&mutated, StreamKind::EvalMutated, gen, idx);
        let second = (report2.normalized_test.clone(), report2);
        vec![first, second]
    }

    fn observe(&mut self, individual: &Individual) {
        self.archive.insert(individual);
        self.best.update(individual);
    }

    fn init_population(&mut self, max_len: usize) {
        let ep = self.cfg.effective();
        let mut seeds = Vec::with_capacity(self.cfg.population_size);
        for i in 0..ep.n_random {
            let mut rng = stream(self.cfg.seed, StreamKind::InitRandom, 0, i as u64);
            seeds.push(generate_random_test(self.app, max_len, &self.pool, &mut rng));
        }
        for i in 0..ep.n_greedy {
            let mut rng = stream(self.cfg.seed, StreamKind::InitGreedy, 0, i as u64);
            seeds.push(generate_greedy_test(
                self.app,
                self.profile,
                self.sim,
                max_len,
                &self.pool,
                &mut rng,
            ));
        }
        let evaluated: Vec<Individual> = self.map_indexed(seeds, |state, test, idx| {
            let report = state.evaluate_at(&test, StreamKind::Eval, 0, idx);
            (report.normalized_test.clone(), report)
        });
        for ind in &evaluated {
            self.observe(ind);
        }
        self.population = evaluated;
    }

    /// Order-preserving map over offspring, parallel when configured.
    fn map_indexed<T, U, F>(&self, items: Vec<T>, f: F) -> Vec<U>
    where
        T: Send,
        U: Send,
        F: Fn(&Self, T, u64) -> U + Sync,
        Self: Sync,
    {
        if self.cfg.parallel {
            items
                .into_par_iter()
                .enumerate()
                .map(|(i, t)| f(self, t, i as u64))
                .collect()
        } else {
            items
                .into_iter()
                .enumerate()
                .map(|(i, t)| f(self, t, i as u64))
                .collect()
        }
    }

    fn evolve_generation(&mut self, gen: u64) {
        let ep = self.cfg.effective();
        let elites: Vec<Individual> = if ep.elitism {
            self.archive.top().to_vec()
        } else {
            Vec::new()
        };
        let quota = self.cfg.population_size - elites.len();

        let scores: Vec<f64> = self.population.iter().map(|(_, r)| r.score).collect();
        let n_pairs = self.cfg.population_size.div_ceil(2);
        let mut sel_rng = stream(self.cfg.seed, StreamKind::Select, gen, 0);
        let pairs = select_pairs(&scores, n_pairs, !ep.roulette, &mut sel_rng);

        let mut offspring: Vec<TestCase> = Vec::with_capacity(2 * pairs.len());
        for (pair_idx, &(a, b)) in pairs.iter().enumerate() {
            let mut rng = stream(self.cfg.seed, StreamKind::Crossover, gen, pair_idx as u64);
            let (o1, o2) = crossover(
                (&self.population[a].0, &self.population[a].1),
                (&self.population[b].0, &self.population[b].1),
                self.app,
                self.graph,
                self.cfg.crossover_prob,
                &mut rng,
            );
            offspring.push(o1);
            offspring.push(o2);
        }
        offspring.truncate(quota);

        let grown: Vec<Vec<Individual>> =
            self.map_indexed(offspring, |state, test, idx| state.grow_offspring(test, gen, idx, &ep));

        let mut next = elites;
        for observed in grown {
            for ind in &observed {
                self.observe(ind);
            }
            next.push(observed.into_iter().last().expect("at least one evaluation"));
        }
        debug_assert_eq!(next.len(), self.cfg.population_size);
        self.population = next;
    }
}

/// Run the full search: donor analysis, initialization, then evolution until
/// the generation budget, the optional wall-clock budget, or a perfect
/// fitness. Returns the best individual before post-processing, plus the
/// best-ever trajectory (entry 0 is the initial population's).
pub fn run_search(
    cfg: &SearchConfig,
    donor_app: &AppModel,
    donor_test: &TestCase,
    recipient_app: &AppModel,
    store: &EmbeddingStore,
) -> Result<SearchOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let profile = extract_donor_profile(donor_app, donor_test)?;
    let sim = SemSim::new(store, SimilarityConfig::new(cfg.tau)?);
    let graph = SharedGuiGraph::default();
    let max_len = cfg.max_initial_length.unwrap_or(donor_test.events.len());

    let mut state = SearchState {
        cfg,
        app: recipient_app,
        profile: &profile,
        sim: &sim,
        graph: &graph,
        pool: InputPool::from_profile(&profile),
        archive: EliteArchive::new(cfg.elite_size),
        best: BestTracker::default(),
        population: Vec::new(),
    };
    state.init_population(max_len);

    let mut trajectory = vec![state.best.score()];
    let mut generations_completed = 0usize;
    let budget = cfg.budget_wall_clock.map(Duration::from_secs_f64);
    let perfect = |s: &SearchState| {
        s.best
            .best
            .as_ref()
            .map(|(_, r)| r.is_perfect())
            .unwrap_or(false)
    };

    if !perfect(&state) {
        for gen in 1..=cfg.budget_generations {
            if let Some(limit) = budget {
                if started.elapsed() >= limit {
                    break;
                }
            }
            state.evolve_generation(gen as u64);
            generations_completed = gen;
            trajectory.push(state.best.score());
            if perfect(&state) {
                break;
            }
        }
    }

    let (best_test, best_report) = state.best.best.expect("population was evaluated");
    Ok(SearchOutcome {
        best_test,
        best_report,
        trajectory,
        generations_completed,
        graph: graph.snapshot(),
        profile,
        resolved_initial_length: max_len,
    })
}
