//! Evolution operators: roulette-wheel selection, single-point crossover
//! with GUI-model repair, and the random / fitness-driven mutations.

use rand::Rng;

use crate::appmodel::{
    enabled_events, run_test, Action, AppModel, Event, TestCase, Trace, WidgetKind,
};
use crate::donoranalysis::DonorProfile;
use crate::fitness::FitnessReport;
use crate::guigraph::SharedGuiGraph;
use crate::matching::SemSim;

use super::generate::{matching_candidates, InputPool};

/// Draw `n_pairs` parent pairs with replacement. Selection probability is
/// proportional to fitness; an all-zero population (or `uniform`) falls back
/// to a uniform draw.
pub fn select_pairs<R: Rng>(
    scores: &[f64],
    n_pairs: usize,
    uniform: bool,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    assert!(!scores.is_empty());
    let total: f64 = scores.iter().sum();
    let draw = |rng: &mut R| -> usize {
        if uniform || total <= 0.0 {
            return rng.gen_range(0..scores.len());
        }
        let mut x = rng.gen_range(0.0..total);
        for (i, &s) in scores.iter().enumerate() {
            if x < s {
                return i;
            }
            x -= s;
        }
        scores.len() - 1
    };
    (0..n_pairs).map(|_| (draw(rng), draw(rng))).collect()
}

/// Concatenate two segments. When the first segment ends in a window other
/// than `second_window` (where the second segment's first event originally
/// ran), a recorded path bridges the two; with no recorded path the raw
/// concatenation stands and evaluation-time normalization absorbs the dead
/// events.
fn splice(
    app: &AppModel,
    graph: &SharedGuiGraph,
    first: &[Event],
    second: &[Event],
    second_window: Option<&str>,
) -> Vec<Event> {
    let mut events: Vec<Event> = first.to_vec();
    if let Some(w2) = second_window {
        let probe = TestCase {
            events: events.clone(),
            assertions: vec![],
        };
        let w1 = run_test(app, &probe).final_state().window_id.clone();
        if w1 != w2 {
            if let Some(bridge) = graph.find_path(&w1, w2) {
                events.extend(bridge);
            }
        }
    }
    events.extend(second.iter().cloned());
    events
}

/// Both concatenations for fixed cut points: first segment of the first
/// parent plus second segment of the second, and second segment of the first
/// plus first segment of the second. The appended part comes from the second
/// parent in both, so only its trace is needed to locate the window its
/// events originally ran in (parents replay fully, so trace state k is the
/// pre-state of event k).
fn crossover_with_cuts(
    t1: &TestCase,
    t2: &TestCase,
    r2: &FitnessReport,
    cut1: usize,
    cut2: usize,
    app: &AppModel,
    graph: &SharedGuiGraph,
) -> (TestCase, TestCase) {
    let tail_window = (cut2 < t2.events.len()).then(|| r2.trace.states[cut2].window_id.as_str());
    let head_window = (cut2 > 0).then(|| r2.trace.states[0].window_id.as_str());
    let a = splice(app, graph, &t1.events[..cut1], &t2.events[cut2..], tail_window);
    let b = splice(app, graph, &t1.events[cut1..], &t2.events[..cut2], head_window);
    (
        TestCase {
            events: a,
            assertions: vec![],
        },
        TestCase {
            events: b,
            assertions: vec![],
        },
    )
}

/// Single-point cut crossover: with probability 1 - CP the parents pass
/// through unchanged; otherwise one random cut point per parent splits each
/// test in two and the two concatenations are formed and repaired against
/// the learned GUI model.
pub fn crossover<R: Rng>(
    parent1: (&TestCase, &FitnessReport),
    parent2: (&TestCase, &FitnessReport),
    app: &AppModel,
    graph: &SharedGuiGraph,
    crossover_prob: f64,
    rng: &mut R,
) -> (TestCase, TestCase) {
    let (t1, _) = parent1;
    let (t2, r2) = parent2;
    if !rng.gen_bool(crossover_prob) {
        return (t1.clone(), t2.clone());
    }
    let cut1 = rng.gen_range(0..=t1.events.len());
    let cut2 = rng.gen_range(0..=t2.events.len());
    crossover_with_cuts(t1, t2, r2, cut1, cut2, app, graph)
}

/// State seen at insertion position `pos` of the traced test: the state after
/// executing everything before `pos`. Valid for partially executable tests.
fn state_at(trace: &Trace, pos: usize) -> &crate::appmodel::GuiState {
    &trace.states[trace.pre_state_index(pos)]
}

fn fillable_fields(state: &crate::appmodel::GuiState) -> Vec<String> {
    state
        .widgets
        .iter()
        .filter(|w| w.kind == WidgetKind::Textfield && w.interactable && w.supports(Action::Fill))
        .map(|w| w.xpath.clone())
        .collect()
}

fn insert_random_event<R: Rng>(test: &mut TestCase, trace: &Trace, pool: &InputPool, rng: &mut R) {
    let pos = rng.gen_range(0..=test.events.len());
    let templates = enabled_events(state_at(trace, pos));
    if templates.is_empty() {
        return;
    }
    let (action, xpath) = templates[rng.gen_range(0..templates.len())].clone();
    let event = match action {
        Action::Click => Event::click(xpath),
        Action::Fill => Event::fill(xpath, pool.draw(rng)),
    };
    test.events.insert(pos, event);
}

fn remove_random_event<R: Rng>(test: &mut TestCase, rng: &mut R) {
    if test.events.is_empty() {
        return;
    }
    let idx = rng.gen_range(0..test.events.len());
    test.events.remove(idx);
}

/// Fill every text field of a multi-field window in one shot; forms with
/// several fields would otherwise take many generations to fill.
fn insert_bulk_fills<R: Rng>(
    test: &mut TestCase,
    trace: &Trace,
    pool: &InputPool,
    cap: usize,
    rng: &mut R,
) {
    let positions: Vec<usize> = (0..=test.events.len())
        .filter(|&p| fillable_fields(state_at(trace, p)).len() >= 2)
        .collect();
    if positions.is_empty() {
        return;
    }
    let pos = positions[rng.gen_range(0..positions.len())];
    for (at, xpath) in (pos..).zip(fillable_fields(state_at(trace, pos))) {
        if test.events.len() >= cap {
            break;
        }
        test.events.insert(at, Event::fill(xpath, pool.draw(rng)));
    }
}

fn fitness_driven_removal<R: Rng>(test: &mut TestCase, report: &FitnessReport, rng: &mut R) {
    let mapped = report.mapping.recipient_indices();
    let candidates: Vec<usize> = (0..test.events.len())
        .filter(|i| !mapped.contains(i))
        .collect();
    if candidates.is_empty() {
        return;
    }
    let idx = candidates[rng.gen_range(0..candidates.len())];
    test.events.remove(idx);
}

fn fitness_driven_addition<R: Rng>(
    test: &mut TestCase,
    report: &FitnessReport,
    profile: &DonorProfile,
    sim: &SemSim,
    rng: &mut R,
) {
    let matched = report.mapping.donor_indices();
    let unmatched: Vec<usize> = (0..profile.events.len())
        .filter(|d| !matched.contains(d))
        .collect();
    if unmatched.is_empty() {
        return;
    }
    let donor_idx = unmatched[rng.gen_range(0..unmatched.len())];
    let pos = rng.gen_range(0..=test.events.len());
    let candidates =
        matching_candidates(state_at(&report.trace, pos), &profile.events[donor_idx], sim);
    if candidates.is_empty() {
        return;
    }
    let event = candidates[rng.gen_range(0..candidates.len())].clone();
    test.events.insert(pos, event);
}

/// Mutation additions are bounded to four donor lengths; the initial-test
/// bound alone would not stop unbounded growth over generations.
pub fn length_cap(donor_len: usize) -> usize {
    donor_len.saturating_mul(4)
}

/// Everything mutation needs besides the individual itself.
pub struct MutationCtx<'a> {
    pub profile: &'a DonorProfile,
    pub app: &'a AppModel,
    pub sim: &'a SemSim<'a>,
    pub pool: &'a InputPool,
}

/// Mutate a test. With probability `fitness_mut_prob` one of two
/// fitness-driven mutations applies (remove an event unmapped in M*, add an
/// event matching an unmapped donor event); independently, with probability
/// `random_mut_prob`, one of three random mutations applies (insert an
/// enabled event at a random position, remove a random event, bulk-fill a
/// multi-field window). A mutation whose candidate set is empty is a no-op.
///
/// The fitness-driven step runs first: it reads the report, which describes
/// the unmutated test. If it changed the test, the random step re-runs the
/// test to get fresh states for its position choices.
pub fn mutate<R: Rng>(
    test: &TestCase,
    report: &FitnessReport,
    ctx: &MutationCtx,
    random_mut_prob: f64,
    fitness_mut_prob: f64,
    rng: &mut R,
) -> TestCase {
    debug_assert_eq!(&report.normalized_test.events, &test.events);
    let cap = length_cap(ctx.profile.events.len());
    let mut out = test.clone();

    if fitness_mut_prob > 0.0 && rng.gen_bool(fitness_mut_prob) {
        if rng.gen_bool(0.5) {
            fitness_driven_removal(&mut out, report, rng);
        } else if out.events.len() < cap {
            fitness_driven_addition(&mut out, report, ctx.profile, ctx.sim, rng);
        }
    }

    if random_mut_prob > 0.0 && rng.gen_bool(random_mut_prob) {
        let rerun;
        let current_trace = if out.events == test.events {
            &report.trace
        } else {
            rerun = run_test(ctx.app, &out);
            &rerun
        };
        match rng.gen_range(0..3) {
            0 => {
                if out.events.len() < cap {
                    insert_random_event(&mut out, current_trace, ctx.pool, rng);
                }
            }
            1 => remove_random_event(&mut out, rng),
            _ => insert_bulk_fills(&mut out, current_trace, ctx.pool, cap, rng),
        }
    }
    out
}
