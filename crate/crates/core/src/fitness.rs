//! Fitness of a candidate recipient test: execute it, drop non-executable
//! events, compute the maximum valid mapping against the donor, decide which
//! donor assertions are applicable, and score
//! (|M*| + |O*_D|) / (|t_D| + |O_D|).

use rand::Rng;

use crate::appmodel::{run_test, AppModel, TestCase, Trace};
use crate::descriptors::{event_descriptor, widget_descriptor, Descriptor};
use crate::donoranalysis::{AssertionRecord, DonorProfile};
use crate::guigraph::SharedGuiGraph;
use crate::matching::{find_best_mapping, EventSem, Mapping, MatchContext, SemSim};

/// Evaluation result for one individual. `normalized_test` is the input with
/// non-executable events removed; `mapping` and `trace` refer to it.
#[derive(Debug, Clone)]
pub struct FitnessReport {
    pub score: f64,
    pub matched_events: usize,
    /// Indices into the donor's assertion list that are applicable (O*_D).
    pub applicable_assertions: Vec<usize>,
    pub donor_events: usize,
    pub donor_assertions: usize,
    pub mapping: Mapping,
    pub normalized_test: TestCase,
    pub trace: Trace,
    pub recipient_events: Vec<EventSem>,
}

impl FitnessReport {
    pub fn numerator(&self) -> usize {
        self.matched_events + self.applicable_assertions.len()
    }

    pub fn denominator(&self) -> usize {
        self.donor_events + self.donor_assertions
    }

    /// Exact check for fitness one, on the integer fraction.
    pub fn is_perfect(&self) -> bool {
        self.numerator() == self.denominator()
    }
}

/// The fitness equation. An empty donor (no events, no assertions) leaves
/// nothing to adapt; that vacuous case scores 1.0.
pub fn fitness_score(
    matched_events: usize,
    applicable_assertions: usize,
    donor_events: usize,
    donor_assertions: usize,
) -> f64 {
    let numerator = matched_events + applicable_assertions;
    let denominator = donor_events + donor_assertions;
    debug_assert!(numerator <= denominator);
    if denominator == 0 {
        return 1.0;
    }
    numerator as f64 / denominator as f64
}

/// A positive assertion is applicable in a state iff some widget there has a
/// descriptor semantically similar to the assertion's descriptor.
pub fn is_applicable_positive(
    descriptor: &Descriptor,
    state: &crate::appmodel::GuiState,
    sim: &SemSim,
) -> bool {
    state
        .widgets
        .iter()
        .any(|w| sim.is_sem_sim(&widget_descriptor(w, state).text, &descriptor.text))
}

/// First trace index that counts as "after the last event in the mapping":
/// the post-state of the highest mapped recipient event, or the final state
/// when the mapping is empty.
fn after_mapping_start(trace: &Trace, mapping: &Mapping) -> usize {
    match mapping.max_recipient_index() {
        Some(r) => r + 1,
        None => trace.states.len() - 1,
    }
}

/// Witness (i, j) for a negated assertion over a fully executed trace:
/// the positive version is applicable in state i, not applicable in state j,
/// j lies after the last mapped event, i < j, and both states show the same
/// window. Among witnesses the largest i is chosen, then the smallest j,
/// which pins the state used later to retarget injected assertions.
pub fn negated_witness(
    descriptor: &Descriptor,
    trace: &Trace,
    mapping: &Mapping,
    sim: &SemSim,
) -> Option<(usize, usize)> {
    let applicable: Vec<bool> = trace
        .states
        .iter()
        .map(|s| is_applicable_positive(descriptor, s, sim))
        .collect();
    let j_start = after_mapping_start(trace, mapping);
    let mut best: Option<(usize, usize)> = None;
    for j in j_start..trace.states.len() {
        if applicable[j] {
            continue;
        }
        for i in (0..j).rev() {
            if applicable[i] && trace.states[i].window_id == trace.states[j].window_id {
                match best {
                    Some((bi, _)) if bi >= i => {}
                    _ => best = Some((i, j)),
                }
                break;
            }
        }
    }
    best
}

/// Applicability of one donor assertion to the executed recipient test.
/// Positive kinds are checked in the state reached after the last mapped
/// event, which after normalization is the final state of the trace.
pub fn is_applicable(
    record: &AssertionRecord,
    trace: &Trace,
    mapping: &Mapping,
    sim: &SemSim,
) -> bool {
    if record.assertion.kind.is_negated() {
        negated_witness(&record.descriptor, trace, mapping, sim).is_some()
    } else {
        is_applicable_positive(&record.descriptor, trace.final_state(), sim)
    }
}

/// Evaluate one candidate test: run it, drop non-executable events, record
/// the trace into the shared GUI model, extract per-event descriptors from
/// pre-event states, compute M* and O*_D, and score. Pure given the random
/// stream; evaluations of distinct individuals may run concurrently.
pub fn evaluate<R: Rng>(
    test: &TestCase,
    app: &AppModel,
    profile: &DonorProfile,
    sim: &SemSim,
    graph: &SharedGuiGraph,
    rng: &mut R,
) -> FitnessReport {
    let raw_trace = run_test(app, test);
    // dropping non-executed events preserves behavior: they left no state
    let events: Vec<_> = test
        .events
        .iter()
        .zip(&raw_trace.executed)
        .filter(|&(_, &ok)| ok)
        .map(|(e, _)| e.clone())
        .collect();
    let normalized_test = TestCase {
        events: events.clone(),
        assertions: test.assertions.clone(),
    };
    let trace = Trace {
        executed: vec![true; events.len()],
        events,
        states: raw_trace.states,
    };
    graph.record(&trace);

    let recipient_events: Vec<EventSem> = trace
        .events
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let descriptor = event_descriptor(e, &trace.states[k])
                .expect("normalized events executed, so their targets existed");
            EventSem::new(e.action, descriptor, e.input_text.clone())
        })
        .collect();

    let ctx = MatchContext {
        donor: &profile.events,
        cluster_of: &profile.cluster_of,
        sim,
    };
    let mapping = find_best_mapping(&recipient_events, &ctx, rng);

    let applicable_assertions: Vec<usize> = profile
        .assertions
        .iter()
        .enumerate()
        .filter(|(_, record)| is_applicable(record, &trace, &mapping, sim))
        .map(|(i, _)| i)
        .collect();

    let matched_events = mapping.len();
    let score = fitness_score(
        matched_events,
        applicable_assertions.len(),
        profile.test.events.len(),
        profile.assertions.len(),
    );
    FitnessReport {
        score,
        matched_events,
        applicable_assertions,
        donor_events: profile.test.events.len(),
        donor_assertions: profile.assertions.len(),
        mapping,
        normalized_test,
        trace,
        recipient_events,
    }
}
