//! Post-processing of the fittest individual: test reduction and oracle
//! injection.

use crate::appmodel::{AppModel, Assertion, AssertionKind, GuiState, TestCase};
use crate::descriptors::{widget_descriptor, Descriptor};
use crate::donoranalysis::DonorProfile;
use crate::evolve::{stream, StreamKind};
use crate::fitness::{evaluate, negated_witness, FitnessReport};
use crate::guigraph::SharedGuiGraph;
use crate::matching::SemSim;

/// Remove, one by one and in reverse position order, the events that are not
/// part of the mapping used to compute the fitness; a removal is kept only
/// if the re-evaluated score did not decrease. Mapped events are never
/// candidates. The returned test is the final report's normalized form, so
/// it replays in full.
pub fn reduce_test(
    test: &TestCase,
    report: &FitnessReport,
    app: &AppModel,
    profile: &DonorProfile,
    sim: &SemSim,
    seed: u64,
) -> (TestCase, FitnessReport) {
    debug_assert_eq!(&report.normalized_test.events, &test.events);
    let mapped = report.mapping.recipient_indices();
    let mut candidates: Vec<usize> = (0..test.events.len())
        .filter(|i| !mapped.contains(i))
        .collect();
    candidates.sort_unstable_by(|a, b| b.cmp(a));

    // post-search bookkeeping; the learned model is not updated here
    let scratch = SharedGuiGraph::default();
    let mut current = (test.clone(), report.clone());
    for (step, idx) in candidates.into_iter().enumerate() {
        // earlier (lower) positions stay valid: only higher ones were removed
        let mut candidate = current.0.clone();
        candidate.events.remove(idx);
        let mut rng = stream(seed, StreamKind::Reduce, step as u64, 0);
        let new_report = evaluate(&candidate, app, profile, sim, &scratch, &mut rng);
        if new_report.score >= current.1.score {
            current = (candidate, new_report);
        }
    }
    let (_, final_report) = current;
    (final_report.normalized_test.clone(), final_report)
}

/// The widget in `state` most similar to the assertion's descriptor, with
/// ties broken by the smaller xpath.
fn most_similar_widget<'a>(
    state: &'a GuiState,
    descriptor: &Descriptor,
    sim: &SemSim,
) -> Option<&'a crate::appmodel::Widget> {
    state
        .widgets
        .iter()
        .map(|w| {
            let s = sim.similarity(&widget_descriptor(w, state).text, &descriptor.text);
            (w, s)
        })
        .max_by(|(wa, sa), (wb, sb)| sa.total_cmp(sb).then_with(|| wb.xpath.cmp(&wa.xpath)))
        .map(|(w, _)| w)
}

/// Append every applicable donor assertion to the test, rewritten against
/// the recipient: text assertions keep the donor text; widget assertions are
/// retargeted to the xpath of the recipient widget that satisfied
/// applicability (the most similar widget in the reference state — the final
/// state for positive kinds, the witness state where the positive version
/// held for negated kinds).
pub fn inject_oracles(
    test: &TestCase,
    report: &FitnessReport,
    profile: &DonorProfile,
    sim: &SemSim,
) -> TestCase {
    let mut out = test.clone();
    for &idx in &report.applicable_assertions {
        let record = &profile.assertions[idx];
        let kind = record.assertion.kind;
        let assertion = match kind {
            AssertionKind::Exists | AssertionKind::NotExists => Assertion {
                kind,
                text: record.assertion.text.clone(),
                target_xpath: None,
            },
            AssertionKind::HasText | AssertionKind::NotHasText => {
                let reference_state = if kind.is_negated() {
                    let (i, _) =
                        negated_witness(&record.descriptor, &report.trace, &report.mapping, sim)
                            .expect("assertion was applicable");
                    &report.trace.states[i]
                } else {
                    report.trace.final_state()
                };
                let target = most_similar_widget(reference_state, &record.descriptor, sim)
                    .expect("a similar widget satisfied applicability");
                Assertion {
                    kind,
                    text: record.assertion.text.clone(),
                    target_xpath: Some(target.xpath.clone()),
                }
            }
        };
        out.assertions.push(assertion);
    }
    out
}

/// Reduction followed by injection on the search's best individual.
pub fn post_process(
    best_test: &TestCase,
    best_report: &FitnessReport,
    app: &AppModel,
    profile: &DonorProfile,
    sim: &SemSim,
    seed: u64,
) -> (TestCase, FitnessReport) {
    let (reduced, report) = reduce_test(best_test, best_report, app, profile, sim, seed);
    let injected = inject_oracles(&reduced, &report, profile, sim);
    (injected, report)
}
