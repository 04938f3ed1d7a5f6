//! Donor-side analysis: replay the donor test, capture oracle context, and
//! compute the reorder relation on consecutive events together with the
//! clusters it induces.
//!
//! Two consecutive events can be reordered iff the second is enabled in the
//! state before the first and the first is enabled in the state after the
//! second. Enabledness here is purely state-based (a widget with the same
//! xpath exists and is interactable); nothing is re-executed in swapped
//! order. Maximal runs of reorderable consecutive events form the clusters,
//! and `isBefore` holds for i < j in distinct clusters.

use crate::appmodel::{
    check_assertions, run_test, AppModel, Assertion, Event, GuiState, TestCase, Trace,
};
use crate::descriptors::{assertion_descriptor, event_descriptor, Descriptor};
use crate::error::{Error, Result};
use crate::matching::EventSem;

/// Everything the search needs to know about the donor test.
#[derive(Debug, Clone)]
pub struct DonorProfile {
    pub test: TestCase,
    /// Per-event semantics, descriptors extracted from pre-event states.
    pub events: Vec<EventSem>,
    pub assertions: Vec<AssertionRecord>,
    /// Contiguous index ranges (start..=end) partitioning the events.
    pub clusters: Vec<(usize, usize)>,
    /// Cluster id per event index.
    pub cluster_of: Vec<usize>,
    pub trace: Trace,
}

/// One donor assertion with the context logged when it was checked.
#[derive(Debug, Clone)]
pub struct AssertionRecord {
    pub assertion: Assertion,
    pub descriptor: Descriptor,
    pub logged_state: GuiState,
    /// Always true: the donor test must pass on the donor app.
    pub expected: bool,
}

/// Enabledness used by the reorder relation: same xpath, interactable.
/// Weaker than execution enabledness on purpose; action support and fill
/// inputs are ignored.
fn enabled_for_reorder(state: &GuiState, event: &Event) -> bool {
    state
        .widget(&event.target_xpath)
        .map(|w| w.interactable)
        .unwrap_or(false)
}

/// Whether events k and k+1 (0-based) of a fully executed trace can be
/// reordered.
pub fn can_reorder(trace: &Trace, k: usize) -> bool {
    debug_assert!(trace.all_executed());
    debug_assert!(k + 1 < trace.events.len());
    enabled_for_reorder(&trace.states[k], &trace.events[k + 1])
        && enabled_for_reorder(&trace.states[k + 2], &trace.events[k])
}

/// Build contiguous clusters from the pairwise link relation; calls `link`
/// exactly once per consecutive pair (n - 1 times).
pub fn clusters_from_links(
    n: usize,
    mut link: impl FnMut(usize) -> bool,
) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut clusters = Vec::new();
    let mut cluster_of = Vec::with_capacity(n);
    if n == 0 {
        return (clusters, cluster_of);
    }
    let mut start = 0usize;
    for k in 0..n - 1 {
        if !link(k) {
            clusters.push((start, k));
            start = k + 1;
        }
    }
    clusters.push((start, n - 1));
    for (id, &(s, e)) in clusters.iter().enumerate() {
        for _ in s..=e {
            cluster_of.push(id);
        }
    }
    (clusters, cluster_of)
}

/// cluster(e_i) != cluster(e_j) and i < j.
pub fn is_before(cluster_of: &[usize], i: usize, j: usize) -> bool {
    cluster_of[i] != cluster_of[j] && i < j
}

/// Replay the donor test on the donor app and collect descriptors, logged
/// assertion context and the event clusters. The donor test must replay in
/// full and all its assertions must hold on the final state.
pub fn extract_donor_profile(app: &AppModel, test: &TestCase) -> Result<DonorProfile> {
    let trace = run_test(app, test);
    if let Some(k) = trace.executed.iter().position(|&x| !x) {
        return Err(Error::DonorNotReplayable { index: k });
    }
    let final_state = trace.final_state().clone();
    let outcomes = check_assertions(&final_state, &test.assertions);
    if let Some(i) = outcomes.iter().position(|&ok| !ok) {
        return Err(Error::DonorAssertionFailed { index: i });
    }

    let mut events = Vec::with_capacity(test.events.len());
    for (k, event) in test.events.iter().enumerate() {
        let descriptor = event_descriptor(event, &trace.states[k])?;
        events.push(EventSem::new(event.action, descriptor, event.input_text.clone()));
    }

    let mut assertions = Vec::with_capacity(test.assertions.len());
    for assertion in &test.assertions {
        let descriptor = assertion_descriptor(assertion, &final_state)?;
        assertions.push(AssertionRecord {
            assertion: assertion.clone(),
            descriptor,
            logged_state: final_state.clone(),
            expected: true,
        });
    }

    let (clusters, cluster_of) =
        clusters_from_links(test.events.len(), |k| can_reorder(&trace, k));

    Ok(DonorProfile {
        test: test.clone(),
        events,
        assertions,
        clusters,
        cluster_of,
        trace,
    })
}
