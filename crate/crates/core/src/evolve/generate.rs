//! Initial-population generators: random walks over enabled events, and the
//! greedy walk that prefers events matching the donor test.

use rand::Rng;

use crate::appmodel::{enabled_events, execute_event, initial_state, Action, AppModel, Event, GuiState, TestCase};
use crate::descriptors::event_descriptor_for;
use crate::donoranalysis::DonorProfile;
use crate::matching::{events_match, EventSem, SemSim};

/// Where random fill inputs come from: the donor's fill texts and assertion
/// texts, plus (with probability 0.25) a fresh random 1-8 character
/// alphanumeric string. Donor-derived inputs are what make fill/fill matches
/// possible at all, since those require equal strings.
#[derive(Debug, Clone)]
pub struct InputPool {
    donor_texts: Vec<String>,
}

const RANDOM_INPUT_PROB: f64 = 0.25;
const ALNUM: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789";

impl InputPool {
    pub fn from_profile(profile: &DonorProfile) -> Self {
        let mut donor_texts: Vec<String> = profile
            .test
            .events
            .iter()
            .filter_map(|e| e.input_text.clone())
            .chain(profile.test.assertions.iter().map(|a| a.text.clone()))
            .filter(|t| !t.is_empty())
            .collect();
        donor_texts.sort();
        donor_texts.dedup();
        Self { donor_texts }
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> String {
        if self.donor_texts.is_empty() || rng.gen_bool(RANDOM_INPUT_PROB) {
            let len = rng.gen_range(1..=8);
            (0..len)
                .map(|_| ALNUM[rng.gen_range(0..ALNUM.len())] as char)
                .collect()
        } else {
            self.donor_texts[rng.gen_range(0..self.donor_texts.len())].clone()
        }
    }
}

fn concretize<R: Rng>(
    template: (Action, String),
    pool: &InputPool,
    rng: &mut R,
) -> Event {
    match template.0 {
        Action::Click => Event::click(template.1),
        Action::Fill => Event::fill(template.1, pool.draw(rng)),
    }
}

/// Random test: repeatedly pick a uniformly random enabled event, execute it
/// and append, up to `max_len` events. A state with nothing enabled
/// truncates the test. Every generated event executes by construction.
pub fn generate_random_test<R: Rng>(
    app: &AppModel,
    max_len: usize,
    pool: &InputPool,
    rng: &mut R,
) -> TestCase {
    let mut state = initial_state(app);
    let mut events = Vec::with_capacity(max_len);
    while events.len() < max_len {
        let templates = enabled_events(&state.view());
        if templates.is_empty() {
            break;
        }
        let template = templates[rng.gen_range(0..templates.len())].clone();
        let event = concretize(template, pool, rng);
        let (next, ok) = execute_event(&state, &event, app);
        debug_assert!(ok, "enabled events execute");
        state = next;
        events.push(event);
    }
    TestCase {
        events,
        assertions: vec![],
    }
}

/// Concrete events available in `state` that match `donor` under the event
/// match relation; fill candidates copy the donor fill's input, which
/// fill/fill matching requires.
pub fn matching_candidates(
    state: &GuiState,
    donor: &EventSem,
    sim: &SemSim,
) -> Vec<Event> {
    let mut out = Vec::new();
    for (action, xpath) in enabled_events(state) {
        let Ok(descriptor) = event_descriptor_for(action, &xpath, state) else {
            continue;
        };
        let candidate = match action {
            Action::Click => Event::click(xpath),
            Action::Fill => match &donor.input {
                Some(text) if donor.action == Action::Fill => Event::fill(xpath, text.clone()),
                _ => continue,
            },
        };
        let sem = EventSem::new(action, descriptor, candidate.input_text.clone());
        if events_match(&sem, donor, sim) {
            out.push(candidate);
        }
    }
    out
}

/// Greedy test: at each step pick uniformly among the enabled events that
/// match some donor event; when none does, fall back to a random step.
pub fn generate_greedy_test<R: Rng>(
    app: &AppModel,
    profile: &DonorProfile,
    sim: &SemSim,
    max_len: usize,
    pool: &InputPool,
    rng: &mut R,
) -> TestCase {
    let mut state = initial_state(app);
    let mut events = Vec::with_capacity(max_len);
    while events.len() < max_len {
        let view = state.view();
        let mut candidates: Vec<Event> = profile
            .events
            .iter()
            .flat_map(|donor| matching_candidates(&view, donor, sim))
            .collect();
        candidates.sort();
        candidates.dedup();
        let event = if candidates.is_empty() {
            let templates = enabled_events(&view);
            if templates.is_empty() {
                break;
            }
            let template = templates[rng.gen_range(0..templates.len())].clone();
            concretize(template, pool, rng)
        } else {
            candidates[rng.gen_range(0..candidates.len())].clone()
        };
        let (next, ok) = execute_event(&state, &event, app);
        debug_assert!(ok, "enabled events execute");
        state = next;
        events.push(event);
    }
    TestCase {
        events,
        assertions: vec![],
    }
}
