//! Test execution over an [`AppModel`]: pure functions threading an explicit
//! [`AppState`], so concurrent runs on a shared model cannot interfere.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::{
    Action, AppModel, Assertion, AssertionKind, Effect, Event, GuardPredicate, GuiState,
    TestCase, TextValue, Widget,
};

/// Full runtime state: every window's current widgets plus the active window.
/// [`GuiState`] is the observable projection of the active window.
#[derive(Debug, Clone, PartialEq)]
pub struct AppState {
    active: String,
    windows: BTreeMap<String, Vec<Widget>>,
}

impl AppState {
    pub fn active_window(&self) -> &str {
        &self.active
    }

    /// Observable state of the active window.
    pub fn view(&self) -> GuiState {
        GuiState {
            window_id: self.active.clone(),
            widgets: self.windows[&self.active].clone(),
        }
    }

    fn widget_in(&self, window: &str, xpath: &str) -> Option<&Widget> {
        self.windows
            .get(window)
            .and_then(|ws| ws.iter().find(|w| w.xpath == xpath))
    }

    fn widget_in_mut(&mut self, window: &str, xpath: &str) -> Option<&mut Widget> {
        self.windows
            .get_mut(window)
            .and_then(|ws| ws.iter_mut().find(|w| w.xpath == xpath))
    }
}

/// Fresh state from the model's declared widgets; every call returns an
/// independent deep copy, mirroring a clean (re)install before each test.
pub fn initial_state(app: &AppModel) -> AppState {
    AppState {
        active: app.initial_window.clone(),
        windows: app.windows.clone(),
    }
}

/// Event templates enabled in a state: one click per interactable widget
/// supporting click, one fill (input unspecified) per interactable widget
/// supporting fill, in widget order.
pub fn enabled_events(state: &GuiState) -> Vec<(Action, String)> {
    let mut out = Vec::new();
    for w in &state.widgets {
        if !w.interactable {
            continue;
        }
        if w.supports(Action::Click) {
            out.push((Action::Click, w.xpath.clone()));
        }
        if w.supports(Action::Fill) {
            out.push((Action::Fill, w.xpath.clone()));
        }
    }
    out
}

/// Whether an event's template is enabled: its target exists in the state,
/// is interactable, and supports the action.
pub fn is_enabled(state: &GuiState, action: Action, target_xpath: &str) -> bool {
    state
        .widget(target_xpath)
        .map(|w| w.interactable && w.supports(action))
        .unwrap_or(false)
}

fn guards_hold(state: &AppState, rule: &super::TransitionRule) -> bool {
    rule.guards.iter().all(|g| {
        match state.widget_in(&rule.from_window, &g.widget_xpath) {
            None => false,
            Some(w) => match &g.predicate {
                GuardPredicate::Nonempty => !w.text.is_empty(),
                GuardPredicate::Equals(v) => w.text == *v,
            },
        }
    })
}

fn resolve_text(
    value: &TextValue,
    from_snapshot: &[Widget],
    state: &AppState,
    to_window: &str,
) -> String {
    match value {
        TextValue::Literal(s) => s.clone(),
        TextValue::CopyFrom(xpath) => from_snapshot
            .iter()
            .find(|w| w.xpath == *xpath)
            .map(|w| w.text.clone())
            .or_else(|| state.widget_in(to_window, xpath).map(|w| w.text.clone()))
            .unwrap_or_default(),
    }
}

fn apply_effect(state: &mut AppState, effect: &Effect, from_snapshot: &[Widget]) {
    let to_window = state.active.clone();
    match effect {
        Effect::SetText {
            widget_xpath,
            value,
        } => {
            let text = resolve_text(value, from_snapshot, state, &to_window);
            if let Some(w) = state.widget_in_mut(&to_window, widget_xpath) {
                w.text = text;
            }
        }
        Effect::CreateWidget {
            window_id,
            template,
        } => {
            let mut widget = template.as_widget_shell();
            widget.text = resolve_text(&template.text, from_snapshot, state, &to_window);
            if let Some(widgets) = state.windows.get_mut(window_id) {
                match widgets.iter_mut().find(|w| w.xpath == widget.xpath) {
                    Some(existing) => *existing = widget,
                    None => widgets.push(widget),
                }
            }
        }
        Effect::RemoveWidget {
            window_id,
            widget_xpath,
        } => {
            if let Some(widgets) = state.windows.get_mut(window_id) {
                widgets.retain(|w| w.xpath != *widget_xpath);
            }
        }
        Effect::SetInteractable {
            widget_xpath,
            interactable,
        } => {
            if let Some(w) = state.widget_in_mut(&to_window, widget_xpath) {
                w.interactable = *interactable;
            }
        }
    }
}

/// Execute one event. Non-enabled events leave the state untouched and
/// report `false`; this is a result the search relies on, not an error.
///
/// For fill, the target's text is set first; then the first transition rule
/// matching (window, xpath, action) whose guards all hold fires: the active
/// window switches and the rule's effects apply in order. A click matching
/// no rule is absorbed but still counts as executed.
pub fn execute_event(state: &AppState, event: &Event, app: &AppModel) -> (AppState, bool) {
    let enabled = state
        .widget_in(&state.active, &event.target_xpath)
        .map(|w| w.interactable && w.supports(event.action))
        .unwrap_or(false);
    if !enabled {
        return (state.clone(), false);
    }
    let mut next = state.clone();
    if event.action == Action::Fill {
        let text = event.input_text.clone().unwrap_or_default();
        let active = next.active.clone();
        if let Some(w) = next.widget_in_mut(&active, &event.target_xpath) {
            w.text = text;
        }
    }
    let rule = app
        .transitions
        .iter()
        .filter(|r| {
            r.from_window == next.active
                && r.widget_xpath == event.target_xpath
                && r.action == event.action
        })
        .find(|r| guards_hold(&next, r));
    if let Some(rule) = rule {
        let from_snapshot = next.windows[&rule.from_window].clone();
        next.active = rule.to_window.clone();
        for effect in &rule.effects {
            apply_effect(&mut next, effect, &from_snapshot);
        }
    }
    (next, true)
}

/// The observable record of a test execution: one state per executed event
/// plus the initial one, and a per-event executed flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub events: Vec<Event>,
    pub states: Vec<GuiState>,
    pub executed: Vec<bool>,
}

impl Trace {
    pub fn final_state(&self) -> &GuiState {
        self.states.last().expect("trace holds the initial state")
    }

    /// Index into `states` of the state seen by event `k` (executed or not).
    pub fn pre_state_index(&self, k: usize) -> usize {
        self.executed[..k].iter().filter(|&&x| x).count()
    }

    pub fn pre_state(&self, k: usize) -> &GuiState {
        &self.states[self.pre_state_index(k)]
    }

    pub fn all_executed(&self) -> bool {
        self.executed.iter().all(|&x| x)
    }
}

/// Replay a test from a fresh initial state, recording every intermediate
/// observable state and per-event executed flag. Assertions are not
/// evaluated here; see [`check_assertions`] and the fitness module.
pub fn run_test(app: &AppModel, test: &TestCase) -> Trace {
    let mut state = initial_state(app);
    let mut states = vec![state.view()];
    let mut executed = Vec::with_capacity(test.events.len());
    for event in &test.events {
        let (next, ok) = execute_event(&state, event, app);
        executed.push(ok);
        if ok {
            state = next;
            states.push(state.view());
        }
    }
    Trace {
        events: test.events.clone(),
        states,
        executed,
    }
}

/// Evaluate assertions on a state with exact string semantics: exists(txt)
/// holds iff some widget's text equals txt; hasText(w, txt) iff the widget
/// with w's xpath has text txt; negated kinds invert.
pub fn check_assertions(state: &GuiState, assertions: &[Assertion]) -> Vec<bool> {
    assertions
        .iter()
        .map(|a| {
            let positive = match a.kind {
                AssertionKind::Exists | AssertionKind::NotExists => {
                    state.widgets.iter().any(|w| w.text == a.text)
                }
                AssertionKind::HasText | AssertionKind::NotHasText => {
                    let xpath = a.target_xpath.as_deref().unwrap_or_default();
                    state
                        .widget(xpath)
                        .map(|w| w.text == a.text)
                        .unwrap_or(false)
                }
            };
            if a.kind.is_negated() {
                !positive
            } else {
                positive
            }
        })
        .collect()
}
