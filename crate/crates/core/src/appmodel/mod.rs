//! File-defined deterministic GUI state machines: windows, widgets, guarded
//! transitions with effects, plus the executor that replays tests over them.
//!
//! The model file is UTF-8 JSON with top-level `name`, `initial_window`,
//! `windows` (id -> widget array) and `transitions`; test files carry
//! `events` and `assertions`. Both are validated on load.

mod exec;

pub use exec::{
    check_assertions, enabled_events, execute_event, initial_state, is_enabled, run_test,
    AppState, Trace,
};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Click,
    Fill,
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum WidgetKind {
    Button,
    Textfield,
    Label,
    Image,
    Checkbox,
}

/// (x, y, width, height) in abstract pixels, serialized as a 4-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, f64, f64)", into = "(f64, f64, f64, f64)")]
pub struct Bounds {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl From<(f64, f64, f64, f64)> for Bounds {
    fn from((x, y, width, height): (f64, f64, f64, f64)) -> Self {
        Self {
            x,
            y,
            width,
            height,
        }
    }
}

impl From<Bounds> for (f64, f64, f64, f64) {
    fn from(b: Bounds) -> Self {
        (b.x, b.y, b.width, b.height)
    }
}

impl Bounds {
    pub fn center(&self) -> (f64, f64) {
        (self.x + self.width / 2.0, self.y + self.height / 2.0)
    }
}

fn default_true() -> bool {
    true
}

/// An atomic GUI element. `xpath` uniquely identifies the widget within its
/// window's structural hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Widget {
    pub xpath: String,
    pub kind: WidgetKind,
    #[serde(default)]
    pub text: String,
    #[serde(default)]
    pub resource_id: String,
    #[serde(default)]
    pub image_file: String,
    pub bounds: Bounds,
    #[serde(default = "default_true")]
    pub interactable: bool,
    /// `None` means the kind's default: click for buttons, images and
    /// checkboxes, fill for text fields, nothing for labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supported_events: Option<BTreeSet<Action>>,
}

impl Widget {
    pub fn supports(&self, action: Action) -> bool {
        match &self.supported_events {
            Some(set) => set.contains(&action),
            None => match self.kind {
                WidgetKind::Button | WidgetKind::Image | WidgetKind::Checkbox => {
                    action == Action::Click
                }
                WidgetKind::Textfield => action == Action::Fill,
                WidgetKind::Label => false,
            },
        }
    }

    fn validate(&self, where_: &str) -> std::result::Result<(), String> {
        if self.xpath.is_empty() {
            return Err(format!("{where_}: widget with empty xpath"));
        }
        if self.bounds.width <= 0.0 || self.bounds.height <= 0.0 {
            return Err(format!(
                "{where_}: widget {} has non-positive bounds",
                self.xpath
            ));
        }
        if self.supports(Action::Fill) && self.kind != WidgetKind::Textfield {
            return Err(format!(
                "{where_}: widget {} supports fill but is not a textfield",
                self.xpath
            ));
        }
        if !self.image_file.is_empty()
            && !matches!(self.kind, WidgetKind::Image | WidgetKind::Button)
        {
            return Err(format!(
                "{where_}: widget {} carries an image file but is neither an image nor a button",
                self.xpath
            ));
        }
        Ok(())
    }
}

/// A single user interaction: click(w) or fill(w, txt).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Event {
    pub action: Action,
    pub target_xpath: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_text: Option<String>,
}

impl Event {
    pub fn click(xpath: impl Into<String>) -> Self {
        Self {
            action: Action::Click,
            target_xpath: xpath.into(),
            input_text: None,
        }
    }

    pub fn fill(xpath: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            action: Action::Fill,
            target_xpath: xpath.into(),
            input_text: Some(text.into()),
        }
    }

    fn validate(&self, index: usize) -> std::result::Result<(), String> {
        match self.action {
            Action::Click if self.input_text.is_some() => {
                Err(format!("event {index}: click must not carry input_text"))
            }
            Action::Fill if self.input_text.is_none() => {
                Err(format!("event {index}: fill requires input_text"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum AssertionKind {
    Exists,
    NotExists,
    HasText,
    NotHasText,
}

impl AssertionKind {
    pub fn is_negated(self) -> bool {
        matches!(self, AssertionKind::NotExists | AssertionKind::NotHasText)
    }

    pub fn needs_target(self) -> bool {
        matches!(self, AssertionKind::HasText | AssertionKind::NotHasText)
    }
}

/// End-of-test assertion oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertion {
    pub kind: AssertionKind,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_xpath: Option<String>,
}

impl Assertion {
    fn validate(&self, index: usize) -> std::result::Result<(), String> {
        if self.kind.needs_target() != self.target_xpath.is_some() {
            return Err(format!(
                "assertion {index}: target_xpath present iff kind is has_text/not_has_text"
            ));
        }
        Ok(())
    }
}

/// Ordered events plus assertions checked on the final state.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestCase {
    #[serde(default)]
    pub events: Vec<Event>,
    #[serde(default)]
    pub assertions: Vec<Assertion>,
}

impl TestCase {
    pub fn validate(&self) -> std::result::Result<(), String> {
        for (i, e) in self.events.iter().enumerate() {
            e.validate(i)?;
        }
        for (i, a) in self.assertions.iter().enumerate() {
            a.validate(i)?;
        }
        Ok(())
    }
}

/// Load and validate a test file.
pub fn load_test(path: impl AsRef<Path>) -> Result<TestCase> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let test: TestCase = serde_json::from_str(&text).map_err(|e| Error::TestFile {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    test.validate().map_err(|reason| Error::TestFile {
        path: path.display().to_string(),
        reason,
    })?;
    Ok(test)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuardPredicate {
    Nonempty,
    Equals(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Guard {
    pub widget_xpath: String,
    pub predicate: GuardPredicate,
}

/// Text carried by an effect: a literal, or a copy of another widget's text.
/// `copy_from` is resolved against the window the transition leaves (its
/// state as of firing, after any fill), falling back to the destination
/// window, then to the empty string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TextValue {
    Literal(String),
    CopyFrom(String),
}

impl Default for TextValue {
    fn default() -> Self {
        TextValue::Literal(String::new())
    }
}

/// Widget template used by `create_widget`; same shape as [`Widget`] except
/// the text may be copied from another widget at effect time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WidgetTemplate {
    pub xpath: String,
    pub kind: WidgetKind,
    #[serde(default)]
    pub text: TextValue,
    #[serde(default)]
    pub resource_id: String,
    #[serde(default)]
    pub image_file: String,
    pub bounds: Bounds,
    #[serde(default = "default_true")]
    pub interactable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supported_events: Option<BTreeSet<Action>>,
}

impl WidgetTemplate {
    fn as_widget_shell(&self) -> Widget {
        Widget {
            xpath: self.xpath.clone(),
            kind: self.kind,
            text: String::new(),
            resource_id: self.resource_id.clone(),
            image_file: self.image_file.clone(),
            bounds: self.bounds,
            interactable: self.interactable,
            supported_events: self.supported_events.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Effect {
    /// Set the text of a widget in the destination window.
    SetText {
        widget_xpath: String,
        value: TextValue,
    },
    /// Instantiate the template in the named window, replacing any widget
    /// that already carries the same xpath.
    CreateWidget {
        window_id: String,
        template: WidgetTemplate,
    },
    RemoveWidget {
        window_id: String,
        widget_xpath: String,
    },
    /// Toggle interactability of a widget in the destination window.
    SetInteractable {
        widget_xpath: String,
        interactable: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionRule {
    pub from_window: String,
    pub widget_xpath: String,
    pub action: Action,
    #[serde(default)]
    pub guards: Vec<Guard>,
    pub to_window: String,
    #[serde(default)]
    pub effects: Vec<Effect>,
}

/// A complete application model. Immutable after load; safe to share across
/// concurrent executions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppModel {
    pub name: String,
    pub initial_window: String,
    pub windows: BTreeMap<String, Vec<Widget>>,
    #[serde(default)]
    pub transitions: Vec<TransitionRule>,
}

impl AppModel {
    /// All xpaths that can ever exist in a window: the declared widgets plus
    /// every `create_widget` template targeting it.
    fn possible_xpaths(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut map: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for (id, widgets) in &self.windows {
            let entry = map.entry(id.as_str()).or_default();
            for w in widgets {
                entry.insert(w.xpath.as_str());
            }
        }
        for rule in &self.transitions {
            for effect in &rule.effects {
                if let Effect::CreateWidget {
                    window_id,
                    template,
                } = effect
                {
                    map.entry(window_id.as_str())
                        .or_default()
                        .insert(template.xpath.as_str());
                }
            }
        }
        map
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        if !self.windows.contains_key(&self.initial_window) {
            return Err(format!("unknown initial window {:?}", self.initial_window));
        }
        for (id, widgets) in &self.windows {
            let mut seen = BTreeSet::new();
            for w in widgets {
                w.validate(&format!("window {id:?}"))?;
                if !seen.insert(w.xpath.as_str()) {
                    return Err(format!("window {id:?}: duplicate xpath {}", w.xpath));
                }
            }
        }
        let possible = self.possible_xpaths();
        let known = |window: &str, xpath: &str| -> bool {
            possible
                .get(window)
                .map(|s| s.contains(xpath))
                .unwrap_or(false)
        };
        let mut unguarded = BTreeSet::new();
        for (i, rule) in self.transitions.iter().enumerate() {
            let at = format!("transition {i}");
            if !self.windows.contains_key(&rule.from_window) {
                return Err(format!("{at}: unknown window {:?}", rule.from_window));
            }
            if !self.windows.contains_key(&rule.to_window) {
                return Err(format!("{at}: unknown window {:?}", rule.to_window));
            }
            if !known(&rule.from_window, &rule.widget_xpath) {
                return Err(format!(
                    "{at}: unknown widget {} in window {:?}",
                    rule.widget_xpath, rule.from_window
                ));
            }
            if rule.guards.is_empty() {
                let key = (
                    rule.from_window.clone(),
                    rule.widget_xpath.clone(),
                    rule.action,
                );
                if !unguarded.insert(key) {
                    return Err(format!(
                        "{at}: duplicate unguarded rule for ({}, {}, {:?})",
                        rule.from_window, rule.widget_xpath, rule.action
                    ));
                }
            }
            for g in &rule.guards {
                if !known(&rule.from_window, &g.widget_xpath) {
                    return Err(format!(
                        "{at}: guard references unknown widget {} in window {:?}",
                        g.widget_xpath, rule.from_window
                    ));
                }
            }
            let copy_source_ok = |xpath: &str| {
                known(&rule.from_window, xpath) || known(&rule.to_window, xpath)
            };
            for effect in &rule.effects {
                match effect {
                    Effect::SetText {
                        widget_xpath,
                        value,
                    } => {
                        if !known(&rule.to_window, widget_xpath) {
                            return Err(format!(
                                "{at}: set_text references unknown widget {widget_xpath} in window {:?}",
                                rule.to_window
                            ));
                        }
                        if let TextValue::CopyFrom(src) = value {
                            if !copy_source_ok(src) {
                                return Err(format!(
                                    "{at}: copy_from references unknown widget {src}"
                                ));
                            }
                        }
                    }
                    Effect::CreateWidget {
                        window_id,
                        template,
                    } => {
                        if !self.windows.contains_key(window_id) {
                            return Err(format!("{at}: unknown window {window_id:?}"));
                        }
                        template.as_widget_shell().validate(&at)?;
                        if let TextValue::CopyFrom(src) = &template.text {
                            if !copy_source_ok(src) {
                                return Err(format!(
                                    "{at}: copy_from references unknown widget {src}"
                                ));
                            }
                        }
                    }
                    Effect::RemoveWidget {
                        window_id,
                        widget_xpath,
                    } => {
                        if !self.windows.contains_key(window_id) {
                            return Err(format!("{at}: unknown window {window_id:?}"));
                        }
                        if !known(window_id, widget_xpath) {
                            return Err(format!(
                                "{at}: remove_widget references unknown widget {widget_xpath} in window {window_id:?}"
                            ));
                        }
                    }
                    Effect::SetInteractable { widget_xpath, .. } => {
                        if !known(&rule.to_window, widget_xpath) {
                            return Err(format!(
                                "{at}: set_interactable references unknown widget {widget_xpath} in window {:?}",
                                rule.to_window
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Load and validate an app model file.
pub fn load_app(path: impl AsRef<Path>) -> Result<AppModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let app: AppModel = serde_json::from_str(&text).map_err(|e| Error::Model {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    app.validate().map_err(|reason| Error::Model {
        path: path.display().to_string(),
        reason,
    })?;
    Ok(app)
}

/// The active window's observable state: its id and the widgets it shows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuiState {
    pub window_id: String,
    pub widgets: Vec<Widget>,
}

impl GuiState {
    pub fn widget(&self, xpath: &str) -> Option<&Widget> {
        self.widgets.iter().find(|w| w.xpath == xpath)
    }
}
