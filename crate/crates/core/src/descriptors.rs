//! Natural-language descriptors for events, widgets and assertions.
//!
//! A descriptor is the normalized word sequence that encodes what an element
//! means to a user: the displayed text when there is one, otherwise the image
//! file name or the developer-assigned id; fill events take the text of the
//! nearest label instead.

use serde::{Deserialize, Serialize};

use crate::appmodel::{Action, Assertion, AssertionKind, Event, GuiState, Widget, WidgetKind};
use crate::error::{Error, Result};
use crate::textsem::{normalize_text, NormalizedText};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescriptorSource {
    WidgetText,
    ImageFilename,
    ResourceId,
    NearestLabel,
    AssertionText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Descriptor {
    pub text: NormalizedText,
    pub source: DescriptorSource,
}

impl Descriptor {
    fn new(text: NormalizedText, source: DescriptorSource) -> Self {
        Self { text, source }
    }
}

/// File name without directory or extension, e.g. "res/bs_add_task.png"
/// becomes "bs_add_task".
fn file_stem(path: &str) -> &str {
    let name = path.rsplit(['/', '\\']).next().unwrap_or(path);
    match name.rfind('.') {
        Some(0) | None => name,
        Some(dot) => &name[..dot],
    }
}

fn center_distance(a: &Widget, b: &Widget) -> f64 {
    let (ax, ay) = a.bounds.center();
    let (bx, by) = b.bounds.center();
    ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt()
}

/// The label or button with non-empty text whose center is closest to the
/// target's center; ties go to the lexicographically smaller xpath.
fn nearest_label<'a>(target: &Widget, state: &'a GuiState) -> Option<&'a Widget> {
    state
        .widgets
        .iter()
        .filter(|w| {
            matches!(w.kind, WidgetKind::Label | WidgetKind::Button)
                && !w.text.is_empty()
                && w.xpath != target.xpath
        })
        .min_by(|a, b| {
            center_distance(target, a)
                .total_cmp(&center_distance(target, b))
                .then_with(|| a.xpath.cmp(&b.xpath))
        })
}

fn fill_descriptor(target: &Widget, state: &GuiState) -> Descriptor {
    match nearest_label(target, state) {
        Some(lbl) => Descriptor::new(normalize_text(&lbl.text), DescriptorSource::NearestLabel),
        None => Descriptor::new(
            normalize_text(&target.resource_id),
            DescriptorSource::ResourceId,
        ),
    }
}

/// Descriptor of a widget as it appears in `state`. Text wins over the image
/// file name, which wins over the resource id; an empty text field is
/// described by its nearest label like a fill event would be. A widget with
/// nothing to say yields an empty descriptor.
pub fn widget_descriptor(w: &Widget, state: &GuiState) -> Descriptor {
    if w.kind == WidgetKind::Textfield && w.text.is_empty() {
        return fill_descriptor(w, state);
    }
    if !w.text.is_empty() {
        Descriptor::new(normalize_text(&w.text), DescriptorSource::WidgetText)
    } else if !w.image_file.is_empty() {
        Descriptor::new(
            normalize_text(file_stem(&w.image_file)),
            DescriptorSource::ImageFilename,
        )
    } else {
        Descriptor::new(
            normalize_text(&w.resource_id),
            DescriptorSource::ResourceId,
        )
    }
}

/// Descriptor of an event against the state it executes in. Clicks take the
/// target widget's descriptor; fills take the nearest label's text, falling
/// back to the target's resource id when the window has no labels.
pub fn event_descriptor_for(action: Action, target_xpath: &str, state: &GuiState) -> Result<Descriptor> {
    let target = state.widget(target_xpath).ok_or_else(|| Error::UnknownWidget {
        window: state.window_id.clone(),
        xpath: target_xpath.to_string(),
    })?;
    Ok(match action {
        Action::Click => widget_descriptor(target, state),
        Action::Fill => fill_descriptor(target, state),
    })
}

pub fn event_descriptor(e: &Event, state: &GuiState) -> Result<Descriptor> {
    event_descriptor_for(e.action, &e.target_xpath, state)
}

/// Descriptor of an assertion. Text-based kinds normalize the asserted text;
/// widget-based kinds describe the target widget as logged at donor
/// assertion time.
pub fn assertion_descriptor(o: &Assertion, logged_state: &GuiState) -> Result<Descriptor> {
    match o.kind {
        AssertionKind::Exists | AssertionKind::NotExists => Ok(Descriptor::new(
            normalize_text(&o.text),
            DescriptorSource::AssertionText,
        )),
        AssertionKind::HasText | AssertionKind::NotHasText => {
            let xpath = o.target_xpath.as_deref().unwrap_or_default();
            let target = logged_state
                .widget(xpath)
                .ok_or_else(|| Error::AssertionTargetMissing {
                    xpath: xpath.to_string(),
                })?;
            Ok(widget_descriptor(target, logged_state))
        }
    }
}
