//! In-code fixtures shared by the unit tests: a small task-manager donor app,
//! a bills-manager recipient, and a toy embedding where the task/bill domain
//! synonyms clear the default threshold.

use std::collections::BTreeMap;

use crate::appmodel::{
    Action, AppModel, Assertion, AssertionKind, Bounds, Effect, Event, Guard, GuardPredicate,
    TestCase, TextValue, TransitionRule, Widget, WidgetKind, WidgetTemplate,
};
use crate::textsem::EmbeddingStore;

pub(crate) fn bounds(x: f64, y: f64, w: f64, h: f64) -> Bounds {
    Bounds {
        x,
        y,
        width: w,
        height: h,
    }
}

pub(crate) fn widget(xpath: &str, kind: WidgetKind, text: &str, b: Bounds) -> Widget {
    Widget {
        xpath: xpath.into(),
        kind,
        text: text.into(),
        resource_id: String::new(),
        image_file: String::new(),
        bounds: b,
        interactable: true,
        supported_events: None,
    }
}

pub(crate) fn button(xpath: &str, text: &str, b: Bounds) -> Widget {
    widget(xpath, WidgetKind::Button, text, b)
}

pub(crate) fn image_button(xpath: &str, image: &str, b: Bounds) -> Widget {
    let mut w = widget(xpath, WidgetKind::Button, "", b);
    w.image_file = image.into();
    w
}

pub(crate) fn label(xpath: &str, text: &str, b: Bounds) -> Widget {
    widget(xpath, WidgetKind::Label, text, b)
}

pub(crate) fn textfield(xpath: &str, resource_id: &str, b: Bounds) -> Widget {
    let mut w = widget(xpath, WidgetKind::Textfield, "", b);
    w.resource_id = resource_id.into();
    w
}

pub(crate) fn rule(
    from: &str,
    xpath: &str,
    action: Action,
    guards: Vec<Guard>,
    to: &str,
    effects: Vec<Effect>,
) -> TransitionRule {
    TransitionRule {
        from_window: from.into(),
        widget_xpath: xpath.into(),
        action,
        guards,
        to_window: to.into(),
        effects,
    }
}

pub(crate) fn nonempty(xpath: &str) -> Guard {
    Guard {
        widget_xpath: xpath.into(),
        predicate: GuardPredicate::Nonempty,
    }
}

/// One window with two buttons ("Alpha" and an unlabeled one) plus a text
/// field; no transitions.
pub(crate) fn two_button_app() -> AppModel {
    let mut windows = BTreeMap::new();
    windows.insert(
        "main".to_string(),
        vec![
            button("/main/a", "Alpha", bounds(0.0, 0.0, 40.0, 20.0)),
            button("/main/b", "", bounds(50.0, 0.0, 40.0, 20.0)),
            textfield("/main/field", "field_id", bounds(0.0, 40.0, 100.0, 20.0)),
        ],
    );
    let app = AppModel {
        name: "two-button".into(),
        initial_window: "main".into(),
        windows,
        transitions: vec![],
    };
    app.validate().expect("fixture is valid");
    app
}

/// Task-manager donor: a list window whose only initial control is the
/// add-task button, an editor with a guarded save that creates the task row,
/// and a settings window reachable from the editor.
pub(crate) fn donor_tasks_app() -> AppModel {
    let mut windows = BTreeMap::new();
    windows.insert(
        "main".to_string(),
        vec![image_button(
            "/main/btn_add",
            "bs_add_task.png",
            bounds(0.0, 0.0, 40.0, 40.0),
        )],
    );
    windows.insert(
        "editor".to_string(),
        vec![
            label("/editor/lbl_name", "Task name", bounds(10.0, 100.0, 200.0, 30.0)),
            textfield("/editor/field_name", "task_name", bounds(10.0, 140.0, 200.0, 40.0)),
            image_button(
                "/editor/btn_save",
                "action_save_task.png",
                bounds(220.0, 20.0, 40.0, 40.0),
            ),
            image_button(
                "/editor/btn_cancel",
                "action_cancel.png",
                bounds(270.0, 20.0, 40.0, 40.0),
            ),
            image_button(
                "/editor/btn_settings",
                "ic_settings.png",
                bounds(320.0, 20.0, 40.0, 40.0),
            ),
        ],
    );
    windows.insert(
        "settings".to_string(),
        vec![
            label("/settings/lbl_about", "About", bounds(10.0, 10.0, 100.0, 20.0)),
            image_button("/settings/btn_back", "ic_back.png", bounds(0.0, 40.0, 40.0, 40.0)),
        ],
    );
    let row_template = WidgetTemplate {
        xpath: "/main/row_task_1".into(),
        kind: WidgetKind::Button,
        text: TextValue::CopyFrom("/editor/field_name".into()),
        resource_id: String::new(),
        image_file: String::new(),
        bounds: bounds(10.0, 60.0, 200.0, 30.0),
        interactable: true,
        supported_events: None,
    };
    let app = AppModel {
        name: "tasks".into(),
        initial_window: "main".into(),
        windows,
        transitions: vec![
            rule(
                "main",
                "/main/btn_add",
                Action::Click,
                vec![],
                "editor",
                vec![Effect::SetText {
                    widget_xpath: "/editor/field_name".into(),
                    value: TextValue::Literal(String::new()),
                }],
            ),
            rule("editor", "/editor/btn_settings", Action::Click, vec![], "settings", vec![]),
            rule("settings", "/settings/btn_back", Action::Click, vec![], "main", vec![]),
            rule(
                "editor",
                "/editor/btn_save",
                Action::Click,
                vec![nonempty("/editor/field_name")],
                "main",
                vec![Effect::CreateWidget {
                    window_id: "main".into(),
                    template: row_template,
                }],
            ),
            rule("editor", "/editor/btn_cancel", Action::Click, vec![], "main", vec![]),
            rule(
                "main",
                "/main/row_task_1",
                Action::Click,
                vec![],
                "main",
                vec![Effect::RemoveWidget {
                    window_id: "main".into(),
                    widget_xpath: "/main/row_task_1".into(),
                }],
            ),
        ],
    };
    app.validate().expect("fixture is valid");
    app
}

/// The donor test: add a task named "Test", save, mark it done by clicking
/// its row, and assert the row is gone.
pub(crate) fn donor_tasks_test() -> TestCase {
    TestCase {
        events: vec![
            Event::click("/main/btn_add"),
            Event::fill("/editor/field_name", "Test"),
            Event::click("/editor/btn_save"),
            Event::click("/main/row_task_1"),
        ],
        assertions: vec![Assertion {
            kind: AssertionKind::NotExists,
            text: "Test".into(),
            target_xpath: None,
        }],
    }
}

/// Bills-manager recipient: creating a bill takes more steps than creating a
/// task (two fields, a separate pay window) and the windows carry decoys.
pub(crate) fn bills_app() -> AppModel {
    let mut windows = BTreeMap::new();
    windows.insert(
        "main".to_string(),
        vec![
            image_button("/main/btn_add", "bs_add_bill.png", bounds(0.0, 0.0, 40.0, 40.0)),
            image_button("/main/btn_stats", "ic_chart.png", bounds(60.0, 0.0, 40.0, 40.0)),
        ],
    );
    windows.insert(
        "editor".to_string(),
        vec![
            label("/editor/lbl_name", "Bill name", bounds(10.0, 80.0, 200.0, 30.0)),
            textfield("/editor/field_payee", "payee_item", bounds(10.0, 115.0, 200.0, 40.0)),
            label("/editor/lbl_amount", "Amount", bounds(10.0, 170.0, 200.0, 30.0)),
            textfield("/editor/field_amount", "bill_amount", bounds(10.0, 205.0, 200.0, 40.0)),
            image_button("/editor/btn_save", "action_save.png", bounds(250.0, 20.0, 40.0, 40.0)),
            image_button(
                "/editor/btn_cancel",
                "action_cancel.png",
                bounds(300.0, 20.0, 40.0, 40.0),
            ),
        ],
    );
    windows.insert(
        "paywin".to_string(),
        vec![
            label("/paywin/lbl_q", "Mark as Paid?", bounds(10.0, 10.0, 200.0, 30.0)),
            button("/paywin/btn_paid", "Mark as Paid", bounds(10.0, 60.0, 120.0, 30.0)),
            button("/paywin/btn_later", "Later", bounds(150.0, 60.0, 80.0, 30.0)),
        ],
    );
    windows.insert(
        "stats".to_string(),
        vec![
            label("/stats/lbl_title", "Statistics", bounds(10.0, 10.0, 100.0, 20.0)),
            image_button("/stats/btn_back", "ic_back.png", bounds(0.0, 40.0, 40.0, 40.0)),
        ],
    );
    let row_template = WidgetTemplate {
        xpath: "/main/row_bill_1".into(),
        kind: WidgetKind::Button,
        text: TextValue::CopyFrom("/editor/field_payee".into()),
        resource_id: String::new(),
        image_file: String::new(),
        bounds: bounds(10.0, 60.0, 200.0, 30.0),
        interactable: true,
        supported_events: None,
    };
    let app = AppModel {
        name: "bills".into(),
        initial_window: "main".into(),
        windows,
        transitions: vec![
            rule(
                "main",
                "/main/btn_add",
                Action::Click,
                vec![],
                "editor",
                vec![
                    Effect::SetText {
                        widget_xpath: "/editor/field_payee".into(),
                        value: TextValue::Literal(String::new()),
                    },
                    Effect::SetText {
                        widget_xpath: "/editor/field_amount".into(),
                        value: TextValue::Literal(String::new()),
                    },
                ],
            ),
            rule("main", "/main/btn_stats", Action::Click, vec![], "stats", vec![]),
            rule("stats", "/stats/btn_back", Action::Click, vec![], "main", vec![]),
            rule(
                "editor",
                "/editor/btn_save",
                Action::Click,
                vec![nonempty("/editor/field_payee")],
                "main",
                vec![Effect::CreateWidget {
                    window_id: "main".into(),
                    template: row_template,
                }],
            ),
            rule("editor", "/editor/btn_cancel", Action::Click, vec![], "main", vec![]),
            rule("main", "/main/row_bill_1", Action::Click, vec![], "paywin", vec![]),
            rule(
                "paywin",
                "/paywin/btn_paid",
                Action::Click,
                vec![],
                "main",
                vec![Effect::RemoveWidget {
                    window_id: "main".into(),
                    widget_xpath: "/main/row_bill_1".into(),
                }],
            ),
            rule("paywin", "/paywin/btn_later", Action::Click, vec![], "main", vec![]),
        ],
    };
    app.validate().expect("fixture is valid");
    app
}

/// The manual adaptation of the donor test to the bills app.
pub(crate) fn bills_reference_test() -> TestCase {
    TestCase {
        events: vec![
            Event::click("/main/btn_add"),
            Event::fill("/editor/field_payee", "Test"),
            Event::click("/editor/btn_save"),
            Event::click("/main/row_bill_1"),
            Event::click("/paywin/btn_paid"),
        ],
        assertions: vec![Assertion {
            kind: AssertionKind::NotExists,
            text: "Test".into(),
            target_xpath: None,
        }],
    }
}

fn axis8(i: usize) -> Vec<f64> {
    let mut v = vec![0.0; 8];
    v[i] = 1.0;
    v
}

/// 8-dimensional toy embedding: task/bill are close (cosine 0.9), everything
/// else is orthogonal. Words not listed are out of vocabulary.
pub(crate) fn toy_store() -> EmbeddingStore {
    let mut bill = vec![0.0; 8];
    bill[2] = 0.9;
    bill[3] = 0.43589;
    EmbeddingStore::from_entries(
        8,
        [
            ("bs".to_string(), axis8(0)),
            ("add".to_string(), axis8(1)),
            ("task".to_string(), axis8(2)),
            ("bill".to_string(), bill),
            ("name".to_string(), axis8(4)),
            ("action".to_string(), axis8(5)),
            ("save".to_string(), axis8(6)),
            ("test".to_string(), axis8(7)),
            ("amount".to_string(), axis8(3)),
        ],
    )
    .expect("fixture store is valid")
}
