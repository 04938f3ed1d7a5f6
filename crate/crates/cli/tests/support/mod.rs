//! Shared machinery for the acceptance suite: fixture paths, independent
//! oracles, random instance generators, and the synthetic donor/recipient
//! app pairs used by the baseline comparison.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use testadapt::appmodel::{
    load_app, load_test, Action, AppModel, Assertion, AssertionKind, Bounds, Effect, Event,
    Guard, GuardPredicate, TestCase, TextValue, TransitionRule, Widget, WidgetKind,
    WidgetTemplate,
};
use testadapt::descriptors::{Descriptor, DescriptorSource};
use testadapt::matching::{events_match, is_valid_mapping, EventSem, Mapping, MatchContext};
use testadapt::textsem::{normalize_text, EmbeddingStore};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

pub fn assert_monotone(trajectory: &[f64]) {
    for w in trajectory.windows(2) {
        assert!(w[1] >= w[0], "best-ever trajectory decreased: {trajectory:?}");
    }
}

// ---------------------------------------------------------------------------
// words and embeddings
// ---------------------------------------------------------------------------

/// Alphabetic two-syllable words that survive normalization unchanged.
pub fn word_list(n: usize) -> Vec<String> {
    const SYL: [&str; 16] = [
        "ka", "lo", "mi", "ne", "po", "ra", "su", "ta", "ve", "zu", "bo", "du", "fe", "gi", "hu",
        "ja",
    ];
    (0..n)
        .map(|i| format!("{}{}", SYL[i / SYL.len() % SYL.len()], SYL[i % SYL.len()]))
        .collect()
}

fn axis(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}

/// Eight mutually orthogonal words; similar only to themselves.
pub fn orthogonal_word_store() -> EmbeddingStore {
    let words = word_list(8);
    let entries: Vec<(String, Vec<f64>)> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), axis(10, i)))
        .collect();
    EmbeddingStore::from_entries(10, entries).unwrap()
}

// ---------------------------------------------------------------------------
// criterion 1: permutation-enumeration oracle
// ---------------------------------------------------------------------------

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Minimum-cost perfect assignment over all n! permutations; with uniform
/// equal masses an optimal transport plan exists at a permutation matrix,
/// so 1 - (min assignment cost)/(2n) is the exact similarity.
pub fn permutation_oracle(xs: &[&str], ys: &[&str], store: &EmbeddingStore) -> f64 {
    fn visit(perm: &mut Vec<usize>, k: usize, best: &mut f64, cost: &dyn Fn(&[usize]) -> f64) {
        if k == perm.len() {
            let c = cost(perm);
            if c < *best {
                *best = c;
            }
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            visit(perm, k + 1, best, cost);
            perm.swap(k, i);
        }
    }
    let n = xs.len();
    assert_eq!(n, ys.len());
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    let cost = |p: &[usize]| {
        p.iter()
            .enumerate()
            .map(|(i, &j)| {
                euclid(store.vector(xs[i]).unwrap(), store.vector(ys[j]).unwrap())
            })
            .sum::<f64>()
            / n as f64
    };
    visit(&mut perm, 0, &mut best, &cost);
    1.0 - best / 2.0
}

// ---------------------------------------------------------------------------
// criterion 2: random instances and the exhaustive mapping oracle
// ---------------------------------------------------------------------------

fn desc(text: &str) -> Descriptor {
    Descriptor {
        text: normalize_text(text),
        source: DescriptorSource::WidgetText,
    }
}

pub fn random_event_sem(rng: &mut ChaCha8Rng) -> EventSem {
    let words = word_list(8);
    let w = &words[rng.gen_range(0..words.len())];
    if rng.gen_bool(0.4) {
        let input = ["1", "2", "x"][rng.gen_range(0..3)];
        EventSem::new(Action::Fill, desc(w), Some(input.to_string()))
    } else {
        EventSem::new(Action::Click, desc(w), None)
    }
}

pub fn random_contiguous_clusters(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut cluster_of = Vec::with_capacity(n);
    let mut c = 0usize;
    for i in 0..n {
        if i > 0 && rng.gen_bool(0.5) {
            c += 1;
        }
        cluster_of.push(c);
    }
    cluster_of
}

/// Mappings are donor-injective, i.e. exactly the partial functions from
/// donor events to recipient events; enumerating all of them covers every
/// subset of the match relation that can possibly be valid.
pub fn exhaustive_best_cardinality(recipient: &[EventSem], ctx: &MatchContext) -> usize {
    let n_d = ctx.donor.len();
    let n_r = recipient.len();
    let rdesc: Vec<Descriptor> = recipient.iter().map(|e| e.descriptor.clone()).collect();
    let mut assignment: Vec<Option<usize>> = vec![None; n_d];
    let mut best = 0usize;
    fn go(
        d: usize,
        n_r: usize,
        assignment: &mut Vec<Option<usize>>,
        recipient: &[EventSem],
        ctx: &MatchContext,
        rdesc: &[Descriptor],
        best: &mut usize,
    ) {
        if d == assignment.len() {
            let pairs: Vec<(usize, usize)> = assignment
                .iter()
                .enumerate()
                .filter_map(|(dd, r)| r.map(|r| (r, dd)))
                .collect();
            if !pairs
                .iter()
                .all(|&(r, dd)| events_match(&recipient[r], &ctx.donor[dd], ctx.sim))
            {
                return;
            }
            let mapping = Mapping::from_pairs(pairs.iter().copied());
            if is_valid_mapping(&mapping, ctx, rdesc) {
                *best = (*best).max(mapping.len());
            }
            return;
        }
        for r in 0..n_r {
            assignment[d] = Some(r);
            go(d + 1, n_r, assignment, recipient, ctx, rdesc, best);
        }
        assignment[d] = None;
        go(d + 1, n_r, assignment, recipient, ctx, rdesc, best);
    }
    go(0, n_r, &mut assignment, recipient, ctx, &rdesc, &mut best);
    best
}

// ---------------------------------------------------------------------------
// app-building helpers
// ---------------------------------------------------------------------------

fn bounds(x: f64, y: f64, w: f64, h: f64) -> Bounds {
    Bounds {
        x,
        y,
        width: w,
        height: h,
    }
}

fn widget(xpath: &str, kind: WidgetKind, text: &str, b: Bounds) -> Widget {
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

fn button(xpath: &str, text: &str, x: f64, y: f64) -> Widget {
    widget(xpath, WidgetKind::Button, text, bounds(x, y, 60.0, 24.0))
}

fn label(xpath: &str, text: &str, x: f64, y: f64) -> Widget {
    widget(xpath, WidgetKind::Label, text, bounds(x, y, 100.0, 20.0))
}

fn textfield(xpath: &str, x: f64, y: f64) -> Widget {
    widget(xpath, WidgetKind::Textfield, "", bounds(x, y, 100.0, 24.0))
}

fn rule(
    from: &str,
    xpath: &str,
    to: &str,
    guards: Vec<Guard>,
    effects: Vec<Effect>,
) -> TransitionRule {
    TransitionRule {
        from_window: from.into(),
        widget_xpath: xpath.into(),
        action: Action::Click,
        guards,
        to_window: to.into(),
        effects,
    }
}

fn nonempty(xpath: &str) -> Guard {
    Guard {
        widget_xpath: xpath.into(),
        predicate: GuardPredicate::Nonempty,
    }
}

fn create_row(window: &str, row_xpath: &str, copy_from: &str) -> Effect {
    Effect::CreateWidget {
        window_id: window.into(),
        template: WidgetTemplate {
            xpath: row_xpath.into(),
            kind: WidgetKind::Button,
            text: TextValue::CopyFrom(copy_from.into()),
            resource_id: String::new(),
            image_file: String::new(),
            bounds: bounds(10.0, 300.0, 120.0, 24.0),
            interactable: true,
            supported_events: None,
        },
    }
}

fn remove(window: &str, xpath: &str) -> Effect {
    Effect::RemoveWidget {
        window_id: window.into(),
        widget_xpath: xpath.into(),
    }
}

fn app(
    name: &str,
    initial: &str,
    windows: Vec<(&str, Vec<Widget>)>,
    transitions: Vec<TransitionRule>,
) -> AppModel {
    let model = AppModel {
        name: name.into(),
        initial_window: initial.into(),
        windows: windows
            .into_iter()
            .map(|(id, ws)| (id.to_string(), ws))
            .collect::<BTreeMap<_, _>>(),
        transitions,
    };
    model.validate().unwrap_or_else(|e| panic!("fixture {name}: {e}"));
    model
}

fn not_exists(text: &str) -> Assertion {
    Assertion {
        kind: AssertionKind::NotExists,
        text: text.into(),
        target_xpath: None,
    }
}

// ---------------------------------------------------------------------------
// synthetic donor/recipient pairs (criteria 5 and 6)
// ---------------------------------------------------------------------------

const DECOYS: [&str; 12] = [
    "nava", "rilo", "sopu", "tuva", "vemi", "wobo", "yalu", "zefi", "kudo", "pona", "quri",
    "xila",
];

/// Concept words: donor side and recipient synonym, cosine 0.9 per pair;
/// decoys orthogonal to everything.
pub fn synthetic_store() -> EmbeddingStore {
    let dim = 6 + DECOYS.len();
    let mut entries: Vec<(String, Vec<f64>)> = Vec::new();
    for (i, (d, r)) in [("dona", "reca"), ("donb", "recb"), ("donc", "recc")]
        .into_iter()
        .enumerate()
    {
        entries.push((d.to_string(), axis(dim, 2 * i)));
        let mut v = vec![0.0; dim];
        v[2 * i] = 0.9;
        v[2 * i + 1] = 0.43589;
        entries.push((r.to_string(), v));
    }
    for (j, w) in DECOYS.iter().enumerate() {
        entries.push((w.to_string(), axis(dim, 6 + j)));
    }
    EmbeddingStore::from_entries(dim, entries).unwrap()
}

/// Catalog-style donor: open the form, name an item, save it, then click the
/// created row to complete it; the oracle checks the row is gone.
pub fn synthetic_donor() -> (AppModel, TestCase) {
    let model = app(
        "catalog-donor",
        "home",
        vec![
            ("home", vec![button("/home/btn_new", "dona", 10.0, 10.0)]),
            (
                "form",
                vec![
                    label("/form/lbl", "donb", 10.0, 50.0),
                    textfield("/form/field", 10.0, 80.0),
                    button("/form/btn_save", "donc", 10.0, 130.0),
                ],
            ),
        ],
        vec![
            rule(
                "home",
                "/home/btn_new",
                "form",
                vec![],
                vec![Effect::SetText {
                    widget_xpath: "/form/field".into(),
                    value: TextValue::Literal(String::new()),
                }],
            ),
            rule(
                "form",
                "/form/btn_save",
                "home",
                vec![nonempty("/form/field")],
                vec![create_row("home", "/home/row", "/form/field")],
            ),
            rule("home", "/home/row", "home", vec![], vec![remove("home", "/home/row")]),
        ],
    );
    let test = TestCase {
        events: vec![
            Event::click("/home/btn_new"),
            Event::fill("/form/field", "item"),
            Event::click("/form/btn_save"),
            Event::click("/home/row"),
        ],
        assertions: vec![not_exists("item")],
    };
    (model, test)
}

#[derive(Debug, Clone, Copy)]
pub struct PairSpec {
    pub decoys_home: usize,
    pub decoys_form: usize,
    pub extra_field: bool,
    pub two_step_removal: bool,
    pub junk_window: bool,
}

pub fn pair_specs() -> Vec<PairSpec> {
    vec![
        PairSpec {
            decoys_home: 4,
            decoys_form: 2,
            extra_field: false,
            two_step_removal: false,
            junk_window: false,
        },
        PairSpec {
            decoys_home: 6,
            decoys_form: 3,
            extra_field: true,
            two_step_removal: false,
            junk_window: true,
        },
        PairSpec {
            decoys_home: 4,
            decoys_form: 2,
            extra_field: true,
            two_step_removal: true,
            junk_window: false,
        },
        PairSpec {
            decoys_home: 6,
            decoys_form: 3,
            extra_field: false,
            two_step_removal: true,
            junk_window: true,
        },
        PairSpec {
            decoys_home: 8,
            decoys_form: 4,
            extra_field: true,
            two_step_removal: true,
            junk_window: true,
        },
        PairSpec {
            decoys_home: 8,
            decoys_form: 4,
            extra_field: true,
            two_step_removal: false,
            junk_window: true,
        },
    ]
}

/// Recipient variant of the catalog donor: synonym labels, decoy widgets,
/// optionally a second (irrelevant) form field, a confirmation window for
/// the removal, and a junk window behind the first home decoy.
pub fn synthetic_recipient(spec: &PairSpec) -> AppModel {
    let mut home = vec![button("/home/btn_new", "reca", 10.0, 10.0)];
    for i in 0..spec.decoys_home {
        home.push(button(
            &format!("/home/dec{i}"),
            DECOYS[i % DECOYS.len()],
            100.0 + 70.0 * i as f64,
            10.0,
        ));
    }
    let mut form = vec![
        label("/form/lbl1", "recb", 10.0, 50.0),
        textfield("/form/field1", 10.0, 80.0),
    ];
    if spec.extra_field {
        form.push(label("/form/lbl2", DECOYS[8], 10.0, 120.0));
        form.push(textfield("/form/field2", 10.0, 150.0));
    }
    form.push(button("/form/btn_save", "recc", 10.0, 220.0));
    form.push(button("/form/btn_cancel", DECOYS[9], 120.0, 220.0));
    for i in 0..spec.decoys_form {
        form.push(button(
            &format!("/form/dec{i}"),
            DECOYS[(3 + i) % DECOYS.len()],
            260.0 + 70.0 * i as f64,
            50.0,
        ));
    }

    let mut windows = vec![("home", home), ("form", form)];
    let mut transitions = vec![
        rule(
            "home",
            "/home/btn_new",
            "form",
            vec![],
            vec![Effect::SetText {
                widget_xpath: "/form/field1".into(),
                value: TextValue::Literal(String::new()),
            }],
        ),
        rule(
            "form",
            "/form/btn_save",
            "home",
            vec![nonempty("/form/field1")],
            vec![create_row("home", "/home/row", "/form/field1")],
        ),
        rule("form", "/form/btn_cancel", "home", vec![], vec![]),
    ];
    if spec.two_step_removal {
        windows.push((
            "confirm",
            vec![
                button("/confirm/btn_done", DECOYS[11], 10.0, 10.0),
                button("/confirm/btn_back", DECOYS[10], 100.0, 10.0),
            ],
        ));
        transitions.push(rule("home", "/home/row", "confirm", vec![], vec![]));
        transitions.push(rule(
            "confirm",
            "/confirm/btn_done",
            "home",
            vec![],
            vec![remove("home", "/home/row")],
        ));
        transitions.push(rule("confirm", "/confirm/btn_back", "home", vec![], vec![]));
    } else {
        transitions.push(rule(
            "home",
            "/home/row",
            "home",
            vec![],
            vec![remove("home", "/home/row")],
        ));
    }
    if spec.junk_window && spec.decoys_home > 0 {
        windows.push((
            "junk",
            vec![
                button("/junk/btn_back", DECOYS[10], 10.0, 10.0),
                button("/junk/dec0", DECOYS[5], 100.0, 10.0),
                button("/junk/dec1", DECOYS[6], 170.0, 10.0),
            ],
        ));
        transitions.push(rule("home", "/home/dec0", "junk", vec![], vec![]));
        transitions.push(rule("junk", "/junk/btn_back", "home", vec![], vec![]));
    }
    app("catalog-recipient", "home", windows, transitions)
}

// ---------------------------------------------------------------------------
// criterion 8: donor fixtures with hand-derived cluster structure
// ---------------------------------------------------------------------------

type ClusterFixture = (String, AppModel, TestCase, Vec<(usize, usize)>);

fn static_form(n_fields: usize, with_done: bool) -> AppModel {
    let mut widgets = Vec::new();
    for i in 0..n_fields {
        widgets.push(textfield(&format!("/w/f{i}"), 10.0, 30.0 * i as f64));
    }
    if with_done {
        widgets.push(button("/w/done", "Done", 10.0, 200.0));
    }
    let mut windows = vec![("w", widgets)];
    let mut transitions = vec![];
    if with_done {
        windows.push(("end", vec![label("/end/lbl", "Saved", 10.0, 10.0)]));
        transitions.push(rule("w", "/w/done", "end", vec![], vec![]));
    }
    app("static-form", "w", windows, transitions)
}

pub fn cluster_fixtures() -> Vec<ClusterFixture> {
    // 1. the bundled figure-style donor: four singleton clusters
    let mut out: Vec<ClusterFixture> = vec![(
        "figure-style donor".into(),
        load_app(fixture("apps/donor_tasks.json")).unwrap(),
        load_test(fixture("tests/donor_tasks_test.json")).unwrap(),
        vec![(0, 0), (1, 1), (2, 2), (3, 3)],
    )];

    // 2. two mutually enabled fills, then a window-changing done click
    out.push((
        "two fills then done".into(),
        static_form(2, true),
        TestCase {
            events: vec![
                Event::fill("/w/f0", "a"),
                Event::fill("/w/f1", "b"),
                Event::click("/w/done"),
            ],
            assertions: vec![],
        },
        vec![(0, 1), (2, 2)],
    ));

    // 3. a single event forms a single cluster
    out.push((
        "single event".into(),
        static_form(1, false),
        TestCase {
            events: vec![Event::fill("/w/f0", "x")],
            assertions: vec![],
        },
        vec![(0, 0)],
    ));

    // 4. the empty test has no clusters
    out.push((
        "empty test".into(),
        static_form(1, false),
        TestCase::default(),
        vec![],
    ));

    // 5. a click that removes its own widget cannot be reordered with the
    //    click after it
    let self_removing = app(
        "self-removing",
        "w",
        vec![(
            "w",
            vec![
                button("/w/a", "Alpha", 10.0, 10.0),
                button("/w/b", "Beta", 10.0, 40.0),
            ],
        )],
        vec![rule("w", "/w/a", "w", vec![], vec![remove("w", "/w/a")])],
    );
    out.push((
        "self-removing click".into(),
        self_removing,
        TestCase {
            events: vec![Event::click("/w/a"), Event::click("/w/b")],
            assertions: vec![],
        },
        vec![(0, 0), (1, 1)],
    ));

    // 6. two independent always-present buttons can be reordered
    let toggles = app(
        "toggles",
        "w",
        vec![(
            "w",
            vec![
                button("/w/a", "Alpha", 10.0, 10.0),
                button("/w/b", "Beta", 10.0, 40.0),
            ],
        )],
        vec![],
    );
    out.push((
        "independent clicks".into(),
        toggles,
        TestCase {
            events: vec![Event::click("/w/a"), Event::click("/w/b")],
            assertions: vec![],
        },
        vec![(0, 1)],
    ));

    // 7. an event whose target only appears after its predecessor
    let creates = app(
        "creates-row",
        "w",
        vec![("w", vec![button("/w/add", "Add", 10.0, 10.0)])],
        vec![rule(
            "w",
            "/w/add",
            "w",
            vec![],
            vec![Effect::CreateWidget {
                window_id: "w".into(),
                template: WidgetTemplate {
                    xpath: "/w/row".into(),
                    kind: WidgetKind::Button,
                    text: TextValue::Literal("Row".into()),
                    resource_id: String::new(),
                    image_file: String::new(),
                    bounds: bounds(10.0, 60.0, 100.0, 24.0),
                    interactable: true,
                    supported_events: None,
                },
            }],
        )],
    );
    out.push((
        "target appears later".into(),
        creates,
        TestCase {
            events: vec![Event::click("/w/add"), Event::click("/w/row")],
            assertions: vec![],
        },
        vec![(0, 0), (1, 1)],
    ));

    // 8. three fills on one static form share one cluster
    out.push((
        "three fills".into(),
        static_form(3, false),
        TestCase {
            events: vec![
                Event::fill("/w/f0", "a"),
                Event::fill("/w/f1", "b"),
                Event::fill("/w/f2", "c"),
            ],
            assertions: vec![],
        },
        vec![(0, 2)],
    ));

    // 9. form fills cluster together; the guarded save and the row click
    //    stay ordered
    let form_save = app(
        "form-save",
        "form",
        vec![
            (
                "form",
                vec![
                    textfield("/form/f0", 10.0, 10.0),
                    textfield("/form/f1", 10.0, 40.0),
                    button("/form/save", "Save", 10.0, 80.0),
                ],
            ),
            ("home", vec![label("/home/lbl", "Items", 10.0, 10.0)]),
        ],
        vec![
            rule(
                "form",
                "/form/save",
                "home",
                vec![nonempty("/form/f0")],
                vec![create_row("home", "/home/row", "/form/f0")],
            ),
            rule("home", "/home/row", "home", vec![], vec![remove("home", "/home/row")]),
        ],
    );
    out.push((
        "fills then save then row".into(),
        form_save,
        TestCase {
            events: vec![
                Event::fill("/form/f0", "x"),
                Event::fill("/form/f1", "y"),
                Event::click("/form/save"),
                Event::click("/home/row"),
            ],
            assertions: vec![],
        },
        vec![(0, 1), (2, 2), (3, 3)],
    ));

    // 10. interactability gating: the second target only becomes
    //     interactable after the first click
    let mut gated_button = button("/w/b", "Beta", 10.0, 40.0);
    gated_button.interactable = false;
    let gated = app(
        "gated",
        "w",
        vec![(
            "w",
            vec![
                widget("/w/c", WidgetKind::Checkbox, "", bounds(10.0, 10.0, 20.0, 20.0)),
                gated_button,
            ],
        )],
        vec![rule(
            "w",
            "/w/c",
            "w",
            vec![],
            vec![Effect::SetInteractable {
                widget_xpath: "/w/b".into(),
                interactable: true,
            }],
        )],
    );
    out.push((
        "interactability gating".into(),
        gated,
        TestCase {
            events: vec![Event::click("/w/c"), Event::click("/w/b")],
            assertions: vec![],
        },
        vec![(0, 0), (1, 1)],
    ));

    out
}
