//! Semantic event matching across applications and the search for the
//! maximum valid mapping between a recipient test and the donor test.
//!
//! Events match when they express the same intent: click/click with similar
//! descriptors, fill/fill with similar descriptors and the same input, or a
//! donor fill mapped onto a recipient click whose descriptor resembles the
//! typed text. The opposite direction (donor click to recipient fill) is
//! never allowed. A mapping is a set of (recipient, donor) pairs; it is
//! valid when no donor event is claimed twice, pair order respects the
//! donor's cluster ordering, and equal donor descriptors map to equal
//! recipient descriptors.

use rand::Rng;
use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use crate::appmodel::Action;
use crate::descriptors::Descriptor;
use crate::donoranalysis::is_before;
use crate::textsem::{sentence_similarity, EmbeddingStore, NormalizedText, SimilarityConfig};

/// The semantic payload of one event: its action, its descriptor in the
/// state it executes in, and (for fills) the raw input text plus its
/// normalized form.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSem {
    pub action: Action,
    pub descriptor: Descriptor,
    pub input: Option<String>,
    pub input_norm: Option<NormalizedText>,
}

impl EventSem {
    pub fn new(action: Action, descriptor: Descriptor, input: Option<String>) -> Self {
        let input_norm = match action {
            Action::Fill => Some(crate::textsem::normalize_text(
                input.as_deref().unwrap_or_default(),
            )),
            Action::Click => None,
        };
        Self {
            action,
            descriptor,
            input,
            input_norm,
        }
    }
}

/// Similarity evaluator with a memo table. Descriptors repeat heavily across
/// fitness evaluations, and every cached value is a pure function of its
/// inputs, so the cache cannot perturb determinism.
pub struct SemSim<'a> {
    store: &'a EmbeddingStore,
    cfg: SimilarityConfig,
    cache: Mutex<HashMap<(String, String), f64>>,
}

impl<'a> SemSim<'a> {
    pub fn new(store: &'a EmbeddingStore, cfg: SimilarityConfig) -> Self {
        Self {
            store,
            cfg,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn tau(&self) -> f64 {
        self.cfg.tau
    }

    pub fn similarity(&self, a: &NormalizedText, b: &NormalizedText) -> f64 {
        let ka = a.tokens().join("\u{1}");
        let kb = b.tokens().join("\u{1}");
        let key = if ka <= kb { (ka, kb) } else { (kb, ka) };
        if let Some(&v) = self.cache.lock().unwrap().get(&key) {
            return v;
        }
        let v = sentence_similarity(a, b, self.store);
        self.cache.lock().unwrap().insert(key, v);
        v
    }

    pub fn is_sem_sim(&self, a: &NormalizedText, b: &NormalizedText) -> bool {
        self.similarity(a, b) > self.cfg.tau
    }
}

/// The donor-side context a mapping is computed against.
pub struct MatchContext<'a> {
    pub donor: &'a [EventSem],
    pub cluster_of: &'a [usize],
    pub sim: &'a SemSim<'a>,
}

/// The semantic event-match relation. `recipient` and `donor` keep their
/// roles: a donor fill may map to a recipient click, never the reverse.
pub fn events_match(recipient: &EventSem, donor: &EventSem, sim: &SemSim) -> bool {
    match (donor.action, recipient.action) {
        (Action::Click, Action::Click) | (Action::Fill, Action::Fill) => {
            if !sim.is_sem_sim(&recipient.descriptor.text, &donor.descriptor.text) {
                return false;
            }
            if donor.action == Action::Fill {
                donor.input == recipient.input
            } else {
                true
            }
        }
        (Action::Fill, Action::Click) => {
            let txt = donor.input_norm.as_ref().expect("fill carries input_norm");
            sim.is_sem_sim(txt, &recipient.descriptor.text)
        }
        (Action::Click, Action::Fill) => false,
    }
}

/// A set of (recipient index, donor index) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Mapping {
    pairs: BTreeSet<(usize, usize)>,
}

impl Mapping {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Self {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn recipient_indices(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(r, _)| r).collect()
    }

    pub fn donor_indices(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|&(_, d)| d).collect()
    }

    pub fn max_recipient_index(&self) -> Option<usize> {
        self.pairs.iter().map(|&(r, _)| r).max()
    }
}

/// Validity of a mapping whose pairs already satisfy the match relation:
/// donor-injective, order-respecting, and descriptor-consistent.
pub fn is_valid_mapping(
    mapping: &Mapping,
    ctx: &MatchContext,
    recipient_descriptors: &[Descriptor],
) -> bool {
    let pairs: Vec<(usize, usize)> = mapping.pairs().collect();
    for (i, &(ra, da)) in pairs.iter().enumerate() {
        for &(rb, db) in &pairs[i + 1..] {
            if da == db && ra != rb {
                return false;
            }
            if is_before(ctx.cluster_of, da, db) && ra >= rb {
                return false;
            }
            if is_before(ctx.cluster_of, db, da) && rb >= ra {
                return false;
            }
            if ctx.donor[da].descriptor.text == ctx.donor[db].descriptor.text
                && recipient_descriptors[ra].text != recipient_descriptors[rb].text
            {
                return false;
            }
        }
    }
    true
}

/// Exploring more than this many equal-cardinality optima stops adding to
/// the tie pool; the maximum cardinality itself is never compromised.
const TIE_CAP: usize = 4096;

struct MappingSearch<'a, R: Rng> {
    ctx: &'a MatchContext<'a>,
    recipient: &'a [EventSem],
    matches: Vec<Vec<bool>>,
    /// last recipient row matching each donor event, if any
    last_row: Vec<Option<usize>>,
    chosen: Vec<(usize, usize)>,
    used_donor: Vec<bool>,
    best: Vec<(usize, usize)>,
    best_size: usize,
    ties_seen: usize,
    rng: &'a mut R,
}

impl<'a, R: Rng> MappingSearch<'a, R> {
    fn remaining_bound(&self, row: usize) -> usize {
        self.last_row
            .iter()
            .enumerate()
            .filter(|&(d, lr)| !self.used_donor[d] && lr.map(|r| r >= row).unwrap_or(false))
            .count()
    }

    fn can_add(&self, row: usize, donor: usize) -> bool {
        if self.used_donor[donor] || !self.matches[row][donor] {
            return false;
        }
        for &(r2, d2) in &self.chosen {
            // rows are processed in order, so r2 <= row
            if r2 == row {
                // same recipient event: donor events must share a cluster
                if self.ctx.cluster_of[d2] != self.ctx.cluster_of[donor] {
                    return false;
                }
            } else if is_before(self.ctx.cluster_of, donor, d2) {
                return false;
            }
            if self.ctx.donor[donor].descriptor.text == self.ctx.donor[d2].descriptor.text
                && self.recipient[row].descriptor.text != self.recipient[r2].descriptor.text
            {
                return false;
            }
        }
        true
    }

    fn record_leaf(&mut self) {
        let size = self.chosen.len();
        if size > self.best_size || (size == 0 && self.best_size == 0 && self.ties_seen == 0) {
            self.best = self.chosen.clone();
            self.best_size = size;
            self.ties_seen = 1;
        } else if size == self.best_size {
            self.ties_seen += 1;
            // reservoir sample: uniform over the optima discovered so far
            if self.rng.gen_range(0..self.ties_seen) == 0 {
                self.best = self.chosen.clone();
            }
        }
    }

    fn advance(&mut self, row: usize) {
        if row == self.recipient.len() {
            self.record_leaf();
            return;
        }
        let bound = self.chosen.len() + self.remaining_bound(row);
        if bound < self.best_size || (bound == self.best_size && self.ties_seen >= TIE_CAP) {
            return;
        }
        self.pick(row, 0);
    }

    /// Enumerate every donor subset for `row` (donors >= `from`), recursing
    /// to the next row after each choice, including the empty one.
    fn pick(&mut self, row: usize, from: usize) {
        self.advance(row + 1);
        for donor in from..self.ctx.donor.len() {
            if self.can_add(row, donor) {
                self.chosen.push((row, donor));
                self.used_donor[donor] = true;
                self.pick(row, donor + 1);
                self.used_donor[donor] = false;
                self.chosen.pop();
            }
        }
    }
}

/// Maximum-cardinality valid mapping, found by branch-and-bound over
/// recipient positions in order with a remaining-match upper bound; the
/// 2^(|t_R| x |t_D|) mapping space is never materialized. Ties between
/// equal-cardinality optima are broken uniformly at random over the optima
/// discovered, using the caller's stream.
pub fn find_best_mapping<R: Rng>(
    recipient: &[EventSem],
    ctx: &MatchContext,
    rng: &mut R,
) -> Mapping {
    let matches: Vec<Vec<bool>> = recipient
        .iter()
        .map(|r| ctx.donor.iter().map(|d| events_match(r, d, ctx.sim)).collect())
        .collect();
    let n_d = ctx.donor.len();
    let last_row = (0..n_d)
        .map(|d| (0..recipient.len()).rev().find(|&r| matches[r][d]))
        .collect();
    let mut search = MappingSearch {
        ctx,
        recipient,
        matches,
        last_row,
        chosen: Vec::new(),
        used_donor: vec![false; n_d],
        best: Vec::new(),
        best_size: 0,
        ties_seen: 0,
        rng,
    };
    search.advance(0);
    Mapping::from_pairs(search.best)
}
