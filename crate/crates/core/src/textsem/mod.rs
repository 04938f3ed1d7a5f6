//! Text normalization, word embeddings and the thresholded semantic
//! similarity predicate used to match descriptors across applications.

mod embedding;
mod stem;
mod wmd;

pub use embedding::EmbeddingStore;
pub use stem::stem;
pub use wmd::{is_sem_sim, sentence_similarity};

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// The bundled stop-word list, one word per line. The exact list is part of
/// the external interface: changing it changes every descriptor.
const STOPWORDS_RAW: &str = include_str!("../../assets/stopwords.txt");

fn stop_words() -> &'static BTreeSet<&'static str> {
    static SET: OnceLock<BTreeSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS_RAW
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect()
    })
}

/// An ordered sequence of lowercase word stems. Tokens are non-empty, carry
/// no whitespace, underscores or uppercase characters, and none of them is a
/// stop word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct NormalizedText {
    tokens: Vec<String>,
}

impl NormalizedText {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    /// Tokens joined by single spaces, e.g. for reports.
    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Configuration for the `IsSemSim` predicate. Out-of-vocabulary words are
/// always dropped before transport; there is no alternative policy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimilarityConfig {
    /// Similarity threshold in [0, 1]; the comparison is strict (`>`).
    pub tau: f64,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        Self { tau: 0.65 }
    }
}

impl SimilarityConfig {
    pub fn new(tau: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) || tau.is_nan() {
            return Err(Error::Config(format!("tau must be in [0,1], got {tau}")));
        }
        Ok(Self { tau })
    }
}

fn is_boundary(prev: char, cur: char, next: Option<char>) -> bool {
    // camel-case: aB, and the last capital of an acronym run (HTMLParser).
    if prev.is_lowercase() && cur.is_uppercase() {
        return true;
    }
    if prev.is_uppercase() && cur.is_uppercase() && next.map(|n| n.is_lowercase()).unwrap_or(false)
    {
        return true;
    }
    // digit/letter boundaries in both directions.
    if prev.is_alphabetic() && cur.is_numeric() {
        return true;
    }
    if prev.is_numeric() && cur.is_alphabetic() {
        return true;
    }
    false
}

fn split_words(raw: &str) -> Vec<String> {
    let chars: Vec<char> = raw.chars().collect();
    let mut words = Vec::new();
    let mut cur = String::new();
    for i in 0..chars.len() {
        let c = chars[i];
        if !c.is_alphanumeric() {
            if !cur.is_empty() {
                words.push(std::mem::take(&mut cur));
            }
            continue;
        }
        if !cur.is_empty() {
            let prev = chars[i - 1];
            if prev.is_alphanumeric() && is_boundary(prev, c, chars.get(i + 1).copied()) {
                words.push(std::mem::take(&mut cur));
            }
        }
        cur.push(c);
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    words
}

/// Normalize raw widget/assertion text into a descriptor sentence: split on
/// whitespace, underscores, punctuation, digit/letter and camel-case
/// boundaries, lowercase, drop stop words, and stem. Stemmed tokens that
/// land on a stop word are dropped as well so that re-normalizing the output
/// is a fixed point.
pub fn normalize_text(raw: &str) -> NormalizedText {
    let stops = stop_words();
    let tokens = split_words(raw)
        .into_iter()
        // characters with no lowercase mapping would survive to_lowercase
        // still reporting uppercase; drop them
        .map(|w| w.to_lowercase().chars().filter(|c| !c.is_uppercase()).collect::<String>())
        .filter(|w| !w.is_empty() && !stops.contains(w.as_str()))
        .map(|w| stem(&w))
        .filter(|w| !w.is_empty() && !stops.contains(w.as_str()))
        .collect();
    NormalizedText { tokens }
}
