//! Suffix-stripping stemmer applied to every normalized token.
//!
//! Intentionally small: plural endings plus bare -ing/-ed. The same stemmer
//! runs on both sides of every comparison, so matching only depends on the
//! rules being deterministic. `stem` iterates to a fixed point, which makes
//! normalization idempotent.

fn has_vowel(s: &str) -> bool {
    s.chars().any(|c| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u'))
}

fn stem_once(word: &str) -> String {
    if word.chars().count() < 3 {
        return word.to_string();
    }
    if let Some(base) = word.strip_suffix("sses") {
        return format!("{base}ss");
    }
    if let Some(base) = word.strip_suffix("ies") {
        return format!("{base}i");
    }
    if word.ends_with("ss") {
        return word.to_string();
    }
    if let Some(base) = word.strip_suffix('s') {
        return base.to_string();
    }
    if let Some(base) = word.strip_suffix("ing") {
        if base.len() >= 2 && has_vowel(base) {
            return base.to_string();
        }
    }
    if let Some(base) = word.strip_suffix("ed") {
        if base.len() >= 2 && has_vowel(base) {
            return base.to_string();
        }
    }
    word.to_string()
}

/// Stem a lowercase token. Runs the rule set to a fixed point; every rule
/// strictly shortens the word, so this terminates.
pub fn stem(word: &str) -> String {
    let mut cur = word.to_string();
    loop {
        let next = stem_once(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}
