//! Word-embedding storage.
//!
//! File format: UTF-8 text, first line `<count> <dimension>`, then one entry
//! per line: the word, a space, and `dimension` decimal numbers separated by
//! single spaces. Vectors are L2-normalized on load; duplicate words keep the
//! first occurrence. Error messages number data lines from 1 (the header is
//! not counted).

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct EmbeddingStore {
    dimension: usize,
    entries: HashMap<String, Vec<f64>>,
}

fn normalize_vector(mut v: Vec<f64>) -> Option<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return None;
    }
    for x in &mut v {
        *x /= norm;
    }
    Some(v)
}

impl EmbeddingStore {
    /// Build a store from in-memory entries (used by tests and synthetic
    /// benchmarks). Vectors are normalized; duplicates keep the first.
    pub fn from_entries<I, S>(dimension: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        if dimension == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        let mut map = HashMap::new();
        for (word, vector) in entries {
            let word = word.into();
            if vector.len() != dimension {
                return Err(Error::Config(format!(
                    "vector for {word} has length {}, expected {dimension}",
                    vector.len()
                )));
            }
            let vector = normalize_vector(vector)
                .ok_or_else(|| Error::Config(format!("zero vector for word {word}")))?;
            map.entry(word).or_insert(vector);
        }
        Ok(Self {
            dimension,
            entries: map,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text).map_err(|reason| Error::Embedding {
            path: path.display().to_string(),
            reason,
        })
    }

    fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty file, expected a header line")?;
        let mut parts = header.split_whitespace();
        let count: usize = parts
            .next()
            .ok_or("header must be \"<count> <dimension>\"")?
            .parse()
            .map_err(|_| format!("invalid count in header {header:?}"))?;
        let dimension: usize = parts
            .next()
            .ok_or("header must be \"<count> <dimension>\"")?
            .parse()
            .map_err(|_| format!("invalid dimension in header {header:?}"))?;
        if parts.next().is_some() {
            return Err(format!("header has trailing fields: {header:?}"));
        }
        if dimension == 0 {
            return Err("dimension must be positive".into());
        }

        let mut entries = HashMap::new();
        let mut data_lines = 0usize;
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            data_lines += 1;
            let n = data_lines;
            let mut fields = line.split_whitespace();
            let word = fields.next().expect("non-empty line has a first field");
            let values: Vec<&str> = fields.collect();
            if values.len() != dimension {
                return Err(format!(
                    "expected {} fields at line {n}, found {}",
                    dimension + 1,
                    values.len() + 1
                ));
            }
            let mut vector = Vec::with_capacity(dimension);
            for v in values {
                let x: f64 = v
                    .parse()
                    .map_err(|_| format!("non-numeric value {v:?} at line {n}"))?;
                vector.push(x);
            }
            let vector =
                normalize_vector(vector).ok_or_else(|| format!("zero vector at line {n}"))?;
            entries.entry(word.to_string()).or_insert(vector);
        }
        if data_lines != count {
            return Err(format!(
                "header declares {count} entries but the file has {data_lines}"
            ));
        }
        Ok(Self {
            dimension,
            entries,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn vector(&self, word: &str) -> Option<&[f64]> {
        self.entries.get(word).map(Vec::as_slice)
    }
}
