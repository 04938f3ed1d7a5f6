//! Adapts GUI test cases (event sequences plus end-of-test assertions) from a
//! donor application to a semantically similar recipient application.
//!
//! Applications are deterministic, file-defined GUI state machines
//! ([`appmodel`]). Events, widgets and assertions are compared through
//! natural-language descriptors ([`descriptors`]) and a Word Mover's Distance
//! similarity over word embeddings ([`textsem`]). The adaptation itself is an
//! evolutionary search ([`evolve`]) guided by a fitness function that counts
//! semantically matched events and donor assertions applicable to the
//! recipient ([`fitness`]), followed by test reduction and oracle injection
//! ([`postprocess`]).

pub mod appmodel;
pub mod descriptors;
pub mod donoranalysis;
pub mod error;
pub mod evolve;
pub mod fitness;
pub mod guigraph;
pub mod matching;
pub mod postprocess;
pub mod textsem;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
