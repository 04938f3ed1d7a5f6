//! Independent random streams derived from the master seed.
//!
//! Every stochastic step gets its own ChaCha stream keyed by (seed, purpose,
//! generation, index), so parallel evaluation cannot perturb results: the
//! stream an individual consumes depends only on its coordinates, never on
//! the schedule.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamKind {
    InitRandom,
    InitGreedy,
    Eval,
    Select,
    Crossover,
    Mutate,
    EvalMutated,
    Reduce,
}

impl StreamKind {
    fn tag(self) -> u64 {
        match self {
            StreamKind::InitRandom => 1,
            StreamKind::InitGreedy => 2,
            StreamKind::Eval => 3,
            StreamKind::Select => 4,
            StreamKind::Crossover => 5,
            StreamKind::Mutate => 6,
            StreamKind::EvalMutated => 7,
            StreamKind::Reduce => 8,
        }
    }
}

pub fn stream(seed: u64, kind: StreamKind, generation: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&kind.tag().to_le_bytes());
    key[16..24].copy_from_slice(&generation.to_le_bytes());
    key[24..32].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
