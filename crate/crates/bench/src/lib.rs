//! Shared inputs for the criterion benchmarks.

use cfgsimp::{random_nonempty_grammar, GenConfig, Grammar};

/// `count` non-empty random grammars with default generator settings,
/// seeded `0..count`.
pub fn corpus(count: u64) -> Vec<Grammar> {
    (0..count)
        .map(|seed| random_nonempty_grammar(&GenConfig::with_seed(seed)).expect("default config"))
        .collect()
}
