//! Seeded random grammars for property testing.
//!
//! Randomness comes from xorshift64*: with nonzero state `x`,
//!
//! ```text
//! x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;
//! output = x * 0x2545F4914F6CDD1D  (mod 2^64)
//! ```
//!
//! The state is seeded with one splitmix64 step of the user seed so that
//! seed 0 is usable. Integers in `[0, n)` are `output % n`; unit floats
//! are `(output >> 11) / 2^53`. Only integer arithmetic and exact
//! double conversions are involved, so a seed reproduces the same
//! grammar on every platform.

use serde::Serialize;
use thiserror::Error;

use crate::analysis::useful_set;
use crate::grammar::{Grammar, Rule, Symbol};

/// Attempts made by [`random_nonempty_grammar`] before giving up.
pub const MAX_RETRIES: usize = 1000;

#[derive(Debug, Clone)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Xorshift64Star {
            state: if z == 0 { 1 } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform-ish integer in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_nonterminals: usize,
    pub max_terminals: usize,
    pub max_rules: usize,
    pub max_rhs_len: usize,
    /// Probability that a rule is generated as an empty rule.
    pub empty_rule_bias: f64,
    /// Probability that a rule is generated as a unit rule.
    pub unit_rule_bias: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_nonterminals: 6,
            max_terminals: 4,
            max_rules: 12,
            max_rhs_len: 4,
            empty_rule_bias: 0.15,
            unit_rule_bias: 0.15,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        GenConfig {
            seed,
            ..GenConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let maxima = [
            ("max_nonterminals", self.max_nonterminals),
            ("max_terminals", self.max_terminals),
            ("max_rules", self.max_rules),
            ("max_rhs_len", self.max_rhs_len),
        ];
        if let Some((name, _)) = maxima.iter().find(|(_, v)| *v == 0) {
            return Err(GenError::InvalidConfig(format!(
                "{name} must be at least 1"
            )));
        }
        for (name, p) in [
            ("empty_rule_bias", self.empty_rule_bias),
            ("unit_rule_bias", self.unit_rule_bias),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(GenError::InvalidConfig(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("no grammar with a nonempty language after {0} attempts")]
    RetriesExhausted(usize),
}

fn nonterminal_names(n: usize) -> Vec<String> {
    let letters = ('A'..='Z').filter(|&c| c != 'S').map(String::from);
    std::iter::once("S".to_owned())
        .chain(letters)
        .chain((0..).map(|i| format!("N{i}")))
        .take(n)
        .collect()
}

fn terminal_names(n: usize) -> Vec<String> {
    ('a'..='z')
        .map(String::from)
        .chain((0..).map(|i| format!("t{i}")))
        .take(n)
        .collect()
}

fn generate(rng: &mut Xorshift64Star, cfg: &GenConfig) -> Grammar {
    let nts = nonterminal_names(1 + rng.below(cfg.max_nonterminals));
    let ts = terminal_names(1 + rng.below(cfg.max_terminals));
    let n_rules = 1 + rng.below(cfg.max_rules);
    let mut g = Grammar::new(nts[0].clone(), nts.iter().cloned(), ts.iter().cloned());

    for i in 0..n_rules {
        let lhs = if i == 0 { 0 } else { rng.below(nts.len()) };
        let roll = rng.unit();
        let rhs = if roll < cfg.empty_rule_bias {
            Vec::new()
        } else if roll < cfg.empty_rule_bias + cfg.unit_rule_bias {
            vec![Symbol::nt(&nts[rng.below(nts.len())])]
        } else {
            let len = 1 + rng.below(cfg.max_rhs_len);
            (0..len)
                .map(|_| {
                    if rng.chance(0.5) {
                        Symbol::t(&ts[rng.below(ts.len())])
                    } else {
                        Symbol::nt(&nts[rng.below(nts.len())])
                    }
                })
                .collect()
        };
        g.add_rule(Rule::new(nts[lhs].clone(), rhs));
    }
    g
}

/// A valid random grammar within the bounds of `cfg`. The start symbol
/// always has at least one rule.
pub fn random_grammar(cfg: &GenConfig) -> Result<Grammar, GenError> {
    cfg.validate()?;
    Ok(generate(&mut Xorshift64Star::new(cfg.seed), cfg))
}

/// Draws grammars from one generator stream until the start symbol is
/// useful.
pub fn random_nonempty_grammar(cfg: &GenConfig) -> Result<Grammar, GenError> {
    cfg.validate()?;
    let mut rng = Xorshift64Star::new(cfg.seed);
    for _ in 0..MAX_RETRIES {
        let g = generate(&mut rng, cfg);
        if useful_set(&g).contains(&g.start_symbol()) {
            return Ok(g);
        }
    }
    Err(GenError::RetriesExhausted(MAX_RETRIES))
}
