//! Context-free grammar simplification.
//!
//! The crate provides four grammar transformations and a pipeline that
//! composes them:
//!
//! * empty-rule elimination, which introduces a fresh start symbol and
//!   keeps at most one empty rule on it;
//! * unit-rule elimination;
//! * useless-symbol elimination (requires a nonempty language);
//! * inaccessible-symbol elimination.
//!
//! Each pass is backed by a fixpoint analysis in [`analysis`], and the
//! results are checked against a bounded language oracle in
//! [`derivation`]: breadth-first enumeration of leftmost derivations with
//! explicit search caps. When a search hits a cap, [`window`] computes the
//! same length-bounded language as an exact fixpoint instead.
//! [`equivalence::bounded_equiv`] compares two grammars on all words up to
//! a length bound and never reports an inequivalence it cannot witness.
//!
//! ```
//! use cfgsimp::{io::parse_grammar, transform::simplify_pipeline, analysis::predicates};
//!
//! let g = parse_grammar("start: S\nterminals: a b\nnonterminals: S A\nS -> a S\nS -> A\nA -> b\nA ->\n").unwrap();
//! let (simple, _reports) = simplify_pipeline(&g).unwrap();
//! assert!(predicates(&simple).is_simplified(true));
//! ```

pub mod analysis;
pub mod derivation;
pub mod equivalence;
pub mod grammar;
pub mod io;
pub mod randgen;
pub mod transform;
pub mod window;

pub use analysis::{analyze, predicates, Analysis, PredicateReport};
pub use derivation::{
    derives_witness, enumerate_language, min_yield, produces, DerivationStep, DerivationTrace,
    EnumerationResult, MinYield, Produces, SearchCaps,
};
pub use equivalence::{bounded_equiv, EquivStatus, EquivVerdict, Route};
pub use grammar::{Grammar, Rule, Sentence, SententialForm, Symbol, SymbolKind};
pub use io::{parse_grammar, serialize_grammar, ParseError};
pub use randgen::{random_grammar, random_nonempty_grammar, GenConfig};
pub use transform::{
    eliminate_empty, eliminate_inaccessible, eliminate_unit, eliminate_useless, simplify_pipeline,
    Pass, PassReport, TransformError,
};
pub use window::LanguageWindow;
