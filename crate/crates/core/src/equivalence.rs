//! Bounded language equivalence between two grammars over the same
//! terminal alphabet.

use std::collections::BTreeSet;
use std::thread;

use serde::Serialize;
use thiserror::Error;

use crate::derivation::{enumerate_language, produces, DerivationTrace, Produces, SearchCaps};
use crate::grammar::{Grammar, Sentence};
use crate::window::LanguageWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EquivStatus {
    EquivalentUpToBound,
    Inequivalent,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A word produced by exactly one side, with a derivation on that side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: Sentence,
    pub produced_by: Side,
    pub trace: DerivationTrace,
}

/// How a side's bounded language was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Leftmost derivation search finished without hitting a cap.
    Search,
    /// The search hit a cap; the exact window fixpoint was used instead.
    Fixpoint,
    /// Neither route finished, so the known words are only a subset.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivVerdict {
    pub status: EquivStatus,
    pub bound: usize,
    pub counterexample: Option<Counterexample>,
    /// True when the side's words up to the bound are known exactly.
    pub left_complete: bool,
    pub right_complete: bool,
    pub left_route: Route,
    pub right_route: Route,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("terminal alphabets differ (only left: {left_only:?}, only right: {right_only:?})")]
    AlphabetMismatch {
        left_only: Vec<String>,
        right_only: Vec<String>,
    },
}

struct SideLanguage<'g> {
    g: &'g Grammar,
    words: Vec<Sentence>,
    route: Route,
    window: Option<LanguageWindow<'g>>,
}

impl<'g> SideLanguage<'g> {
    fn build(g: &'g Grammar, max_len: usize, caps: SearchCaps) -> Self {
        let found = enumerate_language(g, max_len, caps);
        if found.complete {
            return SideLanguage {
                g,
                words: found.words,
                route: Route::Search,
                window: None,
            };
        }
        let window = LanguageWindow::compute(g, max_len, caps.max_visited);
        if window.is_complete() {
            SideLanguage {
                g,
                words: window.words(),
                route: Route::Fixpoint,
                window: Some(window),
            }
        } else {
            SideLanguage {
                g,
                words: found.words,
                route: Route::Partial,
                window: None,
            }
        }
    }

    fn complete(&self) -> bool {
        self.route != Route::Partial
    }

    fn contains(&self, w: &Sentence) -> bool {
        self.words.binary_search_by(|x| x.cmp_len_lex(w)).is_ok()
    }

    fn lacks(&self, w: &Sentence, caps: SearchCaps) -> bool {
        self.complete() || produces(self.g, w, caps).expect("shared alphabet") == Produces::No
    }

    fn trace(&self, w: &Sentence, caps: SearchCaps) -> Option<DerivationTrace> {
        if let Some(window) = &self.window {
            return window.trace(w);
        }
        match produces(self.g, w, caps).expect("shared alphabet") {
            Produces::Yes(trace) => Some(trace),
            _ => None,
        }
    }
}

/// Compares the languages of `left` and `right` on words of length at
/// most `max_len`.
///
/// Each side is enumerated by leftmost derivation search. If the search
/// hits a cap, the side falls back to the exact window fixpoint, limited
/// to `caps.max_visited` stored words. Nonterminal alphabets may differ;
/// words are compared by terminal name. A counterexample is only reported
/// when the side lacking the word is known exhaustively.
pub fn bounded_equiv(
    left: &Grammar,
    right: &Grammar,
    max_len: usize,
    caps: SearchCaps,
) -> Result<EquivVerdict, EquivError> {
    let lt: BTreeSet<&str> = left.terminals().collect();
    let rt: BTreeSet<&str> = right.terminals().collect();
    if lt != rt {
        return Err(EquivError::AlphabetMismatch {
            left_only: lt.difference(&rt).map(|s| s.to_string()).collect(),
            right_only: rt.difference(&lt).map(|s| s.to_string()).collect(),
        });
    }

    let (l, r) = thread::scope(|s| {
        let l = s.spawn(|| SideLanguage::build(left, max_len, caps));
        let r = SideLanguage::build(right, max_len, caps);
        (l.join().expect("enumeration thread panicked"), r)
    });

    let mut differing: Vec<(&Sentence, Side)> = l
        .words
        .iter()
        .filter(|w| !r.contains(w))
        .map(|w| (w, Side::Left))
        .chain(
            r.words
                .iter()
                .filter(|w| !l.contains(w))
                .map(|w| (w, Side::Right)),
        )
        .collect();
    differing.sort_by(|a, b| a.0.cmp_len_lex(b.0));

    let mut verdict = EquivVerdict {
        status: EquivStatus::Inconclusive,
        bound: max_len,
        counterexample: None,
        left_complete: l.complete(),
        right_complete: r.complete(),
        left_route: l.route,
        right_route: r.route,
    };

    if differing.is_empty() {
        if l.complete() && r.complete() {
            verdict.status = EquivStatus::EquivalentUpToBound;
        }
        return Ok(verdict);
    }

    let pick = |side: Side| match side {
        Side::Left => &l,
        Side::Right => &r,
    };
    for (word, side) in differing {
        if !pick(side.other()).lacks(word, caps) {
            continue;
        }
        if let Some(trace) = pick(side).trace(word, caps) {
            verdict.status = EquivStatus::Inequivalent;
            verdict.counterexample = Some(Counterexample {
                word: word.clone(),
                produced_by: side,
                trace,
            });
            return Ok(verdict);
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::replay;
    use crate::io::parse_grammar;
    use crate::transform::{eliminate_empty, eliminate_unit};

    fn g(text: &str) -> Grammar {
        parse_grammar(text).unwrap()
    }

    fn a_star_b() -> Grammar {
        g("start: S'\nterminals: a b\nnonterminals: S' A B\nS' -> a S'\nS' -> b\n")
    }

    #[test]
    fn reflexive() {
        let v = bounded_equiv(&a_star_b(), &a_star_b(), 4, SearchCaps::for_len(4)).unwrap();
        assert_eq!(v.status, EquivStatus::EquivalentUpToBound);
    }

    #[test]
    fn against_transformed() {
        let src = a_star_b();
        let (e, _) = eliminate_empty(&src).unwrap();
        let (u, _) = eliminate_unit(&e).unwrap();
        let v = bounded_equiv(&src, &u, 5, SearchCaps::for_len(5)).unwrap();
        assert_eq!(v.status, EquivStatus::EquivalentUpToBound);
    }

    #[test]
    fn different_single_words() {
        let l = g("start: S\nterminals: a b\nnonterminals: S\nS -> a\n");
        let r = g("start: S\nterminals: a b\nnonterminals: S\nS -> b\n");
        let v = bounded_equiv(&l, &r, 1, SearchCaps::for_len(1)).unwrap();
        assert_eq!(v.status, EquivStatus::Inequivalent);
        let cx = v.counterexample.unwrap();
        assert_eq!(cx.word.to_string(), "a");
        assert_eq!(cx.produced_by, Side::Left);
        assert_eq!(replay(&l, &cx.trace).unwrap(), cx.word.to_form());

        let swapped = bounded_equiv(&r, &l, 1, SearchCaps::for_len(1)).unwrap();
        assert_eq!(swapped.status, EquivStatus::Inequivalent);
        assert_eq!(swapped.counterexample.unwrap().produced_by, Side::Right);
    }

    #[test]
    fn alphabet_mismatch() {
        let l = g("start: S\nterminals: a\nnonterminals: S\nS -> a\n");
        let r = g("start: S\nterminals: a b\nnonterminals: S\nS -> a\n");
        assert_eq!(
            bounded_equiv(&l, &r, 2, SearchCaps::for_len(2)),
            Err(EquivError::AlphabetMismatch {
                left_only: vec![],
                right_only: vec!["b".into()]
            })
        );
    }

    #[test]
    fn capped_search_falls_back_to_fixpoint() {
        let l = g("start: S\nterminals: a\nnonterminals: S\nS -> S S\nS ->\nS -> a\n");
        let r = g("start: S\nterminals: a\nnonterminals: S\nS -> a S\nS ->\n");
        let v = bounded_equiv(&l, &r, 3, SearchCaps::for_len(3)).unwrap();
        assert_eq!(v.status, EquivStatus::EquivalentUpToBound);
        assert_eq!(v.left_route, Route::Fixpoint);
        assert_eq!(v.right_route, Route::Search);
    }

    #[test]
    fn partial_sides_are_inconclusive() {
        let l = g("start: S\nterminals: a\nnonterminals: S\nS -> S S\nS ->\nS -> a\n");
        let caps = SearchCaps {
            max_visited: 2,
            ..SearchCaps::for_len(2)
        };
        let v = bounded_equiv(&l, &l, 2, caps).unwrap();
        assert_eq!(v.status, EquivStatus::Inconclusive);
        assert!(!v.left_complete && !v.right_complete);
        assert_eq!(v.left_route, Route::Partial);
    }

    #[test]
    fn fixpoint_side_supplies_counterexample_trace() {
        let l = g("start: S\nterminals: a b\nnonterminals: S\nS -> a\nS -> b\n");
        let r = g("start: S\nterminals: a b\nnonterminals: S\nS -> S S\nS ->\nS -> b\n");
        let v = bounded_equiv(&l, &r, 1, SearchCaps::for_len(1)).unwrap();
        assert_eq!(v.right_route, Route::Fixpoint);
        assert_eq!(v.status, EquivStatus::Inequivalent);
        let cx = v.counterexample.unwrap();
        assert_eq!(cx.word, Sentence::default());
        assert_eq!(cx.produced_by, Side::Right);
        assert_eq!(replay(&r, &cx.trace).unwrap(), cx.word.to_form());
    }

    #[test]
    fn partial_side_cannot_refute() {
        // the right side misses "a" only because its search was cut short
        let l = g("start: S\nterminals: a\nnonterminals: S\nS -> a\n");
        let r = g("start: S\nterminals: a\nnonterminals: S A\nS -> A\nA -> S\nS -> a\n");
        let caps = SearchCaps {
            max_visited: 1,
            ..SearchCaps::for_len(1)
        };
        let v = bounded_equiv(&l, &r, 1, caps).unwrap();
        assert_eq!(v.right_route, Route::Partial);
        assert_eq!(v.status, EquivStatus::Inconclusive);
    }
}
