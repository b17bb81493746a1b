//! Exact length-bounded languages.
//!
//! For every nonterminal `A` the window `L<=n(A)` is the set of terminal
//! strings of length at most `n` derivable from `A`. It is the least
//! fixpoint of
//!
//! ```text
//! L<=n(A) ⊇ { w1 ... wk : A -> X1 ... Xk, wi ∈ L<=n(Xi), |w1 ... wk| <= n }
//! ```
//!
//! with `L<=n(t) = {t}` for terminals. Unlike derivation search this never
//! gets lost in sentential forms made of nullable symbols, so it decides
//! bounded membership exactly whenever the windows fit in memory. Every
//! entry records the rule and split that first produced it, which is
//! enough to rebuild a leftmost derivation.

use indexmap::IndexMap;

use crate::derivation::{DerivationStep, DerivationTrace};
use crate::grammar::{Grammar, Sentence};

#[derive(Clone, Copy)]
enum Sym {
    Nt(u32),
    T(u32),
}

struct Entry {
    rule: u32,
    /// Length of the piece contributed by each rhs symbol.
    splits: Box<[u32]>,
}

/// The windows of every nonterminal of one grammar.
pub struct LanguageWindow<'g> {
    g: &'g Grammar,
    max_len: usize,
    tables: Vec<IndexMap<Box<[u32]>, Entry>>,
    complete: bool,
}

impl<'g> LanguageWindow<'g> {
    /// Computes all windows up to `max_len`. Gives up, marking the result
    /// incomplete, once more than `limit` entries are stored in total.
    pub fn compute(g: &'g Grammar, max_len: usize, limit: usize) -> Self {
        let rules: Vec<(usize, Vec<Sym>)> = g
            .rules()
            .map(|r| {
                let lhs = g.nonterminal_index(r.lhs.name()).expect("valid grammar");
                let rhs = r
                    .rhs
                    .iter()
                    .map(|s| {
                        if s.is_nonterminal() {
                            Sym::Nt(g.nonterminal_index(s.name()).expect("valid grammar") as u32)
                        } else {
                            Sym::T(g.terminal_index(s.name()).expect("valid grammar") as u32)
                        }
                    })
                    .collect();
                (lhs, rhs)
            })
            .collect();

        let mut tables: Vec<IndexMap<Box<[u32]>, Entry>> = (0..g.nonterminals().len())
            .map(|_| IndexMap::new())
            .collect();
        let mut total = 0usize;

        loop {
            let mut changed = false;
            for (ri, (lhs, rhs)) in rules.iter().enumerate() {
                let mut partial: IndexMap<Vec<u32>, Vec<u32>> = IndexMap::new();
                partial.insert(Vec::new(), Vec::new());
                for sym in rhs {
                    let mut next = IndexMap::new();
                    for (w, s) in &partial {
                        match *sym {
                            Sym::T(t) if w.len() < max_len => {
                                let mut w2 = w.clone();
                                w2.push(t);
                                let mut s2 = s.clone();
                                s2.push(1);
                                next.entry(w2).or_insert(s2);
                            }
                            Sym::T(_) => {}
                            Sym::Nt(x) => {
                                for u in tables[x as usize].keys() {
                                    if w.len() + u.len() > max_len {
                                        continue;
                                    }
                                    let mut w2 = w.clone();
                                    w2.extend_from_slice(u);
                                    if next.contains_key(&w2) {
                                        continue;
                                    }
                                    let mut s2 = s.clone();
                                    s2.push(u.len() as u32);
                                    next.insert(w2, s2);
                                }
                            }
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                for (w, splits) in partial {
                    if tables[*lhs].contains_key(w.as_slice()) {
                        continue;
                    }
                    tables[*lhs].insert(
                        w.into_boxed_slice(),
                        Entry {
                            rule: ri as u32,
                            splits: splits.into_boxed_slice(),
                        },
                    );
                    changed = true;
                    total += 1;
                    if total > limit {
                        return LanguageWindow {
                            g,
                            max_len,
                            tables,
                            complete: false,
                        };
                    }
                }
            }
            if !changed {
                return LanguageWindow {
                    g,
                    max_len,
                    tables,
                    complete: true,
                };
            }
        }
    }

    /// False when the entry limit was reached; the windows are then
    /// subsets of the true ones.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Words of the start symbol, sorted by length then lexicographically.
    pub fn words(&self) -> Vec<Sentence> {
        self.words_of(self.g.start())
    }

    pub fn words_of(&self, nonterminal: &str) -> Vec<Sentence> {
        let Some(i) = self.g.nonterminal_index(nonterminal) else {
            return Vec::new();
        };
        let terminals: Vec<&str> = self.g.terminals().collect();
        let mut out: Vec<Sentence> = self.tables[i]
            .keys()
            .map(|w| Sentence::new(w.iter().map(|&t| terminals[t as usize])))
            .collect();
        out.sort_by(Sentence::cmp_len_lex);
        out
    }

    /// A leftmost derivation of `word` from the start symbol, if the word
    /// is in the window.
    pub fn trace(&self, word: &Sentence) -> Option<DerivationTrace> {
        let start = self.g.nonterminal_index(self.g.start())?;
        let encoded: Vec<u32> = word
            .terminals()
            .iter()
            .map(|t| self.g.terminal_index(t).map(|i| i as u32))
            .collect::<Option<_>>()?;
        if !self.tables[start].contains_key(encoded.as_slice()) {
            return None;
        }
        let mut trace = DerivationTrace::new(vec![self.g.start_symbol()]);
        self.expand(start, &encoded, 0, &mut trace.steps);
        Some(trace)
    }

    /// Appends the leftmost steps deriving `word` from nonterminal `nt`
    /// sitting at position `cut` (everything left of it is terminal).
    fn expand(&self, nt: usize, word: &[u32], cut: usize, steps: &mut Vec<DerivationStep>) {
        let entry = &self.tables[nt][word];
        let rule = self.g.rule(entry.rule as usize).expect("rule index");
        steps.push(DerivationStep {
            cut,
            rule: rule.clone(),
        });
        let mut offset = 0;
        for (sym, &len) in rule.rhs.iter().zip(entry.splits.iter()) {
            let len = len as usize;
            if sym.is_nonterminal() {
                let child = self.g.nonterminal_index(sym.name()).expect("valid grammar");
                self.expand(child, &word[offset..offset + len], cut + offset, steps);
            }
            offset += len;
        }
    }
}
