//! Derivation semantics and a bounded language oracle.
//!
//! Derivations are replayable traces of `(cut, rule)` steps. The oracle
//! searches leftmost derivations breadth-first over interned sentential
//! forms, pruning forms whose minimal yield exceeds the length bound and
//! forms already visited. Every search reports whether one of its
//! [`SearchCaps`] was hit; only a search that hit no cap may claim that a
//! word is absent.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::rc::Rc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::grammar::{Grammar, Rule, Sentence, SententialForm, Symbol};

/// Rewrites the nonterminal at `cut` with `rule`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationStep {
    pub cut: usize,
    pub rule: Rule,
}

/// A sequence of steps starting at `origin`. With no steps it witnesses
/// that a form derives itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationTrace {
    #[serde(serialize_with = "ser_form")]
    pub origin: SententialForm,
    pub steps: Vec<DerivationStep>,
}

fn ser_form<S: Serializer>(form: &SententialForm, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&FormDisplay(form))
}

/// Displays a sentential form as space-separated names, `<eps>` if empty.
pub struct FormDisplay<'a>(pub &'a [Symbol]);

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<eps>");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", s)?;
        }
        Ok(())
    }
}

impl DerivationTrace {
    pub fn new(origin: SententialForm) -> Self {
        DerivationTrace {
            origin,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("cut {cut} is out of bounds for a form of length {len}")]
    CutOutOfBounds { cut: usize, len: usize },
    #[error("symbol at cut {cut} is {found}, rule rewrites {expected}")]
    SymbolMismatch {
        cut: usize,
        expected: Symbol,
        found: Symbol,
    },
    #[error("`{0}` is not a rule of the grammar")]
    RuleNotInGrammar(Rule),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {index}: {source}")]
pub struct ReplayError {
    pub index: usize,
    #[source]
    pub source: StepError,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("terminal {0} is not declared by the grammar")]
    UndeclaredTerminal(String),
}

/// Applies one derivation step to `form`.
pub fn apply_step(
    g: &Grammar,
    form: &[Symbol],
    step: &DerivationStep,
) -> Result<SententialForm, StepError> {
    if !g.contains_rule(&step.rule) {
        return Err(StepError::RuleNotInGrammar(step.rule.clone()));
    }
    let found = form.get(step.cut).ok_or(StepError::CutOutOfBounds {
        cut: step.cut,
        len: form.len(),
    })?;
    if *found != step.rule.lhs {
        return Err(StepError::SymbolMismatch {
            cut: step.cut,
            expected: step.rule.lhs.clone(),
            found: found.clone(),
        });
    }
    let mut out = Vec::with_capacity(form.len() + step.rule.rhs.len());
    out.extend_from_slice(&form[..step.cut]);
    out.extend_from_slice(&step.rule.rhs);
    out.extend_from_slice(&form[step.cut + 1..]);
    Ok(out)
}

/// Replays a trace from its origin and returns the final form.
pub fn replay(g: &Grammar, trace: &DerivationTrace) -> Result<SententialForm, ReplayError> {
    trace
        .steps
        .iter()
        .enumerate()
        .try_fold(trace.origin.clone(), |form, (index, step)| {
            apply_step(g, &form, step).map_err(|source| ReplayError { index, source })
        })
}

/// Length of the shortest terminal string derivable from a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MinYield {
    Finite(u64),
    Infinite,
}

impl MinYield {
    pub fn is_finite(self) -> bool {
        matches!(self, MinYield::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            MinYield::Finite(n) => Some(n),
            MinYield::Infinite => None,
        }
    }
}

impl fmt::Display for MinYield {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinYield::Finite(n) => write!(f, "{}", n),
            MinYield::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for MinYield {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MinYield::Finite(n) => s.serialize_u64(*n),
            MinYield::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Least fixpoint of the minimal terminal yield of every declared
/// nonterminal. Terminals implicitly yield 1.
pub fn min_yield(g: &Grammar) -> BTreeMap<String, MinYield> {
    let compiled = Compiled::new(g);
    g.nonterminals()
        .enumerate()
        .map(|(i, name)| {
            let y = match compiled.yields[i] {
                INF => MinYield::Infinite,
                n => MinYield::Finite(n),
            };
            (name.to_owned(), y)
        })
        .collect()
}

/// Limits on the search space explored by the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchCaps {
    pub max_form_len: usize,
    pub max_visited: usize,
    pub max_depth: usize,
}

impl SearchCaps {
    pub const DEFAULT_MAX_VISITED: usize = 200_000;

    /// Defaults for a length bound `n`: forms up to `2n + 4` symbols,
    /// 200,000 visited forms, `10 (n + 1)` derivation steps.
    pub fn for_len(max_len: usize) -> Self {
        SearchCaps {
            max_form_len: 2 * max_len + 4,
            max_visited: Self::DEFAULT_MAX_VISITED,
            max_depth: 10 * (max_len + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SearchStats {
    /// Forms taken off the frontier.
    pub explored: usize,
    /// Forms discarded by yield, prefix or subsequence pruning.
    pub pruned: usize,
    pub form_len_hits: usize,
    pub visited_hits: usize,
    pub depth_hits: usize,
}

impl SearchStats {
    pub fn caps_hit(&self) -> bool {
        self.form_len_hits + self.visited_hits + self.depth_hits > 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationResult {
    /// Sorted by length, then lexicographically by terminal name.
    pub words: Vec<Sentence>,
    pub complete: bool,
    pub stats: SearchStats,
}

impl EnumerationResult {
    pub fn contains(&self, word: &Sentence) -> bool {
        self.words.binary_search_by(|w| w.cmp_len_lex(word)).is_ok()
    }
}

/// Outcome of a membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Produces {
    /// The word is produced; the trace leads from the start symbol to it.
    Yes(DerivationTrace),
    /// The pruned search space was exhausted without finding the word.
    No,
    /// A cap was hit before the word was found.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSearch {
    pub trace: Option<DerivationTrace>,
    /// True when no cap was hit, so an absent trace proves non-derivability.
    pub complete: bool,
    pub stats: SearchStats,
}

/// Enumerates every sentence of length at most `max_len` produced by `g`.
pub fn enumerate_language(g: &Grammar, max_len: usize, caps: SearchCaps) -> EnumerationResult {
    enumerate_from(g, &[g.start_symbol()], max_len, caps)
}

/// Enumerates the terminal strings of length at most `max_len` derivable
/// from `origin`.
pub fn enumerate_from(
    g: &Grammar,
    origin: &[Symbol],
    max_len: usize,
    caps: SearchCaps,
) -> EnumerationResult {
    let compiled = Compiled::new(g);
    let Some(origin) = compiled.encode_form(origin) else {
        return EnumerationResult {
            words: Vec::new(),
            complete: true,
            stats: SearchStats::default(),
        };
    };
    let out = compiled.leftmost_search(origin, max_len, None, caps);
    let mut words: Vec<Sentence> = out
        .words
        .iter()
        .map(|w| compiled.decode_sentence(w))
        .collect();
    words.sort_by(Sentence::cmp_len_lex);
    EnumerationResult {
        words,
        complete: !out.stats.caps_hit(),
        stats: out.stats,
    }
}

/// Decides membership of `w` within the search caps.
pub fn produces(g: &Grammar, w: &Sentence, caps: SearchCaps) -> Result<Produces, DerivationError> {
    Ok(produces_with_stats(g, w, caps)?.0)
}

pub fn produces_with_stats(
    g: &Grammar,
    w: &Sentence,
    caps: SearchCaps,
) -> Result<(Produces, SearchStats), DerivationError> {
    if let Some(t) = w.terminals().iter().find(|t| !g.has_terminal(t)) {
        return Err(DerivationError::UndeclaredTerminal(t.clone()));
    }
    let compiled = Compiled::new(g);
    let target: Vec<u32> = w
        .terminals()
        .iter()
        .map(|t| compiled.n_nt + g.terminal_index(t).expect("checked above") as u32)
        .collect();
    let Some(origin) = compiled.encode_form(&[g.start_symbol()]) else {
        return Ok((Produces::No, SearchStats::default()));
    };
    let out = compiled.leftmost_search(origin, w.len(), Some(&target), caps);
    let verdict = match out.found {
        Some(node) => Produces::Yes(compiled.trace_to(&out.arena, node)),
        None if out.stats.caps_hit() => Produces::Unknown,
        None => Produces::No,
    };
    Ok((verdict, out.stats))
}

/// Searches for a derivation `from =>* to` of at most `depth_cap` steps.
///
/// All cut positions are tried, leftmost first. Forms are pruned when
/// their terminals are not a subsequence of the terminals of `to`, or when
/// the symbols that cannot vanish already outnumber `to`.
pub fn derives_witness(
    g: &Grammar,
    from: &[Symbol],
    to: &[Symbol],
    depth_cap: usize,
) -> WitnessSearch {
    let mut caps = SearchCaps::for_len(to.len());
    caps.max_depth = depth_cap;
    derives_witness_with_caps(g, from, to, caps)
}

pub fn derives_witness_with_caps(
    g: &Grammar,
    from: &[Symbol],
    to: &[Symbol],
    caps: SearchCaps,
) -> WitnessSearch {
    let compiled = Compiled::new(g);
    let (Some(origin), Some(target)) = (compiled.encode_form(from), compiled.encode_form(to))
    else {
        return WitnessSearch {
            trace: None,
            complete: true,
            stats: SearchStats::default(),
        };
    };
    let out = compiled.any_cut_search(origin, &target, caps);
    WitnessSearch {
        trace: out.found.map(|node| compiled.trace_to(&out.arena, node)),
        complete: !out.stats.caps_hit(),
        stats: out.stats,
    }
}

const INF: u64 = u64::MAX;

/// A grammar with symbols interned as `u32`: nonterminal `i` is `i`,
/// terminal `j` is `n_nt + j`.
struct Compiled<'g> {
    g: &'g Grammar,
    n_nt: u32,
    /// Per nonterminal: (rule index, encoded rhs) in rule order.
    by_lhs: Vec<Vec<(u32, Box<[u32]>)>>,
    yields: Vec<u64>,
}

struct Node {
    parent: u32,
    rule: u32,
    cut: u32,
    depth: u32,
}

#[derive(Default)]
struct Arena {
    forms: Vec<Rc<[u32]>>,
    nodes: Vec<Node>,
    index: HashMap<Rc<[u32]>, u32>,
}

impl Arena {
    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn contains(&self, form: &[u32]) -> bool {
        self.index.contains_key(form)
    }

    fn push(&mut self, form: Vec<u32>, node: Node) -> u32 {
        let id = self.nodes.len() as u32;
        let form: Rc<[u32]> = form.into();
        self.index.insert(form.clone(), id);
        self.forms.push(form);
        self.nodes.push(node);
        id
    }
}

struct SearchOutcome {
    arena: Arena,
    found: Option<u32>,
    words: Vec<Vec<u32>>,
    stats: SearchStats,
}

const ROOT: u32 = u32::MAX;

impl<'g> Compiled<'g> {
    fn new(g: &'g Grammar) -> Self {
        let n_nt = g.nonterminals().len() as u32;
        let mut by_lhs = vec![Vec::new(); n_nt as usize];
        for (i, rule) in g.rules().enumerate() {
            let Some(lhs) = g.nonterminal_index(rule.lhs.name()) else {
                continue;
            };
            let rhs: Option<Box<[u32]>> = rule.rhs.iter().map(|s| encode(g, n_nt, s)).collect();
            if let Some(rhs) = rhs {
                by_lhs[lhs].push((i as u32, rhs));
            }
        }
        let mut c = Compiled {
            g,
            n_nt,
            by_lhs,
            yields: vec![INF; n_nt as usize],
        };
        c.yields = c.compute_yields();
        c
    }

    fn compute_yields(&self) -> Vec<u64> {
        let mut yields = vec![INF; self.n_nt as usize];
        loop {
            let mut changed = false;
            for (lhs, rules) in self.by_lhs.iter().enumerate() {
                for (_, rhs) in rules {
                    let y = sum_yield(&yields, self.n_nt, rhs);
                    if y < yields[lhs] {
                        yields[lhs] = y;
                        changed = true;
                    }
                }
            }
            if !changed {
                return yields;
            }
        }
    }

    fn yield_of(&self, form: &[u32]) -> u64 {
        sum_yield(&self.yields, self.n_nt, form)
    }

    fn is_nt(&self, s: u32) -> bool {
        s < self.n_nt
    }

    fn encode_form(&self, form: &[Symbol]) -> Option<Vec<u32>> {
        form.iter().map(|s| encode(self.g, self.n_nt, s)).collect()
    }

    fn decode(&self, s: u32) -> Symbol {
        if self.is_nt(s) {
            Symbol::nt(self.g.nonterminals().nth(s as usize).expect("interned"))
        } else {
            Symbol::t(
                self.g
                    .terminals()
                    .nth((s - self.n_nt) as usize)
                    .expect("interned"),
            )
        }
    }

    fn decode_sentence(&self, word: &[u32]) -> Sentence {
        let terminals: Vec<&str> = self.g.terminals().collect();
        Sentence::new(word.iter().map(|&s| terminals[(s - self.n_nt) as usize]))
    }

    fn trace_to(&self, arena: &Arena, node: u32) -> DerivationTrace {
        let mut steps = Vec::new();
        let mut cur = node;
        while arena.nodes[cur as usize].parent != ROOT {
            let n = &arena.nodes[cur as usize];
            steps.push(DerivationStep {
                cut: n.cut as usize,
                rule: self.g.rule(n.rule as usize).expect("rule index").clone(),
            });
            cur = n.parent;
        }
        steps.reverse();
        let origin = arena.forms[cur as usize]
            .iter()
            .map(|&s| self.decode(s))
            .collect();
        DerivationTrace { origin, steps }
    }

    /// Breadth-first search over leftmost derivations. Without a target it
    /// collects every terminal form of length at most `bound`; with one it
    /// stops when the target is reached.
    fn leftmost_search(
        &self,
        origin: Vec<u32>,
        bound: usize,
        target: Option<&[u32]>,
        caps: SearchCaps,
    ) -> SearchOutcome {
        let mut stats = SearchStats::default();
        let mut arena = Arena::default();
        let mut words = Vec::new();
        let bound = bound as u64;

        let admissible = |form: &[u32], stats: &mut SearchStats| -> bool {
            if self.yield_of(form) > bound {
                stats.pruned += 1;
                return false;
            }
            if let Some(target) = target {
                let prefix = form.iter().take_while(|&&s| !self.is_nt(s)).count();
                if prefix > target.len() || form[..prefix] != target[..prefix] {
                    stats.pruned += 1;
                    return false;
                }
            }
            if form.len() > caps.max_form_len {
                stats.form_len_hits += 1;
                return false;
            }
            true
        };

        if !admissible(&origin, &mut stats) {
            return SearchOutcome {
                arena,
                found: None,
                words,
                stats,
            };
        }
        let root = arena.push(
            origin,
            Node {
                parent: ROOT,
                rule: 0,
                cut: 0,
                depth: 0,
            },
        );
        let mut queue = VecDeque::from([root]);

        while let Some(id) = queue.pop_front() {
            stats.explored += 1;
            let form = arena.forms[id as usize].clone();
            let depth = arena.nodes[id as usize].depth;
            let Some(cut) = form.iter().position(|&s| self.is_nt(s)) else {
                match target {
                    Some(t) if *t == *form => {
                        return SearchOutcome {
                            arena,
                            found: Some(id),
                            words,
                            stats,
                        }
                    }
                    Some(_) => {}
                    None => words.push(form.to_vec()),
                }
                continue;
            };
            if depth as usize >= caps.max_depth {
                stats.depth_hits += 1;
                continue;
            }
            for (rule, rhs) in &self.by_lhs[form[cut] as usize] {
                let next = splice(&form, cut, rhs);
                if arena.contains(&next) || !admissible(&next, &mut stats) {
                    continue;
                }
                if arena.len() >= caps.max_visited {
                    stats.visited_hits += 1;
                    continue;
                }
                let child = arena.push(
                    next,
                    Node {
                        parent: id,
                        rule: *rule,
                        cut: cut as u32,
                        depth: depth + 1,
                    },
                );
                queue.push_back(child);
            }
        }
        SearchOutcome {
            arena,
            found: None,
            words,
            stats,
        }
    }

    /// Breadth-first search over derivations rewriting any nonterminal.
    fn any_cut_search(&self, origin: Vec<u32>, target: &[u32], caps: SearchCaps) -> SearchOutcome {
        let mut stats = SearchStats::default();
        let mut arena = Arena::default();
        let target_terminals: Vec<u32> =
            target.iter().copied().filter(|&s| !self.is_nt(s)).collect();

        let admissible = |form: &[u32], stats: &mut SearchStats| -> bool {
            let solid = form
                .iter()
                .filter(|&&s| !self.is_nt(s) || self.yields[s as usize] > 0)
                .count();
            let terminals = form.iter().copied().filter(|&s| !self.is_nt(s));
            if solid > target.len() || !is_subsequence(terminals, &target_terminals) {
                stats.pruned += 1;
                return false;
            }
            if form.len() > caps.max_form_len {
                stats.form_len_hits += 1;
                return false;
            }
            true
        };

        let root_node = Node {
            parent: ROOT,
            rule: 0,
            cut: 0,
            depth: 0,
        };
        if origin == target {
            let root = arena.push(origin, root_node);
            return SearchOutcome {
                arena,
                found: Some(root),
                words: Vec::new(),
                stats,
            };
        }
        if !admissible(&origin, &mut stats) {
            return SearchOutcome {
                arena,
                found: None,
                words: Vec::new(),
                stats,
            };
        }
        let root = arena.push(origin, root_node);
        let mut queue = VecDeque::from([root]);

        while let Some(id) = queue.pop_front() {
            stats.explored += 1;
            let form = arena.forms[id as usize].clone();
            let depth = arena.nodes[id as usize].depth;
            if !form.iter().any(|&s| self.is_nt(s)) {
                continue;
            }
            if depth as usize >= caps.max_depth {
                stats.depth_hits += 1;
                continue;
            }
            for cut in (0..form.len()).filter(|&i| self.is_nt(form[i])) {
                for (rule, rhs) in &self.by_lhs[form[cut] as usize] {
                    let next = splice(&form, cut, rhs);
                    if arena.contains(&next) {
                        continue;
                    }
                    let hit = *next == *target;
                    if !hit && !admissible(&next, &mut stats) {
                        continue;
                    }
                    if arena.len() >= caps.max_visited {
                        stats.visited_hits += 1;
                        continue;
                    }
                    let child = arena.push(
                        next,
                        Node {
                            parent: id,
                            rule: *rule,
                            cut: cut as u32,
                            depth: depth + 1,
                        },
                    );
                    if hit {
                        return SearchOutcome {
                            arena,
                            found: Some(child),
                            words: Vec::new(),
                            stats,
                        };
                    }
                    queue.push_back(child);
                }
            }
        }
        SearchOutcome {
            arena,
            found: None,
            words: Vec::new(),
            stats,
        }
    }
}

fn encode(g: &Grammar, n_nt: u32, s: &Symbol) -> Option<u32> {
    if s.is_nonterminal() {
        g.nonterminal_index(s.name()).map(|i| i as u32)
    } else {
        g.terminal_index(s.name()).map(|i| n_nt + i as u32)
    }
}

fn sum_yield(yields: &[u64], n_nt: u32, form: &[u32]) -> u64 {
    form.iter().fold(0u64, |acc, &s| {
        let y = if s < n_nt { yields[s as usize] } else { 1 };
        if y == INF || acc == INF {
            INF
        } else {
            acc.saturating_add(y).min(INF - 1)
        }
    })
}

fn splice(form: &[u32], cut: usize, rhs: &[u32]) -> Vec<u32> {
    let mut next = Vec::with_capacity(form.len() + rhs.len());
    next.extend_from_slice(&form[..cut]);
    next.extend_from_slice(rhs);
    next.extend_from_slice(&form[cut + 1..]);
    next
}

fn is_subsequence(mut needle: impl Iterator<Item = u32>, haystack: &[u32]) -> bool {
    let mut rest = haystack.iter();
    needle.all(|n| rest.any(|&h| h == n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_grammar;

    fn a_star_b() -> Grammar {
        parse_grammar("start: S'\nterminals: a b\nnonterminals: S' A B\nS' -> a S'\nS' -> b\n")
            .unwrap()
    }

    fn t(n: &str) -> Symbol {
        Symbol::t(n)
    }
    fn nt(n: &str) -> Symbol {
        Symbol::nt(n)
    }

    fn words(r: &EnumerationResult) -> Vec<String> {
        r.words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn apply_step_rewrites_at_cut() {
        let g = a_star_b();
        let r1 = g.rule(0).unwrap().clone();
        let out = apply_step(&g, &[nt("S'")], &DerivationStep { cut: 0, rule: r1 }).unwrap();
        assert_eq!(out, vec![t("a"), nt("S'")]);
    }

    #[test]
    fn apply_step_with_empty_rhs_deletes() {
        let g = parse_grammar("start: S\nterminals: a\nnonterminals: S\nS -> a S\nS ->\n").unwrap();
        let eps = g.rule(1).unwrap().clone();
        let out = apply_step(
            &g,
            &[t("a"), nt("S"), t("a")],
            &DerivationStep { cut: 1, rule: eps },
        )
        .unwrap();
        assert_eq!(out, vec![t("a"), t("a")]);
    }

    #[test]
    fn apply_step_errors_are_distinct() {
        let g = a_star_b();
        let r1 = g.rule(0).unwrap().clone();
        let mismatch = apply_step(
            &g,
            &[t("a"), nt("S'")],
            &DerivationStep {
                cut: 0,
                rule: r1.clone(),
            },
        );
        assert!(matches!(
            mismatch,
            Err(StepError::SymbolMismatch { cut: 0, .. })
        ));
        let oob = apply_step(&g, &[nt("S'")], &DerivationStep { cut: 3, rule: r1 });
        assert_eq!(oob, Err(StepError::CutOutOfBounds { cut: 3, len: 1 }));
        let foreign = Rule::new("S'", vec![t("a")]);
        let missing = apply_step(
            &g,
            &[nt("S'")],
            &DerivationStep {
                cut: 0,
                rule: foreign,
            },
        );
        assert!(matches!(missing, Err(StepError::RuleNotInGrammar(_))));
    }

    #[test]
    fn replay_aab() {
        let g = a_star_b();
        let r1 = g.rule(0).unwrap().clone();
        let r2 = g.rule(1).unwrap().clone();
        let trace = DerivationTrace {
            origin: vec![nt("S'")],
            steps: vec![
                DerivationStep {
                    cut: 0,
                    rule: r1.clone(),
                },
                DerivationStep {
                    cut: 1,
                    rule: r1.clone(),
                },
                DerivationStep { cut: 2, rule: r2 },
            ],
        };
        assert_eq!(replay(&g, &trace).unwrap(), vec![t("a"), t("a"), t("b")]);

        let refl = DerivationTrace::new(vec![t("a"), t("b")]);
        assert_eq!(replay(&g, &refl).unwrap(), vec![t("a"), t("b")]);

        let bad = DerivationTrace {
            origin: vec![nt("S'")],
            steps: vec![
                DerivationStep {
                    cut: 0,
                    rule: r1.clone(),
                },
                DerivationStep { cut: 0, rule: r1 },
            ],
        };
        assert_eq!(replay(&g, &bad).unwrap_err().index, 1);
    }

    #[test]
    fn witness_for_aab() {
        let g = a_star_b();
        let w = derives_witness(&g, &[nt("S'")], &[t("a"), t("a"), t("b")], 10);
        let trace = w.trace.expect("aab is derivable");
        assert_eq!(trace.len(), 3);
        assert_eq!(replay(&g, &trace).unwrap(), vec![t("a"), t("a"), t("b")]);
    }

    #[test]
    fn witness_reflexive_with_zero_cap() {
        let g = a_star_b();
        let form = vec![t("a"), nt("S'")];
        let w = derives_witness(&g, &form, &form, 0);
        assert!(w.trace.unwrap().is_empty());
    }

    #[test]
    fn witness_absent_for_ba_with_complete_search() {
        let g = a_star_b();
        let w = derives_witness(&g, &[nt("S'")], &[t("b"), t("a")], 10);
        assert!(w.trace.is_none());
        assert!(w.complete);
    }

    #[test]
    fn witness_with_nonterminal_in_target() {
        let g = parse_grammar("start: S\nterminals: b\nnonterminals: S A B\nS -> A B\nB -> b\n")
            .unwrap();
        let w = derives_witness(&g, &[nt("S")], &[nt("A"), t("b")], 5);
        let trace = w.trace.unwrap();
        assert_eq!(trace.steps[1].cut, 1);
    }

    #[test]
    fn min_yield_examples() {
        let y = min_yield(&a_star_b());
        assert_eq!(y["S'"], MinYield::Finite(1));
        assert_eq!(y["A"], MinYield::Infinite);
        assert_eq!(y["B"], MinYield::Infinite);

        let g = parse_grammar("start: S\nterminals:\nnonterminals: S\nS ->\n").unwrap();
        assert_eq!(min_yield(&g)["S"], MinYield::Finite(0));

        let g = parse_grammar(
            "start: S\nterminals: a b\nnonterminals: S A B\nS -> A B\nA -> a\nB -> a b\n",
        )
        .unwrap();
        let y = min_yield(&g);
        assert_eq!(
            (y["S"], y["A"], y["B"]),
            (
                MinYield::Finite(3),
                MinYield::Finite(1),
                MinYield::Finite(2)
            )
        );
    }

    #[test]
    fn enumerate_a_star_b() {
        let r = enumerate_language(&a_star_b(), 3, SearchCaps::for_len(3));
        assert!(r.complete);
        assert_eq!(words(&r), ["b", "a b", "a a b"]);
    }

    #[test]
    fn enumerate_rule_free_and_epsilon() {
        let g = parse_grammar("start: S\nterminals: a\nnonterminals: S\n").unwrap();
        let r = enumerate_language(&g, 5, SearchCaps::for_len(5));
        assert!(r.complete && r.words.is_empty());

        let g = parse_grammar("start: S\nterminals:\nnonterminals: S\nS ->\n").unwrap();
        let r = enumerate_language(&g, 0, SearchCaps::for_len(0));
        assert!(r.complete);
        assert_eq!(words(&r), ["<eps>"]);
    }

    #[test]
    fn epsilon_cycle_hits_form_cap() {
        let g = parse_grammar("start: S\nterminals: a\nnonterminals: S\nS -> S S\nS ->\nS -> a\n")
            .unwrap();
        let r = enumerate_language(&g, 2, SearchCaps::for_len(2));
        assert!(!r.complete);
        assert_eq!(words(&r), ["<eps>", "a", "a a"]);
    }

    #[test]
    fn visited_cap_marks_incomplete() {
        let caps = SearchCaps {
            max_visited: 2,
            ..SearchCaps::for_len(6)
        };
        let r = enumerate_language(&a_star_b(), 6, caps);
        assert!(!r.complete);
        assert!(r.stats.visited_hits > 0);
    }

    #[test]
    fn produces_examples() {
        let g = a_star_b();
        let caps = SearchCaps::for_len(3);
        match produces(&g, &Sentence::parse("a a b"), caps).unwrap() {
            Produces::Yes(trace) => {
                assert_eq!(trace.len(), 3);
                assert_eq!(
                    replay(&g, &trace).unwrap(),
                    Sentence::parse("a a b").to_form()
                );
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            produces(&g, &Sentence::parse("b a"), caps).unwrap(),
            Produces::No
        );
        assert_eq!(
            produces(&g, &Sentence::default(), caps).unwrap(),
            Produces::No
        );
        assert_eq!(
            produces(&g, &Sentence::parse("c"), caps),
            Err(DerivationError::UndeclaredTerminal("c".into()))
        );
    }

    #[test]
    fn produces_unknown_when_capped() {
        let g =
            parse_grammar("start: S\nterminals: a b\nnonterminals: S\nS -> S S\nS ->\nS -> a\n")
                .unwrap();
        let caps = SearchCaps::for_len(1);
        assert_eq!(
            produces(&g, &Sentence::parse("b"), caps).unwrap(),
            Produces::Unknown
        );
    }
}
