//! Grammar value types and structural validation.
//!
//! A [`Grammar`] is a start symbol, two declared alphabets and a finite,
//! duplicate-free, insertion-ordered rule set. Symbols are identified by
//! `(kind, name)`; a grammar can be built in an inconsistent state and
//! [`Grammar::validate`] reports everything that is wrong with it.

use std::fmt;

use indexmap::IndexSet;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Character sequences that may not appear in a symbol name.
pub const RESERVED: [&str; 4] = ["->", "|", "#", ":"];

/// Default name for the fresh start symbol introduced by empty-rule elimination.
pub const DEFAULT_FRESH_START: &str = "S0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Nonterminal,
    Terminal,
}

/// A terminal or nonterminal, identified by kind and name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    kind: SymbolKind,
    name: String,
}

impl Symbol {
    pub fn new(kind: SymbolKind, name: impl Into<String>) -> Self {
        Symbol {
            kind,
            name: name.into(),
        }
    }

    pub fn nt(name: impl Into<String>) -> Self {
        Symbol::new(SymbolKind::Nonterminal, name)
    }

    pub fn t(name: impl Into<String>) -> Self {
        Symbol::new(SymbolKind::Terminal, name)
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_terminal(&self) -> bool {
        self.kind == SymbolKind::Terminal
    }

    pub fn is_nonterminal(&self) -> bool {
        self.kind == SymbolKind::Nonterminal
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name)
    }
}

/// Returns true if `name` is usable as a symbol name: nonempty, free of
/// whitespace and of the reserved punctuation in [`RESERVED`].
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name.chars().any(char::is_whitespace)
        && !RESERVED.iter().any(|r| name.contains(r))
}

/// A production `lhs -> rhs`. An empty `rhs` is an empty rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub lhs: Symbol,
    pub rhs: Vec<Symbol>,
}

impl Rule {
    pub fn new(lhs: impl Into<String>, rhs: Vec<Symbol>) -> Self {
        Rule {
            lhs: Symbol::nt(lhs),
            rhs,
        }
    }

    pub fn is_empty_rule(&self) -> bool {
        self.rhs.is_empty()
    }

    /// A unit rule has exactly one nonterminal on its right-hand side.
    pub fn is_unit(&self) -> bool {
        matches!(self.rhs.as_slice(), [s] if s.is_nonterminal())
    }

    /// The target of a unit rule.
    pub fn unit_target(&self) -> Option<&str> {
        match self.rhs.as_slice() {
            [s] if s.is_nonterminal() => Some(s.name()),
            _ => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for s in &self.rhs {
            write!(f, " {}", s)?;
        }
        Ok(())
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A sequence of terminals and nonterminals.
pub type SententialForm = Vec<Symbol>;

/// A sequence of terminals; the elements of a grammar's language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sentence(Vec<String>);

impl Sentence {
    pub fn new<I, S>(terminals: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Sentence(terminals.into_iter().map(Into::into).collect())
    }

    /// Splits a whitespace-separated word. The token `<eps>` or an empty
    /// string yields the empty sentence.
    pub fn parse(text: &str) -> Self {
        let text = text.trim();
        if text == "<eps>" {
            return Sentence::default();
        }
        Sentence::new(text.split_whitespace())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terminals(&self) -> &[String] {
        &self.0
    }

    /// Injects the sentence into sentential forms.
    pub fn to_form(&self) -> SententialForm {
        self.0.iter().map(Symbol::t).collect()
    }

    /// Extracts a sentence from an all-terminal form.
    pub fn from_form(form: &[Symbol]) -> Option<Self> {
        form.iter()
            .map(|s| s.is_terminal().then(|| s.name().to_owned()))
            .collect::<Option<Vec<_>>>()
            .map(Sentence)
    }

    /// Sort key: length first, then lexicographic by terminal name.
    pub fn cmp_len_lex(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<eps>");
        }
        f.write_str(&self.0.join(" "))
    }
}

impl Serialize for Sentence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A context-free grammar with declared alphabets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    start: String,
    nonterminals: IndexSet<String>,
    terminals: IndexSet<String>,
    rules: IndexSet<Rule>,
}

impl Grammar {
    pub fn new<N, T, S1, S2>(start: impl Into<String>, nonterminals: N, terminals: T) -> Self
    where
        N: IntoIterator<Item = S1>,
        T: IntoIterator<Item = S2>,
        S1: Into<String>,
        S2: Into<String>,
    {
        Grammar {
            start: start.into(),
            nonterminals: nonterminals.into_iter().map(Into::into).collect(),
            terminals: terminals.into_iter().map(Into::into).collect(),
            rules: IndexSet::new(),
        }
    }

    /// Appends a rule unless an identical one is already present.
    /// Returns whether the rule was new.
    pub fn add_rule(&mut self, rule: Rule) -> bool {
        self.rules.insert(rule)
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.add_rule(rule);
        self
    }

    /// Same alphabets and start, no rules.
    pub fn without_rules(&self) -> Self {
        Grammar {
            start: self.start.clone(),
            nonterminals: self.nonterminals.clone(),
            terminals: self.terminals.clone(),
            rules: IndexSet::new(),
        }
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn start_symbol(&self) -> Symbol {
        Symbol::nt(&self.start)
    }

    pub fn nonterminals(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.nonterminals.iter().map(String::as_str)
    }

    pub fn terminals(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.terminals.iter().map(String::as_str)
    }

    pub fn rules(&self) -> impl ExactSizeIterator<Item = &Rule> + '_ {
        self.rules.iter()
    }

    pub fn rule(&self, index: usize) -> Option<&Rule> {
        self.rules.get_index(index)
    }

    pub fn rule_index(&self, rule: &Rule) -> Option<usize> {
        self.rules.get_index_of(rule)
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn contains_rule(&self, rule: &Rule) -> bool {
        self.rules.contains(rule)
    }

    pub fn rules_for<'a>(&'a self, lhs: &'a str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| r.lhs.name() == lhs)
    }

    pub fn has_nonterminal(&self, name: &str) -> bool {
        self.nonterminals.contains(name)
    }

    pub fn has_terminal(&self, name: &str) -> bool {
        self.terminals.contains(name)
    }

    /// Position of a nonterminal in declaration order.
    pub fn nonterminal_index(&self, name: &str) -> Option<usize> {
        self.nonterminals.get_index_of(name)
    }

    pub fn terminal_index(&self, name: &str) -> Option<usize> {
        self.terminals.get_index_of(name)
    }

    /// Whether `symbol` is declared with a matching kind.
    pub fn declares(&self, symbol: &Symbol) -> bool {
        match symbol.kind() {
            SymbolKind::Nonterminal => self.has_nonterminal(symbol.name()),
            SymbolKind::Terminal => self.has_terminal(symbol.name()),
        }
    }

    /// Longest right-hand side over all rules; 0 without rules.
    pub fn max_rhs_len(&self) -> usize {
        self.rules.iter().map(|r| r.rhs.len()).max().unwrap_or(0)
    }

    /// Lists every violated structural invariant. An empty report means
    /// the grammar is valid.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        for name in self.nonterminals.iter().chain(self.terminals.iter()) {
            if !is_valid_name(name) {
                violations.push(Violation::InvalidName { name: name.clone() });
            }
        }
        if !is_valid_name(&self.start) {
            violations.push(Violation::InvalidName {
                name: self.start.clone(),
            });
        }
        for name in &self.nonterminals {
            if self.terminals.contains(name) {
                violations.push(Violation::AlphabetOverlap { name: name.clone() });
            }
        }
        if !self.nonterminals.contains(&self.start) {
            violations.push(Violation::StartNotDeclared {
                start: self.start.clone(),
            });
        }

        for rule in &self.rules {
            if !rule.lhs.is_nonterminal() {
                violations.push(Violation::LhsNotNonterminal { rule: rule.clone() });
            } else if !self.nonterminals.contains(rule.lhs.name()) {
                violations.push(Violation::UndeclaredNonterminal {
                    name: rule.lhs.name().to_owned(),
                    rule: rule.clone(),
                });
            }
            for s in &rule.rhs {
                if !is_valid_name(s.name()) {
                    violations.push(Violation::InvalidName {
                        name: s.name().to_owned(),
                    });
                }
                match s.kind() {
                    SymbolKind::Nonterminal if !self.nonterminals.contains(s.name()) => violations
                        .push(Violation::UndeclaredNonterminal {
                            name: s.name().to_owned(),
                            rule: rule.clone(),
                        }),
                    SymbolKind::Terminal if !self.terminals.contains(s.name()) => {
                        violations.push(Violation::UndeclaredTerminal {
                            name: s.name().to_owned(),
                            rule: rule.clone(),
                        })
                    }
                    _ => {}
                }
            }
        }

        ValidationReport { violations }
    }
}

/// A single violated grammar invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("invalid symbol name {name:?}")]
    InvalidName { name: String },
    #[error("start symbol {start} is not a declared nonterminal")]
    StartNotDeclared { start: String },
    #[error("{name} is declared both as terminal and nonterminal")]
    AlphabetOverlap { name: String },
    #[error("left-hand side of `{rule}` is not a nonterminal")]
    LhsNotNonterminal { rule: Rule },
    #[error("undeclared nonterminal {name} in `{rule}`")]
    UndeclaredNonterminal { name: String, rule: Rule },
    #[error("undeclared terminal {name} in `{rule}`")]
    UndeclaredTerminal { name: String, rule: Rule },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("fresh start name {0:?} collides with an existing symbol")]
    Collision(String),
    #[error("fresh start name {0:?} is not a valid symbol name")]
    InvalidName(String),
}

/// The alphabet of a grammar extended with one fresh nonterminal.
///
/// Original nonterminals keep their names; the fresh start is guaranteed
/// to differ from every declared symbol, so `lift`/`unlift` are inverse
/// on original names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedAlphabet {
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub fresh_start: String,
}

impl LiftedAlphabet {
    pub fn lift<'a>(&self, name: &'a str) -> &'a str {
        name
    }

    /// Maps a lifted nonterminal back to the original one, `None` for the
    /// fresh start.
    pub fn unlift<'a>(&self, name: &'a str) -> Option<&'a str> {
        (name != self.fresh_start).then_some(name)
    }

    /// An empty grammar over the lifted alphabet with the fresh start.
    pub fn empty_grammar(&self) -> Grammar {
        Grammar::new(
            self.fresh_start.clone(),
            self.nonterminals.iter().cloned(),
            self.terminals.iter().cloned(),
        )
    }
}

/// Extends the nonterminal alphabet of `g` with `fresh_start_name`.
pub fn lift_alphabet(g: &Grammar, fresh_start_name: &str) -> Result<LiftedAlphabet, LiftError> {
    if !is_valid_name(fresh_start_name) {
        return Err(LiftError::InvalidName(fresh_start_name.to_owned()));
    }
    if g.has_nonterminal(fresh_start_name) || g.has_terminal(fresh_start_name) {
        return Err(LiftError::Collision(fresh_start_name.to_owned()));
    }
    let mut nonterminals: Vec<String> = g.nonterminals().map(str::to_owned).collect();
    nonterminals.push(fresh_start_name.to_owned());
    Ok(LiftedAlphabet {
        nonterminals,
        terminals: g.terminals().map(str::to_owned).collect(),
        fresh_start: fresh_start_name.to_owned(),
    })
}

/// `base` if unused in `g`, otherwise the first free `base_1`, `base_2`, ...
pub fn fresh_name(g: &Grammar, base: &str) -> String {
    let taken = |n: &str| g.has_nonterminal(n) || g.has_terminal(n);
    if !taken(base) {
        return base.to_owned();
    }
    (1..)
        .map(|i| format!("{}_{}", base, i))
        .find(|n| !taken(n))
        .expect("unbounded suffix search")
}
