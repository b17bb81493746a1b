//! Symbol analyses as terminating fixpoints, and the grammar predicates
//! built on them.
//!
//! Every fixpoint sweeps the rules in insertion order until a sweep adds
//! nothing. `rounds` counts the sweeps that added at least one element,
//! so it is bounded by the size of the result.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};

use crate::derivation::{min_yield, MinYield};
use crate::grammar::{Grammar, Symbol};

fn names_sorted<S: Serializer>(members: &BTreeSet<Symbol>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(sorted_names(members))
}

fn sorted_names(members: &BTreeSet<Symbol>) -> Vec<&str> {
    let mut names: Vec<&str> = members.iter().map(Symbol::name).collect();
    names.sort_unstable();
    names
}

/// Nonterminals that derive the empty string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NullableSet {
    #[serde(serialize_with = "names_sorted")]
    pub members: BTreeSet<Symbol>,
    pub rounds: usize,
}

impl NullableSet {
    pub fn contains(&self, nonterminal: &str) -> bool {
        self.members.contains(&Symbol::nt(nonterminal))
    }

    pub fn names(&self) -> Vec<&str> {
        sorted_names(&self.members)
    }
}

/// Pairs `(a, b)` such that `b` is reachable from `a` through one or more
/// unit rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitPairs {
    pub pairs: BTreeSet<(String, String)>,
    pub rounds: usize,
}

impl UnitPairs {
    pub fn contains(&self, a: &str, b: &str) -> bool {
        self.pairs.contains(&(a.to_owned(), b.to_owned()))
    }

    pub fn targets<'a>(&'a self, a: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.pairs
            .iter()
            .filter(move |(x, _)| x == a)
            .map(|(_, b)| b.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Terminals, plus nonterminals from which some terminal string derives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UsefulSet {
    #[serde(serialize_with = "names_sorted")]
    pub members: BTreeSet<Symbol>,
    pub rounds: usize,
}

impl UsefulSet {
    pub fn contains(&self, s: &Symbol) -> bool {
        self.members.contains(s)
    }

    pub fn names(&self) -> Vec<&str> {
        sorted_names(&self.members)
    }
}

/// Symbols occurring in some sentential form derivable from the start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccessibleSet {
    #[serde(serialize_with = "names_sorted")]
    pub members: BTreeSet<Symbol>,
    pub rounds: usize,
}

impl AccessibleSet {
    pub fn contains(&self, s: &Symbol) -> bool {
        self.members.contains(s)
    }

    pub fn names(&self) -> Vec<&str> {
        sorted_names(&self.members)
    }
}

pub fn nullable_set(g: &Grammar) -> NullableSet {
    let mut members = BTreeSet::new();
    let mut rounds = 0;
    loop {
        let mut changed = false;
        for rule in g.rules() {
            if members.contains(&rule.lhs) {
                continue;
            }
            if rule
                .rhs
                .iter()
                .all(|s| s.is_nonterminal() && members.contains(s))
            {
                members.insert(rule.lhs.clone());
                changed = true;
            }
        }
        if !changed {
            return NullableSet { members, rounds };
        }
        rounds += 1;
    }
}

pub fn unit_pairs(g: &Grammar) -> UnitPairs {
    let mut pairs: BTreeSet<(String, String)> = g
        .rules()
        .filter_map(|r| {
            r.unit_target()
                .map(|b| (r.lhs.name().to_owned(), b.to_owned()))
        })
        .collect();
    let mut rounds = 0;
    loop {
        let mut found = Vec::new();
        for (a, b) in &pairs {
            let from = (b.clone(), String::new());
            for (_, c) in pairs.range(from..).take_while(|(x, _)| x == b) {
                let pair = (a.clone(), c.clone());
                if !pairs.contains(&pair) {
                    found.push(pair);
                }
            }
        }
        if found.is_empty() {
            return UnitPairs { pairs, rounds };
        }
        pairs.extend(found);
        rounds += 1;
    }
}

pub fn useful_set(g: &Grammar) -> UsefulSet {
    let mut members: BTreeSet<Symbol> = g.terminals().map(Symbol::t).collect();
    let mut rounds = 0;
    loop {
        let mut changed = false;
        for rule in g.rules() {
            if members.contains(&rule.lhs) {
                continue;
            }
            if rule
                .rhs
                .iter()
                .all(|s| s.is_terminal() || members.contains(s))
            {
                members.insert(rule.lhs.clone());
                changed = true;
            }
        }
        if !changed {
            return UsefulSet { members, rounds };
        }
        rounds += 1;
    }
}

pub fn accessible_set(g: &Grammar) -> AccessibleSet {
    let mut members = BTreeSet::from([g.start_symbol()]);
    let mut rounds = 0;
    loop {
        let mut changed = false;
        for rule in g.rules() {
            if !members.contains(&rule.lhs) {
                continue;
            }
            for s in &rule.rhs {
                changed |= members.insert(s.clone());
            }
        }
        if !changed {
            return AccessibleSet { members, rounds };
        }
        rounds += 1;
    }
}

/// Decidable structural properties of a grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    pub has_no_empty_rules: bool,
    pub has_one_empty_rule: bool,
    pub has_no_unit_rules: bool,
    pub has_no_useless_symbols: bool,
    pub has_no_inaccessible_symbols: bool,
    pub start_symbol_not_in_rhs: bool,
    pub non_empty: bool,
    pub generates_empty: bool,
}

impl PredicateReport {
    /// Named fields in declaration order.
    pub fn entries(&self) -> [(&'static str, bool); 8] {
        [
            ("has_no_empty_rules", self.has_no_empty_rules),
            ("has_one_empty_rule", self.has_one_empty_rule),
            ("has_no_unit_rules", self.has_no_unit_rules),
            ("has_no_useless_symbols", self.has_no_useless_symbols),
            (
                "has_no_inaccessible_symbols",
                self.has_no_inaccessible_symbols,
            ),
            ("start_symbol_not_in_rhs", self.start_symbol_not_in_rhs),
            ("non_empty", self.non_empty),
            ("generates_empty", self.generates_empty),
        ]
    }

    /// The six structural conjuncts a fully simplified grammar satisfies,
    /// given whether the original language contained the empty string.
    pub fn is_simplified(&self, source_generates_empty: bool) -> bool {
        let empty_ok = if source_generates_empty {
            self.has_one_empty_rule
        } else {
            self.has_no_empty_rules
        };
        empty_ok
            && self.has_no_inaccessible_symbols
            && self.has_no_useless_symbols
            && self.has_no_unit_rules
            && self.start_symbol_not_in_rhs
    }
}

/// Symbols mentioned by some rule, plus the start symbol.
fn occurring_symbols(g: &Grammar) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::from([g.start_symbol()]);
    for rule in g.rules() {
        out.insert(rule.lhs.clone());
        out.extend(rule.rhs.iter().cloned());
    }
    out
}

pub fn predicates(g: &Grammar) -> PredicateReport {
    let useful = useful_set(g);
    let accessible = accessible_set(g);
    let nullable = nullable_set(g);
    let start = g.start_symbol();
    let occurring = occurring_symbols(g);

    let empty_lhs: Vec<&Symbol> = g
        .rules()
        .filter(|r| r.is_empty_rule())
        .map(|r| &r.lhs)
        .collect();

    PredicateReport {
        has_no_empty_rules: empty_lhs.is_empty(),
        has_one_empty_rule: empty_lhs.len() == 1 && *empty_lhs[0] == start,
        has_no_unit_rules: !g.rules().any(|r| r.is_unit()),
        has_no_useless_symbols: occurring.iter().all(|s| useful.contains(s)),
        has_no_inaccessible_symbols: occurring.iter().all(|s| accessible.contains(s)),
        start_symbol_not_in_rhs: !g.rules().any(|r| r.rhs.contains(&start)),
        non_empty: useful.contains(&start),
        generates_empty: nullable.contains(g.start()),
    }
}

/// All analyses of one grammar, as reported by the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub nullable: NullableSet,
    pub unit_pairs: UnitPairs,
    pub useful: UsefulSet,
    pub accessible: AccessibleSet,
    pub min_yield: BTreeMap<String, MinYield>,
    pub predicates: PredicateReport,
}

pub fn analyze(g: &Grammar) -> Analysis {
    Analysis {
        nullable: nullable_set(g),
        unit_pairs: unit_pairs(g),
        useful: useful_set(g),
        accessible: accessible_set(g),
        min_yield: min_yield(g),
        predicates: predicates(g),
    }
}
