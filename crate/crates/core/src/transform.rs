//! Grammar-to-grammar simplification passes.
//!
//! Each pass is a pure function returning the transformed grammar and a
//! [`PassReport`] listing the rules it added and removed. Alphabet
//! declarations are kept as they are; only rules change, except that
//! empty-rule elimination adds a fresh start symbol.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{accessible_set, nullable_set, unit_pairs, useful_set};
use crate::grammar::{
    fresh_name, lift_alphabet, Grammar, Rule, Symbol, ValidationReport, DEFAULT_FRESH_START,
};

/// Largest number of nullable occurrences in one right-hand side that
/// empty-rule elimination will expand (2^k variants per rule).
pub const MAX_NULLABLE_OCCURRENCES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pass {
    Empty,
    Unit,
    Useless,
    Inaccessible,
}

impl Pass {
    /// The order under which every pass preserves what the earlier ones
    /// established.
    pub const SAFE_ORDER: [Pass; 4] = [Pass::Empty, Pass::Unit, Pass::Useless, Pass::Inaccessible];

    pub fn name(self) -> &'static str {
        match self {
            Pass::Empty => "empty",
            Pass::Unit => "unit",
            Pass::Useless => "useless",
            Pass::Inaccessible => "inaccessible",
        }
    }
}

impl fmt::Display for Pass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pass::SAFE_ORDER
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                format!("unknown pass {s:?} (expected empty, unit, useless or inaccessible)")
            })
    }
}

/// Whether `passes` respects the relative order of [`Pass::SAFE_ORDER`].
pub fn is_safe_order(passes: &[Pass]) -> bool {
    passes.windows(2).all(|w| w[0] < w[1])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PassReport {
    pub pass: Pass,
    pub rules_in: usize,
    pub rules_out: usize,
    pub added: Vec<Rule>,
    pub removed: Vec<Rule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fresh_start: Option<String>,
}

impl PassReport {
    fn diff(pass: Pass, before: &Grammar, after: &Grammar) -> Self {
        PassReport {
            pass,
            rules_in: before.rule_count(),
            rules_out: after.rule_count(),
            added: after
                .rules()
                .filter(|r| !before.contains_rule(r))
                .cloned()
                .collect(),
            removed: before
                .rules()
                .filter(|r| !after.contains_rule(r))
                .cloned()
                .collect(),
            fresh_start: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("language is empty; useless-symbol elimination undefined")]
    EmptyLanguage,
    #[error("`{rule}` has {count} nullable occurrences (limit {MAX_NULLABLE_OCCURRENCES})")]
    TooManyNullable { rule: Rule, count: usize },
    #[error("invalid grammar: {0}")]
    Invalid(ValidationReport),
}

type PassResult = Result<(Grammar, PassReport), TransformError>;

fn ensure_valid(g: &Grammar) -> Result<(), TransformError> {
    let report = g.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(TransformError::Invalid(report))
    }
}

/// Removes empty rules. The output has a fresh start symbol `S0` (suffixed
/// until unused) with a rule to the old start, plus an empty rule for the
/// fresh start exactly when the old start is nullable. Every rule is
/// kept together with each variant obtained by deleting a nonempty subset
/// of its nullable nonterminal occurrences, as long as something remains.
pub fn eliminate_empty(g: &Grammar) -> PassResult {
    ensure_valid(g)?;
    let nullable = nullable_set(g);
    let fresh = fresh_name(g, DEFAULT_FRESH_START);
    let lifted = lift_alphabet(g, &fresh).expect("fresh_name avoids collisions");

    let mut out = lifted.empty_grammar();
    out.add_rule(Rule::new(fresh.clone(), vec![g.start_symbol()]));
    if nullable.contains(g.start()) {
        out.add_rule(Rule::new(fresh.clone(), vec![]));
    }

    for rule in g.rules() {
        let positions: Vec<usize> = rule
            .rhs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_nonterminal() && nullable.contains(s.name()))
            .map(|(i, _)| i)
            .collect();
        if positions.len() > MAX_NULLABLE_OCCURRENCES {
            return Err(TransformError::TooManyNullable {
                rule: rule.clone(),
                count: positions.len(),
            });
        }
        // mask 0 is the rule itself; bit j deletes occurrence positions[j]
        for mask in 0u32..(1 << positions.len()) {
            let rhs: Vec<Symbol> = rule
                .rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    positions
                        .iter()
                        .position(|p| p == i)
                        .is_none_or(|j| mask & (1 << j) == 0)
                })
                .map(|(_, s)| s.clone())
                .collect();
            if !rhs.is_empty() {
                out.add_rule(Rule {
                    lhs: rule.lhs.clone(),
                    rhs,
                });
            }
        }
    }

    let mut report = PassReport::diff(Pass::Empty, g, &out);
    report.fresh_start = Some(fresh);
    Ok((out, report))
}

/// Replaces unit rules: keeps every non-unit rule and, for each unit pair
/// `(a, b)`, copies every non-unit rule of `b` onto `a`.
pub fn eliminate_unit(g: &Grammar) -> PassResult {
    ensure_valid(g)?;
    let pairs = unit_pairs(g);
    let mut out = g.without_rules();
    for rule in g.rules().filter(|r| !r.is_unit()) {
        out.add_rule(rule.clone());
    }
    for a in g.nonterminals() {
        for b in pairs.targets(a) {
            for rule in g.rules_for(b).filter(|r| !r.is_unit()) {
                out.add_rule(Rule::new(a, rule.rhs.clone()));
            }
        }
    }
    let report = PassReport::diff(Pass::Unit, g, &out);
    Ok((out, report))
}

/// Keeps the rules whose symbols are all useful. Requires a nonempty
/// language.
pub fn eliminate_useless(g: &Grammar) -> PassResult {
    ensure_valid(g)?;
    let useful = useful_set(g);
    if !useful.contains(&g.start_symbol()) {
        return Err(TransformError::EmptyLanguage);
    }
    let mut out = g.without_rules();
    for rule in g.rules() {
        if useful.contains(&rule.lhs) && rule.rhs.iter().all(|s| useful.contains(s)) {
            out.add_rule(rule.clone());
        }
    }
    let report = PassReport::diff(Pass::Useless, g, &out);
    Ok((out, report))
}

/// Keeps the rules whose left-hand side is accessible from the start.
pub fn eliminate_inaccessible(g: &Grammar) -> PassResult {
    ensure_valid(g)?;
    let accessible = accessible_set(g);
    let mut out = g.without_rules();
    for rule in g.rules().filter(|r| accessible.contains(&r.lhs)) {
        out.add_rule(rule.clone());
    }
    let report = PassReport::diff(Pass::Inaccessible, g, &out);
    Ok((out, report))
}

pub fn apply_pass(g: &Grammar, pass: Pass) -> PassResult {
    match pass {
        Pass::Empty => eliminate_empty(g),
        Pass::Unit => eliminate_unit(g),
        Pass::Useless => eliminate_useless(g),
        Pass::Inaccessible => eliminate_inaccessible(g),
    }
}

/// Applies `passes` in the given order. If any of them is useless-symbol
/// elimination, a nonempty language is required before anything runs.
pub fn run_passes(
    g: &Grammar,
    passes: &[Pass],
) -> Result<(Grammar, Vec<PassReport>), TransformError> {
    ensure_valid(g)?;
    if passes.contains(&Pass::Useless) && !useful_set(g).contains(&g.start_symbol()) {
        return Err(TransformError::EmptyLanguage);
    }
    let mut current = g.clone();
    let mut reports = Vec::with_capacity(passes.len());
    for &pass in passes {
        let (next, report) = apply_pass(&current, pass)?;
        current = next;
        reports.push(report);
    }
    Ok((current, reports))
}

/// Empty rules, then unit rules, then useless and inaccessible symbols.
pub fn simplify_pipeline(g: &Grammar) -> Result<(Grammar, Vec<PassReport>), TransformError> {
    run_passes(g, &Pass::SAFE_ORDER)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::analysis::predicates;
    use crate::io::parse_grammar;

    fn g(text: &str) -> Grammar {
        parse_grammar(text).unwrap()
    }

    fn a_star_b() -> Grammar {
        g("start: S'\nterminals: a b\nnonterminals: S' A B\nS' -> a S'\nS' -> b\n")
    }

    fn rule_set(g: &Grammar) -> BTreeSet<String> {
        g.rules().map(|r| r.to_string()).collect()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn empty_expansion_of_six_symbol_rule() {
        let src = g("start: S\nterminals: a b c\nnonterminals: S X A B C\n\
                     S -> X\nX -> a A b B c C\nA ->\nB ->\nC ->\n");
        let (out, _) = eliminate_empty(&src).unwrap();
        let x_rules: BTreeSet<String> = out.rules_for("X").map(|r| r.to_string()).collect();
        assert_eq!(
            x_rules,
            set(&[
                "X -> a A b B c C",
                "X -> a A b B c",
                "X -> a b B c C",
                "X -> a A b c C",
                "X -> a A b c",
                "X -> a b B c",
                "X -> a b c C",
                "X -> a b c",
            ])
        );
    }

    #[test]
    fn empty_on_a_star_b() {
        let (out, report) = eliminate_empty(&a_star_b()).unwrap();
        assert_eq!(out.start(), "S0");
        assert_eq!(rule_set(&out), set(&["S' -> a S'", "S' -> b", "S0 -> S'"]));
        assert_eq!(report.fresh_start.as_deref(), Some("S0"));
        assert_eq!(report.added.len(), 1);
        assert!(report.removed.is_empty());
    }

    #[test]
    fn empty_on_epsilon_grammar() {
        let (out, report) =
            eliminate_empty(&g("start: S\nterminals:\nnonterminals: S\nS ->\n")).unwrap();
        assert_eq!(rule_set(&out), set(&["S0 -> S", "S0 ->"]));
        assert_eq!(report.removed.len(), 1);
        let p = predicates(&out);
        assert!(p.has_one_empty_rule && p.start_symbol_not_in_rhs);
    }

    #[test]
    fn empty_fresh_start_avoids_existing_names() {
        let (out, _) =
            eliminate_empty(&g("start: S0\nterminals: a\nnonterminals: S0\nS0 -> a\n")).unwrap();
        assert_eq!(out.start(), "S0_1");
        let (again, _) = eliminate_empty(&out).unwrap();
        assert_eq!(again.start(), "S0_2");
    }

    #[test]
    fn empty_rejects_huge_nullable_rules() {
        let nts: Vec<String> = (0..17).map(|i| format!("N{i}")).collect();
        let mut text = format!(
            "start: S\nterminals:\nnonterminals: S {}\nS -> {}\n",
            nts.join(" "),
            nts.join(" ")
        );
        for n in &nts {
            text.push_str(&format!("{n} ->\n"));
        }
        let err = eliminate_empty(&g(&text)).unwrap_err();
        assert!(matches!(
            err,
            TransformError::TooManyNullable { count: 17, .. }
        ));
    }

    #[test]
    fn unit_examples() {
        let (out, _) = eliminate_unit(&g(
            "start: S\nterminals: b\nnonterminals: S A\nS -> A\nA -> b\n",
        ))
        .unwrap();
        assert_eq!(rule_set(&out), set(&["A -> b", "S -> b"]));

        let src = a_star_b();
        let (out, report) = eliminate_unit(&src).unwrap();
        assert_eq!(out, src);
        assert!(report.added.is_empty() && report.removed.is_empty());

        let (out, _) = eliminate_unit(&g(
            "start: A\nterminals: a\nnonterminals: A B\nA -> B\nB -> A\nA -> a\n",
        ))
        .unwrap();
        assert_eq!(rule_set(&out), set(&["A -> a", "B -> a"]));
    }

    #[test]
    fn unit_keeps_empty_rules() {
        let (out, _) = eliminate_unit(&g(
            "start: S\nterminals: a\nnonterminals: S A\nS -> A\nA ->\nA -> a\n",
        ))
        .unwrap();
        assert_eq!(rule_set(&out), set(&["A ->", "A -> a", "S ->", "S -> a"]));
    }

    #[test]
    fn useless_examples() {
        let (out, _) = eliminate_useless(&g(
            "start: S\nterminals: a\nnonterminals: S A B\nS -> A B\nS -> a\nA -> a\n",
        ))
        .unwrap();
        assert_eq!(rule_set(&out), set(&["S -> a", "A -> a"]));

        let src = a_star_b();
        assert_eq!(eliminate_useless(&src).unwrap().0, src);

        let err =
            eliminate_useless(&g("start: S\nterminals:\nnonterminals: S\nS -> S S\n")).unwrap_err();
        assert_eq!(err, TransformError::EmptyLanguage);
        assert_eq!(
            err.to_string(),
            "language is empty; useless-symbol elimination undefined"
        );
    }

    #[test]
    fn inaccessible_examples() {
        let src = a_star_b().with_rule(Rule::new("A", vec![Symbol::t("a")]));
        let (out, report) = eliminate_inaccessible(&src).unwrap();
        assert_eq!(rule_set(&out), set(&["S' -> a S'", "S' -> b"]));
        assert_eq!(report.removed, vec![Rule::new("A", vec![Symbol::t("a")])]);

        let src = a_star_b();
        assert_eq!(eliminate_inaccessible(&src).unwrap().0, src);

        let (out, _) = eliminate_inaccessible(&g(
            "start: S\nterminals: a\nnonterminals: S A B\nA -> a\nB -> A\n",
        ))
        .unwrap();
        assert_eq!(out.rule_count(), 0);
    }

    #[test]
    fn pipeline_on_a_star_b() {
        let (out, reports) = simplify_pipeline(&a_star_b()).unwrap();
        assert_eq!(reports.len(), 4);
        assert_eq!(
            rule_set(&out),
            set(&["S0 -> a S'", "S0 -> b", "S' -> a S'", "S' -> b"])
        );
        assert!(predicates(&out).is_simplified(false));
    }

    #[test]
    fn pipeline_on_epsilon_grammar() {
        let (out, _) =
            simplify_pipeline(&g("start: S\nterminals:\nnonterminals: S\nS ->\n")).unwrap();
        assert_eq!(rule_set(&out), set(&["S0 ->"]));
        assert!(predicates(&out).has_one_empty_rule);
    }

    #[test]
    fn pipeline_rejects_empty_language_before_running() {
        let err =
            simplify_pipeline(&g("start: S\nterminals:\nnonterminals: S\nS -> S S\n")).unwrap_err();
        assert_eq!(err, TransformError::EmptyLanguage);
    }

    #[test]
    fn inaccessible_first_can_strand_rules() {
        let src = g("start: S\nterminals: a\nnonterminals: S A B\nS -> A B\nS -> a\nA -> a\n");
        let (out, _) = run_passes(&src, &[Pass::Inaccessible, Pass::Useless]).unwrap();
        assert!(!predicates(&out).has_no_inaccessible_symbols);
        let (out, _) = run_passes(&src, &[Pass::Useless, Pass::Inaccessible]).unwrap();
        assert!(predicates(&out).has_no_inaccessible_symbols);
    }

    #[test]
    fn safe_order_detection() {
        assert!(is_safe_order(&Pass::SAFE_ORDER));
        assert!(is_safe_order(&[Pass::Unit, Pass::Inaccessible]));
        assert!(!is_safe_order(&[Pass::Inaccessible, Pass::Useless]));
        assert!(!is_safe_order(&[Pass::Unit, Pass::Unit]));
        assert_eq!("useless".parse::<Pass>(), Ok(Pass::Useless));
        assert!("cnf".parse::<Pass>().is_err());
    }

    #[test]
    fn report_counts_balance() {
        let src = g("start: S\nterminals: a\nnonterminals: S A\nS -> A a A\nA ->\nA -> a\n");
        let (_, r) = eliminate_empty(&src).unwrap();
        assert_eq!(r.rules_out, r.rules_in - r.removed.len() + r.added.len());
    }
}
