//! Line-oriented grammar files and report documents.
//!
//! ```text
//! # comment lines start with '#'
//! start: S
//! terminals: a b
//! nonterminals: S A B
//! S -> a S
//! S -> b
//! A ->
//! ```
//!
//! The three header lines come first, in any order. Each rule line is a
//! nonterminal, `->`, and whitespace-separated symbols; `|` separates
//! alternatives on input. A right-hand side without tokens is the empty
//! rule. Serialization always writes one alternative per line.

use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{Analysis, PredicateReport};
use crate::grammar::{is_valid_name, Grammar, Rule, Symbol, ValidationReport};
use crate::transform::PassReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("undeclared symbol {0}")]
    UndeclaredSymbol(String),
    #[error("duplicate rule `{0}`")]
    DuplicateRule(Rule),
    #[error("missing `{0}:` header")]
    MissingHeader(&'static str),
    #[error("{0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.kind
        )
    }
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    err(line, column, ParseErrorKind::Syntax(msg.into()))
}

/// Whitespace-separated tokens with 1-based columns; `|` is always a
/// token of its own.
fn tokens(text: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() || c == '|' {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
            if c == '|' {
                out.push((i, &text[i..i + 1]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out.into_iter()
        .map(|(i, t)| (offset + text[..i].chars().count() + 1, t))
        .collect()
}

#[derive(Default)]
struct Header {
    start: Option<(usize, usize, String)>,
    terminals: Option<(usize, Vec<(usize, String)>)>,
    nonterminals: Option<(usize, Vec<(usize, String)>)>,
}

/// Parses a grammar file. Rule order follows the file.
pub fn parse_grammar(text: &str) -> Result<Grammar, ParseError> {
    let mut header = Header::default();
    let mut grammar: Option<Grammar> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks = tokens(raw, 0);

        if toks.iter().any(|(_, t)| *t == "->") {
            let g = match grammar.as_mut() {
                Some(g) => g,
                None => grammar.insert(finish_header(&header, line)?),
            };
            parse_rule_line(g, &toks, line)?;
            continue;
        }

        let Some(colon) = raw.find(':') else {
            return Err(syntax(line, toks[0].0, "expected a header or a rule"));
        };
        let key = raw[..colon].trim();
        let value_col = raw[..colon + 1].chars().count();
        let values: Vec<(usize, String)> = tokens(&raw[colon + 1..], value_col)
            .into_iter()
            .map(|(c, t)| (c, t.to_owned()))
            .collect();
        if grammar.is_some() {
            return Err(syntax(
                line,
                1,
                format!("header `{key}:` after the first rule"),
            ));
        }
        if let Some((c, bad)) = values.iter().find(|(_, v)| !is_valid_name(v)) {
            return Err(syntax(line, *c, format!("invalid symbol name {bad:?}")));
        }
        let key_col = toks[0].0;
        match key {
            "start" => {
                if header.start.is_some() {
                    return Err(syntax(line, key_col, "duplicate `start:` header"));
                }
                match values.as_slice() {
                    [(c, name)] => header.start = Some((line, *c, name.clone())),
                    _ => return Err(syntax(line, key_col, "`start:` takes exactly one symbol")),
                }
            }
            "terminals" | "nonterminals" => {
                let slot = if key == "terminals" {
                    &mut header.terminals
                } else {
                    &mut header.nonterminals
                };
                if slot.is_some() {
                    return Err(syntax(line, key_col, format!("duplicate `{key}:` header")));
                }
                for (i, (c, v)) in values.iter().enumerate() {
                    if values[..i].iter().any(|(_, w)| w == v) {
                        return Err(syntax(line, *c, format!("{v} declared twice")));
                    }
                }
                *slot = Some((line, values));
            }
            other => {
                return Err(syntax(line, key_col, format!("unknown header `{other}:`")));
            }
        }
    }

    let g = match grammar {
        Some(g) => g,
        None => finish_header(&header, last_line + 1)?,
    };
    let report = g.validate();
    if !report.is_valid() {
        return Err(err(0, 0, ParseErrorKind::Invalid(report)));
    }
    Ok(g)
}

fn finish_header(h: &Header, line: usize) -> Result<Grammar, ParseError> {
    let (start_line, start_col, start) =
        h.start
            .clone()
            .ok_or(err(line, 1, ParseErrorKind::MissingHeader("start")))?;
    let (_, terminals) =
        h.terminals
            .clone()
            .ok_or(err(line, 1, ParseErrorKind::MissingHeader("terminals")))?;
    let (nt_line, nonterminals) = h.nonterminals.clone().ok_or(err(
        line,
        1,
        ParseErrorKind::MissingHeader("nonterminals"),
    ))?;

    if let Some((c, name)) = nonterminals
        .iter()
        .find(|(_, n)| terminals.iter().any(|(_, t)| t == n))
    {
        return Err(syntax(
            nt_line,
            *c,
            format!("{name} is declared both as terminal and nonterminal"),
        ));
    }
    if !nonterminals.iter().any(|(_, n)| *n == start) {
        return Err(syntax(
            start_line,
            start_col,
            format!("start symbol {start} is not a declared nonterminal"),
        ));
    }
    Ok(Grammar::new(
        start,
        nonterminals.into_iter().map(|(_, n)| n),
        terminals.into_iter().map(|(_, t)| t),
    ))
}

fn parse_rule_line(g: &mut Grammar, toks: &[(usize, &str)], line: usize) -> Result<(), ParseError> {
    let [(lhs_col, lhs), (arrow_col, arrow), rest @ ..] = toks else {
        return Err(syntax(line, toks[0].0, "expected `LHS -> symbols`"));
    };
    if *arrow != "->" {
        return Err(syntax(
            line,
            *arrow_col,
            "expected `->` after the left-hand side",
        ));
    }
    if !g.has_nonterminal(lhs) {
        let kind = if g.has_terminal(lhs) {
            ParseErrorKind::Syntax(format!("terminal {lhs} on the left-hand side"))
        } else {
            ParseErrorKind::UndeclaredSymbol(lhs.to_string())
        };
        return Err(err(line, *lhs_col, kind));
    }

    for alt in rest.split(|(_, t)| *t == "|") {
        let mut rhs = Vec::with_capacity(alt.len());
        for &(col, tok) in alt {
            let sym = if g.has_nonterminal(tok) {
                Symbol::nt(tok)
            } else if g.has_terminal(tok) {
                Symbol::t(tok)
            } else if tok == "->" {
                return Err(syntax(line, col, "unexpected `->`"));
            } else {
                return Err(err(
                    line,
                    col,
                    ParseErrorKind::UndeclaredSymbol(tok.to_string()),
                ));
            };
            rhs.push(sym);
        }
        let rule = Rule::new(*lhs, rhs);
        if !g.add_rule(rule.clone()) {
            let col = alt.first().map_or(*arrow_col, |(c, _)| *c);
            return Err(err(line, col, ParseErrorKind::DuplicateRule(rule)));
        }
    }
    Ok(())
}

/// Writes the canonical form: three header lines, then one rule per line
/// in stored order.
pub fn serialize_grammar(g: &Grammar) -> String {
    let mut out = String::new();
    let list = |items: Vec<&str>| -> String { items.iter().map(|s| format!(" {s}")).collect() };
    writeln!(out, "start: {}", g.start()).unwrap();
    writeln!(out, "terminals:{}", list(g.terminals().collect())).unwrap();
    writeln!(out, "nonterminals:{}", list(g.nonterminals().collect())).unwrap();
    for rule in g.rules() {
        writeln!(out, "{rule}").unwrap();
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize infallibly")
}

/// Report written by a simplification run.
#[derive(Debug, Clone, Serialize)]
pub struct SimplifyReport<'a> {
    pub passes: &'a [PassReport],
    pub predicates: PredicateReport,
    pub source_generates_empty: bool,
    pub safe_order: bool,
}

/// Plain `key: value` rendering of an analysis.
pub fn analysis_text(a: &Analysis) -> String {
    let mut out = String::new();
    let join = |v: Vec<&str>| v.join(" ");
    writeln!(out, "nullable: {}", join(a.nullable.names())).unwrap();
    let pairs: Vec<String> = a
        .unit_pairs
        .pairs
        .iter()
        .map(|(x, y)| format!("({x},{y})"))
        .collect();
    writeln!(out, "unit_pairs: {}", pairs.join(" ")).unwrap();
    writeln!(out, "useful: {}", join(a.useful.names())).unwrap();
    writeln!(out, "accessible: {}", join(a.accessible.names())).unwrap();
    let yields: Vec<String> = a
        .min_yield
        .iter()
        .map(|(n, y)| format!("{n}={y}"))
        .collect();
    writeln!(out, "min_yield: {}", yields.join(" ")).unwrap();
    for (name, value) in a.predicates.entries() {
        writeln!(out, "{name}: {value}").unwrap();
    }
    // trailing spaces from empty lists are noise in golden files
    out.lines().map(|l| format!("{}\n", l.trim_end())).collect()
}
