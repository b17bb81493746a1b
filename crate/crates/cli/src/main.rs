use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cfgsimp::derivation::{enumerate_language, FormDisplay, SearchCaps};
use cfgsimp::equivalence::{bounded_equiv, EquivStatus, EquivVerdict, Route, Side};
use cfgsimp::io::{analysis_text, to_json, SimplifyReport};
use cfgsimp::randgen::{random_grammar, random_nonempty_grammar, GenConfig, GenError};
use cfgsimp::transform::{is_safe_order, run_passes, Pass, TransformError};
use cfgsimp::window::LanguageWindow;
use cfgsimp::{analyze, parse_grammar, predicates, serialize_grammar, Grammar};

const OK: u8 = 0;
const FALSE: u8 = 1;
const INPUT_ERROR: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cfgsimp",
    version,
    about = "Simplify and analyze context-free grammars"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run simplification passes and write the resulting grammar.
    Simplify {
        /// Grammar file, or `-` for standard input.
        input: PathBuf,
        /// Comma-separated passes from empty, unit, useless, inaccessible.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "empty,unit,useless,inaccessible"
        )]
        passes: Vec<Pass>,
        /// Write the grammar here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a JSON report of every pass and the final predicates.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the fixpoint analyses and structural predicates.
    Analyze {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print every word up to a length bound, one per line.
    Enumerate {
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[command(flatten)]
        caps: CapFlags,
        /// Compute the window as an exact fixpoint instead of searching.
        #[arg(long)]
        exact: bool,
    },
    /// Compare two grammars on all words up to a length bound.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[command(flatten)]
        caps: CapFlags,
        #[arg(long)]
        json: bool,
    },
    /// Generate a random grammar.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_nonterminals: usize,
        #[arg(long, default_value_t = 4)]
        max_terminals: usize,
        #[arg(long, default_value_t = 12)]
        max_rules: usize,
        #[arg(long, default_value_t = 4)]
        max_rhs_len: usize,
        #[arg(long, default_value_t = 0.15)]
        empty_rule_bias: f64,
        #[arg(long, default_value_t = 0.15)]
        unit_rule_bias: f64,
        /// Resample until the language is nonempty.
        #[arg(long)]
        require_nonempty: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Search limits; unset values follow the defaults for the length bound.
#[derive(Args)]
struct CapFlags {
    #[arg(long)]
    max_form_len: Option<usize>,
    #[arg(long)]
    max_visited: Option<usize>,
    #[arg(long)]
    max_depth: Option<usize>,
}

impl CapFlags {
    fn resolve(&self, max_len: usize) -> SearchCaps {
        let d = SearchCaps::for_len(max_len);
        SearchCaps {
            max_form_len: self.max_form_len.unwrap_or(d.max_form_len),
            max_visited: self.max_visited.unwrap_or(d.max_visited),
            max_depth: self.max_depth.unwrap_or(d.max_depth),
        }
    }
}

/// A failed command: exit code plus message for the error stream.
struct Failure(u8, String);

type CmdResult = Result<u8, Failure>;

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(INPUT_ERROR, msg.into())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Grammar, Failure> {
    let text = read_input(path)?;
    let g = parse_grammar(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let report = g.validate();
    if !report.is_valid() {
        return Err(input_error(format!("{}: {report}", path.display())));
    }
    Ok(g)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input_error(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| input_error(format!("stdout: {e}"))),
    }
}

fn simplify(input: &Path, passes: &[Pass], out: Option<&Path>, report: Option<&Path>) -> CmdResult {
    let g = load(input)?;
    let safe = is_safe_order(passes);
    if !safe {
        let order: Vec<&str> = Pass::SAFE_ORDER.iter().map(|p| p.name()).collect();
        eprintln!(
            "warning: pass order differs from {}; earlier guarantees may not survive",
            order.join(",")
        );
    }
    let (simple, reports) = run_passes(&g, passes).map_err(|e| match e {
        TransformError::EmptyLanguage => Failure(FALSE, e.to_string()),
        other => input_error(other.to_string()),
    })?;
    emit(out, &serialize_grammar(&simple))?;

    let doc = SimplifyReport {
        passes: &reports,
        predicates: predicates(&simple),
        source_generates_empty: predicates(&g).generates_empty,
        safe_order: safe,
    };
    match report {
        Some(p) => emit(Some(p), &(to_json(&doc) + "\n"))?,
        None => {
            for r in &reports {
                eprintln!(
                    "{}: {} -> {} rules (+{} -{})",
                    r.pass,
                    r.rules_in,
                    r.rules_out,
                    r.added.len(),
                    r.removed.len()
                );
            }
        }
    }
    Ok(OK)
}

fn analyze_cmd(input: &Path, json: bool) -> CmdResult {
    let a = analyze(&load(input)?);
    let text = if json {
        to_json(&a) + "\n"
    } else {
        analysis_text(&a)
    };
    emit(None, &text)?;
    Ok(OK)
}

fn enumerate_cmd(input: &Path, max_len: usize, caps: SearchCaps, exact: bool) -> CmdResult {
    let g = load(input)?;
    let (words, complete) = if exact {
        let w = LanguageWindow::compute(&g, max_len, caps.max_visited);
        (w.words(), w.is_complete())
    } else {
        let r = enumerate_language(&g, max_len, caps);
        (r.words, r.complete)
    };
    let text: String = words.iter().map(|w| format!("{w}\n")).collect();
    emit(None, &text)?;
    eprintln!("complete: {complete}");
    Ok(OK)
}

fn verdict_text(v: &EquivVerdict) -> String {
    let status = match v.status {
        EquivStatus::EquivalentUpToBound => "EQUIVALENT_UP_TO_BOUND",
        EquivStatus::Inequivalent => "INEQUIVALENT",
        EquivStatus::Inconclusive => "INCONCLUSIVE",
    };
    let mut out = format!("{status} (max_len {})\n", v.bound);
    if let Some(cx) = &v.counterexample {
        let side = match cx.produced_by {
            Side::Left => "left",
            Side::Right => "right",
        };
        out += &format!("counterexample: {} (only {side} produces it)\n", cx.word);
        out += &format!("  {}\n", FormDisplay(&cx.trace.origin));
        let mut form = cx.trace.origin.clone();
        for step in &cx.trace.steps {
            form.splice(step.cut..=step.cut, step.rule.rhs.iter().cloned());
            out += &format!("  => {}    [{}]\n", FormDisplay(&form), step.rule);
        }
    }
    out
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Search => "search complete",
        Route::Fixpoint => "search capped, exact fixpoint",
        Route::Partial => "incomplete",
    }
}

fn equiv_cmd(left: &Path, right: &Path, max_len: usize, caps: SearchCaps, json: bool) -> CmdResult {
    let l = load(left)?;
    let r = load(right)?;
    let v = bounded_equiv(&l, &r, max_len, caps).map_err(|e| input_error(e.to_string()))?;
    let text = if json {
        to_json(&v) + "\n"
    } else {
        verdict_text(&v)
    };
    emit(None, &text)?;
    eprintln!(
        "left: {}, right: {}",
        route_name(v.left_route),
        route_name(v.right_route)
    );
    Ok(match v.status {
        EquivStatus::EquivalentUpToBound => OK,
        EquivStatus::Inequivalent => FALSE,
        EquivStatus::Inconclusive => INCONCLUSIVE,
    })
}

fn random_cmd(cfg: &GenConfig, require_nonempty: bool, out: Option<&Path>) -> CmdResult {
    let result = if require_nonempty {
        random_nonempty_grammar(cfg)
    } else {
        random_grammar(cfg)
    };
    let g = result.map_err(|e| match e {
        GenError::InvalidConfig(_) => input_error(e.to_string()),
        GenError::RetriesExhausted(_) => Failure(FALSE, e.to_string()),
    })?;
    emit(out, &serialize_grammar(&g))?;
    Ok(OK)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Simplify {
            input,
            passes,
            out,
            report,
        } => simplify(&input, &passes, out.as_deref(), report.as_deref()),
        Command::Analyze { input, json } => analyze_cmd(&input, json),
        Command::Enumerate {
            input,
            max_len,
            caps,
            exact,
        } => enumerate_cmd(&input, max_len, caps.resolve(max_len), exact),
        Command::Equiv {
            left,
            right,
            max_len,
            caps,
            json,
        } => equiv_cmd(&left, &right, max_len, caps.resolve(max_len), json),
        Command::Random {
            seed,
            max_nonterminals,
            max_terminals,
            max_rules,
            max_rhs_len,
            empty_rule_bias,
            unit_rule_bias,
            require_nonempty,
            out,
        } => {
            let cfg = GenConfig {
                seed,
                max_nonterminals,
                max_terminals,
                max_rules,
                max_rhs_len,
                empty_rule_bias,
                unit_rule_bias,
            };
            random_cmd(&cfg, require_nonempty, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
