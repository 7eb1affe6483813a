//! Golden examples: a flat law, its expected curved image, and optionally
//! its expected flat normal form under side conditions.
//!
//! Stanza format, `#` starts a comment:
//!
//! ```text
//! [name]
//! decl antisym F {1 2}
//! rule u^a u_a -> -1
//! mode plain | sort | symmetrize
//! input <flat expression>
//! flat <flat expression>
//! expect <curved expression>
//! ```

use std::path::Path;

use super::canon::{canonical_equal, canonicalize, canonicalize_with, CanonOptions};
use super::constraint::{apply_constraints, ConstraintRule};
use super::derivative::{curved_sort, symmetrize_dummy_pairs};
use super::expr::TensorExpr;
use super::generalize::generalize;
use crate::error::{Error, Result};
use crate::parse::{parse_declaration, parse_rule, parse_tensor_expr, Declarations};

pub const BUILTIN_CORPUS: &str = include_str!("../../corpus/minimal_substitution.corpus");

/// How the curved image is brought to a comparable form.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CorpusMode {
    #[default]
    Plain,
    /// Sort curved derivatives, paying the curvature terms.
    Sort,
    /// Split dummy derivative pairs into symmetric and commutator parts.
    Symmetrize,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub rules: Vec<ConstraintRule>,
    pub mode: CorpusMode,
    pub input: TensorExpr,
    pub flat: Option<TensorExpr>,
    pub expected: Option<TensorExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusOutcome {
    pub name: String,
    /// Normalized curved image of the input.
    pub image: TensorExpr,
    pub flat_ok: Option<bool>,
    pub curved_ok: Option<bool>,
}

impl CorpusOutcome {
    pub fn passed(&self) -> bool {
        self.flat_ok != Some(false) && self.curved_ok != Some(false)
    }
}

fn format_err(name: &str, line: usize, e: impl std::fmt::Display) -> Error {
    Error::Format(format!("corpus line {line} ({name}): {e}"))
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    struct Partial {
        name: String,
        decls: Declarations,
        entry: CorpusEntry,
        has_input: bool,
    }
    let finish = |p: Partial, line: usize| -> Result<CorpusEntry> {
        if !p.has_input {
            return Err(format_err(&p.name, line, "stanza has no input"));
        }
        if p.entry.flat.is_none() && p.entry.expected.is_none() {
            return Err(format_err(&p.name, line, "stanza has neither `flat` nor `expect`"));
        }
        Ok(p.entry)
    };
    let mut out = Vec::new();
    let mut cur: Option<Partial> = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if let Some(p) = cur.take() {
                out.push(finish(p, n)?);
            }
            cur = Some(Partial {
                name: name.trim().to_string(),
                decls: Declarations::new(),
                entry: CorpusEntry {
                    name: name.trim().to_string(),
                    rules: Vec::new(),
                    mode: CorpusMode::Plain,
                    input: TensorExpr::zero(),
                    flat: None,
                    expected: None,
                },
                has_input: false,
            });
            continue;
        }
        let p = cur.as_mut().ok_or_else(|| format_err("", n, "line outside a stanza"))?;
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let at = |e: Error| format_err(&p.name, n, e);
        match kw {
            "decl" => parse_declaration(rest, &mut p.decls).map_err(at)?,
            "rule" => {
                let r = parse_rule(rest, &p.decls).map_err(at)?;
                p.entry.rules.push(r);
            }
            "mode" => {
                p.entry.mode = match rest {
                    "plain" => CorpusMode::Plain,
                    "sort" => CorpusMode::Sort,
                    "symmetrize" => CorpusMode::Symmetrize,
                    other => return Err(format_err(&p.name, n, format!("unknown mode `{other}`"))),
                }
            }
            "input" => {
                p.entry.input = parse_tensor_expr(rest, &p.decls).map_err(at)?;
                p.has_input = true;
            }
            "flat" => p.entry.flat = Some(parse_tensor_expr(rest, &p.decls).map_err(at)?),
            "expect" => p.entry.expected = Some(parse_tensor_expr(rest, &p.decls).map_err(at)?),
            other => return Err(format_err(&p.name, n, format!("unknown keyword `{other}`"))),
        }
    }
    if let Some(p) = cur.take() {
        out.push(finish(p, text.lines().count())?);
    }
    Ok(out)
}

/// The examples shipped with the engine.
pub fn corpus_examples() -> Vec<CorpusEntry> {
    parse_corpus(BUILTIN_CORPUS).expect("built-in corpus parses")
}

/// Every `*.corpus` file in `dir`, in file-name order.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<CorpusEntry>> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::Format(format!("{}: {e}", dir.display())))?
        .filter_map(|d| d.ok().map(|d| d.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "corpus"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(&f).map_err(|e| Error::Format(format!("{}: {e}", f.display())))?;
        out.extend(parse_corpus(&text)?);
    }
    Ok(out)
}

fn flat_normal(e: &TensorExpr, rules: &[ConstraintRule]) -> Result<TensorExpr> {
    let opts = CanonOptions { commute_flat: true };
    let e = canonicalize_with(e, opts)?;
    canonicalize_with(&apply_constraints(&e, rules)?, opts)
}

fn curved_normal(e: &TensorExpr, mode: CorpusMode, rules: &[ConstraintRule]) -> Result<TensorExpr> {
    let e = match mode {
        CorpusMode::Plain => canonicalize(e)?,
        CorpusMode::Sort => curved_sort(e)?,
        CorpusMode::Symmetrize => symmetrize_dummy_pairs(e)?,
    };
    canonicalize(&apply_constraints(&e, rules)?)
}

pub fn run_entry(entry: &CorpusEntry) -> Result<CorpusOutcome> {
    let flat_ok = match &entry.flat {
        Some(f) => Some(flat_normal(&entry.input, &entry.rules)? == flat_normal(f, &entry.rules)?),
        None => None,
    };
    let curved_rules = entry.rules.iter().map(ConstraintRule::generalized).collect::<Result<Vec<_>>>()?;
    let image = curved_normal(&generalize(&entry.input)?, entry.mode, &curved_rules)?;
    let curved_ok = match &entry.expected {
        Some(x) => Some(canonical_equal(&image, &curved_normal(x, entry.mode, &curved_rules)?)?),
        None => None,
    };
    Ok(CorpusOutcome { name: entry.name.clone(), image, flat_ok, curved_ok })
}

/// Runs every entry on its own thread; results keep corpus order.
pub fn run_corpus(entries: &[CorpusEntry]) -> Vec<Result<CorpusOutcome>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || run_entry(e))).collect();
        handles.into_iter().map(|h| h.join().expect("corpus worker panicked")).collect()
    })
}
