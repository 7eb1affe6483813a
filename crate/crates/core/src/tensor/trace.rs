//! Rewrite certificates: a line-oriented record of every operation applied
//! to an expression, replayable to the same output.
//!
//! ```text
//! nogo-trace v1
//! decl antisym F {1 2}
//! rule D[g,^b] bar[A]_b -> 0
//! input D[eta,a] D[eta,b] T^c
//! step generalize
//! = D[g,a] D[g,b] bar[T]^c
//! output D[g,a] D[g,b] bar[T]^c
//! ```

use std::collections::BTreeSet;
use std::fmt;

use super::canon::canonicalize;
use super::constraint::{apply_once, ConstraintRule};
use super::derivative::{curved_commute, flat_commute_sort, symmetrize_at, Location};
use super::expr::{Connection, TensorExpr};
use super::generalize::generalize;
use super::print::declarations;
use super::witness::symmetric_image;
use crate::error::{Error, Result};
use crate::parse::{parse_declaration, parse_rule, parse_tensor_expr, Declarations};

pub const TRACE_HEADER: &str = "nogo-trace v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceOp {
    Canonicalize,
    FlatSort,
    Generalize,
    CurvedCommute(Location),
    /// Swap of two adjacent flat derivatives, no correction.
    FlatSwap(Location),
    Symmetrize(Location),
    /// `symmetric image − generalize` of the current flat expression.
    SymmetricDefect,
    /// One application of rule `k` at its first match, then canonicalize.
    Constraint(usize),
}

impl fmt::Display for TraceOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceOp::Canonicalize => f.write_str("canonicalize"),
            TraceOp::FlatSort => f.write_str("flat-sort"),
            TraceOp::Generalize => f.write_str("generalize"),
            TraceOp::CurvedCommute(l) => write!(f, "curved-commute {l}"),
            TraceOp::FlatSwap(l) => write!(f, "flat-swap {l}"),
            TraceOp::Symmetrize(l) => write!(f, "symmetrize {l}"),
            TraceOp::SymmetricDefect => f.write_str("symmetric-defect"),
            TraceOp::Constraint(k) => write!(f, "constraint {k}"),
        }
    }
}

impl std::str::FromStr for TraceOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut words = s.split_whitespace();
        let name = words.next().unwrap_or("");
        let nums: Vec<usize> = words
            .map(|w| w.parse().map_err(|_| Error::Format(format!("bad step argument `{w}`"))))
            .collect::<Result<_>>()?;
        let loc = || match nums.as_slice() {
            [t, f, p] => Ok(Location::new(*t, *f, *p)),
            _ => Err(Error::Format(format!("`{name}` takes three positions"))),
        };
        let bare = |op| if nums.is_empty() { Ok(op) } else { Err(Error::Format(format!("`{name}` takes no arguments"))) };
        match name {
            "canonicalize" => bare(TraceOp::Canonicalize),
            "flat-sort" => bare(TraceOp::FlatSort),
            "generalize" => bare(TraceOp::Generalize),
            "symmetric-defect" => bare(TraceOp::SymmetricDefect),
            "curved-commute" => Ok(TraceOp::CurvedCommute(loc()?)),
            "flat-swap" => Ok(TraceOp::FlatSwap(loc()?)),
            "symmetrize" => Ok(TraceOp::Symmetrize(loc()?)),
            "constraint" => match nums.as_slice() {
                [k] => Ok(TraceOp::Constraint(*k)),
                _ => Err(Error::Format("`constraint` takes a rule number".into())),
            },
            other => Err(Error::Format(format!("unknown step `{other}`"))),
        }
    }
}

/// Applies one step to `e`.
pub fn apply_op(op: TraceOp, e: &TensorExpr, rules: &[ConstraintRule]) -> Result<TensorExpr> {
    match op {
        TraceOp::Canonicalize => canonicalize(e),
        TraceOp::FlatSort => flat_commute_sort(e),
        TraceOp::Generalize => generalize(e),
        TraceOp::CurvedCommute(l) => curved_commute(e, l),
        TraceOp::FlatSwap(l) => flat_swap(e, l),
        TraceOp::Symmetrize(l) => symmetrize_at(e, l),
        TraceOp::SymmetricDefect => Ok(symmetric_image(e)?.sub(&generalize(e)?)),
        TraceOp::Constraint(k) => {
            let rule = rules.get(k).ok_or_else(|| Error::Format(format!("no rule {k}")))?;
            match apply_once(e, std::slice::from_ref(rule))? {
                Some((_, _, next)) => canonicalize(&next),
                None => Err(Error::InvalidLocation(format!("rule {k} does not match"))),
            }
        }
    }
}

fn flat_swap(e: &TensorExpr, l: Location) -> Result<TensorExpr> {
    let prefix = e
        .terms
        .get(l.term)
        .and_then(|t| t.factors.get(l.factor))
        .map(|f| &f.prefix)
        .filter(|p| l.prefix + 1 < p.len())
        .ok_or_else(|| Error::InvalidLocation(l.to_string()))?;
    if prefix[l.prefix].connection != Connection::Flat || prefix[l.prefix + 1].connection != Connection::Flat {
        return Err(Error::WrongConnection(l.to_string()));
    }
    let mut out = e.clone();
    out.terms[l.term].factors[l.factor].prefix.swap(l.prefix, l.prefix + 1);
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct TraceStep {
    pub op: TraceOp,
    pub result: TensorExpr,
}

/// A recorded derivation.
#[derive(Clone, Debug)]
pub struct RewriteTrace {
    pub rules: Vec<ConstraintRule>,
    pub input: TensorExpr,
    pub steps: Vec<TraceStep>,
}

impl RewriteTrace {
    pub fn new(input: TensorExpr) -> Self {
        Self { rules: Vec::new(), input, steps: Vec::new() }
    }

    pub fn with_rules(mut self, rules: Vec<ConstraintRule>) -> Self {
        self.rules = rules;
        self
    }

    pub fn output(&self) -> &TensorExpr {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.input)
    }

    pub fn record(&mut self, op: TraceOp, result: &TensorExpr) {
        self.steps.push(TraceStep { op, result: result.clone() });
    }

    /// Applies `op` to the current output and records it.
    pub fn apply(&mut self, op: TraceOp) -> Result<TensorExpr> {
        let next = apply_op(op, self.output(), &self.rules)?;
        self.record(op, &next);
        Ok(next)
    }

    pub fn to_text(&self) -> String {
        let mut decls = BTreeSet::new();
        decls.extend(declarations(&self.input));
        for s in &self.steps {
            decls.extend(declarations(&s.result));
        }
        for r in &self.rules {
            decls.extend(declarations(&TensorExpr::from_terms(vec![r.pattern_term()])));
            decls.extend(declarations(&r.replacement));
        }
        let mut out = format!("{TRACE_HEADER}\n");
        for d in decls {
            out.push_str(&format!("decl {d}\n"));
        }
        for r in &self.rules {
            out.push_str(&format!("rule {r}\n"));
        }
        out.push_str(&format!("input {}\n", self.input));
        for s in &self.steps {
            out.push_str(&format!("step {}\n= {}\n", s.op, s.result));
        }
        out.push_str(&format!("output {}\n", self.output()));
        out
    }

    /// Reads a certificate without re-running it.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some(TRACE_HEADER) {
            return Err(Error::Format(format!("missing `{TRACE_HEADER}` header")));
        }
        let mut decls = Declarations::new();
        let mut rules = Vec::new();
        let mut input = None;
        let mut steps = Vec::new();
        let mut pending: Option<TraceOp> = None;
        let mut output = None;
        for line in lines {
            let (kw, rest) = line.split_once(' ').unwrap_or((line, ""));
            match kw {
                "decl" => parse_declaration(rest, &mut decls)?,
                "rule" => rules.push(parse_rule(rest, &decls)?),
                "input" => input = Some(parse_tensor_expr(rest, &decls)?),
                "step" => {
                    if pending.is_some() {
                        return Err(Error::Format("step without result".into()));
                    }
                    pending = Some(rest.parse()?);
                }
                "=" => {
                    let op = pending.take().ok_or_else(|| Error::Format("result without step".into()))?;
                    steps.push(TraceStep { op, result: parse_tensor_expr(rest, &decls)? });
                }
                "output" => output = Some(parse_tensor_expr(rest, &decls)?),
                other => return Err(Error::Format(format!("unknown line `{other}`"))),
            }
        }
        let input = input.ok_or_else(|| Error::Format("missing input".into()))?;
        let trace = Self { rules, input, steps };
        match output {
            Some(o) if o.to_string() == trace.output().to_string() => Ok(trace),
            Some(o) => Err(Error::Format(format!("output `{o}` is not the last step result"))),
            None => Err(Error::Format("missing output".into())),
        }
    }
}

/// Re-runs every step of a certificate and checks each recorded result.
pub fn replay(text: &str) -> Result<TensorExpr> {
    let trace = RewriteTrace::parse(text)?;
    let mut cur = trace.input.clone();
    for (i, s) in trace.steps.iter().enumerate() {
        let next = apply_op(s.op, &cur, &trace.rules)?;
        let (expected, actual) = (s.result.to_string(), next.to_string());
        if expected != actual {
            return Err(Error::ReplayMismatch { step: i + 1, expected, actual });
        }
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tensor;
    use crate::tensor::derivative::next_unsorted;

    fn p(s: &str) -> TensorExpr {
        parse_tensor(s).unwrap().expr
    }

    fn theorem_trace() -> RewriteTrace {
        let mut t = RewriteTrace::new(p("D[eta,b] D[eta,a] T^c - D[eta,a] D[eta,b] T^c"));
        t.apply(TraceOp::Generalize).unwrap();
        t.apply(TraceOp::Canonicalize).unwrap();
        while let Some(l) = next_unsorted(t.output()).unwrap() {
            t.apply(TraceOp::CurvedCommute(l)).unwrap();
            t.apply(TraceOp::Canonicalize).unwrap();
        }
        t
    }

    #[test]
    fn round_trip_and_replay() {
        let t = theorem_trace();
        assert_eq!(t.output().to_string(), "R[g]^c_{abd} bar[T]^d");
        let text = t.to_text();
        assert!(text.starts_with(TRACE_HEADER));
        assert_eq!(replay(&text).unwrap().to_string(), t.output().to_string());
    }

    #[test]
    fn tampered_step_is_caught() {
        let text = theorem_trace()
            .to_text()
            .replace("= R[g]^c_{abd} bar[T]^d", "= -R[g]^c_{abd} bar[T]^d")
            .replace("output R[g]", "output -R[g]");
        assert!(matches!(replay(&text), Err(Error::ReplayMismatch { .. })));
    }

    #[test]
    fn declarations_and_rules_survive() {
        let src = parse_tensor("antisym F {1 2}; rule D[g,^b] bar[A]_b -> 0; D[g,^a] D[g,^b] bar[A]_b bar[F]_{ac}").unwrap();
        let mut t = RewriteTrace::new(src.expr).with_rules(src.rules);
        t.apply(TraceOp::Canonicalize).unwrap();
        t.apply(TraceOp::Constraint(0)).unwrap();
        let text = t.to_text();
        assert!(text.contains("decl antisym F {1 2}"));
        assert_eq!(replay(&text).unwrap(), *t.output());
    }

    #[test]
    fn malformed_certificates() {
        assert!(matches!(replay("input T"), Err(Error::Format(_))));
        let bad = format!("{TRACE_HEADER}\ninput T\nstep teleport\n= T\noutput T\n");
        assert!(matches!(replay(&bad), Err(Error::Format(_))));
        let bad = format!("{TRACE_HEADER}\ninput T\nstep canonicalize\n= T\noutput S\n");
        assert!(matches!(replay(&bad), Err(Error::Format(_))));
    }

    #[test]
    fn flat_swap_requires_flat() {
        let e = p("D[g,a] D[g,b] bar[T]^c");
        assert!(matches!(apply_op(TraceOp::FlatSwap(Location::new(0, 0, 0)), &e, &[]), Err(Error::WrongConnection(_))));
        let e = p("D[eta,a] D[eta,b] T^c");
        assert_eq!(apply_op(TraceOp::FlatSwap(Location::new(0, 0, 0)), &e, &[]).unwrap(), p("D[eta,b] D[eta,a] T^c"));
    }
}
