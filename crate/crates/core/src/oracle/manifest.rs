//! Plain-text metric manifest.

use std::sync::Arc;

use super::metric::{ComponentMetric, CoordinateChart};
use crate::error::{Error, Result};
use crate::kernel::{RationalFunction, Rational};
use crate::parse::{parse_rational, parse_rational_function};

/// The built-in sample suite.
pub const BUILTIN_MANIFEST: &str = include_str!("../../data/metrics.txt");

struct Pending {
    name: String,
    flat: bool,
    chart: Option<CoordinateChart>,
    entries: Vec<(usize, usize, RationalFunction)>,
    samples: Vec<Vec<Rational>>,
}

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("metric manifest line {line}: {msg}"))
}

fn finish(p: Pending, line: usize) -> Result<ComponentMetric> {
    let chart = p.chart.ok_or_else(|| err(line, format!("metric `{}` has no coords", p.name)))?;
    let n = chart.dimension();
    let vars = chart.variables.clone();
    let mut g: Vec<Vec<Option<RationalFunction>>> = vec![vec![None; n]; n];
    for (i, j, v) in p.entries {
        for (a, b) in [(i, j), (j, i)] {
            match &g[a][b] {
                Some(prev) if *prev != v => return Err(Error::NonSymmetricMetric(a, b)),
                _ => g[a][b] = Some(v.clone()),
            }
        }
    }
    let g = g
        .into_iter()
        .map(|row| row.into_iter().map(|c| c.unwrap_or_else(|| RationalFunction::zero(vars.clone()))).collect())
        .collect();
    ComponentMetric::new(p.name, chart, g, p.samples, p.flat)
}

pub fn parse_manifest(text: &str) -> Result<Vec<ComponentMetric>> {
    let mut out = Vec::new();
    let mut cur: Option<Pending> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut words = body.split_whitespace();
        let head = words.next().unwrap_or("");
        match (head, cur.as_mut()) {
            ("metric", None) => {
                let name = words.next().ok_or_else(|| err(line, "metric needs a name"))?.to_string();
                let flat = match words.next() {
                    Some("flat") => true,
                    Some("curved") | None => false,
                    Some(other) => return Err(err(line, format!("expected flat or curved, found `{other}`"))),
                };
                cur = Some(Pending { name, flat, chart: None, entries: Vec::new(), samples: Vec::new() });
            }
            ("metric", Some(_)) => return Err(err(line, "missing `end` before new metric")),
            (_, None) => return Err(err(line, format!("`{head}` outside a metric block"))),
            ("coords", Some(p)) => {
                let names: Vec<&str> = words.collect();
                if names.is_empty() {
                    return Err(err(line, "no coordinates"));
                }
                p.chart = Some(CoordinateChart::new(&names));
            }
            ("g", Some(p)) => {
                let chart = p.chart.as_ref().ok_or_else(|| err(line, "components before coords"))?;
                let (lhs, rhs) = body[1..].split_once('=').ok_or_else(|| err(line, "expected `g i j = expr`"))?;
                let ij: Vec<&str> = lhs.split_whitespace().collect();
                let find = |s: &str| chart.variables.iter().position(|v| v == s);
                let (Some(i), Some(j)) = (ij.first().and_then(|s| find(s)), ij.get(1).and_then(|s| find(s))) else {
                    return Err(err(line, "component indices must be coordinate names"));
                };
                let v = parse_rational_function(rhs.trim(), Arc::clone(&chart.variables))?;
                p.entries.push((i, j, v));
            }
            ("sample", Some(p)) => {
                let pt = words.map(parse_rational).collect::<Result<Vec<_>>>()?;
                p.samples.push(pt);
            }
            ("end", Some(_)) => out.push(finish(cur.take().expect("open block"), line)?),
            (other, Some(_)) => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    if cur.is_some() {
        return Err(Error::Format("metric manifest ends inside a block".into()));
    }
    Ok(out)
}

pub fn sample_metrics() -> Vec<ComponentMetric> {
    parse_manifest(BUILTIN_MANIFEST).expect("built-in manifest is valid")
}

pub fn sample_metric(name: &str) -> Result<ComponentMetric> {
    sample_metrics()
        .into_iter()
        .find(|m| m.name == name)
        .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
}
