//! Report assembly and the three output formats.

use serde::Serialize;
use serde_json::Value;

use crate::tensor::print::expr_to_latex;
use crate::tensor::TensorExpr;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

/// A value shown three ways.
#[derive(Clone, Debug)]
pub struct Shown {
    pub text: String,
    pub latex: String,
}

impl Shown {
    pub fn plain(s: impl Into<String>) -> Self {
        let s = s.into();
        Self { latex: format!("\\text{{{s}}}"), text: s }
    }

    pub fn tensor(e: &TensorExpr) -> Self {
        Self { text: e.to_string(), latex: expr_to_latex(e) }
    }

    pub fn with_latex(text: impl ToString, latex: String) -> Self {
        Self { text: text.to_string(), latex }
    }
}

/// What a subcommand produced, before formatting.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub inputs: Vec<String>,
    pub result: Shown,
    /// Structured result for JSON; defaults to the text form.
    pub result_json: Option<Value>,
    pub residual: Option<Shown>,
    pub residual_is_zero: Option<bool>,
    /// Labelled detail lines for text and LaTeX output.
    pub details: Vec<(String, Shown)>,
    /// Whether the subcommand's expectations were met.
    pub ok: bool,
}

impl Outcome {
    pub fn new(inputs: Vec<String>, result: Shown) -> Self {
        Self { inputs, result, result_json: None, residual: None, residual_is_zero: None, details: Vec::new(), ok: true }
    }

    pub fn residual(mut self, r: Shown, is_zero: bool) -> Self {
        self.residual = Some(r);
        self.residual_is_zero = Some(is_zero);
        self
    }

    pub fn detail(mut self, label: impl Into<String>, v: Shown) -> Self {
        self.details.push((label.into(), v));
        self
    }

    pub fn json(mut self, v: Value) -> Self {
        self.result_json = Some(v);
        self
    }

    pub fn expect(mut self, ok: bool) -> Self {
        self.ok = self.ok && ok;
        self
    }
}

#[derive(Serialize)]
struct Report<'a> {
    subcommand: &'a str,
    inputs: &'a [String],
    result: Value,
    residual: Option<&'a str>,
    residual_is_zero: Option<bool>,
    trace_path: Option<&'a str>,
    engine_version: &'a str,
}

pub fn render(subcommand: &str, o: &Outcome, trace_path: Option<&str>, format: Format) -> String {
    match format {
        Format::Json => {
            let report = Report {
                subcommand,
                inputs: &o.inputs,
                result: o.result_json.clone().unwrap_or_else(|| Value::String(o.result.text.clone())),
                residual: o.residual.as_ref().map(|r| r.text.as_str()),
                residual_is_zero: o.residual_is_zero,
                trace_path,
                engine_version: ENGINE_VERSION,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("{subcommand}: {}\n", o.result.text);
            for (k, v) in &o.details {
                s.push_str(&format!("  {k}: {}\n", v.text));
            }
            if let Some(r) = &o.residual {
                s.push_str(&format!("  residual: {}\n", r.text));
            }
            if let Some(p) = trace_path {
                s.push_str(&format!("  trace: {p}\n"));
            }
            s.push_str(if o.ok { "  status: ok\n" } else { "  status: FAILED\n" });
            s
        }
        Format::Latex => {
            let mut s = format!("% {subcommand}\n\\[ {} \\]\n", o.result.latex);
            for (k, v) in &o.details {
                s.push_str(&format!("% {k}\n\\[ {} \\]\n", v.latex));
            }
            if let Some(r) = &o.residual {
                s.push_str(&format!("% residual\n\\[ {} \\]\n", r.latex));
            }
            s
        }
    }
}
