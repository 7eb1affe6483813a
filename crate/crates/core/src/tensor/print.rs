//! Text and LaTeX rendering. The text form is accepted back by the tensor
//! parser.

use std::collections::BTreeSet;

use num_traits::{One, Signed};

use super::expr::{Connection, Factor, Scalar, TensorExpr, Term};
use super::index::{IndexLabel, Variance};
use super::symbol::{Side, SymbolKind, TensorSymbol};

fn index_groups(ls: &[IndexLabel]) -> Vec<(Variance, Vec<&str>)> {
    let mut out: Vec<(Variance, Vec<&str>)> = Vec::new();
    for l in ls {
        match out.last_mut() {
            Some((v, names)) if *v == l.variance => names.push(&l.name),
            _ => out.push((l.variance, vec![&l.name])),
        }
    }
    out
}

fn indices_text(ls: &[IndexLabel]) -> String {
    let mut s = String::new();
    for (v, names) in index_groups(ls) {
        s.push(v.marker());
        if names.len() == 1 {
            s.push_str(names[0]);
        } else {
            s.push('{');
            s.push_str(&names.concat());
            s.push('}');
        }
    }
    s
}

pub fn symbol_text(sym: &TensorSymbol) -> String {
    sym.display_name()
}

pub fn factor_to_string(f: &Factor) -> String {
    let mut s = String::new();
    for d in &f.prefix {
        let conn = match d.connection {
            Connection::Flat => "eta",
            Connection::Curved => "g",
        };
        let var = if d.index.variance == Variance::Up { "^" } else { "" };
        s.push_str(&format!("D[{},{}{}] ", conn, var, d.index.name));
    }
    s.push_str(&symbol_text(&f.symbol));
    s.push_str(&indices_text(&f.indices));
    s
}

pub fn scalar_to_string(s: &Scalar) -> String {
    let unit = s.rational.abs().is_one() && !s.constants.is_empty();
    let mut parts = if unit { vec![] } else { vec![s.rational.to_string()] };
    for (c, e) in &s.constants {
        if *e == 1 {
            parts.push(c.keyword().to_string());
        } else {
            parts.push(format!("{}^{}", c.keyword(), e));
        }
    }
    let body = parts.join(" ");
    if unit && s.rational.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

/// Term without its sign.
fn term_body(t: &Term) -> String {
    let mag = t.scalar.abs();
    let mut parts = Vec::new();
    if !(mag.rational.is_one() && mag.constants.is_empty() && !t.factors.is_empty()) {
        parts.push(scalar_to_string(&mag));
    }
    parts.extend(t.factors.iter().map(factor_to_string));
    parts.join(" ")
}

pub fn term_to_string(t: &Term) -> String {
    let body = term_body(t);
    if t.scalar.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

pub fn expr_to_string(e: &TensorExpr) -> String {
    if e.terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, t) in e.terms.iter().enumerate() {
        let neg = t.scalar.is_negative();
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&term_body(t));
    }
    s
}

/// Symmetry declarations for the generic symbols of `e`, one per line.
pub fn declarations(e: &TensorExpr) -> Vec<String> {
    let mut out = BTreeSet::new();
    for sym in e.generic_symbols() {
        for s in &sym.symmetries {
            let line = s.to_string();
            let (kw, slots) = line.split_once(' ').unwrap_or((&line, ""));
            out.insert(format!("{} {} {}", kw, sym.name, slots));
        }
    }
    out.into_iter().collect()
}

/// Declarations and expression, re-parseable as one tensor source.
pub fn to_source(e: &TensorExpr) -> String {
    let mut parts = declarations(e);
    parts.push(expr_to_string(e));
    parts.join("; ")
}

impl std::fmt::Display for TensorExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&expr_to_string(self))
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&term_to_string(self))
    }
}

impl std::fmt::Display for Factor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&factor_to_string(self))
    }
}

fn latex_indices(ls: &[IndexLabel]) -> String {
    let mut s = String::new();
    for (v, names) in index_groups(ls) {
        let body = names.join(" ");
        match v {
            Variance::Up => s.push_str(&format!("{{}}^{{{body}}}")),
            Variance::Down => s.push_str(&format!("{{}}_{{{body}}}")),
        }
    }
    s
}

fn latex_symbol(sym: &TensorSymbol) -> String {
    let base = match sym.kind {
        SymbolKind::Metric if sym.side == Side::Flat => "\\eta".to_string(),
        SymbolKind::Metric => "g".to_string(),
        SymbolKind::Kronecker => "\\delta".to_string(),
        SymbolKind::Riemann | SymbolKind::Ricci => "R^{(g)}".to_string(),
        SymbolKind::RicciScalar => "R^{(g)}".to_string(),
        SymbolKind::Generic => greek(&sym.name),
    };
    if sym.kind == SymbolKind::Generic && sym.side == Side::Curved {
        format!("\\overline{{{base}}}")
    } else {
        base
    }
}

fn greek(name: &str) -> String {
    const GREEK: [&str; 12] = ["alpha", "beta", "gamma", "delta", "epsilon", "lambda", "mu", "nu", "rho", "sigma", "tau", "phi"];
    if GREEK.contains(&name) {
        format!("\\{name}")
    } else {
        name.to_string()
    }
}

pub fn factor_to_latex(f: &Factor) -> String {
    let mut s = String::new();
    for d in &f.prefix {
        let conn = match d.connection {
            Connection::Flat => "\\eta",
            Connection::Curved => "g",
        };
        let pos = if d.index.variance == Variance::Up { "^" } else { "_" };
        s.push_str(&format!("\\nabla^{{({conn})}}{{}}{pos}{{{}}} ", d.index.name));
    }
    s.push_str(&latex_symbol(&f.symbol));
    s.push_str(&latex_indices(&f.indices));
    s
}

fn scalar_to_latex(s: &Scalar) -> String {
    let (mut num, mut den) = (Vec::new(), Vec::new());
    let r = &s.rational;
    if !r.numer().is_one() || s.constants.values().all(|e| *e < 0) {
        num.push(r.numer().to_string());
    }
    if !r.denom().is_one() {
        den.push(r.denom().to_string());
    }
    for (c, e) in &s.constants {
        let text = if e.abs() == 1 { c.latex().to_string() } else { format!("{}^{{{}}}", c.latex(), e.abs()) };
        if *e > 0 {
            num.push(text);
        } else {
            den.push(text);
        }
    }
    let n = if num.is_empty() { "1".to_string() } else { num.join(" ") };
    if den.is_empty() {
        n
    } else {
        format!("\\frac{{{}}}{{{}}}", n, den.join(" "))
    }
}

pub fn expr_to_latex(e: &TensorExpr) -> String {
    if e.terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, t) in e.terms.iter().enumerate() {
        let neg = t.scalar.is_negative();
        if neg {
            s.push_str(if i == 0 { "-" } else { " - " });
        } else if i > 0 {
            s.push_str(" + ");
        }
        let mag = t.scalar.abs();
        let mut parts = Vec::new();
        if !(mag.is_one() && !t.factors.is_empty()) {
            parts.push(scalar_to_latex(&mag));
        }
        parts.extend(t.factors.iter().map(factor_to_latex));
        s.push_str(&parts.join(" "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::expr::{labels, Constant, Derivative};

    #[test]
    fn prints_factor_with_prefix() {
        let f = Factor::new(TensorSymbol::generic("T", Side::Curved), labels("^c")).with_prefix(vec![
            Derivative::new(Connection::Curved, IndexLabel::down("a")),
            Derivative::new(Connection::Curved, IndexLabel::up("b")),
        ]);
        assert_eq!(factor_to_string(&f), "D[g,a] D[g,^b] bar[T]^c");
    }

    #[test]
    fn prints_grouped_indices() {
        let f = Factor::new(TensorSymbol::riemann(), labels("^c_abd"));
        assert_eq!(factor_to_string(&f), "R[g]^c_{abd}");
    }

    #[test]
    fn prints_signs_and_constants() {
        let f = Factor::new(TensorSymbol::generic("A", Side::Flat), labels("_a"));
        let s = Scalar::rational(crate::kernel::rat(-1, 4)).mul(&Scalar::constant(Constant::Pi, -1));
        let e = TensorExpr::from_terms(vec![Term::new(Scalar::one(), vec![f.clone()]), Term::new(s, vec![f])]);
        assert_eq!(expr_to_string(&e), "A_a - 1/4 pi^-1 A_a");
        assert!(expr_to_latex(&e).contains("\\frac{1}{4 \\pi}"));
    }
}
