//! Tensor grammar.
//!
//! ```text
//! antisym F {1 2}; rule D[g,^b] bar[A]_b -> 0; D[g,a] D[g,b] bar[T]^c
//! ```
//!
//! `D[eta,a]` / `D[g,^a]` apply a flat / curved derivative to the next
//! primary (Leibniz on products and sums). `bar[X]` is the curved image of
//! `X`; `eta`, `g`, `delta`, `R[g]`, `Ric[g]`, `Rs[g]` are built in;
//! `pi`, `m`, `charge`, `dim` are scalar constants.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::arith::{parse_all, power, sum, syntax, Grammar};
use super::lexer::{Cursor, Tok};
use crate::error::{Error, Result, Span};
use crate::kernel::Rational;
use crate::tensor::derivative::differentiate;
use crate::tensor::index::{is_index_name, IndexLabel, Variance};
use crate::tensor::{
    Connection, ConstraintRule, Constant, Derivative, Factor, Scalar, Side, SlotSymmetry, SymmetryKind,
    TensorExpr, TensorSymbol,
};

/// Slot symmetries by symbol name (shared by `X` and `bar[X]`).
pub type Declarations = BTreeMap<String, Vec<SlotSymmetry>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSource {
    pub decls: Declarations,
    pub rules: Vec<ConstraintRule>,
    pub expr: TensorExpr,
}

struct TensorGrammar<'a> {
    decls: &'a Declarations,
    arity: BTreeMap<String, usize>,
}

fn scalar_of(e: &TensorExpr) -> Option<Scalar> {
    match e.terms.as_slice() {
        [] => Some(Scalar::integer(0)),
        [t] if t.factors.is_empty() => Some(t.scalar.clone()),
        _ => None,
    }
}

impl TensorGrammar<'_> {
    fn indices(&self, c: &mut Cursor) -> Result<Vec<IndexLabel>> {
        let mut out = Vec::new();
        loop {
            let variance = match c.peek() {
                Tok::Caret => Variance::Up,
                Tok::Underscore => Variance::Down,
                _ => return Ok(out),
            };
            if matches!(c.peek_at(1), Tok::Int(_) | Tok::Minus) {
                return Ok(out);
            }
            c.next();
            let mut names = Vec::new();
            if c.eat(&Tok::LBrace) {
                while !c.eat(&Tok::RBrace) {
                    names.push((c.span(), c.ident()?));
                }
            } else {
                names.push((c.span(), c.ident()?));
            }
            for (at, group) in names {
                for name in split_indices(&group).ok_or_else(|| syntax(at, format!("bad index group `{group}`")))? {
                    out.push(IndexLabel::new(name, variance));
                }
            }
        }
    }

    fn symbol_factor(&mut self, c: &mut Cursor, sym: TensorSymbol, at: Span) -> Result<TensorExpr> {
        let idx = self.indices(c)?;
        let expected = match sym.kind {
            crate::tensor::SymbolKind::Metric | crate::tensor::SymbolKind::Kronecker => Some(2),
            crate::tensor::SymbolKind::Riemann => Some(4),
            crate::tensor::SymbolKind::Ricci => Some(2),
            crate::tensor::SymbolKind::RicciScalar => Some(0),
            crate::tensor::SymbolKind::Generic => self.arity.get(&sym.name).copied(),
        };
        if let Some(n) = expected {
            if n != idx.len() {
                return Err(syntax(
                    at,
                    format!("index arity mismatch: {} takes {} indices, got {}", sym.display_name(), n, idx.len()),
                ));
            }
        }
        if sym.kind == crate::tensor::SymbolKind::Generic {
            self.arity.insert(sym.name.clone(), idx.len());
        }
        Ok(TensorExpr::from_factor(Factor::new(sym, idx)))
    }

    fn generic(&self, name: &str, side: Side) -> TensorSymbol {
        let mut s = TensorSymbol::generic(name, side);
        if let Some(sy) = self.decls.get(name) {
            s.symmetries = sy.clone();
        }
        s
    }

    fn bracket_arg(&self, c: &mut Cursor) -> Result<String> {
        c.expect(&Tok::LBrack)?;
        let s = c.ident()?;
        c.expect(&Tok::RBrack)?;
        Ok(s)
    }

    fn derivative(&mut self, c: &mut Cursor) -> Result<TensorExpr> {
        c.expect(&Tok::LBrack)?;
        let at = c.span();
        let connection = match c.ident()?.as_str() {
            "eta" => Connection::Flat,
            "g" => Connection::Curved,
            other => return Err(syntax(at, format!("unknown connection `{other}` (expected eta or g)"))),
        };
        c.expect(&Tok::Comma)?;
        let variance = if c.eat(&Tok::Caret) {
            Variance::Up
        } else {
            c.eat(&Tok::Underscore);
            Variance::Down
        };
        let at = c.span();
        let name = c.ident()?;
        if !is_index_name(&name) {
            return Err(syntax(at, format!("bad index `{name}`")));
        }
        c.expect(&Tok::RBrack)?;
        let operand = power(self, c)?;
        differentiate(&operand, &Derivative::new(connection, IndexLabel::new(name, variance)))
    }
}

/// Splits `a1bc2` into `a1`, `b`, `c2`.
fn split_indices(s: &str) -> Option<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for ch in s.chars() {
        if ch.is_ascii_alphabetic() {
            out.push(ch.to_string());
        } else if ch.is_ascii_digit() {
            out.last_mut()?.push(ch);
        } else {
            return None;
        }
    }
    Some(out)
}

impl Grammar for TensorGrammar<'_> {
    type Value = TensorExpr;

    fn from_int(&self, n: &BigInt) -> TensorExpr {
        TensorExpr::scalar(Scalar::rational(Rational::from_integer(n.clone())))
    }

    fn add(&self, a: &TensorExpr, b: &TensorExpr) -> Result<TensorExpr> {
        Ok(a.add(b))
    }

    fn mul(&self, a: &TensorExpr, b: &TensorExpr) -> Result<TensorExpr> {
        a.mul(b)
    }

    fn neg(&self, a: &TensorExpr) -> TensorExpr {
        a.neg()
    }

    fn div(&self, a: &TensorExpr, b: &TensorExpr, at: Span) -> Result<TensorExpr> {
        let s = scalar_of(b).ok_or_else(|| syntax(at, "can only divide by a scalar"))?;
        let inv = s.inv().map_err(|_| syntax(at, "division by zero"))?;
        Ok(a.scale(&inv))
    }

    fn pow(&self, a: &TensorExpr, k: i64, at: Span) -> Result<TensorExpr> {
        if let Some(s) = scalar_of(a) {
            let k = i32::try_from(k).map_err(|_| syntax(at, "exponent too large"))?;
            return Ok(TensorExpr::scalar(s.pow(k).map_err(|_| syntax(at, "zero to a negative power"))?));
        }
        let k = u32::try_from(k).map_err(|_| syntax(at, "negative power of a tensor"))?;
        let mut out = TensorExpr::scalar(Scalar::one());
        for _ in 0..k {
            out = out.mul(a)?;
        }
        Ok(out)
    }

    fn caret_is_power(&self) -> bool {
        true
    }

    fn primary(&mut self, c: &mut Cursor) -> Result<Option<TensorExpr>> {
        let Tok::Ident(name) = c.peek().clone() else { return Ok(None) };
        let at = c.span();
        c.next();
        let bracket = *c.peek() == Tok::LBrack;
        let v = match name.as_str() {
            "D" if bracket => self.derivative(c)?,
            "bar" if bracket => {
                let inner = self.bracket_arg(c)?;
                let sym = self.generic(&inner, Side::Curved);
                self.symbol_factor(c, sym, at)?
            }
            "R" | "Ric" | "Rs" if bracket => {
                let m = self.bracket_arg(c)?;
                if m != "g" {
                    return Err(syntax(at, format!("curvature is only defined for g, not `{m}`")));
                }
                let sym = match name.as_str() {
                    "R" => TensorSymbol::riemann(),
                    "Ric" => TensorSymbol::ricci(),
                    _ => TensorSymbol::ricci_scalar(),
                };
                self.symbol_factor(c, sym, at)?
            }
            "eta" => self.symbol_factor(c, TensorSymbol::metric(Side::Flat), at)?,
            "g" => self.symbol_factor(c, TensorSymbol::metric(Side::Curved), at)?,
            "delta" => self.symbol_factor(c, TensorSymbol::kronecker(), at)?,
            _ => match Constant::from_keyword(&name) {
                Some(k) => TensorExpr::scalar(Scalar::constant(k, 1)),
                None => {
                    let sym = self.generic(&name, Side::Flat);
                    self.symbol_factor(c, sym, at)?
                }
            },
        };
        Ok(Some(v))
    }
}

fn validate(e: &TensorExpr) -> Result<()> {
    e.free_indices()?;
    e.side()?;
    Ok(())
}

/// Parses a bare expression (no preamble).
pub fn parse_tensor_expr(src: &str, decls: &Declarations) -> Result<TensorExpr> {
    let e = parse_all(&mut TensorGrammar { decls, arity: BTreeMap::new() }, src)?;
    validate(&e)?;
    Ok(e)
}

fn declaration(c: &mut Cursor, kind: SymmetryKind, decls: &mut Declarations) -> Result<()> {
    let name = c.ident()?;
    c.expect(&Tok::LBrace)?;
    let mut slots = Vec::new();
    while !c.eat(&Tok::RBrace) {
        let at = c.span();
        match c.next() {
            Tok::Int(n) => {
                let k: usize = n.try_into().map_err(|_| syntax(at, "slot number too large"))?;
                if k == 0 {
                    return Err(syntax(at, "slots are numbered from 1"));
                }
                slots.push(k - 1);
            }
            other => return Err(syntax(at, format!("expected a slot number, found {other}"))),
        }
    }
    if slots.len() < 2 {
        return Err(c.error("a symmetry needs at least two slots"));
    }
    decls.entry(name).or_default().push(SlotSymmetry { kind, slots });
    Ok(())
}

fn rule(c: &mut Cursor, decls: &Declarations) -> Result<ConstraintRule> {
    let at = c.span();
    let mut g = TensorGrammar { decls, arity: BTreeMap::new() };
    let pattern = sum(&mut g, c)?;
    c.expect(&Tok::Arrow)?;
    let mut g = TensorGrammar { decls, arity: BTreeMap::new() };
    let replacement = sum(&mut g, c)?;
    validate(&pattern)?;
    validate(&replacement)?;
    match pattern.terms.as_slice() {
        [t] => ConstraintRule::new(t.clone(), replacement),
        _ => Err(syntax(at, "a rule pattern must be a single term")),
    }
}

/// Parses `decl; decl; rule ...; expression`.
pub fn parse_tensor(src: &str) -> Result<TensorSource> {
    parse_tensor_with(src, Declarations::new())
}

pub fn parse_tensor_with(src: &str, mut decls: Declarations) -> Result<TensorSource> {
    let mut c = Cursor::new(src)?;
    let mut rules = Vec::new();
    loop {
        let kw = match (c.peek(), c.peek_at(1), c.peek_at(2)) {
            (Tok::Ident(k), Tok::Ident(_), Tok::LBrace) if k == "antisym" || k == "sym" => k.clone(),
            (Tok::Ident(k), _, _) if k == "rule" && *c.peek_at(1) != Tok::Caret && *c.peek_at(1) != Tok::Underscore => {
                k.clone()
            }
            _ => break,
        };
        c.next();
        match kw.as_str() {
            "antisym" => declaration(&mut c, SymmetryKind::Antisymmetric, &mut decls)?,
            "sym" => declaration(&mut c, SymmetryKind::Symmetric, &mut decls)?,
            _ => rules.push(rule(&mut c, &decls)?),
        }
        if !c.eat(&Tok::Semi) {
            c.finish()?;
            return Ok(TensorSource { decls, rules, expr: TensorExpr::zero() });
        }
    }
    let mut g = TensorGrammar { decls: &decls, arity: BTreeMap::new() };
    let expr = sum(&mut g, &mut c)?;
    c.finish()?;
    validate(&expr)?;
    Ok(TensorSource { decls, rules, expr })
}

/// Parses one `antisym F {1 2}` / `sym S {1 2}` line into `decls`.
pub fn parse_declaration(src: &str, decls: &mut Declarations) -> Result<()> {
    let mut c = Cursor::new(src)?;
    let at = c.span();
    let kind = match c.ident()?.as_str() {
        "antisym" => SymmetryKind::Antisymmetric,
        "sym" => SymmetryKind::Symmetric,
        other => return Err(syntax(at, format!("unknown declaration `{other}`"))),
    };
    declaration(&mut c, kind, decls)?;
    c.finish()
}

/// Parses `pattern -> replacement`.
pub fn parse_rule(src: &str, decls: &Declarations) -> Result<ConstraintRule> {
    let mut c = Cursor::new(src)?;
    let r = rule(&mut c, decls)?;
    c.finish()?;
    Ok(r)
}

impl std::str::FromStr for TensorExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(parse_tensor(s)?.expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{canonicalize, print};

    fn p(s: &str) -> TensorExpr {
        parse_tensor(s).unwrap().expr
    }

    #[test]
    fn flat_two_derivative_factor() {
        let e = p("D[eta,a] D[eta,b] T^c");
        assert_eq!(e.terms.len(), 1);
        let f = &e.terms[0].factors[0];
        assert_eq!(f.prefix.len(), 2);
        assert!(f.prefix.iter().all(|d| d.connection == Connection::Flat));
        assert_eq!(f.prefix[0].index, IndexLabel::down("a"));
    }

    #[test]
    fn repeated_index_rejected() {
        assert!(matches!(parse_tensor("F_{a a}"), Err(Error::Index(_))));
    }

    #[test]
    fn arity_mismatch() {
        assert!(matches!(parse_tensor("T^a + T^{ab}_b"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_tensor("R[g]^c_{ab}"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn mixed_sides_rejected() {
        assert!(matches!(parse_tensor("D[g,a] T^a"), Err(Error::MixedSides(_))));
    }

    #[test]
    fn preamble_and_rules() {
        let s = parse_tensor("antisym F {1 2}; rule u^a u_a -> -1; F_{ba} u^b u^a").unwrap();
        assert_eq!(s.rules.len(), 1);
        assert!(canonicalize(&s.expr).unwrap().is_zero());
    }

    #[test]
    fn leibniz_over_products() {
        let e = p("D[eta,a] (f h)");
        assert_eq!(e.terms.len(), 2);
    }

    #[test]
    fn constants_and_division() {
        let e = p("-1/(4 pi) D[g,^a] D[g,a] bar[A]_b");
        assert_eq!(print::expr_to_string(&e), "-1/4 pi^-1 D[g,^a] D[g,a] bar[A]_b");
        let again = p(&print::expr_to_string(&e));
        assert_eq!(again, e);
    }

    #[test]
    fn scalar_field_powers() {
        let e = p("rho^2 u_a");
        assert_eq!(e.terms[0].factors.len(), 3);
    }

    #[test]
    fn round_trip_source() {
        let src = "antisym F {1 2}; F_{ac} F_b^c - 1/4 g_{ab} F_{de} F^{de}";
        let s = parse_tensor(&src.replace("g_", "eta_")).unwrap();
        let printed = print::to_source(&s.expr);
        assert_eq!(parse_tensor(&printed).unwrap().expr, s.expr);
    }
}
