use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::index::{dummy_name_pool, IndexLabel, Variance};
use super::symbol::{Side, SymbolKind, TensorSymbol};
use crate::error::{Error, Result};
use crate::kernel::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connection {
    Flat,
    Curved,
}

impl Connection {
    pub fn side(self) -> Side {
        match self {
            Connection::Flat => Side::Flat,
            Connection::Curved => Side::Curved,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Derivative {
    pub connection: Connection,
    pub index: IndexLabel,
}

impl Derivative {
    pub fn new(connection: Connection, index: IndexLabel) -> Self {
        Self { connection, index }
    }
}

/// A tensor symbol with its slot labels under a stack of covariant
/// derivatives. `prefix[0]` is the outermost derivative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub symbol: TensorSymbol,
    pub indices: Vec<IndexLabel>,
    pub prefix: Vec<Derivative>,
}

impl Factor {
    pub fn new(symbol: TensorSymbol, indices: Vec<IndexLabel>) -> Self {
        Self { symbol, indices, prefix: Vec::new() }
    }

    pub fn with_prefix(mut self, prefix: Vec<Derivative>) -> Self {
        self.prefix = prefix;
        self
    }

    /// Derivative indices then slot indices.
    pub fn labels(&self) -> impl Iterator<Item = &IndexLabel> {
        self.prefix.iter().map(|d| &d.index).chain(self.indices.iter())
    }

    pub(crate) fn labels_mut(&mut self) -> impl Iterator<Item = &mut IndexLabel> {
        self.prefix.iter_mut().map(|d| &mut d.index).chain(self.indices.iter_mut())
    }

    /// Tensor order of the factor including its derivative indices.
    pub fn order(&self) -> usize {
        self.prefix.len() + self.indices.len()
    }
}

/// Opaque scalar constants that commute with everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Pi,
    Mass,
    Charge,
    /// Spacetime dimension, produced by the trace `δ^a_a`.
    Dim,
}

impl Constant {
    pub const ALL: [Constant; 4] = [Constant::Pi, Constant::Mass, Constant::Charge, Constant::Dim];

    pub fn keyword(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::Mass => "m",
            Constant::Charge => "charge",
            Constant::Dim => "dim",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.keyword() == s)
    }

    pub fn latex(self) -> &'static str {
        match self {
            Constant::Pi => "\\pi",
            Constant::Mass => "m",
            Constant::Charge => "q",
            Constant::Dim => "n",
        }
    }
}

/// Rational times a monomial in the opaque constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub rational: Rational,
    pub constants: BTreeMap<Constant, i32>,
}

impl Scalar {
    pub fn rational(r: Rational) -> Self {
        Self { rational: r, constants: BTreeMap::new() }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational::from_integer(n.into()))
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn constant(c: Constant, exp: i32) -> Self {
        let mut s = Self::one();
        if exp != 0 {
            s.constants.insert(c, exp);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rational.is_one() && self.constants.is_empty()
    }

    pub fn is_negative(&self) -> bool {
        self.rational.is_negative()
    }

    pub fn neg(&self) -> Self {
        Self { rational: -self.rational.clone(), constants: self.constants.clone() }
    }

    pub fn abs(&self) -> Self {
        Self { rational: self.rational.abs(), constants: self.constants.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut constants = self.constants.clone();
        for (c, e) in &other.constants {
            let v = constants.entry(*c).or_insert(0);
            *v += e;
            if *v == 0 {
                constants.remove(c);
            }
        }
        Self { rational: &self.rational * &other.rational, constants }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self {
            rational: self.rational.recip(),
            constants: self.constants.iter().map(|(c, e)| (*c, -e)).collect(),
        })
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Constant monomial only, used as a collection key.
    pub fn monomial_key(&self) -> Vec<(Constant, i32)> {
        self.constants.iter().map(|(c, e)| (*c, *e)).collect()
    }
}

/// Free indices in first-occurrence order, and dummy names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexStructure {
    pub free: Vec<IndexLabel>,
    pub dummies: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub scalar: Scalar,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn new(scalar: Scalar, factors: Vec<Factor>) -> Self {
        Self { scalar, factors }
    }

    pub fn scalar(s: Scalar) -> Self {
        Self::new(s, Vec::new())
    }

    pub fn labels(&self) -> impl Iterator<Item = &IndexLabel> {
        self.factors.iter().flat_map(|f| f.labels())
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.labels().map(|l| l.name.clone()).collect()
    }

    pub fn index_structure(&self) -> Result<IndexStructure> {
        let mut seen: BTreeMap<&str, Vec<&IndexLabel>> = BTreeMap::new();
        let mut order: Vec<&str> = Vec::new();
        for l in self.labels() {
            let e = seen.entry(&l.name).or_default();
            if e.is_empty() {
                order.push(&l.name);
            }
            e.push(l);
        }
        let mut free = Vec::new();
        let mut dummies = Vec::new();
        for name in order {
            let occ = &seen[name];
            match occ.len() {
                1 => free.push(occ[0].clone()),
                2 if occ[0].variance != occ[1].variance => dummies.push(name.to_string()),
                2 => {
                    return Err(Error::Index(format!(
                        "index `{}` repeated with the same variance in {}",
                        name,
                        super::print::term_to_string(self)
                    )))
                }
                n => {
                    return Err(Error::Index(format!(
                        "index `{}` occurs {} times in {}",
                        name,
                        n,
                        super::print::term_to_string(self)
                    )))
                }
            }
        }
        Ok(IndexStructure { free, dummies })
    }

    pub fn rename(&self, f: &impl Fn(&IndexLabel) -> IndexLabel) -> Term {
        let mut t = self.clone();
        for fac in &mut t.factors {
            for l in fac.labels_mut() {
                *l = f(l);
            }
        }
        t
    }

    /// Rename index names through a map; variances are kept.
    pub fn rename_names(&self, map: &BTreeMap<String, String>) -> Term {
        self.rename(&|l| match map.get(&l.name) {
            Some(n) => IndexLabel::new(n.clone(), l.variance),
            None => l.clone(),
        })
    }

    /// Rename the dummies of `self` away from every name in `avoid`.
    pub fn freshen_dummies(&self, avoid: &BTreeSet<String>) -> Result<Term> {
        let st = self.index_structure()?;
        let mut used: BTreeSet<String> = avoid.iter().cloned().chain(self.names()).collect();
        let mut map = BTreeMap::new();
        for d in st.dummies {
            if avoid.contains(&d) {
                let fresh = fresh_name(&used);
                used.insert(fresh.clone());
                map.insert(d, fresh);
            }
        }
        Ok(self.rename_names(&map))
    }

    /// Product with contraction of repeated free indices. Dummies are
    /// renamed so they cannot collide with the other operand.
    pub fn mul(&self, other: &Term) -> Result<Term> {
        let other = other.freshen_dummies(&self.names())?;
        let lhs = self.freshen_dummies(&other.names())?;
        let mut factors = lhs.factors;
        factors.extend(other.factors);
        Ok(Term::new(lhs.scalar.mul(&other.scalar), factors))
    }

    pub fn derivative_count(&self) -> usize {
        self.factors.iter().map(|f| f.prefix.len()).sum()
    }

    /// Side of the term, if it contains any side-bearing object.
    pub fn side(&self) -> Result<Option<Side>> {
        let mut side: Option<Side> = None;
        for f in &self.factors {
            let sides = std::iter::once(f.symbol.side).chain(f.prefix.iter().map(|d| d.connection.side()));
            for s in sides.filter(|s| *s != Side::Neutral) {
                match side {
                    Some(prev) if prev != s => {
                        return Err(Error::MixedSides(super::print::term_to_string(self)))
                    }
                    _ => side = Some(s),
                }
            }
        }
        Ok(side)
    }
}

/// Intermediate dummy names (`z0`, `z1`, ...) not in `used`.
pub(crate) fn fresh_name(used: &BTreeSet<String>) -> String {
    (0..).map(|k| format!("z{k}")).find(|n| !used.contains(n)).expect("infinite pool")
}

/// Canonical name pool with `taken` names skipped.
pub(crate) fn name_pool(taken: &BTreeSet<String>) -> impl Iterator<Item = String> + '_ {
    dummy_name_pool().filter(move |n| !taken.contains(n))
}

/// A sum of terms. Not necessarily canonical; see
/// [`canonicalize`](super::canon::canonicalize).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TensorExpr {
    pub terms: Vec<Term>,
}

impl TensorExpr {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        Self { terms: terms.into_iter().filter(|t| !t.scalar.is_zero()).collect() }
    }

    pub fn from_factor(f: Factor) -> Self {
        Self::from_terms(vec![Term::new(Scalar::one(), vec![f])])
    }

    pub fn scalar(s: Scalar) -> Self {
        Self::from_terms(vec![Term::scalar(s)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(terms)
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|t| Term::new(t.scalar.neg(), t.factors.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term::new(t.scalar.mul(s), t.factors.clone())).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b)?);
            }
        }
        Ok(Self::from_terms(terms))
    }

    /// Checks index discipline term-wide and returns the free indices
    /// (sorted), which must agree across terms.
    pub fn free_indices(&self) -> Result<Vec<IndexLabel>> {
        let mut out: Option<Vec<IndexLabel>> = None;
        for t in &self.terms {
            let mut free = t.index_structure()?.free;
            free.sort();
            match &out {
                None => out = Some(free),
                Some(prev) if *prev != free => {
                    return Err(Error::Index(format!(
                        "free indices differ between terms: {} vs {}",
                        fmt_labels(prev),
                        fmt_labels(&free)
                    )))
                }
                _ => {}
            }
        }
        Ok(out.unwrap_or_default())
    }

    pub fn side(&self) -> Result<Option<Side>> {
        let mut side = None;
        for t in &self.terms {
            if let Some(s) = t.side()? {
                if side.is_some_and(|p| p != s) {
                    return Err(Error::MixedSides(super::print::expr_to_string(self)));
                }
                side = Some(s);
            }
        }
        Ok(side)
    }

    /// Generic symbols appearing in the expression.
    pub fn generic_symbols(&self) -> BTreeSet<TensorSymbol> {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter())
            .filter(|f| f.symbol.kind == SymbolKind::Generic)
            .map(|f| f.symbol.clone())
            .collect()
    }

    /// Largest factor order (slots plus derivatives).
    pub fn max_factor_order(&self) -> usize {
        self.terms.iter().flat_map(|t| t.factors.iter()).map(Factor::order).max().unwrap_or(0)
    }
}

fn fmt_labels(ls: &[IndexLabel]) -> String {
    if ls.is_empty() {
        return "none".into();
    }
    ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

/// Shorthand for label lists: `labels("^c_ab")` is `[^c, _a, _b]`.
pub fn labels(spec: &str) -> Vec<IndexLabel> {
    let mut v = Variance::Up;
    let mut out = Vec::new();
    let mut chars = spec.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '^' => v = Variance::Up,
            '_' => v = Variance::Down,
            c if c.is_ascii_alphabetic() => {
                let mut name = c.to_string();
                while let Some(d) = chars.peek().copied().filter(|d| d.is_ascii_digit()) {
                    name.push(d);
                    chars.next();
                }
                out.push(IndexLabel::new(name, v));
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_t(name: &str, spec: &str) -> Term {
        Term::new(Scalar::one(), vec![Factor::new(TensorSymbol::generic(name, Side::Flat), labels(spec))])
    }

    #[test]
    fn labels_helper() {
        assert_eq!(labels("^c_a1b"), vec![IndexLabel::up("c"), IndexLabel::down("a1"), IndexLabel::down("b")]);
    }

    #[test]
    fn repeated_same_variance_is_error() {
        let t = vec_t("F", "_aa");
        assert!(matches!(t.index_structure(), Err(Error::Index(_))));
    }

    #[test]
    fn product_renames_clashing_dummies() {
        let a = vec_t("T", "^a_a");
        let b = vec_t("S", "^a_a");
        let p = a.mul(&b).unwrap();
        let st = p.index_structure().unwrap();
        assert!(st.free.is_empty());
        assert_eq!(st.dummies.len(), 2);
    }

    #[test]
    fn free_mismatch_between_terms() {
        let e = TensorExpr::from_terms(vec![vec_t("T", "^a"), vec_t("S", "^b")]);
        assert!(e.free_indices().is_err());
    }

    #[test]
    fn scalar_constants_cancel() {
        let s = Scalar::constant(Constant::Pi, 1).mul(&Scalar::constant(Constant::Pi, -1));
        assert!(s.is_one());
    }
}
