//! Side conditions such as `u^a u_a = −1` applied as rewrite rules.

use std::collections::{BTreeMap, BTreeSet};

use super::canon::canonicalize;
use super::derivative::differentiate_all;
use super::expr::{fresh_name, Derivative, Factor, TensorExpr, Term};
use super::generalize::generalize;
use super::index::IndexLabel;
use crate::error::{Error, Result};

pub const CONSTRAINT_CAP: usize = 1_000;

/// `pattern → replacement`. A single-factor pattern also matches under
/// extra outer derivatives, which are then applied to the replacement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintRule {
    pub pattern: Vec<Factor>,
    pub replacement: TensorExpr,
}

fn measure(t: &Term) -> (usize, usize) {
    (t.factors.len(), t.derivative_count())
}

impl ConstraintRule {
    /// Validates index agreement and the decreasing measure
    /// (factor count, derivative count).
    pub fn new(pattern: Term, replacement: TensorExpr) -> Result<Self> {
        if pattern.factors.is_empty() {
            return Err(Error::InvalidRule("pattern has no tensor factors".into()));
        }
        let replacement = replacement.scale(&pattern.scalar.inv()?);
        let mut free = pattern.index_structure()?.free;
        free.sort();
        if !replacement.is_zero() && replacement.free_indices()? != free {
            return Err(Error::InvalidRule(format!(
                "free indices of `{pattern}` and `{replacement}` differ"
            )));
        }
        let m = measure(&pattern);
        if let Some(t) = replacement.terms.iter().find(|t| measure(t) >= m) {
            return Err(Error::InvalidRule(format!(
                "replacement term `{t}` does not reduce (factors, derivatives) below {m:?}"
            )));
        }
        Ok(Self { pattern: pattern.factors, replacement })
    }

    pub fn pattern_term(&self) -> Term {
        Term::new(super::expr::Scalar::one(), self.pattern.clone())
    }

    /// The same side condition on the curved side.
    pub fn generalized(&self) -> Result<Self> {
        let p = generalize(&TensorExpr::from_terms(vec![self.pattern_term()]))?;
        Self::new(p.terms[0].clone(), generalize(&self.replacement)?)
    }
}

impl std::fmt::Display for ConstraintRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} -> {}", self.pattern_term(), self.replacement)
    }
}

#[derive(Clone, Debug)]
struct Match {
    targets: Vec<usize>,
    /// pattern index name → (target name, variance flipped)
    map: BTreeMap<String, (String, bool)>,
    outer: Vec<Derivative>,
}

fn unify(map: &mut BTreeMap<String, (String, bool)>, p: &IndexLabel, t: &IndexLabel) -> bool {
    let flip = p.variance != t.variance;
    match map.get(&p.name) {
        Some((n, _)) => *n == t.name,
        None => {
            map.insert(p.name.clone(), (t.name.clone(), flip));
            true
        }
    }
}

fn match_factor(p: &Factor, t: &Factor, single: bool, m: &mut Match) -> bool {
    if p.symbol != t.symbol || p.indices.len() != t.indices.len() {
        return false;
    }
    let extra = match t.prefix.len().checked_sub(p.prefix.len()) {
        Some(0) => 0,
        Some(k) if single => k,
        _ => return false,
    };
    for (pd, td) in p.prefix.iter().zip(&t.prefix[extra..]) {
        if pd.connection != td.connection || !unify(&mut m.map, &pd.index, &td.index) {
            return false;
        }
    }
    for (pl, tl) in p.indices.iter().zip(&t.indices) {
        if !unify(&mut m.map, pl, tl) {
            return false;
        }
    }
    m.outer = t.prefix[..extra].to_vec();
    true
}

fn search(rule: &ConstraintRule, target: &Term, dummies: &BTreeSet<String>, m: Match) -> Option<Match> {
    let j = m.targets.len();
    if j == rule.pattern.len() {
        // pattern dummies must map to distinct target names
        let mut seen = BTreeSet::new();
        for d in dummies {
            if !seen.insert(&m.map[d].0) {
                return None;
            }
        }
        return Some(m);
    }
    for (ti, tf) in target.factors.iter().enumerate() {
        if m.targets.contains(&ti) {
            continue;
        }
        let mut next = m.clone();
        if match_factor(&rule.pattern[j], tf, rule.pattern.len() == 1, &mut next) {
            next.targets.push(ti);
            if let Some(found) = search(rule, target, dummies, next) {
                return Some(found);
            }
        }
    }
    None
}

fn find_match(rule: &ConstraintRule, target: &Term) -> Option<Match> {
    let dummies: BTreeSet<String> = rule.pattern_term().index_structure().ok()?.dummies.into_iter().collect();
    search(rule, target, &dummies, Match { targets: Vec::new(), map: BTreeMap::new(), outer: Vec::new() })
}

fn rewrite(rule: &ConstraintRule, target: &Term, m: &Match) -> Result<Vec<Term>> {
    let rest: Vec<Factor> =
        target.factors.iter().enumerate().filter(|(i, _)| !m.targets.contains(i)).map(|(_, f)| f.clone()).collect();
    let mut used = target.names();
    let mut out = Vec::new();
    for r in &rule.replacement.terms {
        let st = r.index_structure()?;
        let mut renamed = r.clone();
        let mut dummy_map = BTreeMap::new();
        for d in &st.dummies {
            let fresh = fresh_name(&used);
            used.insert(fresh.clone());
            dummy_map.insert(d.clone(), fresh);
        }
        renamed = renamed.rename(&|l: &IndexLabel| {
            if let Some((n, flip)) = m.map.get(&l.name).filter(|_| !dummy_map.contains_key(&l.name)) {
                IndexLabel::new(n.clone(), if *flip { l.variance.flip() } else { l.variance })
            } else if let Some(n) = dummy_map.get(&l.name) {
                IndexLabel::new(n.clone(), l.variance)
            } else {
                l.clone()
            }
        });
        let image = differentiate_all(&TensorExpr { terms: vec![renamed] }, &m.outer)?;
        for t in image.terms {
            let mut factors = rest.clone();
            factors.extend(t.factors);
            out.push(Term::new(target.scalar.mul(&t.scalar), factors));
        }
    }
    Ok(out)
}

/// One application of the first rule matching the first possible term.
/// Returns `(rule, term)` positions with the rewritten expression.
pub fn apply_once(e: &TensorExpr, rules: &[ConstraintRule]) -> Result<Option<(usize, usize, TensorExpr)>> {
    for (ti, t) in e.terms.iter().enumerate() {
        for (ri, rule) in rules.iter().enumerate() {
            if let Some(m) = find_match(rule, t) {
                let mut terms = e.terms.clone();
                let new = rewrite(rule, t, &m)?;
                terms.splice(ti..ti + 1, new);
                return Ok(Some((ri, ti, TensorExpr::from_terms(terms))));
            }
        }
    }
    Ok(None)
}

/// Rewrites to a fixpoint, canonicalizing between rounds. `on_step` sees
/// the rule used and the canonical result of each round.
pub fn apply_constraints_with(
    e: &TensorExpr,
    rules: &[ConstraintRule],
    mut on_step: impl FnMut(usize, &TensorExpr),
) -> Result<TensorExpr> {
    let mut cur = canonicalize(e)?;
    for _ in 0..CONSTRAINT_CAP {
        match apply_once(&cur, rules)? {
            None => return Ok(cur),
            Some((ri, _, next)) => {
                cur = canonicalize(&next)?;
                on_step(ri, &cur);
            }
        }
    }
    Err(Error::NonTerminating { iterations: CONSTRAINT_CAP, last: cur.to_string() })
}

pub fn apply_constraints(e: &TensorExpr, rules: &[ConstraintRule]) -> Result<TensorExpr> {
    apply_constraints_with(e, rules, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::expr::{labels, Connection, Scalar};
    use crate::tensor::symbol::{Side, TensorSymbol};

    fn u(spec: &str) -> Factor {
        Factor::new(TensorSymbol::generic("u", Side::Flat), labels(spec))
    }

    fn x() -> Factor {
        Factor::new(TensorSymbol::generic("X", Side::Flat), vec![])
    }

    fn norm_rule() -> ConstraintRule {
        ConstraintRule::new(
            Term::new(Scalar::one(), vec![u("^a"), u("_a")]),
            TensorExpr::scalar(Scalar::integer(-1)),
        )
        .unwrap()
    }

    #[test]
    fn normalization_rule() {
        let e = TensorExpr::from_terms(vec![Term::new(Scalar::one(), vec![u("^b"), u("_b"), x()])]);
        let out = apply_constraints(&e, &[norm_rule()]).unwrap();
        let expected = canonicalize(&TensorExpr::from_terms(vec![Term::new(Scalar::integer(-1), vec![x()])])).unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn divergence_rule_under_outer_derivative() {
        let d = |l: IndexLabel| Derivative::new(Connection::Flat, l);
        let a = |spec: &str| Factor::new(TensorSymbol::generic("A", Side::Flat), labels(spec));
        let rule =
            ConstraintRule::new(Term::new(Scalar::one(), vec![a("_b").with_prefix(vec![d(IndexLabel::up("b"))])]), TensorExpr::zero())
                .unwrap();
        let e = TensorExpr::from_factor(a("^c").with_prefix(vec![d(IndexLabel::down("e")), d(IndexLabel::down("c"))]));
        assert!(apply_constraints(&e, &[rule]).unwrap().is_zero());
    }

    #[test]
    fn no_match_is_identity() {
        let e = TensorExpr::from_factor(x());
        assert_eq!(apply_constraints(&e, &[norm_rule()]).unwrap(), canonicalize(&e).unwrap());
    }

    #[test]
    fn growing_rule_rejected() {
        let r = ConstraintRule::new(
            Term::new(Scalar::one(), vec![x()]),
            TensorExpr::from_terms(vec![Term::new(Scalar::one(), vec![x(), x()])]),
        );
        assert!(matches!(r, Err(Error::InvalidRule(_))));
    }

    #[test]
    fn free_index_mismatch_rejected() {
        let r = ConstraintRule::new(Term::new(Scalar::one(), vec![u("^a"), u("_b")]), TensorExpr::zero());
        assert!(r.is_ok());
        let r = ConstraintRule::new(
            Term::new(Scalar::one(), vec![u("^a"), u("_b")]),
            TensorExpr::from_factor(u("^a")),
        );
        assert!(matches!(r, Err(Error::InvalidRule(_))));
    }
}
