//! Covariant derivatives: Leibniz expansion, flat commutation and curved
//! commutation with Riemann corrections.
//!
//! Sign convention (pinned by the coordinate oracle):
//!
//! ```text
//! [∇_a, ∇_b] T^c = −R^c_{abd} T^d
//! [∇_a, ∇_b] ω_c = +R^d_{abc} ω_d
//! ```
//!
//! and one such term per index of a general tensor.

use std::collections::BTreeSet;

use super::canon::{canonicalize, canonicalize_with, CanonOptions};
use super::expr::{fresh_name, Connection, Derivative, Factor, Scalar, TensorExpr, Term};
use super::index::{IndexLabel, Variance};
use super::symbol::TensorSymbol;
use crate::error::{Error, Result};
use crate::kernel::rat;

/// Leibniz rule for one derivative applied to every term.
pub fn differentiate(e: &TensorExpr, d: &Derivative) -> Result<TensorExpr> {
    let mut out = Vec::new();
    for t in &e.terms {
        let avoid: BTreeSet<String> = [d.index.name.clone()].into();
        let t = t.freshen_dummies(&avoid)?;
        for i in 0..t.factors.len() {
            let mut nt = t.clone();
            nt.factors[i].prefix.insert(0, d.clone());
            out.push(nt);
        }
    }
    Ok(TensorExpr::from_terms(out))
}

/// Applies `prefix` (outermost first) to `e`.
pub fn differentiate_all(e: &TensorExpr, prefix: &[Derivative]) -> Result<TensorExpr> {
    let mut cur = e.clone();
    for d in prefix.iter().rev() {
        cur = differentiate(&cur, d)?;
    }
    Ok(cur)
}

/// Sorts flat derivative prefixes using `∇^(η)_a ∇^(η)_b = ∇^(η)_b ∇^(η)_a`.
pub fn flat_commute_sort(e: &TensorExpr) -> Result<TensorExpr> {
    for t in &e.terms {
        for f in &t.factors {
            if f.prefix.iter().any(|d| d.connection == Connection::Curved) {
                return Err(Error::WrongConnection(f.to_string()));
            }
        }
    }
    canonicalize_with(e, CanonOptions { commute_flat: true })
}

/// Position of the outer derivative of an adjacent pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Location {
    pub term: usize,
    pub factor: usize,
    pub prefix: usize,
}

impl Location {
    pub fn new(term: usize, factor: usize, prefix: usize) -> Self {
        Self { term, factor, prefix }
    }
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {}", self.term, self.factor, self.prefix)
    }
}

fn check_location(e: &TensorExpr, loc: Location) -> Result<&Factor> {
    let f = e
        .terms
        .get(loc.term)
        .and_then(|t| t.factors.get(loc.factor))
        .ok_or_else(|| Error::InvalidLocation(format!("no factor at {loc}")))?;
    if loc.prefix + 1 >= f.prefix.len() {
        return Err(Error::InvalidLocation(format!("{f} has no derivative pair at position {}", loc.prefix)));
    }
    for d in &f.prefix[loc.prefix..loc.prefix + 2] {
        if d.connection != Connection::Curved {
            return Err(Error::InvalidLocation(format!("derivative pair at {loc} of {f} is not curved")));
        }
    }
    Ok(f)
}

/// Swaps the curved derivatives at `loc` and adds the Riemann corrections,
/// leaving the value of the expression unchanged.
pub fn curved_commute(e: &TensorExpr, loc: Location) -> Result<TensorExpr> {
    let f = check_location(e, loc)?.clone();
    let term = &e.terms[loc.term];
    let p = loc.prefix;
    let outer = &f.prefix[..p];
    let (x, y) = (f.prefix[p].index.clone(), f.prefix[p + 1].index.clone());
    let body = Factor { symbol: f.symbol.clone(), indices: f.indices.clone(), prefix: f.prefix[p + 2..].to_vec() };

    let mut swapped = term.clone();
    swapped.factors[loc.factor].prefix.swap(p, p + 1);

    let rest: Vec<Factor> =
        term.factors.iter().enumerate().filter(|(i, _)| *i != loc.factor).map(|(_, g)| g.clone()).collect();
    let z = fresh_name(&term.names());

    let mut corrections = TensorExpr::zero();
    let nlabels = body.prefix.len() + body.indices.len();
    for k in 0..nlabels {
        let label = if k < body.prefix.len() { &body.prefix[k].index } else { &body.indices[k - body.prefix.len()] };
        let mut moved = body.clone();
        let (riemann, sign) = match label.variance {
            Variance::Up => (vec![label.clone(), x.clone(), y.clone(), IndexLabel::down(&z)], -1),
            Variance::Down => (vec![IndexLabel::up(&z), x.clone(), y.clone(), label.clone()], 1),
        };
        let replacement = IndexLabel::new(&z, label.variance);
        if k < moved.prefix.len() {
            moved.prefix[k].index = replacement;
        } else {
            let i = k - moved.prefix.len();
            moved.indices[i] = replacement;
        }
        let r = Factor::new(TensorSymbol::riemann(), riemann);
        let corr = TensorExpr::from_terms(vec![Term::new(Scalar::integer(sign), vec![r, moved])]);
        corrections = corrections.add(&differentiate_all(&corr, outer)?);
    }

    let mut terms: Vec<Term> = e.terms.clone();
    terms[loc.term] = swapped;
    for c in corrections.terms {
        let mut factors = rest.clone();
        factors.extend(c.factors);
        terms.push(Term::new(term.scalar.mul(&c.scalar), factors));
    }
    Ok(TensorExpr::from_terms(terms))
}

/// `½ e + ½ curved_commute(e, loc)`: equal to `e`, but symmetric in the
/// order of the chosen derivative pair.
pub fn symmetrize_at(e: &TensorExpr, loc: Location) -> Result<TensorExpr> {
    let half = Scalar::rational(rat(1, 2));
    let swapped = curved_commute(e, loc)?;
    Ok(e.scale(&half).add(&swapped.scale(&half)))
}

fn sort_key(l: &IndexLabel, free: &BTreeSet<String>) -> (u8, String) {
    if free.contains(&l.name) {
        (0, l.name.clone())
    } else {
        (1, String::new())
    }
}

/// First adjacent curved pair whose free index order is not sorted.
pub fn next_unsorted(e: &TensorExpr) -> Result<Option<Location>> {
    let free: BTreeSet<String> = e.free_indices()?.into_iter().map(|l| l.name).collect();
    for (ti, t) in e.terms.iter().enumerate() {
        for (fi, f) in t.factors.iter().enumerate() {
            for p in 0..f.prefix.len().saturating_sub(1) {
                let (a, b) = (&f.prefix[p], &f.prefix[p + 1]);
                if a.connection == Connection::Curved
                    && b.connection == Connection::Curved
                    && sort_key(&a.index, &free) > sort_key(&b.index, &free)
                {
                    return Ok(Some(Location::new(ti, fi, p)));
                }
            }
        }
    }
    Ok(None)
}

pub const SORT_CAP: usize = 10_000;

/// Brings curved prefixes into a common order: free indices first, by
/// name; dummies keep their relative order. Every swap is a
/// [`curved_commute`], followed by [`canonicalize`]; `on_step` sees each
/// location and the intermediate results.
pub fn curved_sort_with(
    e: &TensorExpr,
    mut on_step: impl FnMut(Location, &TensorExpr, &TensorExpr),
) -> Result<TensorExpr> {
    let mut cur = canonicalize(e)?;
    for _ in 0..SORT_CAP {
        let Some(loc) = next_unsorted(&cur)? else { return Ok(cur) };
        let swapped = curved_commute(&cur, loc)?;
        let next = canonicalize(&swapped)?;
        on_step(loc, &swapped, &next);
        cur = next;
    }
    Err(Error::NonTerminating { iterations: SORT_CAP, last: cur.to_string() })
}

pub fn curved_sort(e: &TensorExpr) -> Result<TensorExpr> {
    curved_sort_with(e, |_, _, _| {})
}

/// Symmetrizes, in every term, the first curved derivative pair carrying
/// two dummies, then canonicalizes. Relabeling then relates the two orders.
pub fn symmetrize_dummy_pairs(e: &TensorExpr) -> Result<TensorExpr> {
    let e = canonicalize(e)?;
    let free: BTreeSet<String> = e.free_indices()?.into_iter().map(|l| l.name).collect();
    let mut out = TensorExpr::zero();
    for t in &e.terms {
        let single = TensorExpr { terms: vec![t.clone()] };
        let loc = t.factors.iter().enumerate().find_map(|(fi, f)| {
            (0..f.prefix.len().saturating_sub(1)).find_map(|p| {
                let (a, b) = (&f.prefix[p], &f.prefix[p + 1]);
                let pair_ok = a.connection == Connection::Curved
                    && b.connection == Connection::Curved
                    && !free.contains(&a.index.name)
                    && !free.contains(&b.index.name);
                pair_ok.then_some(Location::new(0, fi, p))
            })
        });
        out = out.add(&match loc {
            Some(loc) => symmetrize_at(&single, loc)?,
            None => single,
        });
    }
    canonicalize(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::expr::labels;
    use crate::tensor::symbol::Side;

    fn curved(name: &str, spec: &str, prefix: &str) -> Factor {
        let prefix = labels(prefix).into_iter().map(|l| Derivative::new(Connection::Curved, l)).collect();
        Factor::new(TensorSymbol::generic(name, Side::Curved), labels(spec)).with_prefix(prefix)
    }

    fn one(f: Factor) -> TensorExpr {
        TensorExpr::from_factor(f)
    }

    #[test]
    fn vector_commutation_matches_convention() {
        let e = one(curved("T", "^c", "_ab"));
        let swapped = curved_commute(&e, Location::new(0, 0, 0)).unwrap();
        let expected = one(curved("T", "^c", "_ba")).sub(&TensorExpr::from_terms(vec![Term::new(
            Scalar::one(),
            vec![Factor::new(TensorSymbol::riemann(), labels("^c_abd")), curved("T", "^d", "")],
        )]));
        assert!(canonicalize(&swapped.sub(&expected)).unwrap().is_zero());
    }

    #[test]
    fn scalar_commutes_freely() {
        let e = one(curved("f", "", "_ab"));
        let swapped = canonicalize(&curved_commute(&e, Location::new(0, 0, 0)).unwrap()).unwrap();
        assert_eq!(swapped, canonicalize(&one(curved("f", "", "_ba"))).unwrap());
    }

    #[test]
    fn flat_pair_is_rejected() {
        let f = Factor::new(TensorSymbol::generic("T", Side::Flat), labels("^c")).with_prefix(vec![
            Derivative::new(Connection::Flat, IndexLabel::down("a")),
            Derivative::new(Connection::Flat, IndexLabel::down("b")),
        ]);
        assert!(matches!(curved_commute(&one(f), Location::new(0, 0, 0)), Err(Error::InvalidLocation(_))));
    }

    #[test]
    fn flat_sort_rejects_curved() {
        let e = one(curved("T", "^c", "_ab"));
        assert!(matches!(flat_commute_sort(&e), Err(Error::WrongConnection(_))));
    }

    #[test]
    fn sorting_twice_is_stable() {
        let e = one(curved("T", "^c", "_ba"));
        let s = curved_sort(&e).unwrap();
        assert_eq!(curved_sort(&s).unwrap(), s);
        assert!(next_unsorted(&s).unwrap().is_none());
    }

    #[test]
    fn leibniz_on_product() {
        let e = TensorExpr::from_terms(vec![Term::new(
            Scalar::one(),
            vec![curved("u", "^a", ""), curved("v", "_a", "")],
        )]);
        let d = differentiate(&e, &Derivative::new(Connection::Curved, IndexLabel::down("a"))).unwrap();
        assert_eq!(d.terms.len(), 2);
        assert_eq!(d.free_indices().unwrap(), labels("_a"));
    }
}
