//! Canonical form of tensor expressions.
//!
//! Each term is reduced (metric and Kronecker factors absorbed, curvature
//! self-contractions rewritten as Ricci objects) and then the lexicographically
//! smallest encoding is searched over every monoterm symmetry of every factor
//! and every factor order compatible with a skeleton sort. Dummy names do not
//! enter the encoding, so the result is invariant under relabeling.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::expr::{name_pool, Connection, Constant, Factor, Scalar, TensorExpr, Term};
use super::index::{IndexLabel, Variance};
use super::symbol::{Side, SymbolKind, TensorSymbol};
use crate::error::{Error, Result};
use crate::kernel::Rational;

/// Upper bound on encodings examined per term.
pub const SEARCH_BUDGET: usize = 2_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CanonOptions {
    /// Treat all-flat derivative prefixes as commuting.
    pub commute_flat: bool,
}

pub fn canonicalize(e: &TensorExpr) -> Result<TensorExpr> {
    canonicalize_with(e, CanonOptions::default())
}

/// True when `a - b` canonicalizes to zero.
pub fn canonical_equal(a: &TensorExpr, b: &TensorExpr) -> Result<bool> {
    Ok(canonicalize(&a.sub(b))?.is_zero())
}

pub fn canonicalize_with(e: &TensorExpr, opts: CanonOptions) -> Result<TensorExpr> {
    let free = e.free_indices()?;
    e.side()?;
    let free_names: BTreeSet<String> = free.iter().map(|l| l.name.clone()).collect();
    let mut collected: BTreeMap<(String, Vec<(Constant, i32)>), (Rational, Term)> = BTreeMap::new();
    for t in &e.terms {
        let Some(t) = reduce_term(t)? else { continue };
        let Some((key, sign, canon)) = canonical_term(&t, &free_names, opts)? else { continue };
        let coeff = if sign > 0 { t.scalar.rational.clone() } else { -t.scalar.rational.clone() };
        let entry = collected
            .entry((key, t.scalar.monomial_key()))
            .or_insert_with(|| (Rational::from_integer(0.into()), canon));
        entry.0 += coeff;
    }
    let terms = collected
        .into_iter()
        .filter(|(_, (r, _))| *r != Rational::from_integer(0.into()))
        .map(|((_, mono), (r, canon))| {
            let mut s = Scalar::rational(r);
            s.constants = mono.into_iter().collect();
            Term::new(s, canon.factors)
        })
        .collect();
    Ok(TensorExpr { terms })
}

/// Location of one label inside a term: factor, then position among
/// `prefix ++ indices`.
type Slot = (usize, usize);

fn set_label(t: &mut Term, (f, k): Slot, l: IndexLabel) {
    let fac = &mut t.factors[f];
    if k < fac.prefix.len() {
        fac.prefix[k].index = l;
    } else {
        let p = fac.prefix.len();
        fac.indices[k - p] = l;
    }
}

fn find_name(t: &Term, name: &str, skip_factor: usize) -> Option<Slot> {
    for (fi, f) in t.factors.iter().enumerate() {
        if fi == skip_factor {
            continue;
        }
        if let Some(k) = f.labels().position(|l| l.name == name) {
            return Some((fi, k));
        }
    }
    None
}

/// Absorbs metrics and Kronecker deltas, evaluates traces and rewrites
/// curvature self-contractions. `None` means the term vanishes.
pub(crate) fn reduce_term(t: &Term) -> Result<Option<Term>> {
    let mut t = t.clone();
    let side = t.side()?;
    'outer: loop {
        for i in 0..t.factors.len() {
            let f = &t.factors[i];
            if !matches!(f.symbol.kind, SymbolKind::Metric | SymbolKind::Kronecker) {
                continue;
            }
            if f.indices.len() != 2 {
                return Err(Error::Index(format!("{} needs two indices", f.symbol.display_name())));
            }
            if !f.prefix.is_empty() {
                // ∇g = 0 for the matching connection; δ is parallel for any.
                return Ok(None);
            }
            let (x, y) = (f.indices[0].clone(), f.indices[1].clone());
            if x.name == y.name {
                t.factors.remove(i);
                t.scalar = t.scalar.mul(&Scalar::constant(Constant::Dim, 1));
                continue 'outer;
            }
            for (slot, other) in [(&x, &y), (&y, &x)] {
                if let Some(loc) = find_name(&t, &slot.name, i) {
                    set_label(&mut t, loc, other.clone());
                    t.factors.remove(i);
                    continue 'outer;
                }
            }
        }
        break;
    }
    for f in &mut t.factors {
        match f.symbol.kind {
            SymbolKind::Metric if f.indices[0].variance != f.indices[1].variance => {
                f.symbol = TensorSymbol::kronecker();
            }
            SymbolKind::Kronecker if f.indices[0].variance == f.indices[1].variance => {
                f.symbol = TensorSymbol::metric(if side == Some(Side::Curved) { Side::Curved } else { Side::Flat });
            }
            _ => {}
        }
    }
    for i in 0..t.factors.len() {
        loop {
            let f = &t.factors[i];
            let rank = f.indices.len();
            let pair = (0..rank)
                .flat_map(|p| (p + 1..rank).map(move |q| (p, q)))
                .find(|&(p, q)| f.indices[p].name == f.indices[q].name);
            let Some((p, q)) = pair else { break };
            match (f.symbol.kind, rank) {
                (SymbolKind::Riemann, 4) => match contract_riemann(f, p, q) {
                    Some((sign, ric)) => {
                        t.factors[i] = ric;
                        if sign < 0 {
                            t.scalar = t.scalar.neg();
                        }
                    }
                    None => return Ok(None),
                },
                (SymbolKind::Ricci, 2) => {
                    let mut r = Factor::new(TensorSymbol::ricci_scalar(), Vec::new());
                    r.prefix = f.prefix.clone();
                    t.factors[i] = r;
                }
                _ => break,
            }
        }
    }
    Ok(Some(t))
}

/// Self-contraction of `R^c_{abd}` stored as slots `(c, a, b, d)`. Read in
/// the order `W = (a, b, d, c)` the tensor is antisymmetric in `W1 W2` and
/// in `W3 W4`, and contracting `W2` with `W4` gives `Ric(W1, W3)`.
fn contract_riemann(f: &Factor, p: usize, q: usize) -> Option<(i8, Factor)> {
    let wald = |pos: usize| if pos == 0 { 4 } else { pos };
    let at = |w: usize| f.indices[if w == 4 { 0 } else { w }].clone();
    let (mut i, mut j) = (wald(p), wald(q));
    if i > j {
        std::mem::swap(&mut i, &mut j);
    }
    let (sign, rest) = match (i, j) {
        (1, 2) | (3, 4) => return None,
        (1, 3) => (1, [2, 4]),
        (2, 4) => (1, [1, 3]),
        (1, 4) => (-1, [2, 3]),
        (2, 3) => (-1, [1, 4]),
        _ => unreachable!(),
    };
    let mut ric = Factor::new(TensorSymbol::ricci(), vec![at(rest[0]), at(rest[1])]);
    ric.prefix = f.prefix.clone();
    Some((sign, ric))
}

/// One symmetry variant of a factor.
struct Variant {
    factor: Factor,
    sign: i8,
    skeleton: String,
}

/// Curvature first, generic fields last, so canonical output reads like
/// `R^c_{abd} T^d`.
fn symbol_code(s: &TensorSymbol) -> String {
    let rank = match s.kind {
        SymbolKind::Riemann => 0,
        SymbolKind::Ricci => 1,
        SymbolKind::RicciScalar => 2,
        SymbolKind::Metric => 3,
        SymbolKind::Kronecker => 4,
        SymbolKind::Generic => 5,
    };
    format!("{}{}:{:?}:{:?}", rank, s.name, s.side, s.symmetries)
}

fn conn_code(c: Connection) -> char {
    match c {
        Connection::Flat => 'f',
        Connection::Curved => 'c',
    }
}

fn skeleton(f: &Factor, free: &BTreeSet<String>) -> String {
    let idx = |l: &IndexLabel| {
        if free.contains(&l.name) {
            format!("{}{}", l.variance.marker(), l.name)
        } else {
            "~".to_string()
        }
    };
    let mut s = symbol_code(&f.symbol);
    s.push('|');
    for d in &f.prefix {
        s.push(conn_code(d.connection));
        s.push_str(&idx(&d.index));
        s.push(',');
    }
    s.push('|');
    for l in &f.indices {
        s.push_str(&idx(l));
        s.push(',');
    }
    s
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        if !next_permutation(&mut p) {
            return out;
        }
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn variants(f: &Factor, free: &BTreeSet<String>, opts: CanonOptions) -> Vec<Variant> {
    let group = f.symbol.slot_group(f.indices.len());
    let prefix_perms = if opts.commute_flat && f.prefix.iter().all(|d| d.connection == Connection::Flat) {
        permutations(f.prefix.len())
    } else {
        vec![(0..f.prefix.len()).collect()]
    };
    let mut out = Vec::new();
    for (perm, sign) in &group {
        for pp in &prefix_perms {
            let factor = Factor {
                symbol: f.symbol.clone(),
                indices: perm.iter().map(|&k| f.indices[k].clone()).collect(),
                prefix: pp.iter().map(|&k| f.prefix[k].clone()).collect(),
            };
            let skeleton = skeleton(&factor, free);
            out.push(Variant { factor, sign: *sign, skeleton });
        }
    }
    out
}

/// Encoding of an ordered factor list with dummies numbered by first
/// occurrence.
fn encode(factors: &[&Factor], free: &BTreeSet<String>) -> String {
    fn push_label<'a>(l: &'a IndexLabel, free: &BTreeSet<String>, ids: &mut HashMap<&'a str, usize>, s: &mut String) {
        if free.contains(&l.name) {
            s.push(l.variance.marker());
            s.push_str(&l.name);
        } else {
            let n = ids.len();
            let k = *ids.entry(l.name.as_str()).or_insert(n);
            s.push('~');
            s.push_str(&k.to_string());
        }
        s.push(',');
    }
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut s = String::new();
    for f in factors {
        s.push_str(&symbol_code(&f.symbol));
        s.push('|');
        for d in &f.prefix {
            s.push(conn_code(d.connection));
            push_label(&d.index, free, &mut ids, &mut s);
        }
        s.push('|');
        for l in &f.indices {
            push_label(l, free, &mut ids, &mut s);
        }
        s.push(';');
    }
    s
}

/// Renames dummies of the chosen arrangement to canonical names with the
/// first occurrence lowered.
fn materialize(factors: &[&Factor], free: &BTreeSet<String>) -> Vec<Factor> {
    let mut pool = name_pool(free);
    let mut names: HashMap<String, String> = HashMap::new();
    let mut out = Vec::new();
    for f in factors {
        let mut g = (*f).clone();
        for l in g.labels_mut() {
            if free.contains(&l.name) {
                continue;
            }
            match names.get(&l.name) {
                Some(n) => *l = IndexLabel::new(n.clone(), Variance::Up),
                None => {
                    let n = pool.next().expect("infinite pool");
                    names.insert(l.name.clone(), n.clone());
                    *l = IndexLabel::new(n, Variance::Down);
                }
            }
        }
        out.push(g);
    }
    out
}

/// Canonical encoding, the sign relating the input to the canonical
/// representative, and that representative. `None` when the term is forced
/// to vanish by its symmetries.
fn canonical_term(t: &Term, free: &BTreeSet<String>, opts: CanonOptions) -> Result<Option<(String, i8, Term)>> {
    let vars: Vec<Vec<Variant>> = t.factors.iter().map(|f| variants(f, free, opts)).collect();
    let n = vars.len();
    let mut choice = vec![0usize; n];
    let mut best: Option<(String, Vec<Factor>)> = None;
    let (mut best_pos, mut best_neg) = (false, false);
    let mut budget = SEARCH_BUDGET;
    loop {
        let sign: i8 = (0..n).map(|i| vars[i][choice[i]].sign).product();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| vars[a][choice[a]].skeleton.cmp(&vars[b][choice[b]].skeleton));
        // runs of equal skeletons may be permuted among themselves
        let mut groups: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for k in 1..=n {
            if k == n || vars[order[k]][choice[order[k]]].skeleton != vars[order[start]][choice[order[start]]].skeleton {
                groups.push((start, k));
                start = k;
            }
        }
        let mut arrangement = order.clone();
        loop {
            if budget == 0 {
                return Err(Error::SearchBudget(super::print::term_to_string(t)));
            }
            budget -= 1;
            let facs: Vec<&Factor> = arrangement.iter().map(|&i| &vars[i][choice[i]].factor).collect();
            let code = encode(&facs, free);
            let better = match &best {
                None => true,
                Some((b, _)) => code < *b,
            };
            if better {
                best = Some((code, materialize(&facs, free)));
                best_pos = sign > 0;
                best_neg = sign < 0;
            } else if best.as_ref().is_some_and(|(b, _)| *b == code) {
                best_pos |= sign > 0;
                best_neg |= sign < 0;
            }
            // advance the innermost group permutation; reset exhausted ones
            let mut advanced = false;
            for &(s, e) in groups.iter().rev() {
                if next_permutation(&mut arrangement[s..e]) {
                    advanced = true;
                    break;
                }
                // next_permutation leaves the slice sorted ascending again
            }
            if !advanced {
                break;
            }
        }
        // odometer over variant choices
        let mut k = n;
        loop {
            if k == 0 {
                let (code, factors) = best.expect("at least one arrangement");
                if best_pos && best_neg {
                    return Ok(None);
                }
                let sign = if best_pos { 1 } else { -1 };
                return Ok(Some((code, sign, Term::new(Scalar::one(), factors))));
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < vars[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}
