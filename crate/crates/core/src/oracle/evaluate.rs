//! Component evaluation of abstract expressions on a concrete metric.
//!
//! Both connections evaluate to the Levi-Civita connection of the metric,
//! and both `η` and `g` to its components, so a flat expression is only
//! meaningful on a flat metric.

use std::collections::BTreeMap;

use super::component::{multi_indices, ComponentTensor};
use super::curvature::Geometry;
use crate::error::{Error, Result};
use crate::kernel::{rat, RationalFunction, Rational};
use crate::tensor::{Constant, Factor, IndexLabel, Scalar, SymbolKind, TensorExpr, Term, Variance};

/// Component values for generic symbols, keyed by display name (`T` or
/// `bar[T]`). A curved symbol falls back to its flat name.
pub type Bindings = BTreeMap<String, ComponentTensor>;

/// Values substituted for the opaque constants. The dimension comes from
/// the chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantValues {
    pub pi: Rational,
    pub mass: Rational,
    pub charge: Rational,
}

impl Default for ConstantValues {
    fn default() -> Self {
        Self { pi: rat(22, 7), mass: rat(3, 2), charge: rat(5, 3) }
    }
}

impl ConstantValues {
    pub fn value(&self, s: &Scalar, dim: usize) -> Result<Rational> {
        let mut v = s.rational.clone();
        for (c, e) in &s.constants {
            let base = match c {
                Constant::Pi => self.pi.clone(),
                Constant::Mass => self.mass.clone(),
                Constant::Charge => self.charge.clone(),
                Constant::Dim => Rational::from_integer((dim as i64).into()),
            };
            let base = if *e < 0 { base.recip() } else { base };
            for _ in 0..e.unsigned_abs() {
                v *= &base;
            }
        }
        Ok(v)
    }
}

/// Result of an evaluation, slots labelled by the sorted free indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated {
    pub indices: Vec<IndexLabel>,
    pub tensor: ComponentTensor,
}

/// `new[.. i ..] = Σ_j m(i, j) X[.. j ..]` on slot `k`.
fn transform_slot(
    x: &ComponentTensor,
    k: usize,
    to: Variance,
    m: impl Fn(usize, usize) -> RationalFunction,
) -> ComponentTensor {
    let n = x.dim();
    let mut variance = x.variance().to_vec();
    variance[k] = to;
    ComponentTensor::from_fn(x.variables().clone(), variance, |idx| {
        let mut acc = RationalFunction::zero(x.variables().clone());
        let mut j_idx = idx.to_vec();
        for j in 0..n {
            j_idx[k] = j;
            let c = x.get(&j_idx);
            if !c.is_zero() {
                acc = acc.add(&m(idx[k], j).mul(c));
            }
        }
        acc
    })
}

fn set_variance(x: ComponentTensor, k: usize, to: Variance, geo: &Geometry) -> ComponentTensor {
    if x.variance()[k] == to {
        return x;
    }
    match to {
        Variance::Up => transform_slot(&x, k, to, |i, j| geo.metric.inverse(i, j).clone()),
        Variance::Down => transform_slot(&x, k, to, |i, j| geo.metric.component(i, j).clone()),
    }
}

/// `∇X` with the new (lower) slot first.
pub fn covariant_derivative(x: &ComponentTensor, geo: &Geometry) -> ComponentTensor {
    let n = x.dim();
    let gamma = &geo.christoffel;
    let mut variance = vec![Variance::Down];
    variance.extend_from_slice(x.variance());
    ComponentTensor::from_fn(x.variables().clone(), variance, |idx| {
        let e = idx[0];
        let rest = &idx[1..];
        let mut acc = x.get(rest).diff_index(e);
        let mut moved = rest.to_vec();
        for (k, v) in x.variance().iter().enumerate() {
            for d in 0..n {
                moved[k] = d;
                let c = x.get(&moved);
                if c.is_zero() {
                    continue;
                }
                acc = match v {
                    Variance::Up => acc.add(&gamma.get(&[rest[k], e, d]).mul(c)),
                    Variance::Down => acc.sub(&gamma.get(&[d, e, rest[k]]).mul(c)),
                };
            }
            moved[k] = rest[k];
        }
        acc
    })
}

fn base_tensor(f: &Factor, bindings: &Bindings, geo: &Geometry) -> Result<ComponentTensor> {
    let vars = geo.metric.vars().clone();
    let t = match f.symbol.kind {
        SymbolKind::Generic => {
            let key = f.symbol.display_name();
            bindings
                .get(&key)
                .or_else(|| bindings.get(&f.symbol.name))
                .cloned()
                .ok_or(Error::UnboundSymbol(key))?
        }
        SymbolKind::Metric => geo.metric.lower_tensor(),
        SymbolKind::Kronecker => ComponentTensor::from_fn(vars.clone(), vec![Variance::Up, Variance::Down], |i| {
            let v = if i[0] == i[1] { 1 } else { 0 };
            RationalFunction::constant(vars.clone(), rat(v, 1))
        }),
        SymbolKind::Riemann => geo.riemann.clone(),
        SymbolKind::Ricci => geo.ricci.clone(),
        SymbolKind::RicciScalar => ComponentTensor::from_fn(vars.clone(), vec![], |_| geo.ricci_scalar.clone()),
    };
    if t.rank() != f.indices.len() {
        return Err(Error::Shape(format!(
            "{} is bound with rank {} but used with {} indices",
            f.symbol.display_name(),
            t.rank(),
            f.indices.len()
        )));
    }
    if t.variables() != geo.metric.vars() {
        return Err(Error::Shape(format!("{} is bound on a different chart", f.symbol.display_name())));
    }
    Ok(t)
}

/// Components of one factor, slots ordered as `prefix ++ indices`.
pub fn evaluate_factor(f: &Factor, bindings: &Bindings, geo: &Geometry) -> Result<ComponentTensor> {
    let mut x = base_tensor(f, bindings, geo)?;
    for (k, l) in f.indices.iter().enumerate() {
        x = set_variance(x, k, l.variance, geo);
    }
    for d in f.prefix.iter().rev() {
        x = covariant_derivative(&x, geo);
        x = set_variance(x, 0, d.index.variance, geo);
    }
    Ok(x)
}

fn evaluate_term(
    t: &Term,
    out: &[IndexLabel],
    bindings: &Bindings,
    geo: &Geometry,
    constants: &ConstantValues,
) -> Result<ComponentTensor> {
    let n = geo.metric.dimension();
    let vars = geo.metric.vars().clone();
    let factors: Vec<(ComponentTensor, Vec<String>)> = t
        .factors
        .iter()
        .map(|f| Ok((evaluate_factor(f, bindings, geo)?, f.labels().map(|l| l.name.clone()).collect())))
        .collect::<Result<_>>()?;
    let mut names: Vec<String> = out.iter().map(|l| l.name.clone()).collect();
    for (_, ls) in &factors {
        for l in ls {
            if !names.contains(l) {
                names.push(l.clone());
            }
        }
    }
    let pos: Vec<Vec<usize>> =
        factors.iter().map(|(_, ls)| ls.iter().map(|l| names.iter().position(|m| m == l).unwrap()).collect()).collect();
    let coeff = constants.value(&t.scalar, n)?;
    let mut result = ComponentTensor::zeros(vars.clone(), out.iter().map(|l| l.variance).collect());
    let mut slot = Vec::new();
    for assign in multi_indices(n, names.len()) {
        let mut prod = RationalFunction::constant(vars.clone(), coeff.clone());
        for ((x, _), p) in factors.iter().zip(&pos) {
            slot.clear();
            slot.extend(p.iter().map(|&k| assign[k]));
            let c = x.get(&slot);
            if c.is_zero() {
                prod = RationalFunction::zero(vars.clone());
                break;
            }
            prod = prod.mul(c);
        }
        if prod.is_zero() {
            continue;
        }
        let key = &assign[..out.len()];
        let acc = result.get(key).add(&prod);
        result.set(key, acc);
    }
    Ok(result)
}

/// Exact components of `e` on the geometry, with generic symbols bound.
pub fn evaluate_abstract(
    e: &TensorExpr,
    bindings: &Bindings,
    geo: &Geometry,
    constants: &ConstantValues,
) -> Result<Evaluated> {
    let indices = e.free_indices()?;
    let vars = geo.metric.vars().clone();
    let mut total = ComponentTensor::zeros(vars, indices.iter().map(|l| l.variance).collect());
    for t in &e.terms {
        let part = evaluate_term(t, &indices, bindings, geo, constants)?;
        total = ComponentTensor::from_fn(total.variables().clone(), total.variance().to_vec(), |i| {
            total.get(i).add(part.get(i))
        });
    }
    Ok(Evaluated { indices, tensor: total })
}
