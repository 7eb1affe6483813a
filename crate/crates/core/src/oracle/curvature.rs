//! Christoffel symbols and curvature from metric components.
//!
//! `R^c_{abd}` is stored with slots `(c, a, b, d)` and satisfies
//! `[∇_a, ∇_b] T^c = −R^c_{abd} T^d`.

use super::component::{multi_indices, ComponentTensor};
use super::metric::ComponentMetric;
use crate::error::Result;
use crate::kernel::{rat, RationalFunction};
use crate::tensor::Variance;

use Variance::{Down, Up};

fn sum(vars: &std::sync::Arc<[String]>, it: impl Iterator<Item = RationalFunction>) -> RationalFunction {
    it.fold(RationalFunction::zero(vars.clone()), |a, b| a.add(&b))
}

/// `Γ^c_{ab} = ½ g^{cd} (∂_a g_{bd} + ∂_b g_{ad} − ∂_d g_{ab})`, slots `(c, a, b)`.
pub fn christoffel(g: &ComponentMetric) -> ComponentTensor {
    let n = g.dimension();
    let vars = g.vars().clone();
    let dg: Vec<Vec<Vec<RationalFunction>>> = (0..n)
        .map(|k| (0..n).map(|i| (0..n).map(|j| g.component(i, j).diff_index(k)).collect()).collect())
        .collect();
    let half = rat(1, 2);
    ComponentTensor::from_fn(vars.clone(), vec![Up, Down, Down], |i| {
        let (c, a, b) = (i[0], i[1], i[2]);
        sum(
            &vars,
            (0..n).map(|d| g.inverse(c, d).mul(&dg[a][b][d].add(&dg[b][a][d]).sub(&dg[d][a][b]))),
        )
        .scale(&half)
    })
}

/// Riemann tensor, slots `(c, a, b, d)`:
/// `∂_b Γ^c_{ad} − ∂_a Γ^c_{bd} + Γ^e_{ad} Γ^c_{eb} − Γ^e_{bd} Γ^c_{ea}`.
pub fn riemann_from(gamma: &ComponentTensor) -> ComponentTensor {
    let n = gamma.dim();
    let vars = gamma.variables().clone();
    ComponentTensor::from_fn(vars.clone(), vec![Up, Down, Down, Down], |i| {
        let (c, a, b, d) = (i[0], i[1], i[2], i[3]);
        let lin = gamma.get(&[c, a, d]).diff_index(b).sub(&gamma.get(&[c, b, d]).diff_index(a));
        let quad = sum(
            &vars,
            (0..n).map(|e| {
                gamma.get(&[e, a, d]).mul(gamma.get(&[c, e, b])).sub(&gamma.get(&[e, b, d]).mul(gamma.get(&[c, e, a])))
            }),
        );
        lin.add(&quad)
    })
}

pub fn riemann(g: &ComponentMetric) -> ComponentTensor {
    riemann_from(&christoffel(g))
}

/// `R_{ac} = R^b_{abc}`.
pub fn ricci_from(riem: &ComponentTensor) -> ComponentTensor {
    let n = riem.dim();
    let vars = riem.variables().clone();
    ComponentTensor::from_fn(vars.clone(), vec![Down, Down], |i| {
        sum(&vars, (0..n).map(|b| riem.get(&[b, i[0], b, i[1]]).clone()))
    })
}

pub fn ricci(g: &ComponentMetric) -> ComponentTensor {
    ricci_from(&riemann(g))
}

pub fn ricci_scalar_from(g: &ComponentMetric, ric: &ComponentTensor) -> RationalFunction {
    let n = g.dimension();
    sum(g.vars(), multi_indices(n, 2).map(|i| g.inverse(i[0], i[1]).mul(ric.get(&i))))
}

/// Everything the evaluator needs about one metric, computed once.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub metric: ComponentMetric,
    pub christoffel: ComponentTensor,
    pub riemann: ComponentTensor,
    pub ricci: ComponentTensor,
    pub ricci_scalar: RationalFunction,
}

impl Geometry {
    pub fn new(metric: ComponentMetric) -> Result<Self> {
        let christoffel = christoffel(&metric);
        let riemann = riemann_from(&christoffel);
        let ricci = ricci_from(&riemann);
        let ricci_scalar = ricci_scalar_from(&metric, &ricci);
        Ok(Self { metric, christoffel, riemann, ricci, ricci_scalar })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::manifest::sample_metric;
    use crate::parse::parse_rational_function;

    fn rf(src: &str, g: &ComponentMetric) -> RationalFunction {
        parse_rational_function(src, g.vars().clone()).unwrap()
    }

    #[test]
    fn minkowski_is_flat() {
        let g = sample_metric("minkowski4").unwrap();
        assert!(christoffel(&g).is_zero());
        assert!(riemann(&g).is_zero());
    }

    #[test]
    fn polar_christoffels() {
        let g = sample_metric("polar2").unwrap();
        let gamma = christoffel(&g);
        assert_eq!(*gamma.get(&[0, 1, 1]), rf("-x", &g));
        assert_eq!(*gamma.get(&[1, 0, 1]), rf("1/x", &g));
        assert_eq!(*gamma.get(&[1, 1, 0]), rf("1/x", &g));
        assert!(riemann(&g).is_zero());
    }

    #[test]
    fn bump_curvature() {
        let g = sample_metric("bump2").unwrap();
        let geo = Geometry::new(g.clone()).unwrap();
        // Gaussian curvature of dx² + G dy² is −(√G)''/√G = −1/(1+x²)²
        let k = rf("-1/(1+x^2)^2", &g);
        assert_eq!(*geo.ricci.get(&[0, 0]), k);
        assert_eq!(*geo.ricci.get(&[1, 1]), k.mul(g.component(1, 1)));
        assert_eq!(geo.ricci_scalar, k.scale(&rat(2, 1)));
        assert_eq!(geo.ricci_scalar.eval(&[rat(0, 1), rat(0, 1)]).unwrap(), rat(-2, 1));
    }

    #[test]
    fn riemann_antisymmetric_and_ricci_symmetric() {
        for g in crate::oracle::sample_metrics() {
            let geo = Geometry::new(g.clone()).unwrap();
            let n = g.dimension();
            for i in multi_indices(n, 4) {
                let swapped = geo.riemann.get(&[i[0], i[2], i[1], i[3]]).neg();
                assert_eq!(*geo.riemann.get(&i), swapped);
            }
            for i in multi_indices(n, 2) {
                assert_eq!(geo.ricci.get(&i), geo.ricci.get(&[i[1], i[0]]));
            }
            assert_eq!(geo.riemann.is_zero(), g.flat, "{}", g.name);
        }
    }
}
