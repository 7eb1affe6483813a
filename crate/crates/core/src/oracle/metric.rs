use std::sync::Arc;

use num_traits::Zero;

use super::component::ComponentTensor;
use crate::error::{Error, Result};
use crate::kernel::{RationalFunction, Rational};
use crate::tensor::Variance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChart {
    pub variables: Arc<[String]>,
}

impl CoordinateChart {
    pub fn new(names: &[&str]) -> Self {
        Self { variables: names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into() }
    }

    pub fn dimension(&self) -> usize {
        self.variables.len()
    }
}

/// A symmetric, invertible metric with declared sample points.
#[derive(Clone, Debug)]
pub struct ComponentMetric {
    pub name: String,
    pub chart: CoordinateChart,
    g: Vec<Vec<RationalFunction>>,
    inv: Vec<Vec<RationalFunction>>,
    pub samples: Vec<Vec<Rational>>,
    /// Declared flat in the manifest.
    pub flat: bool,
}

impl ComponentMetric {
    pub fn new(
        name: impl Into<String>,
        chart: CoordinateChart,
        g: Vec<Vec<RationalFunction>>,
        samples: Vec<Vec<Rational>>,
        flat: bool,
    ) -> Result<Self> {
        let n = chart.dimension();
        if g.len() != n || g.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("metric must be {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..i {
                if g[i][j] != g[j][i] {
                    return Err(Error::NonSymmetricMetric(i, j));
                }
            }
        }
        let inv = invert(&g)?;
        let det = determinant(&g)?;
        for p in &samples {
            if p.len() != n {
                return Err(Error::Shape(format!("sample point {p:?} has wrong dimension")));
            }
            if det.eval(p)?.is_zero() {
                return Err(Error::SingularMetric);
            }
            for row in &inv {
                for c in row {
                    c.eval(p)?;
                }
            }
        }
        Ok(Self { name: name.into(), chart, g, inv, samples, flat })
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension()
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.chart.variables
    }

    pub fn component(&self, i: usize, j: usize) -> &RationalFunction {
        &self.g[i][j]
    }

    pub fn inverse(&self, i: usize, j: usize) -> &RationalFunction {
        &self.inv[i][j]
    }

    pub fn lower_tensor(&self) -> ComponentTensor {
        ComponentTensor::from_fn(self.vars().clone(), vec![Variance::Down; 2], |i| self.g[i[0]][i[1]].clone())
    }

    pub fn upper_tensor(&self) -> ComponentTensor {
        ComponentTensor::from_fn(self.vars().clone(), vec![Variance::Up; 2], |i| self.inv[i[0]][i[1]].clone())
    }
}

fn one(vars: &Arc<[String]>) -> RationalFunction {
    RationalFunction::constant(vars.clone(), Rational::from_integer(1.into()))
}

/// Gauss-Jordan elimination over rational functions.
pub fn invert(g: &[Vec<RationalFunction>]) -> Result<Vec<Vec<RationalFunction>>> {
    let n = g.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let vars = g[0][0].variables().clone();
    let mut a: Vec<Vec<RationalFunction>> = g.to_vec();
    let mut b: Vec<Vec<RationalFunction>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { one(&vars) } else { RationalFunction::zero(vars.clone()) }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMetric)?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&inv);
            b[col][j] = b[col][j].mul(&inv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                b[r][j] = b[r][j].sub(&f.mul(&b[col][j]));
            }
        }
    }
    Ok(b)
}

pub fn determinant(g: &[Vec<RationalFunction>]) -> Result<RationalFunction> {
    let n = g.len();
    let vars = g.first().map(|r| r[0].variables().clone()).unwrap_or_else(|| Arc::from(Vec::<String>::new()));
    let mut a = g.to_vec();
    let mut det = one(&vars);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(RationalFunction::zero(vars));
        };
        if piv != col {
            a.swap(col, piv);
            det = det.neg();
        }
        det = det.mul(&a[col][col]);
        let inv = a[col][col].inv()?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].mul(&inv);
            for j in col..n {
                a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;
    use crate::parse::parse_rational_function;

    fn chart2() -> CoordinateChart {
        CoordinateChart::new(&["x", "y"])
    }

    fn rf(s: &str) -> RationalFunction {
        parse_rational_function(s, chart2().variables).unwrap()
    }

    #[test]
    fn rejects_non_symmetric() {
        let g = vec![vec![rf("1"), rf("x")], vec![rf("0"), rf("1")]];
        assert!(matches!(ComponentMetric::new("bad", chart2(), g, vec![], false), Err(Error::NonSymmetricMetric(1, 0))));
    }

    #[test]
    fn rejects_singular() {
        let g = vec![vec![rf("1"), rf("1")], vec![rf("1"), rf("1")]];
        assert!(matches!(ComponentMetric::new("bad", chart2(), g, vec![], false), Err(Error::SingularMetric)));
    }

    #[test]
    fn rejects_singular_sample() {
        let g = vec![vec![rf("1"), rf("0")], vec![rf("0"), rf("x^2")]];
        let r = ComponentMetric::new("polar", chart2(), g, vec![vec![rat(0, 1), rat(1, 1)]], true);
        assert!(matches!(r, Err(Error::SingularMetric)));
    }

    #[test]
    fn inverse_of_off_diagonal() {
        let g = vec![vec![rf("1"), rf("x")], vec![rf("x"), rf("2")]];
        let m = ComponentMetric::new("m", chart2(), g, vec![], false).unwrap();
        assert_eq!(*m.inverse(0, 0), rf("2/(2 - x^2)"));
        assert_eq!(*m.inverse(0, 1), rf("-x/(2 - x^2)"));
    }
}
