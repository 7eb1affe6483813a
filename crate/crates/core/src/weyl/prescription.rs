use std::sync::Arc;

use super::ordering::{apply_ordering, OrderingScheme};
use super::{ClassicalPoly, WeylElement};
use crate::error::{Error, Result};
use crate::kernel::{GaussianRational, Polynomial, Rational};

fn single_var(name: &str) -> Arc<[String]> {
    vec![name.to_string()].into()
}

fn require_univariate_q(test: &Polynomial) -> Result<Polynomial> {
    let vars = test.variables();
    for i in test.support() {
        if vars[i] != "q" {
            return Err(Error::UnknownVariable(vars[i].clone()));
        }
    }
    test.embed(single_var("q"))
}

/// Kernel action `(Ĥψ)(q') = ∫dq ⟨q'|Ĥ|q⟩ ψ(q)` for the mid-point
/// (`WeylSymmetric`) or right-point (`NormalPLeft`) prescription.
///
/// With `∫dp/2π pᵐ e^{−ip(q−q')} = (i∂_q)ᵐ δ(q − q')` and integration by
/// parts, a term `G(q, q')·pᵐ` acts as `(−i)ᵐ ∂_qᵐ[G·ψ](q = q')`, where `G` is
/// `((q + q')/2)ⁿ` for mid-point and `qⁿ` for right-point. The result is a
/// polynomial in `q'`.
pub fn prescription_action(
    scheme: OrderingScheme,
    hamiltonian: &ClassicalPoly,
    test: &Polynomial,
) -> Result<Polynomial<GaussianRational>> {
    let test = require_univariate_q(test)?;
    let vars: Arc<[String]> = vec!["q".to_string(), "q'".to_string()].into();
    let q = Polynomial::<Rational>::var(vars.clone(), "q")?;
    let qp = Polynomial::<Rational>::var(vars.clone(), "q'")?;
    let psi = test.embed(vars.clone())?;
    let half = crate::kernel::rat(1, 2);
    let mut out = Polynomial::<GaussianRational>::zero(single_var("q'"));
    for ((n, m), c) in hamiltonian.terms() {
        let g = match scheme {
            OrderingScheme::WeylSymmetric => q.add(&qp).scale(&half).pow(*n),
            OrderingScheme::NormalPLeft => q.pow(*n),
        };
        let mut f = g.mul(&psi);
        for _ in 0..*m {
            f = f.diff_index(0);
        }
        let on_diagonal = f.substitute(0, &qp).embed(single_var("q'"))?;
        let factor = GaussianRational::minus_i_pow(*m).scale(c);
        out = out.add(&on_diagonal.map_coefficients(|r| GaussianRational::real(r.clone())).scale(&factor));
    }
    Ok(out)
}

/// Action of an operator on a polynomial wave function: `q̂` multiplies by
/// `q` and `p̂ = (1/i) d/dq`.
pub fn operator_action(op: &WeylElement, test: &Polynomial) -> Result<Polynomial<GaussianRational>> {
    let test = require_univariate_q(test)?
        .map_coefficients(|r| GaussianRational::real(r.clone()));
    let vars = single_var("q");
    let q = Polynomial::<GaussianRational>::var(vars.clone(), "q")?;
    let mut out = Polynomial::zero(vars);
    for ((n, m), c) in op.terms() {
        let mut f = test.clone();
        for _ in 0..*m {
            f = f.diff_index(0);
        }
        let factor = GaussianRational::minus_i_pow(*m) * c.clone();
        out = out.add(&q.pow(*n).mul(&f).scale(&factor));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrescriptionCheck {
    /// Kernel result, renamed from `q'` to `q`.
    pub kernel: Polynomial<GaussianRational>,
    pub operator: Polynomial<GaussianRational>,
    pub agree: bool,
}

/// Compare the kernel prescription with the operator of the matching ordering.
pub fn prescription_check(
    scheme: OrderingScheme,
    hamiltonian: &ClassicalPoly,
    test: &Polynomial,
) -> Result<PrescriptionCheck> {
    let kernel = prescription_action(scheme, hamiltonian, test)?;
    let kernel = Polynomial::from_terms(single_var("q"), kernel.terms().map(|(e, c)| (e.clone(), c.clone())));
    let operator = operator_action(&apply_ordering(hamiltonian, scheme), test)?;
    let agree = kernel == operator;
    Ok(PrescriptionCheck { kernel, operator, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn qvar() -> Polynomial {
        Polynomial::var(single_var("q"), "q").unwrap()
    }

    #[test]
    fn right_point_qp_on_q() {
        let c = prescription_check(OrderingScheme::NormalPLeft, &ClassicalPoly::monomial(1, 1), &qvar()).unwrap();
        assert!(c.agree);
        // (1/i) d/dq (q·q) = −2i q
        let expected = Polynomial::from_terms(single_var("q"), [(vec![1], GaussianRational::imag(rat(-2, 1)))]);
        assert_eq!(c.operator, expected);
    }

    #[test]
    fn mid_point_multiplication_operator() {
        let test = qvar().pow(2).add(&Polynomial::one(single_var("q")));
        let c = prescription_check(OrderingScheme::WeylSymmetric, &ClassicalPoly::monomial(2, 0), &test).unwrap();
        assert!(c.agree);
        let expected = qvar().pow(2).mul(&test).map_coefficients(|r| GaussianRational::real(r.clone()));
        assert_eq!(c.kernel, expected);
    }

    #[test]
    fn rejects_other_variables() {
        let v: Arc<[String]> = vec!["x".to_string()].into();
        let x = Polynomial::var(v, "x").unwrap();
        assert!(prescription_action(OrderingScheme::WeylSymmetric, &ClassicalPoly::p(), &x).is_err());
    }
}
