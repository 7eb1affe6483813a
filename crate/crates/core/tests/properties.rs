mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(PROPERTY_CASES))]

    #[test]
    fn poisson_jacobi(f in classical_poly(), g in classical_poly(), h in classical_poly()) {
        jacobi(&f, &g, &h)?;
    }

    #[test]
    fn poisson_leibniz(f in classical_poly(), g in classical_poly(), h in classical_poly()) {
        leibniz(&f, &g, &h)?;
    }

    #[test]
    fn normal_form_is_idempotent(w in word()) {
        normal_form_idempotent(&w)?;
    }

    #[test]
    fn normal_form_respects_concatenation(a in word(), b in word()) {
        normal_form_homomorphism(&a, &b)?;
    }

    #[test]
    fn canonical_form_is_idempotent((specs, names, _) in tensor_case()) {
        canonicalize_idempotent(&render(&specs, &names))?;
    }

    #[test]
    fn canonical_form_ignores_dummy_names((specs, a, b) in tensor_case()) {
        renaming_invariant(&render(&specs, &a), &render(&specs, &b))?;
    }
}
