//! Acceptance suite. Prints one line per criterion and exits nonzero when
//! any criterion fails or runs over its time budget.
//!
//! Exact results use zero tolerance. Time budgets are wall-clock limits on
//! an unoptimized test build.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::Zero;
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use common::word_oracle::{self as oracle, arrangements, p_left_word, symmetric_words, Rewriter, C, PH, QH};
use common::*;
use nogo_core::kernel::{rat, Polynomial};
use nogo_core::oracle::{bump_scalar_at_origin, oracle_check, pinning_suite, sample_metric, Geometry, OracleReport};
use nogo_core::parse::{parse_classical, parse_tensor};
use nogo_core::tensor::{
    canonical_equal, corpus_examples, double_divergence, flat_commute_sort, flat_current_conservation, gr_witness,
    lorentz_gauge_contradiction, order2_family, run_corpus, symmetric_map_check, wellposedness_check, Side,
    SlotSymmetry, TensorExpr, TensorSymbol,
};
use nogo_core::weyl::{
    check_homomorphism, gvh_witness, prescription_check, quantize_u2, u2_basis, ClassicalPoly, OperatorMap,
    OrderingScheme,
};

type Outcome = Result<String, String>;

/// Fixed seed for the random-field oracle.
const ORACLE_SEED: u64 = 1;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn tensor(src: &str) -> Result<TensorExpr, String> {
    parse_tensor(src).map(|s| s.expr).map_err(e)
}

fn oracle_on(x: &TensorExpr, metric: &str) -> Result<OracleReport, String> {
    let geo = Geometry::new(sample_metric(metric).map_err(e)?).map_err(e)?;
    oracle_check(x, &geo, ORACLE_SEED).map_err(e)
}

fn poisson_footnote() -> Outcome {
    let r = parse_classical("{q^3,p^3}").map_err(e)?;
    ensure(r == ClassicalPoly::term(2, 2, rat(9, 1)), format!("got {r}"))?;
    Ok(format!("{{q^3, p^3}} = {r}"))
}

fn forced_u2() -> Outcome {
    let mut rw = Rewriter::new();
    let half = C::real(oracle::Q::new(1, 2));
    let expected = [
        ("q^2", vec![(vec![QH, QH], C::int(1))]),
        ("p^2", vec![(vec![PH, PH], C::int(1))]),
        ("q*p", vec![(vec![QH, PH], half), (vec![PH, QH], half)]),
    ];
    for (src, words) in expected {
        let got = quantize_u2(&parse_classical(src).map_err(e)?).map_err(e)?;
        let want = oracle::to_engine(&rw.sum(&words));
        ensure(got == want, format!("Q({src}) = {got}, expected {want}"))?;
    }
    let report = check_homomorphism(&OperatorMap::u2(), &u2_basis()).map_err(e)?;
    ensure(report.pairs.len() == 15, format!("{} pairs", report.pairs.len()))?;
    ensure(report.all_pass(), format!("{} failing pairs", report.failing_pairs().len()))?;
    Ok("Q(q^2), Q(p^2), Q(qp) as expected; 15 of 15 pairs pass".into())
}

/// `(1/i)[A, B]` for operators given as weighted words, in sorted form.
fn bracket_words(a: &[(Vec<u8>, C)], b: &[(Vec<u8>, C)], k: C) -> Vec<(Vec<u8>, C)> {
    let minus_i = C { re: oracle::Q::from_integer(0), im: oracle::Q::from_integer(-1) };
    let mut out = Vec::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let c = ca.mul(*cb).mul(minus_i).mul(k);
            out.push(([wa.as_slice(), wb].concat(), c));
            out.push(([wb.as_slice(), wa].concat(), c.mul(C::int(-1))));
        }
    }
    out
}

fn gvh() -> Outcome {
    let w = gvh_witness();
    ensure(w.classical_residual.is_zero(), format!("classical residual {}", w.classical_residual))?;
    let c = w.constant().ok_or_else(|| format!("quantum residual {} is not scalar", w.residual))?;
    ensure(!c.is_zero(), "quantum residual vanishes")?;

    let ninth = C::real(oracle::Q::new(1, 9));
    let third = C::real(oracle::Q::new(-1, 3));
    let mut words = bracket_words(&symmetric_words(3, 0), &symmetric_words(0, 3), ninth);
    words.extend(bracket_words(&symmetric_words(2, 1), &symmetric_words(1, 2), third));
    let sorted = Rewriter::new().sum(&words);
    let scalar_only = sorted.keys().all(|k| *k == (0, 0));
    ensure(scalar_only, format!("oracle residual has operator terms: {sorted:?}"))?;
    let oc = sorted.get(&(0, 0)).copied().unwrap_or(C::int(0));
    ensure(oc.to_engine() == c, format!("engine c = {c}, oracle c = {}/{} + {}i", oc.re.numer(), oc.re.denom(), oc.im))?;
    Ok(format!("classical 0, quantum {c}·I, oracle agrees"))
}

fn test_functions() -> Vec<(String, Vec<C>)> {
    let q = oracle::Q::new;
    vec![
        ("1".into(), vec![C::int(1)]),
        ("q".into(), vec![C::int(0), C::int(1)]),
        ("q^2".into(), vec![C::int(0), C::int(0), C::int(1)]),
        ("q^3".into(), vec![C::int(0), C::int(0), C::int(0), C::int(1)]),
        ("2q^3 - q + 1/2".into(), vec![C::real(q(1, 2)), C::int(-1), C::int(0), C::int(2)]),
        ("q^2/3 + 4q".into(), vec![C::int(0), C::int(4), C::real(q(1, 3))]),
    ]
}

fn to_engine_poly(p: &[C]) -> Polynomial {
    let vars: Arc<[String]> = vec!["q".to_string()].into();
    Polynomial::from_terms(
        vars,
        p.iter().enumerate().map(|(k, c)| (vec![k as u32], rat(*c.re.numer(), *c.re.denom()))),
    )
}

fn prescriptions() -> Outcome {
    let mut checked = 0;
    for scheme in [OrderingScheme::WeylSymmetric, OrderingScheme::NormalPLeft] {
        for d in 0..=4u32 {
            for n in 0..=d {
                let m = d - n;
                let h = ClassicalPoly::monomial(n, m);
                let words = match scheme {
                    OrderingScheme::WeylSymmetric => symmetric_words(n, m),
                    OrderingScheme::NormalPLeft => p_left_word(n, m),
                };
                for (name, psi) in test_functions() {
                    let r = prescription_check(scheme, &h, &to_engine_poly(&psi)).map_err(e)?;
                    let reference = oracle::act(&words, &psi);
                    let kernel = oracle::engine_poly(&r.kernel);
                    ensure(
                        r.agree && kernel == reference,
                        format!("{scheme} q^{n} p^{m} on {name}: kernel {} operator {}", r.kernel, r.operator),
                    )?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} of {checked} cases agree"))
}

fn normal_p_left() -> Outcome {
    let monomials = [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1)];
    let map = OperatorMap::from_ordering(OrderingScheme::NormalPLeft, &monomials);
    let report = check_homomorphism(&map, &u2_basis()).map_err(e)?;
    let failing = report.failing_pairs();
    ensure(!failing.is_empty(), "every pair passes")?;
    let names: Vec<String> = failing.iter().map(|p| format!("{{{}, {}}}", p.f, p.g)).collect();
    Ok(format!("{} failing: {}", failing.len(), names.join(" ")))
}

fn gr_no_go() -> Outcome {
    let w = gr_witness().map_err(e)?;
    ensure(w.flat_equal, "flat sides differ")?;
    let expected = tensor("R[g]^c_{abd} bar[T]^d")?;
    ensure(canonical_equal(&w.curved_residual, &expected).map_err(e)?, format!("residual {}", w.curved_residual))?;
    let curved = oracle_on(&w.curved_residual, "bump4")?;
    let flat = oracle_on(&w.curved_residual, "minkowski4")?;
    ensure(!curved.identically_zero && !curved.nonzero_samples.is_empty(), "oracle zero on bump4")?;
    ensure(flat.identically_zero, "oracle nonzero on minkowski4")?;
    Ok(format!(
        "residual {}; bump4 nonzero at {} samples, minkowski4 zero",
        w.curved_residual,
        curved.nonzero_samples.len()
    ))
}

fn order_two() -> Outcome {
    let family = order2_family();
    for (a, b) in &family {
        let w = wellposedness_check(a, b).map_err(e)?;
        ensure(w.flat_equal, format!("{a} and {b} differ in flat space"))?;
        ensure(w.curved_residual.is_zero(), format!("{a} vs {b}: residual {}", w.curved_residual))?;
    }
    Ok(format!("{} pairs, all residuals 0", family.len()))
}

fn symmetric_map() -> Outcome {
    let s = symmetric_map_check().map_err(e)?;
    let half = tensor("1/2 R[g]^c_{abd} bar[T]^d")?;
    let matches =
        canonical_equal(&s.residual, &half).map_err(e)? || canonical_equal(&s.residual, &half.neg()).map_err(e)?;
    ensure(matches, format!("residual {}", s.residual))?;
    let r = oracle_on(&s.residual, "bump4")?;
    ensure(!r.nonzero_samples.is_empty(), "oracle zero on bump4")?;
    Ok(format!("residual {}, oracle nonzero", s.residual))
}

fn flat_conservation() -> Outcome {
    let r = flat_current_conservation().map_err(e)?;
    ensure(r.is_zero(), format!("antisymmetric case gives {r}"))?;
    let s = TensorSymbol::generic("S", Side::Flat).with_symmetry(SlotSymmetry::symmetric(vec![0, 1]));
    let control = flat_commute_sort(&double_divergence(s, nogo_core::tensor::Connection::Flat)).map_err(e)?;
    ensure(!control.is_zero(), "symmetric control vanishes")?;
    Ok(format!("0; control {control}"))
}

fn lorentz() -> Outcome {
    let r = lorentz_gauge_contradiction().map_err(e)?;
    ensure(!r.residual.is_zero(), "residual vanishes")?;
    ensure(canonical_equal(&r.residual, &r.expected).map_err(e)?, format!("residual {}", r.residual))?;
    // -(1/4π) ∇^b (R^d_b Ā_d), expanded by the product rule
    let leading = tensor("-1/4 pi^-1 D[g,^b] Ric[g]^d_b bar[A]_d - 1/4 pi^-1 Ric[g]^d_b D[g,^b] bar[A]_d")?;
    ensure(canonical_equal(&r.residual, &leading).map_err(e)?, "residual differs from -(1/4π)∇^b(R^d_b A_d)")?;
    ensure(r.flat_residual.is_zero(), format!("flat residual {}", r.flat_residual))?;
    let o = oracle_on(&r.residual, "bump4")?;
    ensure(!o.nonzero_samples.is_empty(), "oracle zero at every sample")?;
    Ok(format!("{}; oracle nonzero at {} samples", r.residual, o.nonzero_samples.len()))
}

fn corpus() -> Outcome {
    let entries = corpus_examples();
    let mut passed = 0;
    for (entry, r) in entries.iter().zip(run_corpus(&entries)) {
        let r = r.map_err(|err| format!("{}: {err}", entry.name))?;
        ensure(r.passed(), format!("{} fails, image {}", entry.name, r.image))?;
        passed += 1;
    }
    Ok(format!("{passed} of {} examples pass", entries.len()))
}

fn pinning() -> Outcome {
    let pins = pinning_suite(ORACLE_SEED).map_err(e)?;
    ensure(pins.len() == 24, format!("{} checks", pins.len()))?;
    if let Some(p) = pins.iter().find(|p| !p.holds) {
        return Err(format!("{} fails on {}", p.identity, p.metric));
    }
    let s = bump_scalar_at_origin().map_err(e)?;
    ensure(s == rat(-2, 1), format!("scalar at origin {s}"))?;
    Ok(format!("24 of 24 identities hold; scalar at origin {s}"))
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), proptest::test_runner::TestCaseError>,
) -> Result<(), String> {
    let config = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, check).map_err(|err| format!("{name}: {err}"))
}

fn properties() -> Outcome {
    let polys = || (classical_poly(), classical_poly(), classical_poly());
    run_property("jacobi", polys(), |(f, g, h)| jacobi(&f, &g, &h))?;
    run_property("leibniz", polys(), |(f, g, h)| leibniz(&f, &g, &h))?;
    run_property("normal form idempotence", word(), |w| normal_form_idempotent(&w))?;
    run_property("normal form homomorphism", (word(), word()), |(a, b)| normal_form_homomorphism(&a, &b))?;
    run_property("canonicalize idempotence", tensor_case(), |(s, n, _)| canonicalize_idempotent(&render(&s, &n)))?;
    run_property("renaming invariance", tensor_case(), |(s, a, b)| renaming_invariant(&render(&s, &a), &render(&s, &b)))?;
    // every word of length six reduces confluently
    let mut rw = Rewriter::new();
    for k in 0..=6 {
        for w in arrangements(k, 6 - k) {
            rw.word(&w);
        }
    }
    Ok(format!("6 properties x {PROPERTY_CASES} cases, no failures"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, name: "poisson footnote", budget: secs(1), run: poisson_footnote },
    Criterion { id: 2, name: "forced degree-two quantization", budget: secs(1), run: forced_u2 },
    Criterion { id: 3, name: "degree-three witness", budget: secs(1), run: gvh },
    Criterion { id: 4, name: "orderings vs prescriptions", budget: secs(5), run: prescriptions },
    Criterion { id: 5, name: "p-left ordering on degree two", budget: secs(1), run: normal_p_left },
    Criterion { id: 6, name: "derivative-ordering witness", budget: secs(2), run: gr_no_go },
    Criterion { id: 7, name: "order-two consistency", budget: secs(5), run: order_two },
    Criterion { id: 8, name: "symmetrized map", budget: secs(1), run: symmetric_map },
    Criterion { id: 9, name: "flat current conservation", budget: secs(1), run: flat_conservation },
    Criterion { id: 10, name: "Lorentz gauge", budget: secs(5), run: lorentz },
    Criterion { id: 11, name: "golden corpus", budget: secs(10), run: corpus },
    Criterion { id: 12, name: "oracle conventions", budget: secs(10), run: pinning },
    Criterion { id: 13, name: "property suites", budget: secs(120), run: properties },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= c.budget => ("pass", d),
            Ok(d) => ("FAIL", format!("{d} (over budget)")),
            Err(d) => ("FAIL", d),
        };
        if status != "pass" {
            failed += 1;
        }
        println!(
            "criterion {:>2}: {status}  {} [{} ms / {} ms]  {detail}",
            c.id,
            c.name,
            elapsed.as_millis(),
            c.budget.as_millis()
        );
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
