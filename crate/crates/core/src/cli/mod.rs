//! The `nogo` command-line front end.

mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::kernel::{rat, Polynomial};
use crate::oracle::{
    bump_scalar_at_origin, oracle_check, pinning_suite, sample_metric, sample_metrics, Geometry, OracleReport,
};
use crate::parse::{parse_classical, parse_operator, parse_rational_function, parse_tensor, parse_tensor_with};
use crate::tensor::{
    canonical_equal, corpus_examples, double_divergence, flat_commute_sort, lorentz_gauge_rule,
    lorentz_start, lorentz_steps, load_corpus_dir, next_unsorted, replay, run_corpus, theorem_pair, Connection,
    Location, LorentzStep, RewriteTrace, Side, SlotSymmetry, TensorExpr, TensorSymbol, TraceOp,
};
use crate::weyl::{
    apply_ordering, check_homomorphism, commutator, gvh_witness, prescription_check, quantize_u2,
    u2_basis, ClassicalPoly, OperatorMap, OrderingScheme,
};

pub use report::{render, Format, Outcome, Shown, ENGINE_VERSION};

#[derive(Parser, Debug)]
#[command(name = "nogo", version, about = "Exact checks of quantization and minimal-substitution obstructions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write a rewrite certificate (tensor subcommands).
    #[arg(long, global = true, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    /// Replay a certificate; with a subcommand, also require the same result.
    #[arg(long, global = true, value_name = "PATH")]
    pub replay: Option<PathBuf>,
    /// Accepted for compatibility; output is never colored.
    #[arg(long, global = true)]
    pub color: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Weyl,
    Normal,
}

impl From<Scheme> for OrderingScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Weyl => OrderingScheme::WeylSymmetric,
            Scheme::Normal => OrderingScheme::NormalPLeft,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpectResidual {
    Zero,
    Nonzero,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a classical expression with `{f, g}` brackets.
    Poisson { expr: String },
    /// Order a classical polynomial into an operator.
    Order {
        expr: String,
        #[arg(long, value_enum, default_value_t = Scheme::Weyl)]
        scheme: Scheme,
    },
    /// Quantize a polynomial of degree at most two.
    Quantize { expr: String },
    /// Commutator of two operator expressions.
    Commutator { a: String, b: String },
    /// Check the quantization conditions on the degree-two basis.
    Axioms {
        #[arg(long, value_enum, default_value_t = Scheme::Weyl)]
        scheme: Scheme,
        #[arg(long, value_enum, default_value_t = Expect::Pass)]
        expect: Expect,
    },
    /// Two classically equal expressions whose quantizations differ.
    GvhWitness,
    /// Kernel prescription against the ordered operator. Without arguments,
    /// sweeps every monomial of degree at most four for both schemes.
    Prescription {
        #[arg(long, value_enum)]
        scheme: Option<Scheme>,
        #[arg(long)]
        hamiltonian: Option<String>,
        #[arg(long)]
        test: Option<String>,
    },
    /// Canonical form of a tensor expression.
    Canonicalize { expr: String },
    /// Curved image of a flat expression.
    Generalize { expr: String },
    /// Swap two adjacent curved derivatives, paying the curvature terms.
    Commute {
        expr: String,
        /// Term, factor and prefix position, 0-based.
        #[arg(long, num_args = 3, value_names = ["TERM", "FACTOR", "PREFIX"])]
        at: Vec<usize>,
    },
    /// Compare the curved images of two flat expressions.
    Wellposed {
        a: String,
        b: String,
        #[arg(long, value_enum)]
        expect: Option<ExpectResidual>,
    },
    /// The derivative-ordering pair whose curved images differ by curvature
    GrWitness,
    /// The symmetrized map against derivative compatibility.
    SymmetricCheck,
    /// Current conservation under the curved Lorentz gauge.
    LorentzCheck,
    /// Flat current conservation with an antisymmetric field.
    FlatConservation,
    /// Golden examples.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Component evaluation with random fields. Without an expression, runs
    /// the sign-convention suite.
    Oracle {
        expr: Option<String>,
        #[arg(long)]
        metric: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum)]
        expect: Option<ExpectResidual>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusAction {
    /// Run every `*.corpus` file in DIR, or the built-in corpus.
    Run { dir: Option<PathBuf> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Poisson { .. } => "poisson",
            Command::Order { .. } => "order",
            Command::Quantize { .. } => "quantize",
            Command::Commutator { .. } => "commutator",
            Command::Axioms { .. } => "axioms",
            Command::GvhWitness => "gvh-witness",
            Command::Prescription { .. } => "prescription",
            Command::Canonicalize { .. } => "canonicalize",
            Command::Generalize { .. } => "generalize",
            Command::Commute { .. } => "commute",
            Command::Wellposed { .. } => "wellposed",
            Command::GrWitness => "gr-witness",
            Command::SymmetricCheck => "symmetric-check",
            Command::LorentzCheck => "lorentz-check",
            Command::FlatConservation => "flat-conservation",
            Command::Corpus { .. } => "corpus",
            Command::Oracle { .. } => "oracle",
        }
    }
}

/// Failure before or during a run.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unparsable input: exit 2.
    Usage(String),
    /// Engine error on valid input: exit 1.
    Engine(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. } | Error::UnknownSymbol(_) | Error::UnknownVariable(_) | Error::Index(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Engine(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// The finished run: rendered output and exit status.
pub struct RunOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                RunOutput { stdout: text, stderr: String::new(), code }
            } else {
                RunOutput { stdout: String::new(), stderr: text, code }
            }
        }
    }
}

pub fn run(cli: &Cli) -> RunOutput {
    match execute(cli) {
        Ok((name, outcome, trace_path)) => RunOutput {
            stdout: render(name, &outcome, trace_path.as_deref(), cli.format),
            stderr: String::new(),
            code: if outcome.ok { 0 } else { 1 },
        },
        Err(CliError::Usage(m)) => RunOutput { stdout: String::new(), stderr: format!("error: {m}\n"), code: 2 },
        Err(CliError::Engine(e)) => RunOutput { stdout: String::new(), stderr: format!("error: {e}\n"), code: 1 },
    }
}

fn execute(cli: &Cli) -> CliResult<(&'static str, Outcome, Option<String>)> {
    let Some(cmd) = &cli.command else {
        let path = cli.replay.as_ref().ok_or_else(|| CliError::Usage("a subcommand or --replay is required".into()))?;
        let outcome = replay_file(path)?;
        return Ok(("replay", outcome, None));
    };
    let (mut outcome, trace) = dispatch(cmd)?;
    let mut trace_path = None;
    if let Some(path) = &cli.trace {
        let t = trace.as_ref().ok_or_else(|| {
            CliError::Usage(format!("--trace is only available for tensor subcommands, not `{}`", cmd.name()))
        })?;
        std::fs::write(path, t.to_text()).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        trace_path = Some(path.display().to_string());
    }
    if let Some(path) = &cli.replay {
        let t = trace.as_ref().ok_or_else(|| {
            CliError::Usage(format!("--replay is only available for tensor subcommands, not `{}`", cmd.name()))
        })?;
        let replayed = replay_text(path)?;
        let same = replayed.to_string() == t.output().to_string();
        outcome = outcome.detail("replayed", Shown::tensor(&replayed)).expect(same);
    }
    Ok((cmd.name(), outcome, trace_path))
}

fn replay_text(path: &Path) -> CliResult<TensorExpr> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    match replay(&text) {
        Ok(e) => Ok(e),
        Err(e @ Error::ReplayMismatch { .. }) => Err(CliError::Engine(e)),
        Err(e @ Error::Format(_)) => Err(CliError::Usage(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn replay_file(path: &Path) -> CliResult<Outcome> {
    let out = replay_text(path)?;
    Ok(Outcome::new(vec![path.display().to_string()], Shown::tensor(&out)))
}

fn dispatch(cmd: &Command) -> CliResult<(Outcome, Option<RewriteTrace>)> {
    let plain = |o: CliResult<Outcome>| o.map(|o| (o, None));
    match cmd {
        Command::Poisson { expr } => plain(cmd_poisson(expr)),
        Command::Order { expr, scheme } => plain(cmd_order(expr, *scheme)),
        Command::Quantize { expr } => plain(cmd_quantize(expr)),
        Command::Commutator { a, b } => plain(cmd_commutator(a, b)),
        Command::Axioms { scheme, expect } => plain(cmd_axioms(*scheme, *expect)),
        Command::GvhWitness => plain(cmd_gvh()),
        Command::Prescription { scheme, hamiltonian, test } => {
            plain(cmd_prescription(*scheme, hamiltonian.as_deref(), test.as_deref()))
        }
        Command::Canonicalize { expr } => cmd_canonicalize(expr),
        Command::Generalize { expr } => cmd_generalize(expr),
        Command::Commute { expr, at } => cmd_commute(expr, at),
        Command::Wellposed { a, b, expect } => cmd_wellposed(a, b, *expect),
        Command::GrWitness => cmd_gr_witness(),
        Command::SymmetricCheck => cmd_symmetric_check(),
        Command::LorentzCheck => cmd_lorentz_check(),
        Command::FlatConservation => cmd_flat_conservation(),
        Command::Corpus { action: CorpusAction::Run { dir } } => plain(cmd_corpus(dir.as_deref())),
        Command::Oracle { expr, metric, seed, expect } => {
            plain(cmd_oracle(expr.as_deref(), metric.as_deref(), *seed, *expect))
        }
    }
}

fn cmd_poisson(expr: &str) -> CliResult<Outcome> {
    let f = parse_classical(expr)?;
    Ok(Outcome::new(vec![expr.into()], Shown::with_latex(&f, f.to_latex())))
}

fn cmd_order(expr: &str, scheme: Scheme) -> CliResult<Outcome> {
    let f = parse_classical(expr)?;
    let op = apply_ordering(&f, scheme.into());
    Ok(Outcome::new(vec![expr.into(), format!("{scheme:?}").to_lowercase()], Shown::with_latex(&op, op.to_latex())))
}

fn cmd_quantize(expr: &str) -> CliResult<Outcome> {
    let f = parse_classical(expr)?;
    let op = quantize_u2(&f)?;
    Ok(Outcome::new(vec![expr.into()], Shown::with_latex(&op, op.to_latex())))
}

fn cmd_commutator(a: &str, b: &str) -> CliResult<Outcome> {
    let c = commutator(&parse_operator(a)?, &parse_operator(b)?);
    Ok(Outcome::new(vec![a.into(), b.into()], Shown::with_latex(&c, c.to_latex())))
}

fn cmd_axioms(scheme: Scheme, expect: Expect) -> CliResult<Outcome> {
    let basis = u2_basis();
    let monomials: Vec<(u32, u32)> = vec![(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1)];
    let map = match scheme {
        Scheme::Weyl => OperatorMap::u2(),
        Scheme::Normal => OperatorMap::from_ordering(OrderingScheme::NormalPLeft, &monomials),
    };
    let report = check_homomorphism(&map, &basis)?;
    let failing = report.failing_pairs();
    let mut o = Outcome::new(
        vec![format!("{scheme:?}").to_lowercase()],
        Shown::plain(format!("{} of {} pairs fail", failing.len(), report.pairs.len())),
    );
    for p in &failing {
        o = o.detail(format!("{{{}, {}}}", p.f, p.g), Shown::plain(format!("Q(bracket) = {}, (1/i)[f, g] = {}", p.lhs, p.rhs)));
    }
    let pairs: Vec<Value> = report
        .pairs
        .iter()
        .map(|p| json!({"f": p.f.to_string(), "g": p.g.to_string(), "bracket_ok": p.bracket_ok, "linear_ok": p.linear_ok}))
        .collect();
    let passes = report.all_pass();
    Ok(o.json(json!({"pairs": pairs, "unit_ok": report.unit_ok, "all_pass": passes}))
        .expect(passes == (expect == Expect::Pass)))
}

fn cmd_gvh() -> CliResult<Outcome> {
    let w = gvh_witness();
    let c = w.constant();
    let o = Outcome::new(
        vec![],
        Shown::plain(match &c {
            Some(c) => format!("quantum residual is {c} times the identity"),
            None => format!("quantum residual {} is not a multiple of the identity", w.residual),
        }),
    )
    .detail("classical", Shown::plain(format!("(1/9){{q^3, p^3}} - (1/3){{q^2 p, q p^2}} = {}", w.classical_residual)))
    .detail("quantum lhs", Shown::with_latex(&w.lhs, w.lhs.to_latex()))
    .detail("quantum rhs", Shown::with_latex(&w.rhs, w.rhs.to_latex()))
    .residual(Shown::with_latex(&w.residual, w.residual.to_latex()), w.residual.is_zero())
    .json(json!({
        "classical_residual": w.classical_residual.to_string(),
        "lhs": w.lhs.to_string(),
        "rhs": w.rhs.to_string(),
        "constant": c.map(|c| c.to_string()),
    }));
    Ok(o.expect(w.is_obstruction()))
}

fn q_polynomial(src: &str) -> CliResult<Polynomial> {
    let f = parse_rational_function(src, vec!["q".to_string()].into())?;
    let den = f.denominator();
    if !den.is_constant() {
        return Err(CliError::Usage(format!("test function `{src}` is not a polynomial in q")));
    }
    let k = den.constant_term();
    Ok(f.numerator().scale(&(rat(1, 1) / k)))
}

fn cmd_prescription(scheme: Option<Scheme>, h: Option<&str>, test: Option<&str>) -> CliResult<Outcome> {
    let schemes = match scheme {
        Some(s) => vec![s],
        None => vec![Scheme::Weyl, Scheme::Normal],
    };
    let hs: Vec<ClassicalPoly> = match h {
        Some(h) => vec![parse_classical(h)?],
        None => (0..=4u32).flat_map(|d| (0..=d).map(move |n| ClassicalPoly::monomial(n, d - n))).collect(),
    };
    let tests: Vec<Polynomial> = match test {
        Some(t) => vec![q_polynomial(t)?],
        None => ["1", "q", "q^2", "q^3", "2*q^3 - q + 1/2"].iter().map(|t| q_polynomial(t)).collect::<CliResult<_>>()?,
    };
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut last = None;
    for s in &schemes {
        for hh in &hs {
            for t in &tests {
                let c = prescription_check((*s).into(), hh, t)?;
                checked += 1;
                if !c.agree {
                    failures.push(format!("{s:?} {hh} on {t}: kernel {} operator {}", c.kernel, c.operator));
                }
                last = Some(c);
            }
        }
    }
    let mut inputs: Vec<String> = schemes.iter().map(|s| format!("{s:?}").to_lowercase()).collect();
    inputs.extend(h.map(String::from));
    inputs.extend(test.map(String::from));
    let mut o = if checked == 1 {
        let c = last.expect("one check ran");
        Outcome::new(inputs, Shown::plain(c.kernel.to_string())).detail("operator", Shown::plain(c.operator.to_string()))
    } else {
        Outcome::new(inputs, Shown::plain(format!("{} of {checked} cases agree", checked - failures.len())))
    };
    for f in &failures {
        o = o.detail("mismatch", Shown::plain(f.clone()));
    }
    Ok(o.expect(failures.is_empty()))
}

fn tensor_input(src: &str) -> CliResult<crate::parse::TensorSource> {
    Ok(parse_tensor(src)?)
}

fn cmd_canonicalize(src: &str) -> CliResult<(Outcome, Option<RewriteTrace>)> {
    let s = tensor_input(src)?;
    let mut t = RewriteTrace::new(s.expr).with_rules(s.rules);
    let out = t.apply(TraceOp::Canonicalize)?;
    Ok((Outcome::new(vec![src.into()], Shown::tensor(&out)), Some(t)))
}

fn cmd_generalize(src: &str) -> CliResult<(Outcome, Option<RewriteTrace>)> {
    let s = tensor_input(src)?;
    let mut t = RewriteTrace::new(s.expr);
    t.apply(TraceOp::Generalize)?;
    let out = t.apply(TraceOp::Canonicalize)?;
    Ok((Outcome::new(vec![src.into()], Shown::tensor(&out)), Some(t)))
}

fn cmd_commute(src: &str, at: &[usize]) -> CliResult<(Outcome, Option<RewriteTrace>)> {
    let s = tensor_input(src)?;
    let loc = match at {
        [] => Location::new(0, 0, 0),
        [t, f, p] => Location::new(*t, *f, *p),
        _ => return Err(CliError::Usage("--at takes TERM FACTOR PREFIX".into())),
    };
    let mut t = RewriteTrace::new(s.expr);
    let raw = t.apply(TraceOp::CurvedCommute(loc))?;
    let out = t.apply(TraceOp::Canonicalize)?;
    let o = Outcome::new(vec![src.into(), loc.to_string()], Shown::tensor(&out)).detail("swapped", Shown::tensor(&raw));
    Ok((o, Some(t)))
}

/// Generalize, then sort curved derivatives, recording every step.
fn sort_trace(t: &mut RewriteTrace) -> CliResult<TensorExpr> {
    let mut cur = t.apply(TraceOp::Canonicalize)?;
    for _ in 0..crate::tensor::derivative::SORT_CAP {
        let Some(loc) = next_unsorted(&cur)? else { return Ok(cur) };
        t.apply(TraceOp::CurvedCommute(loc))?;
        cur = t.apply(TraceOp::Canonicalize)?;
    }
    Err(CliError::Engine(Error::NonTerminating { iterations: crate::tensor::derivative::SORT_CAP, last: cur.to_string() }))
}

struct Wellposed {
    flat_equal: bool,
    flat_residual: TensorExpr,
    residual: TensorExpr,
    trace: RewriteTrace,
}

fn wellposed_traced(a: &TensorExpr, b: &TensorExpr) -> CliResult<Wellposed> {
    let w = crate::tensor::wellposedness_check(a, b)?;
    let mut trace = RewriteTrace::new(b.sub(a));
    trace.apply(TraceOp::Generalize)?;
    let residual = sort_trace(&mut trace)?;
    debug_assert_eq!(residual, w.curved_residual);
    Ok(Wellposed { flat_equal: w.flat_equal, flat_residual: w.flat_residual, residual, trace })
}

fn cmd_wellposed(a: &str, b: &str, expect: Option<ExpectResidual>) -> CliResult<(Outcome, Option<RewriteTrace>)> {
    let sa = tensor_input(a)?;
    let sb = parse_tensor_with(b, sa.decls.clone())?;
    let w = wellposed_traced(&sa.expr, &sb.expr)?;
    let zero = w.residual.is_zero();
    let ok = match expect {
        Some(ExpectResidual::Zero) => zero,
        Some(ExpectResidual::Nonzero) => !zero,
        None => true,
    };
    let verdict = match (w.flat_equal, zero) {
        (false, _) => "inputs differ on the flat side",
        (true, true) => "consistent: the curved images agree",
        (true, false) => "obstruction: flat-equal inputs with different curved images",
    };
    let o = Outcome::new(vec![a.into(), b.into()], Shown::plain(verdict))
        .detail("flat_equal", Shown::plain(w.flat_equal.to_string()))
        .detail("flat residual", Shown::tensor(&w.flat_residual))
        .residual(Shown::tensor(&w.residual), zero)
        .json(json!({"flat_equal": w.flat_equal, "flat_residual": w.flat_residual.to_string(), "consistent": !w.flat_equal || zero}))
        .expect(ok);
    Ok((o, Some(w.trace)))
}

fn oracle_on(e: &TensorExpr, name: &str, seed: u64) -> CliResult<OracleReport> {
    let geo = Geometry::new(sample_metric(name)?)?;
    Ok(oracle_check(e, &geo, seed)?)
}

fn oracle_shown(r: &OracleReport) -> Shown {
    Shown::plain(if r.identically_zero {
        "zero".to_string()
    } else {
        format!("nonzero at {} of the sample points", r.nonzero_samples.len())
    })
}

fn cmd_gr_witness() -> CliResult<(Outcome, Option<RewriteTrace>)> {
    let (a, b) = theorem_pair();
    let w = wellposed_traced(&a, &b)?;
    let expected = parse_tensor("R[g]^c_{abd} bar[T]^d")?.expr;
    let matches = canonical_equal(&w.residual, &expected)?;
    let curved = oracle_on(&w.residual, "bump4", 1)?;
    let flat = oracle_on(&w.residual, "minkowski4", 1)?;
    let zero = w.residual.is_zero();
    let o = Outcome::new(vec![a.to_string(), b.to_string()], Shown::plain("no generalization map sends both orderings consistently"))
        .detail("flat_equal", Shown::plain(w.flat_equal.to_string()))
        .detail("oracle bump4", oracle_shown(&curved))
        .detail("oracle minkowski4", oracle_shown(&flat))
        .residual(Shown::tensor(&w.residual), zero)
        .json(json!({
            "flat_equal": w.flat_equal,
            "matches_riemann_term": matches,
            "oracle_curved_nonzero": !curved.nonzero_samples.is_empty(),
            "oracle_flat_zero": flat.identically_zero,
        }))
        .expect(w.flat_equal && !zero && matches && !curved.nonzero_samples.is_empty() && flat.identically_zero);
    Ok((o, Some(w.trace)))
}

fn cmd_symmetric_check() -> CliResult<(Outcome, Option<RewriteTrace>)> {
    let (a, _) = theorem_pair();
    let mut t = RewriteTrace::new(a.clone());
    t.apply(TraceOp::SymmetricDefect)?;
    let residual = sort_trace(&mut t)?;
    let half = parse_tensor("1/2 R[g]^c_{abd} bar[T]^d")?.expr;
    let matches = canonical_equal(&residual, &half)? || canonical_equal(&residual, &half.neg())?;
    let r = oracle_on(&residual, "bump2", 1)?;
    let zero = residual.is_zero();
    let o = Outcome::new(vec![a.to_string()], Shown::plain("the symmetrized map breaks derivative compatibility"))
        .detail("image", Shown::tensor(&crate::tensor::symmetric_image(&a)?))
        .detail("oracle bump2", oracle_shown(&r))
        .residual(Shown::tensor(&residual), zero)
        .json(json!({"half_riemann_term": matches, "oracle_nonzero": !r.nonzero_samples.is_empty()}))
        .expect(!zero && matches && !r.nonzero_samples.is_empty());
    Ok((o, Some(t)))
}

fn lorentz_trace(conn: Connection) -> CliResult<(TensorExpr, TensorExpr, RewriteTrace)> {
    let rule = lorentz_gauge_rule(conn)?;
    let mut t = RewriteTrace::new(lorentz_start(conn)).with_rules(vec![rule]);
    let mut before = TensorExpr::zero();
    let out = lorentz_steps(conn, |step, e| {
        let op = match step {
            LorentzStep::Commute(l) => TraceOp::CurvedCommute(l),
            LorentzStep::FlatSwap(l) => TraceOp::FlatSwap(l),
            LorentzStep::Canonicalize | LorentzStep::BeforeConstraint => TraceOp::Canonicalize,
            LorentzStep::Constraint => TraceOp::Constraint(0),
        };
        if step == LorentzStep::BeforeConstraint {
            before = e.clone();
        }
        t.record(op, e);
    })?;
    Ok((before, out, t))
}

fn cmd_lorentz_check() -> CliResult<(Outcome, Option<RewriteTrace>)> {
    let (before, residual, trace) = lorentz_trace(Connection::Curved)?;
    let (_, flat_residual, _) = lorentz_trace(Connection::Flat)?;
    let expected = crate::tensor::lorentz_expected()?;
    let matches = canonical_equal(&residual, &expected)?;
    let r = oracle_on(&residual, "bump4", 1)?;
    let zero = residual.is_zero();
    let o = Outcome::new(vec![trace.input.to_string()], Shown::plain("the curved current is not conserved in Lorentz gauge"))
        .detail("before gauge condition", Shown::tensor(&before))
        .detail("expected", Shown::tensor(&expected))
        .detail("flat residual", Shown::tensor(&flat_residual))
        .detail("oracle bump4", oracle_shown(&r))
        .residual(Shown::tensor(&residual), zero)
        .json(json!({
            "matches_expected": matches,
            "flat_residual": flat_residual.to_string(),
            "oracle_nonzero": !r.nonzero_samples.is_empty(),
        }))
        .expect(!zero && matches && flat_residual.is_zero() && !r.nonzero_samples.is_empty());
    Ok((o, Some(trace)))
}

fn cmd_flat_conservation() -> CliResult<(Outcome, Option<RewriteTrace>)> {
    let f = crate::tensor::antisymmetric_f(Side::Flat);
    let mut t = RewriteTrace::new(double_divergence(f, Connection::Flat));
    let out = t.apply(TraceOp::FlatSort)?;
    let s = TensorSymbol::generic("S", Side::Flat).with_symmetry(SlotSymmetry::symmetric(vec![0, 1]));
    let control = flat_commute_sort(&double_divergence(s, Connection::Flat))?;
    let o = Outcome::new(vec![t.input.to_string()], Shown::tensor(&out))
        .detail("symmetric control", Shown::tensor(&control))
        .residual(Shown::tensor(&out), out.is_zero())
        .json(json!({"result": out.to_string(), "control": control.to_string()}))
        .expect(out.is_zero() && !control.is_zero());
    Ok((o, Some(t)))
}

fn cmd_corpus(dir: Option<&Path>) -> CliResult<Outcome> {
    let entries = match dir {
        Some(d) => load_corpus_dir(d).map_err(|e| CliError::Usage(e.to_string()))?,
        None => corpus_examples(),
    };
    let mut rows = Vec::new();
    let mut o = Outcome::new(vec![dir.map(|d| d.display().to_string()).unwrap_or_else(|| "built-in".into())], Shown::plain(""));
    let mut passed = 0;
    for (e, r) in entries.iter().zip(run_corpus(&entries)) {
        let (ok, msg) = match &r {
            Ok(out) => (out.passed(), out.image.to_string()),
            Err(err) => (false, format!("error: {err}")),
        };
        passed += ok as usize;
        o = o.detail(format!("{} {}", if ok { "pass" } else { "FAIL" }, e.name), Shown::plain(msg.clone()));
        rows.push(json!({"name": e.name, "passed": ok, "image": msg}));
    }
    o.result = Shown::plain(format!("{passed} of {} examples pass", entries.len()));
    Ok(o.json(json!({"examples": rows, "passed": passed, "total": entries.len()})).expect(passed == entries.len()))
}

fn cmd_oracle(expr: Option<&str>, metric: Option<&str>, seed: u64, expect: Option<ExpectResidual>) -> CliResult<Outcome> {
    let Some(src) = expr else {
        let pins = pinning_suite(seed)?;
        let scalar = bump_scalar_at_origin()?;
        let held = pins.iter().filter(|p| p.holds).count();
        let mut o = Outcome::new(vec![], Shown::plain(format!("{held} of {} identities hold", pins.len())));
        for p in &pins {
            o = o.detail(format!("{} on {}", p.identity, p.metric), Shown::plain(if p.holds { "holds" } else { "FAILS" }));
        }
        let rows: Vec<Value> =
            pins.iter().map(|p| json!({"identity": p.identity, "metric": p.metric, "holds": p.holds})).collect();
        return Ok(o
            .detail("Ricci scalar of bump2 at the origin", Shown::plain(scalar.to_string()))
            .json(json!({"identities": rows, "bump2_scalar_at_origin": scalar.to_string()}))
            .expect(held == pins.len() && scalar == rat(-2, 1)));
    };
    let e = tensor_input(src)?.expr;
    let metrics = match metric {
        Some(m) => vec![sample_metric(m).map_err(|err| CliError::Usage(err.to_string()))?],
        None => sample_metrics(),
    };
    let mut o = Outcome::new(vec![src.into()], Shown::plain(""));
    let mut all_zero = true;
    let mut rows = Vec::new();
    for m in metrics {
        let name = m.name.clone();
        let r = oracle_check(&e, &Geometry::new(m)?, seed)?;
        all_zero &= r.identically_zero;
        o = o.detail(name.clone(), oracle_shown(&r));
        rows.push(json!({"metric": name, "zero": r.identically_zero, "nonzero_samples": r.nonzero_samples.len()}));
    }
    o.result = Shown::plain(if all_zero { "zero on every metric" } else { "nonzero on some metric" });
    let ok = match expect {
        Some(ExpectResidual::Zero) => all_zero,
        Some(ExpectResidual::Nonzero) => !all_zero,
        None => true,
    };
    Ok(o.json(json!({"metrics": rows, "zero": all_zero})).expect(ok))
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let out = run_args(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> RunOutput {
        run_args(std::iter::once("nogo").chain(args.iter().copied()))
    }

    #[test]
    fn poisson_footnote() {
        let o = run(&["poisson", "{q^3, p^3}"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.starts_with("poisson: 9*q^2*p^2\n"), "{}", o.stdout);
    }

    #[test]
    fn parse_error_exits_two() {
        let o = run(&["canonicalize", "F_{aa}"]);
        assert_eq!(o.code, 2, "{}", o.stderr);
        assert_eq!(run(&["no-such-command"]).code, 2);
    }

    #[test]
    fn trace_refused_for_weyl_commands() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.txt");
        let o = run(&["--trace", p.to_str().unwrap(), "gvh-witness"]);
        assert_eq!(o.code, 2);
    }

    #[test]
    fn axioms_expectations() {
        assert_eq!(run(&["axioms"]).code, 0);
        assert_eq!(run(&["axioms", "--scheme", "normal"]).code, 1);
        assert_eq!(run(&["axioms", "--scheme", "normal", "--expect", "fail"]).code, 0);
    }
}
