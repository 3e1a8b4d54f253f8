//! The duplication and reduction strategies, their diagnostics, degree
//! bounds and the comparison of their outputs.

mod bounds;
mod hypotheses;

use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;

use crate::dde::{
    build_det_and_p, clear_denominators, duplicate, single_equation_system, DdeSystem, DuplicatedSystem, NumeratorSystem,
};
use crate::error::{Error, Result};
use crate::guess::{guess_annihilator, guess_table, minimal_annihilator, verify_annihilator, GuessSpec, MinimalAnnihilator};
use crate::ideal::{
    buchberger_with_budget, elimination_order, interpolated_elimination, iterated_resultant_eliminate_with_budget,
    saturate_with_budget, Budget, IdealPresentation,
};
use crate::poly::{squarefree_part, Monomial, MultiPoly, UPoly};
use crate::series::{fixed_point_expand, TSeries};

pub use bounds::{all_bounds, degree_bound_duplication, degree_bound_specialized, degree_bound_full, Bounds};
pub use hypotheses::{
    check_h1, is_degenerate, root_checks, small_roots, zero_dimensional_at_sample, Check, HypothesisReport, TriState,
    ROOT_ORDER,
};

/// Every returned annihilator vanishes on the series to this order.
pub const VERIFY_ORDER: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Duplication,
    Reduction,
    Guess,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnihilatorResult {
    /// Annihilator in `t, z0`, canonical.
    #[serde(serialize_with = "crate::serialize_poly")]
    pub r: MultiPoly,
    pub strategy: Strategy,
    /// Which elimination produced `r`.
    pub route: String,
    pub verified_to_order: usize,
    pub minimal_factor: Option<MinimalAnnihilator>,
    pub diagnostics: HypothesisReport,
    /// Milliseconds per phase.
    #[serde(skip)]
    pub timings: Vec<(String, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Hypothesis,
    Budget,
    Degenerate,
}

/// A strategy that stopped without a verified annihilator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyFailure {
    pub kind: FailureKind,
    pub strategy: Strategy,
    pub message: String,
    pub diagnostics: HypothesisReport,
}

impl StrategyFailure {
    fn new(kind: FailureKind, strategy: Strategy, message: impl Into<String>, diagnostics: HypothesisReport) -> Self {
        StrategyFailure {
            kind,
            strategy,
            message: message.into(),
            diagnostics,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    /// Input or internal error.
    Internal(Error),
    Failed(Box<StrategyFailure>),
}

impl From<Error> for SolveError {
    fn from(e: Error) -> Self {
        SolveError::Internal(e)
    }
}

impl std::fmt::Display for SolveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveError::Internal(e) => write!(f, "{e}"),
            SolveError::Failed(s) => write!(f, "{:?} strategy failed: {}", s.strategy, s.message),
        }
    }
}

pub type SolveResult = std::result::Result<AnnihilatorResult, SolveError>;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub budget: Budget,
    /// Share of the budget granted to the symbolic block-order basis
    /// before falling back to interpolation, in seconds.
    pub symbolic_seconds: f64,
    pub verify_order: usize,
    /// Largest degree in `z0` searched by the interpolation route.
    pub max_degree: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: Budget::seconds(1800.0),
            symbolic_seconds: 20.0,
            verify_order: VERIFY_ORDER,
            max_degree: 400,
        }
    }
}

struct Timer {
    phases: Vec<(String, u64)>,
    last: Instant,
}

impl Timer {
    fn new() -> Timer {
        Timer {
            phases: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.phases.push((name.into(), (now - self.last).as_millis() as u64));
        self.last = now;
    }
}

/// `F_1(t, a)` to `order` terms.
pub fn target_series(sys: &DdeSystem, order: usize) -> Result<TSeries> {
    Ok(fixed_point_expand(sys, order)?.specializations.z(0).clone())
}

/// Budget ending at the earlier of `outer`'s deadline and `seconds` from now.
fn sub_budget(outer: &Budget, seconds: f64) -> Budget {
    let inner = Budget::seconds(seconds);
    Budget {
        deadline: match (outer.deadline, inner.deadline) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        },
        ..outer.clone()
    }
}

/// Nonzero elements of `gens` involving only `t` and `z0`, smallest first.
fn elimination_candidates(polys: &[MultiPoly], dup: &DuplicatedSystem) -> Vec<MultiPoly> {
    let keep = [dup.t_index(), dup.z0_index()];
    let mut out: Vec<MultiPoly> = polys
        .iter()
        .filter(|p| !p.is_zero() && p.involves(dup.z0_index()))
        .filter(|p| p.effective_vars().iter().all(|v| keep.contains(v)))
        .cloned()
        .collect();
    out.sort_by_key(|p| (p.degree_in(dup.z0_index()), p.degree_in(dup.t_index()), p.len()));
    out
}

/// Runs the elimination routes in turn and returns the first polynomial
/// in `t, z0` that vanishes on the series.
fn eliminate_duplicated(
    dup: &DuplicatedSystem,
    series: &TSeries,
    opts: &SolveOptions,
    notes: &mut Vec<String>,
) -> std::result::Result<(MultiPoly, String), (FailureKind, String)> {
    let table = guess_table();
    let accept = |r: &MultiPoly| -> Option<MultiPoly> {
        let r = r.embed(&table).ok()?.canonical();
        verify_annihilator(&r, series, opts.verify_order).ok()?.holds.then_some(r)
    };
    let mut last: (FailureKind, String);

    // 1. block-order basis of the saturated duplicated system
    let budget = sub_budget(&opts.budget, opts.symbolic_seconds);
    match buchberger_with_budget(&dup.presentation(), &budget) {
        Ok(gb) => {
            let cands = elimination_candidates(&gb.elements, dup);
            if let Some(r) = cands.iter().find_map(accept) {
                return Ok((r, "block-order Gröbner basis".into()));
            }
            notes.push("block-order basis: no element of the elimination ideal vanishes on the series".into());
            last = (FailureKind::Degenerate, "the elimination ideal is zero".into());
        }
        Err(e) => {
            notes.push(format!("block-order basis: {e}"));
            last = (FailureKind::Budget, e.to_string());
        }
    }

    // 2. minimal polynomial of z0 at sampled t, interpolated and lifted
    if dup.vars.len() == dup.z0_index() + 1 {
        let gens = dup.presentation().generators;
        match interpolated_elimination(&gens, dup.t_index(), dup.z0_index(), opts.max_degree, 64, &opts.budget) {
            Ok((r, rep)) => {
                if let Some(r) = accept(&r) {
                    notes.push(format!(
                        "interpolation: {} prime(s), {} values of t, degree {} in z0",
                        rep.primes_used, rep.points_per_prime, rep.degree
                    ));
                    return Ok((r, "specialised degrevlex bases, interpolated in t".into()));
                }
                notes.push("interpolation: reconstructed polynomial failed series verification".into());
            }
            Err(e) => {
                notes.push(format!("interpolation: {e}"));
                last = (
                    if matches!(e, Error::BudgetExhausted(_)) { FailureKind::Budget } else { FailureKind::Degenerate },
                    e.to_string(),
                );
            }
        }
    }

    // 3. resultant cascade on the equations (saturation not applied)
    if opts.budget.expired() {
        return Err((FailureKind::Budget, "budget exhausted before the resultant cascade".into()));
    }
    let elim: Vec<usize> = (1..dup.t_index()).collect();
    let keep = [dup.t_index(), dup.z0_index()];
    match iterated_resultant_eliminate_with_budget(&dup.equations, &elim, &keep, &opts.budget) {
        Ok(r) => match accept(&r) {
            Some(r) => return Ok((r, "iterated resultants".into())),
            None => notes.push("iterated resultants: survivor failed series verification".into()),
        },
        Err(e) => {
            notes.push(format!("iterated resultants: {e}"));
            last = (
                if matches!(e, Error::BudgetExhausted(_)) { FailureKind::Budget } else { FailureKind::Degenerate },
                e.to_string(),
            );
        }
    }
    Err(last)
}

/// `R = z0 - f_1(a)` for a system whose `Q_i` all vanish.
fn degenerate_annihilator(sys: &DdeSystem) -> MultiPoly {
    let vars = guess_table();
    let c = sys.f[0].eval(&sys.a);
    (&MultiPoly::var(&vars, 1) - &MultiPoly::constant(&vars, c)).canonical()
}

fn finish(
    r: MultiPoly,
    strategy: Strategy,
    route: String,
    series: &TSeries,
    diagnostics: HypothesisReport,
    mut timer: Timer,
) -> SolveResult {
    let minimal = minimal_annihilator(&r, series)?;
    timer.lap("minimal factor");
    Ok(AnnihilatorResult {
        r,
        strategy,
        route,
        verified_to_order: series.order(),
        minimal_factor: Some(minimal),
        diagnostics,
        timings: timer.phases,
    })
}

fn solve_degenerate(sys: &DdeSystem, strategy: Strategy, opts: &SolveOptions, report: HypothesisReport) -> SolveResult {
    let timer = Timer::new();
    let series = target_series(sys, opts.verify_order)?;
    let r = degenerate_annihilator(sys);
    if !verify_annihilator(&r, &series, opts.verify_order)?.holds {
        return Err(Error::Degenerate("constant solution failed verification".into()).into());
    }
    finish(r, strategy, "closed form (Q = 0)".into(), &series, report, timer)
}

/// Duplication strategy: `nk` copies of `(E_i, Det, P)` with `sat ≠ 0`,
/// eliminated down to `t, z0`.
pub fn solve_by_duplication(sys: &DdeSystem, opts: &SolveOptions) -> SolveResult {
    let mut timer = Timer::new();
    let nk = sys.n * sys.k;
    let mut report = HypothesisReport::new(nk);
    if is_degenerate(sys) {
        check_h1(sys, &mut report, &opts.budget)?;
        return solve_degenerate(sys, Strategy::Duplication, opts, report);
    }
    let ns = build_det_and_p(&clear_denominators(sys)?)?;
    let d = small_roots(sys, &ns, ns.det.as_ref().expect("built above"))?;
    let (count, distinct) = root_checks(&d, nk, "Det(u)");
    report.h1_root_count = count;
    report.h1_distinct = distinct;
    timer.lap("diagnostics");
    if report.h1_root_count.state == TriState::Refuted {
        let msg = format!(
            "{}; the strategy needs nk distinct roots (try the deformed system)",
            report.h1_root_count.evidence
        );
        return Err(SolveError::Failed(Box::new(StrategyFailure::new(
            FailureKind::Hypothesis,
            Strategy::Duplication,
            msg,
            report,
        ))));
    }
    let dup = duplicate(&ns)?;
    let series = target_series(sys, opts.verify_order)?;
    timer.lap("setup");
    solve_duplicated(&dup, Strategy::Duplication, &series, opts, report, timer)
}

fn solve_duplicated(
    dup: &DuplicatedSystem,
    strategy: Strategy,
    series: &TSeries,
    opts: &SolveOptions,
    mut report: HypothesisReport,
    mut timer: Timer,
) -> SolveResult {
    let mut notes = Vec::new();
    let outcome = eliminate_duplicated(dup, series, opts, &mut notes);
    timer.lap("elimination");
    report.notes.extend(notes);
    match outcome {
        Ok((r, route)) => {
            if route.starts_with("specialised") || route.starts_with("block") {
                let field = match strategy {
                    Strategy::Reduction => &mut report.h2_zero_dimensional,
                    _ => &mut report.h1_zero_dimensional,
                };
                *field = Check::new(TriState::Confirmed, format!("finite over ℚ(t): {route}"));
            }
            finish(r, strategy, route, series, report, timer)
        }
        Err((kind, msg)) => Err(SolveError::Failed(Box::new(StrategyFailure::new(kind, strategy, msg, report)))),
    }
}

/// Outcome of [`reduce_to_single_equation`].
#[derive(Debug, Clone, PartialEq)]
pub enum Reduction {
    /// The generator `E` in the numerator table (`x1, u, z0.., t`).
    Principal(MultiPoly),
    /// The elimination basis, which has several generators.
    NotPrincipal(Vec<MultiPoly>),
}

/// Content of `p` as a polynomial in the variables other than `t`, with
/// coefficients in ℚ[t].
fn t_content(p: &MultiPoly, t: usize) -> UPoly {
    let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<num_rational::BigRational>> = Default::default();
    for term in p.terms() {
        let mut key = term.mono.exps().to_vec();
        let e = key[t] as usize;
        key[t] = 0;
        let c = groups.entry(key).or_default();
        if c.len() <= e {
            c.resize(e + 1, Zero::zero());
        }
        c[e] = term.coeff.clone();
    }
    groups.into_values().fold(UPoly::zero(), |g, c| g.gcd(&UPoly::new(c)))
}

fn t_primitive(p: &MultiPoly, t: usize) -> MultiPoly {
    let c = t_content(p, t);
    let terms = c.coeffs().iter().enumerate().map(|(i, x)| {
        let mut e = vec![0u32; p.vars().len()];
        e[t] = i as u32;
        (Monomial::new(e), x.clone())
    });
    let c = MultiPoly::from_terms(p.vars(), terms);
    p.div_exact(&c).expect("content divides").canonical()
}

/// `⟨E_1..E_n⟩ : Det^∞` intersected with the ring without `x2..xn`; for
/// `n = 1` this is `E_1` itself.
pub fn reduce_to_single_equation(sys: &DdeSystem, budget: &Budget) -> Result<(NumeratorSystem, Reduction)> {
    let ns = build_det_and_p(&clear_denominators(sys)?)?;
    if sys.n == 1 {
        let e = ns.e[0].clone();
        return Ok((ns, Reduction::Principal(e)));
    }
    let nvars = ns.vars.len();
    let keep: Vec<usize> = (0..nvars).filter(|&v| v == 0 || v >= sys.n).collect();
    let order = elimination_order(nvars, &keep);
    let pres = IdealPresentation::new(&ns.vars, ns.e.clone(), order);
    let sat = saturate_with_budget(&pres, ns.det.as_ref().expect("built above"), budget)?;
    let ti = ns.t_index();
    let mut elim: Vec<MultiPoly> = sat
        .generators
        .iter()
        .filter(|g| (1..sys.n).all(|x| !g.involves(x)))
        .filter(|g| g.effective_vars().iter().any(|&v| v != ti))
        .map(|g| t_primitive(g, ti))
        .collect();
    if elim.is_empty() {
        return Err(Error::Degenerate("the elimination ideal is zero".into()));
    }
    elim.sort_by_key(|g| (g.total_degree(), g.len()));
    elim.dedup();
    let first = elim[0].clone();
    if elim.iter().all(|g| g.divisible_by(&first)) {
        Ok((ns, Reduction::Principal(first)))
    } else {
        Ok((ns, Reduction::NotPrincipal(elim)))
    }
}

/// Reduction strategy: a single equation `E` in `x1`, duplicated `nk`
/// times together with `∂E/∂x1` and `∂E/∂u`.
pub fn solve_by_reduction(sys: &DdeSystem, opts: &SolveOptions) -> SolveResult {
    let mut timer = Timer::new();
    let nk = sys.n * sys.k;
    let mut report = HypothesisReport::new(nk);
    if is_degenerate(sys) {
        return solve_degenerate(sys, Strategy::Reduction, opts, report);
    }
    let (ns, reduction) = reduce_to_single_equation(sys, &opts.budget)?;
    timer.lap("reduction");
    let e = match reduction {
        Reduction::Principal(e) => {
            report.principal = Check::new(TriState::Confirmed, "single generator after removing t-content");
            e
        }
        Reduction::NotPrincipal(gens) => {
            report.principal = Check::new(TriState::Refuted, format!("{} generators", gens.len()));
            return Err(SolveError::Failed(Box::new(StrategyFailure::new(
                FailureKind::Hypothesis,
                Strategy::Reduction,
                "the eliminated ideal is not principal",
                report,
            ))));
        }
    };
    let dx = e.partial_derivative(ns.x_index(0));
    let d = small_roots(sys, &ns, &dx)?;
    let (count, _) = root_checks(&d, nk, "∂E/∂x1(u)");
    report.h2_root_count = count;
    timer.lap("diagnostics");
    if report.h2_root_count.state == TriState::Refuted {
        let msg = format!("H2 fails: {}", report.h2_root_count.evidence);
        return Err(SolveError::Failed(Box::new(StrategyFailure::new(
            FailureKind::Hypothesis,
            Strategy::Reduction,
            msg,
            report,
        ))));
    }
    let single = single_equation_system(&ns, &e)?;
    let mut dup = duplicate(&single)?;
    for (name, meaning) in dup.correspondence.iter_mut() {
        if let Some(j) = name.strip_prefix('z').and_then(|s| s.parse::<usize>().ok()) {
            *meaning = ns.z_meaning(j);
        }
    }
    let series = target_series(sys, opts.verify_order)?;
    timer.lap("setup");
    solve_duplicated(&dup, Strategy::Reduction, &series, opts, report, timer)
}

/// Guessing as a last resort: bounds grow until the series order is used up.
pub fn solve_by_guessing(sys: &DdeSystem, order: usize, opts: &SolveOptions) -> SolveResult {
    let mut timer = Timer::new();
    let report = HypothesisReport::new(sys.n * sys.k);
    let series = target_series(sys, order.max(opts.verify_order))?;
    timer.lap("expansion");
    let n = series.order();
    let mut size = 1;
    while (size + 1) * (size + 1) + crate::guess::MIN_MARGIN <= n {
        if opts.budget.expired() {
            break;
        }
        let spec = GuessSpec::new(series.clone(), size, size);
        if let Some(r) = guess_annihilator(&spec)? {
            timer.lap("guess");
            return finish(r, Strategy::Guess, "guessed from the series".into(), &series, report, timer);
        }
        size += 1;
    }
    Err(SolveError::Failed(Box::new(StrategyFailure::new(
        FailureKind::Budget,
        Strategy::Guess,
        format!("no annihilator with degrees <= {} fits {n} series terms", size - 1),
        report,
    ))))
}

/// Reduction first, duplication when (H2) fails, guessing last, all under
/// one budget.
pub fn solve_auto(sys: &DdeSystem, opts: &SolveOptions) -> SolveResult {
    let mut failures = Vec::new();
    if sys.n >= 2 {
        let reduce_opts = SolveOptions {
            budget: sub_budget(&opts.budget, 60.0),
            ..opts.clone()
        };
        match solve_by_reduction(sys, &reduce_opts) {
            Ok(r) => return Ok(r),
            Err(e) => failures.push(e.to_string()),
        }
    }
    match solve_by_duplication(sys, opts) {
        Ok(r) => return Ok(r),
        Err(e) => failures.push(e.to_string()),
    }
    match solve_by_guessing(sys, 120, opts) {
        Ok(mut r) => {
            r.diagnostics.notes.extend(failures);
            Ok(r)
        }
        Err(e) => Err(e),
    }
}

/// Every diagnostic at once.
pub fn check_hypotheses(sys: &DdeSystem, budget: &Budget) -> Result<HypothesisReport> {
    let mut report = HypothesisReport::new(sys.n * sys.k);
    check_h1(sys, &mut report, budget)?;
    if is_degenerate(sys) {
        return Ok(report);
    }
    match reduce_to_single_equation(sys, budget) {
        Ok((ns, Reduction::Principal(e))) => {
            report.principal = Check::new(TriState::Confirmed, "single generator after removing t-content");
            let dx = e.partial_derivative(ns.x_index(0));
            let d = small_roots(sys, &ns, &dx)?;
            report.h2_root_count = root_checks(&d, sys.n * sys.k, "∂E/∂x1(u)").0;
            if report.h2_root_count.state == TriState::Confirmed && sys.params.is_empty() {
                let dup = duplicate(&single_equation_system(&ns, &e)?)?;
                report.h2_zero_dimensional = zero_dimensional_at_sample(&dup, budget);
            }
        }
        Ok((_, Reduction::NotPrincipal(g))) => {
            report.principal = Check::new(TriState::Refuted, format!("{} generators", g.len()));
        }
        Err(Error::BudgetExhausted(m)) => {
            report.principal = Check::new(TriState::Inconclusive, format!("budget exhausted: {m}"));
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Divides,
    DoesNotDivide,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub verdict: Verdict,
    /// `SqFree(R1) / SqFree(R2)` when exact.
    #[serde(serialize_with = "crate::serialize_opt_poly")]
    pub quotient: Option<MultiPoly>,
}

/// Whether the squarefree part of `r2` divides that of `r1`.
pub fn compare_strategies(r1: &MultiPoly, r2: &MultiPoly) -> Result<Comparison> {
    let table = guess_table();
    let s1 = squarefree_part(&r1.embed(&table)?)?;
    let s2 = squarefree_part(&r2.embed(&table)?)?;
    let quotient = s1.div_exact(&s2);
    Ok(Comparison {
        verdict: if quotient.is_some() { Verdict::Divides } else { Verdict::DoesNotDivide },
        quotient,
    })
}
