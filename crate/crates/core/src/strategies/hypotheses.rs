//! Checks of the root-count and finiteness hypotheses behind the two
//! strategies.

use std::collections::HashMap;

use serde::Serialize;

use crate::dde::{build_det_and_p, clear_denominators, duplicate, DdeSystem, DuplicatedSystem, NumeratorSystem};
use crate::error::{Error, Result};
use crate::ideal::field::primes_below_2_62;
use crate::ideal::{modular_basis, Budget, IdealPresentation};
use crate::poly::{rat, MonomialOrder, MultiPoly};
use crate::series::{eval_poly_at_series, fixed_point_expand, newton_root_count, Binding, Distinctness, PuiseuxDiagnostic};

/// Series order used for root counting.
pub const ROOT_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Confirmed,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub state: TriState,
    pub evidence: String,
}

impl Check {
    pub fn new(state: TriState, evidence: impl Into<String>) -> Check {
        Check {
            state,
            evidence: evidence.into(),
        }
    }

    fn not_run() -> Check {
        Check::new(TriState::Inconclusive, "not checked")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    /// `nk`, the number of roots both strategies need.
    pub required_roots: usize,
    pub h1_root_count: Check,
    pub h1_distinct: Check,
    pub h1_zero_dimensional: Check,
    pub h2_root_count: Check,
    pub h2_zero_dimensional: Check,
    pub principal: Check,
    /// Never decided; recorded for completeness.
    pub radical: String,
    pub hypothesis_p: String,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    pub fn new(required_roots: usize) -> HypothesisReport {
        HypothesisReport {
            required_roots,
            h1_root_count: Check::not_run(),
            h1_distinct: Check::not_run(),
            h1_zero_dimensional: Check::not_run(),
            h2_root_count: Check::not_run(),
            h2_zero_dimensional: Check::not_run(),
            principal: Check::not_run(),
            radical: "assumed".into(),
            hypothesis_p: "assumed, not checked".into(),
            notes: Vec::new(),
        }
    }
}

/// True when every `Q_i` vanishes, so that `F_i = f_i` exactly.
pub fn is_degenerate(sys: &DdeSystem) -> bool {
    sys.q.iter().all(|q| q.is_zero())
}

/// Newton-polygon diagnostic for `poly` (in the numerator table of `ns`)
/// with `x_i` and `z_j` replaced by the series solution, in the variable
/// `u - a`.
pub fn small_roots(sys: &DdeSystem, ns: &NumeratorSystem, poly: &MultiPoly) -> Result<PuiseuxDiagnostic> {
    let shifted = sys.shift_catalytic_point()?;
    let exp = fixed_point_expand(&shifted, ROOT_ORDER)?;
    let ui = ns.u_index();
    let mut sub = HashMap::new();
    sub.insert(
        ui,
        &MultiPoly::var(&ns.vars, ui) + &MultiPoly::constant(&ns.vars, sys.a.clone()),
    );
    let p = poly.substitute(&sub, &ns.vars)?;
    let mut b = HashMap::new();
    for i in 0..sys.n {
        b.insert(ns.x_index(i), Binding::U(exp.solutions[i].clone()));
    }
    for j in 0..sys.n * sys.k {
        b.insert(ns.z_index(j), Binding::T(exp.specializations.z(j).clone()));
    }
    let value = eval_poly_at_series(&p, &b, ROOT_ORDER)?;
    newton_root_count(&value.u_coefficients(), 4)
}

/// Root count and distinctness checks against `nk`.
pub fn root_checks(d: &PuiseuxDiagnostic, nk: usize, what: &str) -> (Check, Check) {
    let count = if d.root_count >= nk {
        Check::new(
            TriState::Confirmed,
            format!("{what} has {} Puiseux roots of positive valuation; nk = {nk}", d.root_count),
        )
    } else {
        Check::new(
            TriState::Refuted,
            format!("{what} has {} Puiseux root(s) of positive valuation < nk = {nk}", d.root_count),
        )
    };
    let distinct = match d.distinctness {
        Distinctness::Confirmed => Check::new(TriState::Confirmed, format!("by {}", d.distinctness_method)),
        Distinctness::Inconclusive => Check::new(
            TriState::Inconclusive,
            format!("undecided at precision {}", d.precision),
        ),
    };
    (count, distinct)
}

/// Finiteness of the duplicated, saturated system at one value of `t`,
/// modulo a prime, from a degrevlex basis.
pub fn zero_dimensional_at_sample(dup: &DuplicatedSystem, budget: &Budget) -> Check {
    let t = dup.t_index();
    let sample = rat(5);
    let gens: Vec<MultiPoly> = dup.presentation().generators.iter().map(|g| g.eval_var(t, &sample)).collect();
    let pres = IdealPresentation::new(&dup.vars, gens, MonomialOrder::DegRevLex);
    let prime = primes_below_2_62(1)[0];
    match modular_basis(&pres, prime, budget) {
        Ok(mb) => {
            let n = dup.vars.len();
            let params: Vec<usize> = (0..n).filter(|&v| v == t || v > dup.z0_index()).collect();
            let leads: Vec<&Vec<u32>> = mb.elements.iter().map(|e| &e[0].0).collect();
            if leads.iter().any(|m| (0..n).all(|v| params.contains(&v) || m[v] == 0)) {
                return Check::new(TriState::Refuted, "the saturated system has no solutions at t = 5");
            }
            let finite = (0..n).filter(|v| !params.contains(v)).all(|v| {
                leads
                    .iter()
                    .any(|m| m[v] > 0 && (0..n).all(|w| w == v || params.contains(&w) || m[w] == 0))
            });
            if finite {
                Check::new(TriState::Confirmed, "finitely many solutions at t = 5 (degrevlex basis mod p)")
            } else {
                Check::new(TriState::Refuted, "positive-dimensional at t = 5 (degrevlex basis mod p)")
            }
        }
        Err(Error::BudgetExhausted(m)) => Check::new(TriState::Inconclusive, format!("budget exhausted: {m}")),
        Err(e) => Check::new(TriState::Inconclusive, e.to_string()),
    }
}

/// (H1) diagnostics for the duplication strategy.
pub fn check_h1(sys: &DdeSystem, report: &mut HypothesisReport, budget: &Budget) -> Result<()> {
    let nk = sys.n * sys.k;
    if is_degenerate(sys) {
        report.h1_root_count = Check::new(TriState::Refuted, "every Q_i vanishes; Det is constant and has no roots");
        report.notes.push("degenerate system: F_i = f_i(u) exactly, solvable without elimination".into());
        return Ok(());
    }
    let ns = build_det_and_p(&clear_denominators(sys)?)?;
    let det = ns.det.clone().expect("built above");
    let d = small_roots(sys, &ns, &det)?;
    let (count, distinct) = root_checks(&d, nk, "Det(u)");
    report.h1_root_count = count;
    report.h1_distinct = distinct;
    if report.h1_root_count.state == TriState::Confirmed && sys.params.is_empty() {
        report.h1_zero_dimensional = zero_dimensional_at_sample(&duplicate(&ns)?, budget);
    }
    Ok(())
}
