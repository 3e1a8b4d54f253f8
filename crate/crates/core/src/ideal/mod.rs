//! Gröbner bases, saturation, elimination and resultant cascades.

mod engine;
pub mod field;
mod interpolate;
mod modular;

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{resultant, Monomial, MonomialOrder, MultiPoly, Rational, VarTable};
use engine::{Engine, Layout, Poly};
use field::{Field, Rationals};

pub use interpolate::{interpolated_elimination, InterpolationReport};
pub use modular::{modular_basis, modular_minimal_polynomial, multimodular_elimination, ModularBasis, MultimodularReport};

/// Limits for a basis computation. `None` means unlimited.
#[derive(Debug, Clone, Default)]
pub struct Budget {
    pub max_pairs: Option<usize>,
    pub max_basis: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn seconds(s: f64) -> Self {
        Budget {
            deadline: Some(Instant::now() + Duration::from_secs_f64(s)),
            ..Budget::default()
        }
    }

    pub fn remaining(&self) -> Option<Duration> {
        self.deadline
            .map(|d| d.saturating_duration_since(Instant::now()))
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// One sample of the engine's progress.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub pairs_processed: usize,
    pub basis_size: usize,
    pub pending_pairs: usize,
    pub zero_reductions: usize,
    pub millis: u64,
}

/// Generators of an ideal together with the order used to treat them.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealPresentation {
    pub generators: Vec<MultiPoly>,
    pub order: MonomialOrder,
    pub vars: Arc<VarTable>,
}

impl IdealPresentation {
    pub fn new(vars: &Arc<VarTable>, generators: Vec<MultiPoly>, order: MonomialOrder) -> Self {
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.canonical_with(&order))
            .collect();
        IdealPresentation {
            generators,
            order,
            vars: vars.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Order descriptor followed by one generator per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("order {}\n", self.order.describe(self.vars.names()));
        for g in &self.generators {
            s.push_str(&g.display_with(&self.order));
            s.push('\n');
        }
        s
    }
}

/// A reduced Gröbner basis with monic elements, sorted by leading
/// monomial ascending.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub elements: Vec<MultiPoly>,
    pub order: MonomialOrder,
    pub vars: Arc<VarTable>,
    pub reduced: bool,
    pub trace: Vec<TraceEvent>,
}

impl GroebnerBasis {
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn normal_form(&self, p: &MultiPoly) -> Result<MultiPoly> {
        crate::poly::normal_form(p, &self.elements, &self.order)
    }

    pub fn contains(&self, p: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| g.leading_term(&self.order).unwrap().mono.clone())
            .collect()
    }
}

pub(crate) fn layout_for(order: &MonomialOrder, nvars: usize) -> Layout {
    Layout::new(nvars, &order.blocks(nvars))
}

pub(crate) fn to_engine<F: Field>(f: &F, eng: &Engine<F>, lay: &Layout, p: &MultiPoly) -> Option<Poly<F::E>> {
    let mut terms = Vec::with_capacity(p.len());
    for t in p.terms() {
        terms.push((lay.encode(t.mono.exps()), f.from_rational(&t.coeff)?));
    }
    Some(eng.make_poly(terms))
}

/// Runs the engine over `f`; output terms are (exponents, coefficient).
pub(crate) fn run_engine<F: Field>(
    f: &F,
    gens: &[MultiPoly],
    order: &MonomialOrder,
    nvars: usize,
    budget: &Budget,
) -> Result<(Vec<Vec<(Vec<u32>, F::E)>>, Vec<TraceEvent>)> {
    let lay = layout_for(order, nvars);
    let eng = Engine::new(f, &lay, budget.clone());
    let mut polys = Vec::with_capacity(gens.len());
    for g in gens {
        match to_engine(f, &eng, &lay, g) {
            Some(p) => polys.push(p),
            None => return Err(Error::precondition("coefficient denominator vanishes in the field")),
        }
    }
    let (basis, trace) = eng.run(polys)?;
    let s = lay.stride;
    let out = basis
        .into_iter()
        .map(|p| {
            (0..p.len())
                .map(|i| (lay.decode(p.mon(i, s)), p.cs[i].clone()))
                .collect()
        })
        .collect();
    Ok((out, trace))
}

/// Reduced Gröbner basis over ℚ; no limits.
pub fn buchberger(gens: &IdealPresentation) -> GroebnerBasis {
    buchberger_with_budget(gens, &Budget::unlimited()).expect("unlimited budget")
}

/// Reduced Gröbner basis over ℚ under a budget.
pub fn buchberger_with_budget(gens: &IdealPresentation, budget: &Budget) -> Result<GroebnerBasis> {
    let vars = gens.vars.clone();
    for g in &gens.generators {
        if g.vars() != &vars && **g.vars() != *vars {
            return Err(Error::structural("generator outside the presentation's table"));
        }
    }
    let (basis, trace) = run_engine(&Rationals, &gens.generators, &gens.order, vars.len(), budget)?;
    let elements = basis
        .into_iter()
        .map(|terms| {
            MultiPoly::from_terms(&vars, terms.into_iter().map(|(e, c)| (Monomial::new(e), c)))
        })
        .collect();
    Ok(GroebnerBasis {
        elements,
        order: gens.order.clone(),
        vars,
        reduced: true,
        trace,
    })
}

fn fresh_name(vars: &VarTable, base: &str) -> String {
    let mut name = base.to_string();
    let mut k = 0;
    while vars.index(&name).is_some() {
        k += 1;
        name = format!("{base}{k}");
    }
    name
}

/// Table with `extra` prepended to `vars`; returns it with the index shift.
fn extend_front(vars: &Arc<VarTable>, extra: &str) -> Arc<VarTable> {
    let mut names = vec![extra.to_string()];
    names.extend(vars.names().iter().cloned());
    VarTable::new(&names).expect("fresh name is unique")
}

fn shifted_blocks(order: &MonomialOrder, nvars: usize, by: usize) -> Vec<Vec<usize>> {
    order
        .blocks(nvars)
        .into_iter()
        .map(|b| b.into_iter().map(|v| v + by).collect())
        .collect()
}

/// `gens : g^∞` through the Rabinowitsch variable, under a budget.
pub fn saturate_with_budget(gens: &IdealPresentation, g: &MultiPoly, budget: &Budget) -> Result<IdealPresentation> {
    if g.is_zero() {
        return Err(Error::precondition("saturation by the zero polynomial"));
    }
    let vars = &gens.vars;
    let name = fresh_name(vars, "m");
    let ext = extend_front(vars, &name);
    let mut blocks = vec![vec![0]];
    blocks.extend(shifted_blocks(&gens.order, vars.len(), 1));
    let order = MonomialOrder::Block(blocks);
    let mut polys: Vec<MultiPoly> = gens
        .generators
        .iter()
        .map(|p| p.embed(&ext))
        .collect::<Result<_>>()?;
    let m = MultiPoly::var(&ext, 0);
    polys.push(&(&m * &g.embed(&ext)?) - &MultiPoly::one(&ext));
    let gb = buchberger_with_budget(&IdealPresentation::new(&ext, polys, order), budget)?;
    let kept: Vec<MultiPoly> = gb
        .elements
        .iter()
        .filter(|p| !p.involves(0))
        .map(|p| p.embed(vars))
        .collect::<Result<_>>()?;
    Ok(IdealPresentation::new(vars, kept, gens.order.clone()))
}

pub fn saturate(gens: &IdealPresentation, g: &MultiPoly) -> Result<IdealPresentation> {
    saturate_with_budget(gens, g, &Budget::unlimited())
}

/// Block order ranking `elim` above `keep`, degrevlex inside each.
pub fn elimination_order(nvars: usize, keep: &[usize]) -> MonomialOrder {
    let elim: Vec<usize> = (0..nvars).filter(|v| !keep.contains(v)).collect();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    MonomialOrder::Block(vec![elim, keep])
}

/// Generators of `gens ∩ ℚ[keep]`, under a budget.
pub fn eliminate_with_budget(gens: &IdealPresentation, keep: &[usize], budget: &Budget) -> Result<IdealPresentation> {
    let vars = &gens.vars;
    if keep.iter().any(|&v| v >= vars.len()) {
        return Err(Error::structural("kept variable outside the table"));
    }
    let order = elimination_order(vars.len(), keep);
    let pres = IdealPresentation::new(vars, gens.generators.clone(), order.clone());
    let gb = buchberger_with_budget(&pres, budget)?;
    let kept: Vec<MultiPoly> = gb
        .elements
        .into_iter()
        .filter(|p| p.effective_vars().iter().all(|v| keep.contains(v)))
        .collect();
    Ok(IdealPresentation::new(vars, kept, order))
}

pub fn eliminate(gens: &IdealPresentation, keep: &[usize]) -> Result<IdealPresentation> {
    eliminate_with_budget(gens, keep, &Budget::unlimited())
}

/// Finiteness criterion: every non-parameter variable has a basis element
/// whose leading monomial, restricted to non-parameters, is a pure power of
/// it. The basis order must rank the parameters in its last block.
pub fn is_zero_dimensional(gb: &GroebnerBasis, over_params: &[usize]) -> bool {
    let n = gb.vars.len();
    let lms = gb.leading_monomials();
    if lms.iter().any(|m| (0..n).all(|v| over_params.contains(&v) || m.exp(v) == 0)) {
        // a unit over the parameter field
        return true;
    }
    (0..n).filter(|v| !over_params.contains(v)).all(|v| {
        lms.iter().any(|m| {
            m.exp(v) > 0
                && (0..n).all(|w| w == v || over_params.contains(&w) || m.exp(w) == 0)
        })
    })
}

/// Divides out the largest monomial dividing every term.
fn strip_monomial_content(p: &MultiPoly) -> MultiPoly {
    let n = p.vars().len();
    let mut e: Vec<u32> = vec![u32::MAX; n];
    for t in p.terms() {
        for (v, x) in e.iter_mut().enumerate() {
            *x = (*x).min(t.mono.exp(v));
        }
    }
    if p.is_zero() || e.iter().all(|&x| x == 0) {
        return p.clone();
    }
    p.div_exact(&MultiPoly::monomial(p.vars(), Monomial::new(e), Rational::from_integer(1.into())))
        .expect("monomial content divides")
}

/// Eliminates the listed variables one at a time by resultants.
///
/// At each stage the polynomial of least degree in the variable is the
/// pivot and resultants are taken against every other polynomial
/// involving it. Returns the smallest nonzero survivor in `keep`.
pub fn iterated_resultant_eliminate(gens: &[MultiPoly], eliminate_order: &[usize], keep: &[usize]) -> Result<MultiPoly> {
    iterated_resultant_eliminate_with_budget(gens, eliminate_order, keep, &Budget::unlimited())
}

/// `iterated_resultant_eliminate` checking the deadline between resultants.
pub fn iterated_resultant_eliminate_with_budget(
    gens: &[MultiPoly],
    eliminate_order: &[usize],
    keep: &[usize],
    budget: &Budget,
) -> Result<MultiPoly> {
    let mut current: Vec<MultiPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| strip_monomial_content(g).canonical())
        .collect();
    for &v in eliminate_order {
        let (mut with, without): (Vec<MultiPoly>, Vec<MultiPoly>) =
            current.into_iter().partition(|p| p.involves(v));
        if with.is_empty() {
            current = without;
            continue;
        }
        with.sort_by_key(|p| (p.degree_in(v), p.len()));
        let pivot = with[0].clone();
        let mut next = without;
        let mut produced = 0;
        for other in &with[1..] {
            if budget.expired() {
                return Err(Error::BudgetExhausted("resultant cascade ran out of time".into()));
            }
            let r = resultant(&pivot, other, v)?;
            if r.is_zero() {
                continue;
            }
            produced += 1;
            let r = strip_monomial_content(&r).canonical();
            if !r.is_constant() && !next.iter().any(|q| q == &r) {
                next.push(r);
            }
        }
        if with.len() > 1 && produced == 0 {
            return Err(Error::Degenerate(format!(
                "every resultant in `{}` vanished; the inputs share a common component",
                pivot.vars().name(v)
            )));
        }
        current = next;
    }
    let mut survivors: Vec<MultiPoly> = current
        .into_iter()
        .filter(|p| p.effective_vars().iter().all(|v| keep.contains(v)) && !p.is_constant())
        .collect();
    survivors.sort_by_key(|p| (p.total_degree(), p.len()));
    survivors
        .into_iter()
        .next()
        .ok_or_else(|| Error::Degenerate("no nonzero polynomial survived the elimination".into()))
}

/// Convenience: parse several polynomials in one table.
pub fn parse_all(texts: &[&str], vars: &Arc<VarTable>) -> Result<Vec<MultiPoly>> {
    texts.iter().map(|t| MultiPoly::parse(t, vars)).collect()
}
