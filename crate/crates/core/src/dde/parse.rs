//! Reader for the line-based system language.
//!
//! ```text
//! catalytic u at 1
//! order 1
//! F1 = 1 + t*u*F1^2 + t*u*D[F1]
//! ```
//!
//! `Dj[Fi]` is the j-th iterated divided difference at the catalytic
//! point, and `Fi(a)` abbreviates `Fi - (u - a)*D[Fi]`. The `order` line is
//! optional; without it `k` is the largest Δ-order used (at least 1).

use std::sync::Arc;

use num_traits::Zero;

use super::DdeSystem;
use crate::error::{Error, Result};
use crate::poly::{parse_expression, Atom, AtomResolver, Expr, MultiPoly, Pos, Rational, UPoly, VarTable};

fn semantic(pos: Pos, message: impl Into<String>) -> Error {
    Error::Semantic {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

struct Equation {
    index: usize,
    rhs: Expr,
}

/// Reads `F<i>` and returns `i - 1`.
fn unknown_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('F')?;
    if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse::<usize>().ok().filter(|&i| i >= 1).map(|i| i - 1)
}

/// Reads `D`, `D2`, .. and returns the order.
fn delta_order(head: &str) -> Option<usize> {
    let rest = head.strip_prefix('D')?;
    if rest.is_empty() {
        return Some(1);
    }
    if rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok().filter(|&j| j >= 1)
}

fn constant_expr(e: &Expr) -> Result<Rational> {
    let vars = VarTable::new::<&str>(&[])?;
    struct NoAtoms;
    impl AtomResolver for NoAtoms {
        fn resolve(&mut self, _: &Atom, pos: Pos, _: &Arc<VarTable>) -> Result<MultiPoly> {
            Err(semantic(pos, "expected a rational constant"))
        }
    }
    let p = e.eval(&vars, &mut NoAtoms)?;
    Ok(p.constant_value().unwrap_or_else(Rational::zero))
}

/// Position of the first token of an expression.
fn start(e: &Expr) -> Pos {
    match e {
        Expr::Add(a, ..) | Expr::Sub(a, ..) | Expr::Mul(a, ..) | Expr::Div(a, ..) | Expr::Pow(a, ..) => start(a),
        _ => e.pos(),
    }
}

/// Largest Δ-order mentioned in an expression, with the position of the
/// atom that attains it.
fn max_order(e: &Expr, best: &mut Option<(usize, Pos)>) {
    let mut bump = |j: usize, p: Pos| {
        if best.is_none_or(|(b, _)| j > b) {
            *best = Some((j, p));
        }
    };
    match e {
        Expr::Num(..) => {}
        Expr::Atom(Atom::Indexed { head, .. }, p) => {
            if let Some(j) = delta_order(head) {
                bump(j, *p);
            }
        }
        Expr::Atom(Atom::Call { arg, .. }, p) => {
            bump(1, *p);
            max_order(arg, best);
        }
        Expr::Atom(Atom::Ident(_), _) => {}
        Expr::Neg(a, _) | Expr::Pow(a, _, _) => max_order(a, best),
        Expr::Add(a, b, _) | Expr::Sub(a, b, _) | Expr::Mul(a, b, _) | Expr::Div(a, b, _) => {
            max_order(a, best);
            max_order(b, best);
        }
    }
}

struct SystemResolver {
    n: usize,
    k: usize,
    a: Rational,
}

impl SystemResolver {
    fn unknown(&self, name: &str, pos: Pos) -> Result<usize> {
        match unknown_index(name) {
            Some(i) if i < self.n => Ok(i),
            Some(_) => Err(semantic(pos, format!("`{name}` has no defining equation"))),
            None => Err(semantic(pos, format!("unknown symbol `{name}`"))),
        }
    }
}

impl AtomResolver for SystemResolver {
    fn resolve(&mut self, atom: &Atom, pos: Pos, vars: &Arc<VarTable>) -> Result<MultiPoly> {
        let k = self.k;
        match atom {
            Atom::Ident(name) if name == "t" || name == "u" => Ok(MultiPoly::var(vars, vars.require(name)?)),
            Atom::Ident(name) => {
                let i = self.unknown(name, pos)?;
                Ok(MultiPoly::var(vars, i * (k + 1)))
            }
            Atom::Indexed { head, arg } => {
                let Some(j) = delta_order(head) else {
                    return Err(semantic(pos, format!("unknown operator `{head}`; expected D, D2, ..")));
                };
                if j > k {
                    return Err(semantic(pos, format!("Δ-order {j} exceeds the declared order {k}")));
                }
                let i = self.unknown(arg, pos)?;
                Ok(MultiPoly::var(vars, i * (k + 1) + j))
            }
            Atom::Call { name, arg } => {
                let i = self.unknown(name, pos)?;
                let at = constant_expr(arg)?;
                if at != self.a {
                    return Err(semantic(
                        arg.pos(),
                        "unknowns may only be evaluated at the catalytic point",
                    ));
                }
                // F(t, a) = F - (u - a) ΔF
                let u = MultiPoly::var(vars, vars.require("u")?);
                let shift = &u - &MultiPoly::constant(vars, self.a.clone());
                let f = MultiPoly::var(vars, i * (k + 1));
                let d = MultiPoly::var(vars, i * (k + 1) + 1);
                Ok(&f - &(&shift * &d))
            }
        }
    }
}

/// Parses and validates a system.
pub fn parse_dde(text: &str) -> Result<DdeSystem> {
    let mut a: Option<Rational> = None;
    let mut declared_k: Option<(usize, Pos)> = None;
    let mut equations: Vec<Equation> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = body.len() - trimmed.len();
        let col = |offset: usize| indent + offset + 1;
        if let Some(rest) = trimmed.strip_prefix("catalytic") {
            if a.is_some() {
                return Err(syntax(line, col(0), "duplicate header"));
            }
            let rest_trim = rest.trim_start();
            let Some(after_u) = rest_trim.strip_prefix('u') else {
                return Err(syntax(line, col(9), "expected `catalytic u at <rational>`"));
            };
            let after_u_trim = after_u.trim_start();
            let Some(value) = after_u_trim.strip_prefix("at") else {
                return Err(syntax(line, col(9), "expected `at` after the catalytic variable"));
            };
            let offset = trimmed.len() - value.len();
            let e = parse_expression(value, line, col(offset))?;
            a = Some(constant_expr(&e)?);
            continue;
        }
        if a.is_none() {
            return Err(syntax(line, col(0), "expected header `catalytic u at <rational>`"));
        }
        if let Some(rest) = trimmed.strip_prefix("order") {
            if !equations.is_empty() {
                return Err(syntax(line, col(0), "`order` must precede the equations"));
            }
            let value = rest.trim();
            let k: usize = value
                .parse()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| syntax(line, col(5), "order must be a positive integer"))?;
            declared_k = Some((k, Pos { line, column: col(0) }));
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            return Err(syntax(line, col(0), "expected `Fi = expression`"));
        };
        let lhs = trimmed[..eq].trim();
        let index = match unknown_index(lhs) {
            Some(i) => i,
            None => return Err(syntax(line, col(0), format!("left side must be F1, F2, ..; found `{lhs}`"))),
        };
        if index != equations.len() {
            return Err(semantic(
                Pos { line, column: col(0) },
                format!("expected the equation for F{}", equations.len() + 1),
            ));
        }
        let rhs = parse_expression(&trimmed[eq + 1..], line, col(eq + 1))?;
        equations.push(Equation { index, rhs });
    }
    let Some(a) = a else {
        return Err(syntax(1, 1, "missing header `catalytic u at <rational>`"));
    };
    if equations.is_empty() {
        return Err(syntax(text.lines().count().max(1), 1, "no equations"));
    }
    let n = equations.len();
    let mut used: Option<(usize, Pos)> = None;
    for eq in &equations {
        max_order(&eq.rhs, &mut used);
    }
    let k = match (declared_k, used) {
        (Some((k, _)), _) => k,
        (None, Some((j, _))) => j,
        (None, None) => 1,
    };
    let vars = DdeSystem::table(n, k, &[])?;
    let (ti, ui) = (n * (k + 1), n * (k + 1) + 1);
    let mut resolver = SystemResolver { n, k, a: a.clone() };
    let mut f = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    for eq in &equations {
        debug_assert_eq!(eq.index, q.len());
        let mut fi = MultiPoly::zero(&vars);
        let mut qi = MultiPoly::zero(&vars);
        for (neg, s) in eq.rhs.summands() {
            let mut p = s.eval(&vars, &mut resolver)?;
            if neg {
                p = -p;
            }
            for term in p.terms() {
                let unknown_free = (0..ti).all(|v| term.mono.exp(v) == 0);
                let single = MultiPoly::monomial(&vars, term.mono.clone(), term.coeff.clone());
                if term.mono.exp(ti) == 0 {
                    if !unknown_free {
                        return Err(semantic(
                            start(s),
                            "term involves an unknown without a factor t; expected F = f(u) + t*Q",
                        ));
                    }
                    fi = &fi + &single;
                } else {
                    let mut m = term.mono.clone();
                    m.set_exp(ti, m.exp(ti) - 1);
                    qi = &qi + &MultiPoly::monomial(&vars, m, term.coeff.clone());
                }
            }
        }
        let coeffs = fi.coefficients_in(ui);
        let fu = UPoly::new(
            coeffs
                .iter()
                .map(|c| c.constant_value().unwrap_or_else(Rational::zero))
                .collect(),
        );
        f.push(fu);
        q.push(qi);
    }
    DdeSystem::new(a, k, f, q, vec![])
}
