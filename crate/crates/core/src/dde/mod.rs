//! DDE systems in fixed-point form `F_i = f_i(u) + t Q_i(∇F, t, u)`.

mod deform;
mod numerator;
mod parse;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::Result;
use crate::poly::{MultiPoly, Rational, UPoly, VarTable};

pub use deform::{build_deformed_system, truncate_in, EPS, DeformationParams, DeformedSystem};
pub use numerator::{
    build_det_and_p, clear_denominators, clear_denominators_with, duplicate, single_equation_system, DuplicatedSystem,
    NumeratorSystem,
};
pub use parse::parse_dde;

/// A validated system.
///
/// `q[i]` lives in `vars`, laid out as `F1, D[F1], .., Dk[F1], F2, .., t, u`
/// followed by any extra parameters; `Δ^j F_i` sits at index `i*(k+1)+j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DdeSystem {
    pub n: usize,
    pub k: usize,
    pub a: Rational,
    pub f: Vec<UPoly>,
    pub q: Vec<MultiPoly>,
    pub delta: u32,
    pub vars: Arc<VarTable>,
    pub params: Vec<String>,
    /// The original catalytic variable is `u + origin_shift`.
    pub origin_shift: Rational,
}

pub(crate) fn delta_name(i: usize, j: usize) -> String {
    match j {
        0 => format!("F{}", i + 1),
        1 => format!("D[F{}]", i + 1),
        _ => format!("D{}[F{}]", j, i + 1),
    }
}

impl DdeSystem {
    /// Variable table `F1, D[F1], .., t, u, params..`.
    pub fn table(n: usize, k: usize, params: &[String]) -> Result<Arc<VarTable>> {
        let mut names: Vec<String> = Vec::new();
        for i in 0..n {
            for j in 0..=k {
                names.push(delta_name(i, j));
            }
        }
        names.push("t".into());
        names.push("u".into());
        names.extend(params.iter().cloned());
        VarTable::new(&names)
    }

    /// Assembles a system from its parts; `q` must live in
    /// `DdeSystem::table(n, k, params)`.
    pub fn new(a: Rational, k: usize, f: Vec<UPoly>, q: Vec<MultiPoly>, params: Vec<String>) -> Result<DdeSystem> {
        let n = f.len();
        if n == 0 || q.len() != n {
            return Err(crate::Error::structural("need one f_i and one Q_i per unknown"));
        }
        if k == 0 {
            return Err(crate::Error::structural("order k must be at least 1"));
        }
        let vars = DdeSystem::table(n, k, &params)?;
        let q = q.iter().map(|p| p.embed(&vars)).collect::<Result<Vec<_>>>()?;
        let delta = f
            .iter()
            .map(|p| p.degree().unwrap_or(0) as u32)
            .chain(q.iter().map(|p| p.total_degree().unwrap_or(0)))
            .max()
            .unwrap_or(0);
        Ok(DdeSystem {
            n,
            k,
            a,
            f,
            q,
            delta,
            vars,
            params,
            origin_shift: Rational::zero(),
        })
    }

    pub fn y_index(&self, i: usize, j: usize) -> usize {
        i * (self.k + 1) + j
    }

    pub fn t_index(&self) -> usize {
        self.n * (self.k + 1)
    }

    pub fn u_index(&self) -> usize {
        self.n * (self.k + 1) + 1
    }

    /// Largest Δ-order occurring in equation `i` (0 when `Q_i` is free of
    /// Δ terms).
    pub fn delta_order(&self, i: usize) -> u32 {
        let k = self.k;
        let mut best = 0;
        for term in self.q[i].terms() {
            let mut w = 0;
            for r in 0..self.n {
                for j in 1..=k {
                    w += j as u32 * term.mono.exp(r * (k + 1) + j);
                }
            }
            best = best.max(w);
        }
        best
    }

    /// Renders the system in the input language; `parse_dde` reads it back
    /// to the same system when there are no extra parameters.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "catalytic u at {}", fmt_rational(&self.a));
        let _ = writeln!(out, "order {}", self.k);
        for i in 0..self.n {
            let f = crate::series::format_upoly(&self.f[i], "u");
            let q = self.q[i].to_string();
            let rhs = match (self.f[i].is_zero(), self.q[i].is_zero()) {
                (true, true) => "0".to_string(),
                (false, true) => f,
                (true, false) => format!("t*({q})"),
                (false, false) => format!("{f} + t*({q})"),
            };
            let _ = writeln!(out, "F{} = {}", i + 1, rhs);
        }
        out
    }

    /// Same system with `u` replaced by `u + a`, so that the catalytic point
    /// becomes 0. `origin_shift` accumulates the translation.
    pub fn shift_catalytic_point(&self) -> Result<DdeSystem> {
        self.translate(&self.a.clone())
    }

    /// Undo of `shift_catalytic_point`.
    pub fn unshift_catalytic_point(&self) -> Result<DdeSystem> {
        self.translate(&-self.origin_shift.clone())
    }

    fn translate(&self, s: &Rational) -> Result<DdeSystem> {
        if s.is_zero() {
            return Ok(self.clone());
        }
        let ui = self.u_index();
        let mut b = HashMap::new();
        b.insert(ui, &MultiPoly::var(&self.vars, ui) + &MultiPoly::constant(&self.vars, s.clone()));
        let q = self
            .q
            .iter()
            .map(|p| p.substitute(&b, &self.vars))
            .collect::<Result<Vec<_>>>()?;
        let f = self.f.iter().map(|p| p.taylor_shift(s)).collect();
        Ok(DdeSystem {
            a: &self.a - s,
            f,
            q,
            origin_shift: &self.origin_shift + s,
            ..self.clone()
        })
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
