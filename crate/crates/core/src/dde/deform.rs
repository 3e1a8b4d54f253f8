//! Symbolic deformation with a parameter `eps`:
//! `G_i = f_i + t^α Q_i(∇G, t^α, u) + t eps^k Σ_j γ_ij Δ^k G_j`.
//!
//! At `eps = 0` the solutions are `G_i(t, u) = F_i(t^α, u)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::DdeSystem;
use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly, Rational};

pub const EPS: &str = "eps";

#[derive(Debug, Clone, PartialEq)]
pub struct DeformationParams {
    pub m: Vec<u32>,
    pub big_m: u32,
    pub beta: u32,
    pub alpha: u32,
    /// `gamma[i][j] = (c, e)` stands for `c * t^e`.
    pub gamma: Vec<Vec<(Rational, u32)>>,
    pub eps: String,
}

impl DeformationParams {
    pub fn new(n: usize, k: usize, m: Vec<u32>) -> DeformationParams {
        let big_m: u32 = m.iter().sum();
        let beta = 2 * big_m / k as u32;
        let (n32, k32) = (n as u32, k as u32);
        let alpha = 3 * n32 * n32 * k32 * (beta + 1) + 3 * n32 * big_m;
        let gamma = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            (Rational::from_integer(BigInt::from(i + 1).pow(k as u32)), 0)
                        } else {
                            (Rational::one(), beta)
                        }
                    })
                    .collect()
            })
            .collect();
        DeformationParams {
            m,
            big_m,
            beta,
            alpha,
            gamma,
            eps: EPS.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformedSystem {
    /// The deformed system; `eps` is its only parameter.
    pub system: DdeSystem,
    pub params: DeformationParams,
    pub relation: String,
}

/// Builds the deformation of a system whose catalytic point is 0.
pub fn build_deformed_system(sys: &DdeSystem) -> Result<DeformedSystem> {
    if !sys.a.is_zero() {
        return Err(Error::precondition(
            "deformation needs the catalytic point at 0; call shift_catalytic_point first",
        ));
    }
    if !sys.params.is_empty() {
        return Err(Error::precondition("system already carries parameters"));
    }
    let (n, k) = (sys.n, sys.k);
    let m: Vec<u32> = (0..n).map(|i| sys.delta_order(i).max(k as u32)).collect();
    let params = DeformationParams::new(n, k, m);
    let alpha = params.alpha;
    let vars = DdeSystem::table(n, k, &[EPS.to_string()])?;
    let (ti, ui, ei) = (sys.t_index(), sys.u_index(), sys.u_index() + 1);
    let mut q = Vec::with_capacity(n);
    for i in 0..n {
        // t^{α-1} Q_i(y, t^α, u)
        let scaled = sys.q[i].terms().iter().map(|term| {
            let mut ex = vec![0u32; vars.len()];
            for v in 0..=ui {
                ex[v] = term.mono.exp(v);
            }
            ex[ti] = alpha * term.mono.exp(ti) + alpha - 1;
            (Monomial::new(ex), term.coeff.clone())
        });
        let mut qi = MultiPoly::from_terms(&vars, scaled);
        for j in 0..n {
            let (c, e) = &params.gamma[i][j];
            let mut ex = vec![0u32; vars.len()];
            ex[j * (k + 1) + k] = 1;
            ex[ti] = *e;
            ex[ei] = k as u32;
            qi = &qi + &MultiPoly::monomial(&vars, Monomial::new(ex), c.clone());
        }
        q.push(qi);
    }
    let mut system = DdeSystem::new(sys.a.clone(), k, sys.f.clone(), q, vec![EPS.to_string()])?;
    system.origin_shift = sys.origin_shift.clone();
    let relation = format!("F_i(t^{alpha}, u) = G_i(t, u, eps = 0)");
    Ok(DeformedSystem {
        system,
        params,
        relation,
    })
}

impl DeformedSystem {
    /// The deformed system with `eps` replaced by a rational value.
    pub fn with_eps(&self, value: &Rational) -> Result<DdeSystem> {
        let s = &self.system;
        let plain = DdeSystem::table(s.n, s.k, &[])?;
        let ei = s.u_index() + 1;
        let q = s
            .q
            .iter()
            .map(|p| p.eval_var(ei, value).embed(&plain))
            .collect::<Result<Vec<_>>>()?;
        let mut out = DdeSystem::new(s.a.clone(), s.k, s.f.clone(), q, vec![])?;
        out.origin_shift = s.origin_shift.clone();
        Ok(out)
    }

    /// `u^{M-nk} Π_j (-u^k + t eps^k j^k)` in the numerator table of the
    /// deformed system, reduced mod `t^{n+1}`.
    pub fn predicted_det(&self, vars: &std::sync::Arc<crate::poly::VarTable>) -> Result<MultiPoly> {
        let (n, k) = (self.system.n, self.system.k);
        let u = MultiPoly::var_named(vars, "u")?;
        let t = MultiPoly::var_named(vars, "t")?;
        let eps = MultiPoly::var_named(vars, EPS)?;
        let mut acc = u.pow(self.params.big_m - (n * k) as u32);
        for j in 1..=n {
            let c = MultiPoly::constant(vars, Rational::from_integer(BigInt::from(j).pow(k as u32)));
            let factor = &(&(&t * &eps.pow(k as u32)) * &c) - &u.pow(k as u32);
            acc = &acc * &factor;
        }
        Ok(truncate_in(&acc, vars.require("t")?, n as u32 + 1))
    }
}

/// Drops every term whose degree in `v` is at least `order`.
pub fn truncate_in(p: &MultiPoly, v: usize, order: u32) -> MultiPoly {
    let terms = p
        .terms()
        .iter()
        .filter(|t| t.mono.exp(v) < order)
        .map(|t| (t.mono.clone(), t.coeff.clone()));
    MultiPoly::from_terms(p.vars(), terms)
}
