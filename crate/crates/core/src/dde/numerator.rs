//! Polynomial numerators `E_i`, the matrices `Det`/`P`, and the duplicated
//! system fed to elimination.

use std::collections::HashMap;
use std::sync::Arc;

use super::DdeSystem;
use crate::error::Result;
use crate::ideal::IdealPresentation;
use crate::poly::{bareiss_determinant, jacobian_determinant, Monomial, MonomialOrder, MultiPoly, Rational, VarTable};
use crate::series::factorial;

/// `E_i` over `x1..xn, u, z0..z_{nk-1}, t` (plus parameters).
#[derive(Debug, Clone, PartialEq)]
pub struct NumeratorSystem {
    pub n: usize,
    pub k: usize,
    pub a: Rational,
    pub vars: Arc<VarTable>,
    pub e: Vec<MultiPoly>,
    /// Exponents actually used to clear denominators.
    pub m: Vec<u32>,
    /// Least exponents that clear denominators.
    pub m_min: Vec<u32>,
    pub det: Option<MultiPoly>,
    pub p: Option<MultiPoly>,
    /// `y_num[i][j]` with `Y_{i,j} = y_num[i][j] / (u - a)^j`.
    pub y_num: Vec<Vec<MultiPoly>>,
    pub params: Vec<String>,
}

impl NumeratorSystem {
    pub fn x_index(&self, i: usize) -> usize {
        i
    }

    pub fn u_index(&self) -> usize {
        self.n
    }

    pub fn z_index(&self, j: usize) -> usize {
        self.n + 1 + j
    }

    pub fn t_index(&self) -> usize {
        self.n + 1 + self.n * self.k
    }

    pub fn x_indices(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    /// Value `z_j` stands for: `∂_u^ℓ F_i(t, a)` with `j = i*k + ℓ`.
    pub fn z_meaning(&self, j: usize) -> String {
        let (i, l) = (j / self.k, j % self.k);
        let a = super::fmt_rational(&self.a);
        match l {
            0 => format!("F{}(t,{a})", i + 1),
            1 => format!("d/du F{}(t,{a})", i + 1),
            _ => format!("d^{l}/du^{l} F{}(t,{a})", i + 1),
        }
    }
}

fn numerator_table(n: usize, k: usize, params: &[String]) -> Result<Arc<VarTable>> {
    let mut names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    names.push("u".into());
    names.extend((0..n * k).map(|j| format!("z{j}")));
    names.push("t".into());
    names.extend(params.iter().cloned());
    VarTable::new(&names)
}

/// Clears denominators with the least exponents.
pub fn clear_denominators(sys: &DdeSystem) -> Result<NumeratorSystem> {
    clear_denominators_with(sys, 0)
}

/// Clears denominators with `m_i = max(least exponent, min_m)`.
pub fn clear_denominators_with(sys: &DdeSystem, min_m: u32) -> Result<NumeratorSystem> {
    let (n, k) = (sys.n, sys.k);
    let vars = numerator_table(n, k, &sys.params)?;
    let ui = n;
    let ti = n + 1 + n * k;
    let u = MultiPoly::var(&vars, ui);
    let shift = &u - &MultiPoly::constant(&vars, sys.a.clone());
    let mut shift_pows = vec![MultiPoly::one(&vars)];
    let shift_pow = |e: usize, pows: &mut Vec<MultiPoly>| {
        while pows.len() <= e {
            let next = pows.last().unwrap() * &shift;
            pows.push(next);
        }
        pows[e].clone()
    };

    // Y_{i,j} numerators: x_i - Σ_{ℓ<j} (u-a)^ℓ/ℓ! z_{ik+ℓ}
    let mut y_num = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![MultiPoly::var(&vars, i)];
        let mut acc = MultiPoly::var(&vars, i);
        for j in 1..=k {
            let l = j - 1;
            let z = MultiPoly::var(&vars, n + 1 + i * k + l);
            let term = (&shift_pow(l, &mut shift_pows) * &z).scale(&factorial(l).recip());
            acc = &acc - &term;
            row.push(acc.clone());
        }
        y_num.push(row);
    }

    // Q-variable index -> position in the numerator table
    let q_t = sys.t_index();
    let q_u = sys.u_index();
    let nparams = sys.params.len();
    let mut e = Vec::with_capacity(n);
    let mut m = Vec::with_capacity(n);
    let mut m_min = Vec::with_capacity(n);
    for i in 0..n {
        let least = sys.delta_order(i);
        let mi = least.max(min_m);
        m_min.push(least);
        m.push(mi);
        let f = MultiPoly::from_terms(
            &vars,
            sys.f[i].coeffs().iter().enumerate().map(|(d, c)| {
                let mut ex = vec![0u32; vars.len()];
                ex[ui] = d as u32;
                (Monomial::new(ex), c.clone())
            }),
        );
        let x = MultiPoly::var(&vars, i);
        let mut acc = &shift_pow(mi as usize, &mut shift_pows) * &(&f - &x);
        let mut powers: HashMap<(usize, usize, u32), MultiPoly> = HashMap::new();
        for term in sys.q[i].terms() {
            let mut ex = vec![0u32; vars.len()];
            ex[ti] = term.mono.exp(q_t) + 1;
            ex[ui] = term.mono.exp(q_u);
            for p in 0..nparams {
                ex[ti + 1 + p] = term.mono.exp(q_u + 1 + p);
            }
            let mut prod = MultiPoly::monomial(&vars, Monomial::new(ex), term.coeff.clone());
            let mut w = 0u32;
            for r in 0..n {
                for j in 0..=k {
                    let d = term.mono.exp(r * (k + 1) + j);
                    if d == 0 {
                        continue;
                    }
                    w += j as u32 * d;
                    let pw = powers.entry((r, j, d)).or_insert_with(|| y_num[r][j].pow(d)).clone();
                    prod = &prod * &pw;
                }
            }
            prod = &prod * &shift_pow((mi - w) as usize, &mut shift_pows);
            acc = &acc + &prod;
        }
        e.push(acc);
    }
    Ok(NumeratorSystem {
        n,
        k,
        a: sys.a.clone(),
        vars,
        e,
        m,
        m_min,
        det: None,
        p: None,
        y_num,
        params: sys.params.clone(),
    })
}

/// Attaches `Det = det(∂E_i/∂x_j)` and `P`, the same matrix with its last
/// column replaced by `∂E_i/∂u`.
pub fn build_det_and_p(ns: &NumeratorSystem) -> Result<NumeratorSystem> {
    let xs = ns.x_indices();
    let det = jacobian_determinant(&ns.e, &xs)?;
    let ui = ns.u_index();
    let matrix: Vec<Vec<MultiPoly>> = ns
        .e
        .iter()
        .map(|ei| {
            let mut row: Vec<MultiPoly> = xs.iter().map(|&x| ei.partial_derivative(x)).collect();
            *row.last_mut().unwrap() = ei.partial_derivative(ui);
            row
        })
        .collect();
    let p = bareiss_determinant(&matrix)?;
    Ok(NumeratorSystem {
        det: Some(det),
        p: Some(p),
        ..ns.clone()
    })
}

/// The one-unknown system `(E, ∂E/∂x1, ∂E/∂u)` for an equation `E` in
/// `x1, u, z0.., t` obtained from `ns`; it keeps all `nk` values `z_j`.
pub fn single_equation_system(ns: &NumeratorSystem, e: &MultiPoly) -> Result<NumeratorSystem> {
    let vars = numerator_table(1, ns.n * ns.k, &ns.params)?;
    let e = e.embed(&vars)?;
    let det = e.partial_derivative(0);
    let p = e.partial_derivative(1);
    Ok(NumeratorSystem {
        n: 1,
        k: ns.n * ns.k,
        a: ns.a.clone(),
        vars,
        e: vec![e],
        m: vec![ns.m.iter().copied().max().unwrap_or(0)],
        m_min: vec![ns.m_min.iter().copied().max().unwrap_or(0)],
        det: Some(det),
        p: Some(p),
        y_num: Vec::new(),
        params: ns.params.clone(),
    })
}

/// `nk` copies of `(E_1..E_n, Det, P)` in fresh `x`/`u` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct DuplicatedSystem {
    pub n: usize,
    pub k: usize,
    pub copies: usize,
    /// `m, x1.., u1.., z1.., t, z0, params..`
    pub vars: Arc<VarTable>,
    /// Copy `j` occupies `equations[j*(n+2)..(j+1)*(n+2)]`.
    pub equations: Vec<MultiPoly>,
    pub sat: MultiPoly,
    pub rabinowitsch: MultiPoly,
    /// `(variable, meaning)` pairs.
    pub correspondence: Vec<(String, String)>,
    pub order: MonomialOrder,
}

impl DuplicatedSystem {
    pub fn t_index(&self) -> usize {
        self.vars.len() - 2 - self.param_count()
    }

    pub fn z0_index(&self) -> usize {
        self.vars.len() - 1 - self.param_count()
    }

    fn param_count(&self) -> usize {
        self.vars.len() - (1 + self.copies * self.n + self.copies + (self.copies - 1) + 2)
    }

    /// Equations plus `m*sat - 1`, under the block order.
    pub fn presentation(&self) -> IdealPresentation {
        let mut gens = self.equations.clone();
        gens.push(self.rabinowitsch.clone());
        IdealPresentation::new(&self.vars, gens, self.order.clone())
    }

    /// Equations only (no saturation).
    pub fn plain_presentation(&self) -> IdealPresentation {
        IdealPresentation::new(&self.vars, self.equations.clone(), self.order.clone())
    }
}

pub fn duplicate(ns: &NumeratorSystem) -> Result<DuplicatedSystem> {
    let (n, k) = (ns.n, ns.k);
    let (Some(det), Some(p)) = (&ns.det, &ns.p) else {
        return Err(crate::Error::precondition("Det and P must be built before duplication"));
    };
    let copies = n * k;
    let mut names: Vec<String> = vec!["m".into()];
    let mut correspondence = Vec::new();
    for j in 0..copies {
        for i in 0..n {
            let name = format!("x{}", j * n + i + 1);
            correspondence.push((name.clone(), format!("F{}(t,U{})", i + 1, j + 1)));
            names.push(name);
        }
    }
    for j in 0..copies {
        let name = format!("u{}", j + 1);
        correspondence.push((name.clone(), format!("U{}", j + 1)));
        names.push(name);
    }
    for j in 1..copies {
        names.push(format!("z{j}"));
        correspondence.push((format!("z{j}"), ns.z_meaning(j)));
    }
    names.push("t".into());
    names.push("z0".into());
    correspondence.push(("z0".into(), ns.z_meaning(0)));
    names.extend(ns.params.iter().cloned());
    correspondence.push(("m".into(), "1/sat".into()));
    let vars = VarTable::new(&names)?;

    let mut equations = Vec::with_capacity(copies * (n + 2));
    for j in 0..copies {
        let mut b = HashMap::new();
        for i in 0..n {
            b.insert(ns.x_index(i), MultiPoly::var(&vars, 1 + j * n + i));
        }
        b.insert(ns.u_index(), MultiPoly::var(&vars, 1 + copies * n + j));
        for e in ns.e.iter().chain([det, p]) {
            equations.push(e.substitute(&b, &vars)?);
        }
    }

    let u_of = |j: usize| MultiPoly::var(&vars, 1 + copies * n + j);
    let a = MultiPoly::constant(&vars, ns.a.clone());
    let mut sat = MultiPoly::var_named(&vars, "t")?;
    for i in 0..copies {
        sat = &sat * &(&u_of(i) - &a);
    }
    for i in 0..copies {
        for j in i + 1..copies {
            sat = &sat * &(&u_of(i) - &u_of(j));
        }
    }
    let rabinowitsch = &(&MultiPoly::var(&vars, 0) * &sat) - &MultiPoly::one(&vars);

    let first: Vec<usize> = (1..=copies * (n + 1)).collect();
    let zs: Vec<usize> = (copies * (n + 1) + 1..copies * (n + 1) + copies).collect();
    let mut blocks = vec![vec![0], first];
    if !zs.is_empty() {
        blocks.push(zs);
    }
    let last: Vec<usize> = (copies * (n + 2)..vars.len()).collect();
    blocks.push(last);
    Ok(DuplicatedSystem {
        n,
        k,
        copies,
        vars,
        equations,
        sat,
        rabinowitsch,
        correspondence,
        order: MonomialOrder::Block(blocks),
    })
}
