//! Coefficient-by-coefficient expansion of a DDE system.

use std::collections::HashMap;

use super::{delta_a, divided_difference, specialize, TSeries, USeries};
use crate::dde::DdeSystem;
use crate::error::{Error, Result};
use crate::poly::{Rational, UPoly};

/// `∂_u^ℓ F_i(t, a)` for every `i < n` and `ℓ < k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecializationVector {
    pub entries: Vec<Vec<TSeries>>,
}

impl SpecializationVector {
    /// Series bound to `z_{i*k + ℓ}`.
    pub fn z(&self, index: usize) -> &TSeries {
        let k = self.entries[0].len();
        &self.entries[index / k][index % k]
    }

    pub fn order(&self) -> usize {
        self.entries[0][0].order()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub solutions: Vec<USeries>,
    pub specializations: SpecializationVector,
}

/// Node of the product graph used by the online expansion.
enum Node {
    /// `Δ^j F_i` as variable index in the system's `y` block.
    Leaf(usize),
    Mul(usize, usize),
}

/// Unique solution modulo `t^order`.
///
/// `[t^m] F_i = [t^m] f_i + [t^{m-1}] Q_i`, and the right side only needs
/// coefficients of index `< m`, so every monomial of every `Q_i` is kept as
/// a node whose coefficient list grows by one entry per step.
pub fn fixed_point_expand(sys: &DdeSystem, order: usize) -> Result<Expansion> {
    require_numeric(sys)?;
    let n = sys.n;
    let k = sys.k;
    let ny = n * (k + 1);
    let (ti, ui) = (sys.t_index(), sys.u_index());
    let mut nodes: Vec<Node> = Vec::new();
    let mut cache: HashMap<Vec<u32>, usize> = HashMap::new();
    for v in 0..ny {
        let mut e = vec![0u32; ny];
        e[v] = 1;
        cache.insert(e, nodes.len());
        nodes.push(Node::Leaf(v));
    }
    fn build(e: &[u32], nodes: &mut Vec<Node>, cache: &mut HashMap<Vec<u32>, usize>) -> usize {
        if let Some(&id) = cache.get(e) {
            return id;
        }
        let v = e.iter().position(|&x| x > 0).unwrap();
        let mut rest = e.to_vec();
        rest[v] -= 1;
        let mut unit = vec![0u32; e.len()];
        unit[v] = 1;
        let a = build(&rest, nodes, cache);
        let b = cache[&unit];
        nodes.push(Node::Mul(a, b));
        let id = nodes.len() - 1;
        cache.insert(e.to_vec(), id);
        id
    }
    // per equation: (coefficient, t exponent, u exponent, node or None for 1)
    let mut plan: Vec<Vec<(Rational, usize, usize, Option<usize>)>> = Vec::new();
    for q in &sys.q {
        let mut terms = Vec::new();
        for term in q.terms() {
            let ye: Vec<u32> = (0..ny).map(|v| term.mono.exp(v)).collect();
            let node = if ye.iter().all(|&x| x == 0) {
                None
            } else {
                Some(build(&ye, &mut nodes, &mut cache))
            };
            terms.push((
                term.coeff.clone(),
                term.mono.exp(ti) as usize,
                term.mono.exp(ui) as usize,
                node,
            ));
        }
        plan.push(terms);
    }
    let mut vals: Vec<Vec<UPoly>> = vec![Vec::with_capacity(order); nodes.len()];
    let mut fcoef: Vec<Vec<UPoly>> = vec![Vec::with_capacity(order); n];
    for m in 0..order {
        if m > 0 {
            let j = m - 1;
            // leaves: Δ^ℓ of the newly known coefficient j
            for (id, node) in nodes.iter().enumerate() {
                let v = match node {
                    Node::Leaf(v) => *v,
                    Node::Mul(..) => break,
                };
                let (i, l) = (v / (k + 1), v % (k + 1));
                let mut p = fcoef[i][j].clone();
                for _ in 0..l {
                    p = divided_difference(&p, &sys.a);
                }
                vals[id].push(p);
            }
            for id in ny..nodes.len() {
                let Node::Mul(a, b) = nodes[id] else { unreachable!() };
                let mut s = UPoly::zero();
                for i in 0..=j {
                    let (x, y) = (&vals[a][i], &vals[b][j - i]);
                    if !x.is_zero() && !y.is_zero() {
                        s = &s + &(x * y);
                    }
                }
                vals[id].push(s);
            }
        }
        for i in 0..n {
            let mut c = if m == 0 { sys.f[i].clone() } else { UPoly::zero() };
            if m > 0 {
                let j = m - 1;
                for (coef, te, ue, node) in &plan[i] {
                    if *te > j {
                        continue;
                    }
                    let base = match node {
                        Some(id) => vals[*id][j - te].clone(),
                        None if *te == j => UPoly::one(),
                        None => continue,
                    };
                    if base.is_zero() {
                        continue;
                    }
                    c = &c + &base.shift(*ue).scale(coef);
                }
            }
            fcoef[i].push(c);
        }
    }
    let solutions: Vec<USeries> = fcoef.into_iter().map(|c| USeries::new(c, order)).collect();
    let specializations = specializations_of(&solutions, &sys.a, k);
    Ok(Expansion {
        solutions,
        specializations,
    })
}

fn require_numeric(sys: &DdeSystem) -> Result<()> {
    if sys.params.is_empty() {
        Ok(())
    } else {
        Err(Error::precondition(format!(
            "expansion needs numeric coefficients; bind the parameters {:?} first",
            sys.params
        )))
    }
}

pub(crate) fn specializations_of(solutions: &[USeries], a: &Rational, k: usize) -> SpecializationVector {
    SpecializationVector {
        entries: solutions
            .iter()
            .map(|f| (0..k).map(|l| specialize(f, a, l)).collect())
            .collect(),
    }
}

/// Reference expansion by plain iteration `F <- f + t Q(∇F)`; slow, used as
/// an oracle.
pub fn picard_expand(sys: &DdeSystem, order: usize) -> Result<Vec<USeries>> {
    require_numeric(sys)?;
    let n = sys.n;
    let k = sys.k;
    let mut f: Vec<USeries> = sys.f.iter().map(|p| USeries::from_upoly(p, order)).collect();
    for _ in 0..order {
        let mut bindings = HashMap::new();
        for (i, fi) in f.iter().enumerate() {
            let mut d = fi.clone();
            for l in 0..=k {
                bindings.insert(i * (k + 1) + l, super::Binding::U(d.clone()));
                d = delta_a(&d, &sys.a);
            }
        }
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let q = super::eval_poly_at_series(&sys.q[i], &bindings, order)?;
            next.push(USeries::from_upoly(&sys.f[i], order).add(&q.shift(1)));
        }
        if next == f {
            break;
        }
        f = next;
    }
    Ok(f)
}
