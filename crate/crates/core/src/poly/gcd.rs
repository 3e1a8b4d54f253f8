//! Bivariate gcd by evaluation and interpolation, and squarefree parts.

use std::sync::Arc;

use num_traits::Zero;

use super::{rat, Monomial, MultiPoly, Rational, UPoly, VarTable};
use crate::error::{Error, Result};

/// Coefficients in `z`, each a univariate polynomial in `t`.
type Bi = Vec<UPoly>;

fn to_bi(p: &MultiPoly, t: Option<usize>, z: usize) -> Bi {
    let mut out: Bi = vec![UPoly::zero(); p.degree_in(z) as usize + 1];
    let mut dense: Vec<Vec<Rational>> = vec![Vec::new(); out.len()];
    for term in p.terms() {
        let j = term.mono.exp(z) as usize;
        let i = t.map_or(0, |t| term.mono.exp(t) as usize);
        if dense[j].len() <= i {
            dense[j].resize(i + 1, Rational::zero());
        }
        dense[j][i] += &term.coeff;
    }
    for (j, d) in dense.into_iter().enumerate() {
        out[j] = UPoly::new(d);
    }
    out
}

fn from_bi(vars: &Arc<VarTable>, t: Option<usize>, z: usize, b: &[UPoly]) -> MultiPoly {
    let mut terms = Vec::new();
    for (j, c) in b.iter().enumerate() {
        for (i, r) in c.coeffs().iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let mut e = vec![0u32; vars.len()];
            e[z] += j as u32;
            if let Some(t) = t {
                e[t] += i as u32;
            }
            terms.push((Monomial::new(e), r.clone()));
        }
    }
    MultiPoly::from_terms(vars, terms)
}

fn upoly_of(p: &MultiPoly, v: usize) -> UPoly {
    let mut c: Vec<Rational> = vec![Rational::zero(); p.degree_in(v) as usize + 1];
    for term in p.terms() {
        c[term.mono.exp(v) as usize] += &term.coeff;
    }
    UPoly::new(c)
}

fn multi_of(vars: &Arc<VarTable>, v: usize, u: &UPoly) -> MultiPoly {
    from_bi(vars, None, v, &u.coeffs().iter().map(|c| UPoly::constant(c.clone())).collect::<Vec<_>>())
}

fn content_t(b: &Bi) -> UPoly {
    b.iter().fold(UPoly::zero(), |g, c| g.gcd(c))
}

fn div_content(b: &Bi, c: &UPoly) -> Bi {
    b.iter().map(|x| x.div_exact(c).expect("content divides")).collect()
}

fn eval_t(b: &Bi, x: &Rational) -> UPoly {
    UPoly::new(b.iter().map(|c| c.eval(x)).collect())
}

fn lead_z(b: &Bi) -> &UPoly {
    b.last().unwrap()
}

fn points() -> impl Iterator<Item = Rational> {
    (0i64..).flat_map(|i| if i == 0 { vec![rat(0)] } else { vec![rat(i), rat(-i)] })
}

/// gcd of two polynomials that are primitive in `z` (as elements of ℚ[t][z]).
fn gcd_primitive(a: &Bi, b: &Bi, vars: &Arc<VarTable>, t: usize, z: usize) -> Bi {
    if a.len() == 1 || b.len() == 1 {
        return vec![UPoly::one()];
    }
    let gamma = lead_z(a).gcd(lead_z(b));
    let dt_a = a.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    let dt_b = b.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    let bound = gamma.degree().unwrap_or(0) + dt_a.min(dt_b);
    let pa = from_bi(vars, Some(t), z, a);
    let pb = from_bi(vars, Some(t), z, b);
    let mut best: Option<usize> = None;
    let mut samples: Vec<(Rational, UPoly)> = Vec::new();
    for x in points() {
        if lead_z(a).eval(&x).is_zero() || lead_z(b).eval(&x).is_zero() {
            continue;
        }
        let g = eval_t(a, &x).gcd(&eval_t(b, &x));
        let dg = g.degree().unwrap();
        if dg == 0 {
            return vec![UPoly::one()];
        }
        match best {
            Some(d) if dg > d => continue,
            Some(d) if dg == d => {}
            _ => {
                best = Some(dg);
                samples.clear();
            }
        }
        samples.push((x.clone(), g.scale(&gamma.eval(&x))));
        if samples.len() > bound {
            let xs: Vec<Rational> = samples.iter().map(|(x, _)| x.clone()).collect();
            let h: Bi = (0..=dg)
                .map(|j| {
                    let ys: Vec<Rational> = samples.iter().map(|(_, g)| g.coeff(j)).collect();
                    UPoly::interpolate(&xs, &ys)
                })
                .collect();
            let h = div_content(&h, &content_t(&h));
            let ph = from_bi(vars, Some(t), z, &h);
            if pa.divisible_by(&ph) && pb.divisible_by(&ph) {
                return h;
            }
        }
    }
    unreachable!("evaluation points are unbounded")
}

fn two_vars(p: &MultiPoly, q: &MultiPoly) -> Result<Vec<usize>> {
    let mut vs = p.effective_vars();
    for v in q.effective_vars() {
        if !vs.contains(&v) {
            vs.push(v);
        }
    }
    vs.sort_unstable();
    if vs.len() > 2 {
        return Err(Error::precondition(format!(
            "bivariate routine received {} effective variables",
            vs.len()
        )));
    }
    Ok(vs)
}

/// Greatest common divisor of polynomials in at most two effective
/// variables, in canonical form.
pub fn bivariate_gcd(p: &MultiPoly, q: &MultiPoly) -> Result<MultiPoly> {
    p.check_table(q)?;
    let vars = p.vars().clone();
    if p.is_zero() {
        return Ok(q.canonical());
    }
    if q.is_zero() {
        return Ok(p.canonical());
    }
    let vs = two_vars(p, q)?;
    match vs.len() {
        0 => Ok(MultiPoly::one(&vars)),
        1 => {
            let v = vs[0];
            Ok(multi_of(&vars, v, &upoly_of(p, v).gcd(&upoly_of(q, v))).canonical())
        }
        _ => {
            let (t, z) = (vs[0], vs[1]);
            let a = to_bi(p, Some(t), z);
            let b = to_bi(q, Some(t), z);
            let (ca, cb) = (content_t(&a), content_t(&b));
            let c = ca.gcd(&cb);
            let h = gcd_primitive(&div_content(&a, &ca), &div_content(&b, &cb), &vars, t, z);
            let h: Bi = h.iter().map(|x| x * &c).collect();
            Ok(from_bi(&vars, Some(t), z, &h).canonical())
        }
    }
}

/// Content of `p` viewed in ℚ[t][z] (a polynomial in the remaining
/// effective variable).
pub fn univariate_content(p: &MultiPoly, z: usize) -> Result<MultiPoly> {
    let vars = p.vars().clone();
    let others: Vec<usize> = p.effective_vars().into_iter().filter(|&v| v != z).collect();
    match others.as_slice() {
        [] => Ok(if p.is_zero() { MultiPoly::zero(&vars) } else { MultiPoly::one(&vars) }),
        [t] => Ok(multi_of(&vars, *t, &content_t(&to_bi(p, Some(*t), z))).canonical()),
        _ => Err(Error::precondition("content needs at most two effective variables")),
    }
}

/// Product of the distinct irreducible factors of `p`, canonical.
pub fn squarefree_part(p: &MultiPoly) -> Result<MultiPoly> {
    let vars = p.vars().clone();
    if p.is_zero() {
        return Err(Error::precondition("squarefree part of zero"));
    }
    let vs = two_vars(p, p)?;
    match vs.len() {
        0 => Ok(MultiPoly::one(&vars)),
        1 => Ok(multi_of(&vars, vs[0], &upoly_of(p, vs[0]).squarefree_part()).canonical()),
        _ => {
            let (t, z) = (vs[0], vs[1]);
            let a = to_bi(p, Some(t), z);
            let c = content_t(&a);
            let pp = div_content(&a, &c);
            let dpp: Bi = (1..pp.len())
                .map(|j| pp[j].scale(&rat(j as i64)))
                .collect();
            let dpp = div_content(&dpp, &content_t(&dpp));
            let g = gcd_primitive(&pp, &dpp, &vars, t, z);
            let s = from_bi(&vars, Some(t), z, &pp)
                .div_exact(&from_bi(&vars, Some(t), z, &g))
                .expect("gcd divides");
            let sc = multi_of(&vars, t, &c.squarefree_part());
            Ok((&sc * &s).canonical())
        }
    }
}
