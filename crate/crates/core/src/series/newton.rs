//! Counting small roots of a polynomial with series coefficients.

use num_traits::Zero;
use serde::Serialize;

use super::TSeries;
use crate::error::{Error, Result};
use crate::poly::{resultant, Monomial, MultiPoly, Rational, UPoly, VarTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Distinctness {
    Confirmed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PuiseuxDiagnostic {
    /// Roots with strictly positive valuation, zero roots excluded.
    pub root_count: usize,
    /// Multiplicity of `u = 0` up to the working precision.
    pub zero_roots: usize,
    /// One entry per Newton-polygon segment: root valuation `p/q` as text
    /// and the degree of its characteristic equation.
    pub leading_terms: Vec<(String, usize)>,
    pub distinctness: Distinctness,
    /// `leading-order`, `discriminant` or `none`.
    pub distinctness_method: String,
    pub precision: usize,
}

fn lower_hull(points: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut hull: Vec<(usize, usize)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or above segment a-p
            let cross = (b.0 as i64 - a.0 as i64) * (p.1 as i64 - a.1 as i64)
                - (b.1 as i64 - a.1 as i64) * (p.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Newton-polygon count of the roots `U(t)` of `Σ d[i](t) u^i` with
/// positive valuation. Every coefficient must be known to at least
/// `min_precision` orders.
///
/// Distinctness is confirmed when every segment's characteristic equation
/// is squarefree; failing that, when the discriminant of the Weierstrass
/// factor collecting the small roots is nonzero at the working precision.
pub fn newton_root_count(d: &[TSeries], min_precision: usize) -> Result<PuiseuxDiagnostic> {
    let prec = d.iter().map(|s| s.order()).min().unwrap_or(0);
    if prec < min_precision {
        return Err(Error::Precision(format!(
            "coefficients known to order {prec}, {min_precision} required"
        )));
    }
    let vals: Vec<Option<usize>> = d.iter().map(|s| s.truncate(prec).valuation()).collect();
    if vals.iter().all(|v| v.is_none()) {
        return Err(Error::Precision(format!(
            "every coefficient vanishes modulo t^{prec}"
        )));
    }
    let zero_roots = vals.iter().position(|v| v.is_some()).unwrap();
    let vmin = vals.iter().flatten().copied().min().unwrap();
    let i0 = vals.iter().position(|v| *v == Some(vmin)).unwrap();
    let root_count = i0 - zero_roots;
    let points: Vec<(usize, usize)> = (zero_roots..=i0)
        .filter_map(|i| vals[i].map(|v| (i, v - vmin)))
        .collect();
    let hull = lower_hull(&points);
    let mut leading_terms = Vec::new();
    let mut all_squarefree = true;
    for w in hull.windows(2) {
        let ((i1, v1), (i2, v2)) = (w[0], w[1]);
        let (di, dv) = (i2 - i1, v1 - v2);
        let g = gcd(di, dv);
        let (p, q) = (dv / g, di / g);
        let mut phi = vec![Rational::zero(); g + 1];
        for s in 0..=g {
            let i = i1 + s * q;
            let v = v1 - s * p;
            if vals[i].map(|x| x - vmin) == Some(v) {
                phi[s] = d[i].coeff(v + vmin).clone();
            }
        }
        let phi = UPoly::new(phi);
        if phi.squarefree_part().degree() != phi.degree() {
            all_squarefree = false;
        }
        let exponent = if q == 1 { p.to_string() } else { format!("{p}/{q}") };
        leading_terms.push((exponent, g));
    }
    let (distinctness, method) = if root_count <= 1 || all_squarefree {
        (Distinctness::Confirmed, if root_count <= 1 { "none" } else { "leading-order" })
    } else if weierstrass_discriminant_nonzero(d, zero_roots, i0, vmin, prec) {
        (Distinctness::Confirmed, "discriminant")
    } else {
        (Distinctness::Inconclusive, "none")
    };
    Ok(PuiseuxDiagnostic {
        root_count,
        zero_roots,
        leading_terms,
        distinctness,
        distinctness_method: method.to_string(),
        precision: prec,
    })
}

/// Splits off the monic factor `W` of degree `r` whose roots are the small
/// roots (Hensel lifting from `u^r · V0`), then tests `disc_u(W) ≠ 0` modulo
/// `t^prec`.
fn weierstrass_discriminant_nonzero(d: &[TSeries], z: usize, i0: usize, vmin: usize, prec: usize) -> bool {
    let r = i0 - z;
    let order = prec - vmin;
    if order < 2 {
        return false;
    }
    // D'(t,u) = D / (u^z t^vmin) as a list of t-coefficients in ℚ[u]
    let dk: Vec<UPoly> = (0..order)
        .map(|k| {
            UPoly::new(
                d.iter()
                    .skip(z)
                    .map(|s| s.coeff(k + vmin).clone())
                    .collect(),
            )
        })
        .collect();
    let ur = UPoly::x().pow(r as u32);
    let Some(v0) = dk[0].div_exact(&ur) else {
        return false;
    };
    // inverse of v0 modulo u^r by power-series inversion
    let c0 = v0.coeff(0);
    if c0.is_zero() {
        return false;
    }
    let mut inv = vec![Rational::zero(); r];
    if r > 0 {
        inv[0] = c0.recip();
        for m in 1..r {
            let mut s = Rational::zero();
            for i in 1..=m {
                s += v0.coeff(i) * &inv[m - i];
            }
            inv[m] = -s * &inv[0];
        }
    }
    let inv = UPoly::new(inv);
    let trunc = |p: &UPoly| UPoly::new(p.coeffs().iter().take(r).cloned().collect());
    let mut w: Vec<UPoly> = vec![ur.clone()];
    let mut v: Vec<UPoly> = vec![v0.clone()];
    for k in 1..order {
        let mut e = dk[k].clone();
        for i in 1..k {
            e = &e - &(&w[i] * &v[k - i]);
        }
        let wk = trunc(&(&e * &inv));
        let rest = &e - &(&wk * &v0);
        let Some(vk) = rest.div_exact(&ur) else {
            return false;
        };
        w.push(wk);
        v.push(vk);
    }
    // W as a polynomial in (t, u); truncation only perturbs t^order and up
    let vars = VarTable::new(&["t", "u"]).unwrap();
    let mut terms = Vec::new();
    for (k, wk) in w.iter().enumerate() {
        for (i, c) in wk.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.push((Monomial::new(vec![k as u32, i as u32]), c.clone()));
            }
        }
    }
    let wp = MultiPoly::from_terms(&vars, terms);
    let Ok(disc) = resultant(&wp, &wp.partial_derivative(1), 1) else {
        return false;
    };
    disc.terms().iter().any(|t| (t.mono.exp(0) as usize) < order)
}
