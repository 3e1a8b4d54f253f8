//! Annihilating polynomials guessed from series coefficients, checked
//! against the series, and minimal factors of eliminated polynomials.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly, Rational, VarTable};
use crate::series::{eval_poly_at_series, Binding, TSeries};

/// Least number of extra orders checked beyond the number of unknowns.
pub const MIN_MARGIN: usize = 10;

#[derive(Debug, Clone)]
pub struct GuessSpec {
    pub series: TSeries,
    /// Degree bound in `t`.
    pub dt: usize,
    /// Degree bound in `z0`.
    pub dz: usize,
    pub margin: usize,
}

impl GuessSpec {
    pub fn new(series: TSeries, dt: usize, dz: usize) -> GuessSpec {
        GuessSpec {
            series,
            dt,
            dz,
            margin: MIN_MARGIN,
        }
    }

    /// Orders the series must be known to.
    pub fn required_order(&self) -> usize {
        (self.dt + 1) * (self.dz + 1) + self.margin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Checked to an order beyond the square of a proven degree bound.
    Certified,
    Conjectural,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub holds: bool,
    pub order: usize,
    /// First power of `t` with a nonzero coefficient.
    pub first_failure: Option<usize>,
}

/// The table `t, z0` used for guessed polynomials.
pub fn guess_table() -> Arc<VarTable> {
    VarTable::new(&["t", "z0"]).expect("distinct names")
}

/// `R(t, series) mod t^n`, with `R` a polynomial in `t` and `z0`.
pub fn verify_annihilator(r: &MultiPoly, series: &TSeries, n: usize) -> Result<Verification> {
    if r.is_zero() {
        return Err(Error::precondition("the zero polynomial annihilates everything"));
    }
    if series.order() < n {
        return Err(Error::Precision(format!(
            "series known to order {} < {n}",
            series.order()
        )));
    }
    let vars = r.vars();
    let mut b = HashMap::new();
    for v in r.effective_vars() {
        match vars.name(v) {
            "t" => {}
            "z0" => {
                b.insert(v, Binding::T(series.truncate(n)));
            }
            other => {
                return Err(Error::structural(format!(
                    "annihilator involves `{other}`; expected t and z0 only"
                )))
            }
        }
    }
    let value = eval_poly_at_series(r, &b, n)?.eval_u(&Rational::zero());
    let first_failure = value.valuation();
    Ok(Verification {
        holds: first_failure.is_none(),
        order: n,
        first_failure,
    })
}

/// Integer row echelon form by fraction-free elimination; returns the
/// pivot columns. Pivots are chosen by least magnitude.
fn echelon(m: &mut [Vec<BigInt>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let best = (row..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
        let Some(best) = best else { continue };
        m.swap(row, best);
        let p = m[row][col].clone();
        for r in row + 1..m.len() {
            let f = m[r][col].clone();
            for c in col..ncols {
                let v = &p * &m[r][c] - &f * &m[row][c];
                m[r][c] = v / &prev;
            }
        }
        // keep the untouched entries left of `col` consistent with Bareiss
        prev = p;
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// A basis of the integer kernel of `m`.
fn integer_kernel(mut m: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let pivots = echelon(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut x: Vec<Rational> = vec![Rational::zero(); ncols];
        x[f] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Rational::zero();
            for c in pc + 1..ncols {
                if !m[r][c].is_zero() && !x[c].is_zero() {
                    s += Rational::from_integer(m[r][c].clone()) * &x[c];
                }
            }
            x[pc] = -s / Rational::from_integer(m[r][pc].clone());
        }
        let l = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        out.push(x.iter().map(|q| q.numer() * (&l / q.denom())).collect());
    }
    out
}

/// Coefficient rows of `t^i G^j`, `i <= dt`, `j <= dz`, up to `t^n`,
/// each row scaled to integers.
fn coefficient_matrix(series: &TSeries, dt: usize, dz: usize, n: usize) -> Vec<Vec<BigInt>> {
    let g = series.truncate(n);
    let mut powers = vec![TSeries::constant(Rational::one(), n)];
    for j in 1..=dz {
        powers.push(powers[j - 1].mul(&g));
    }
    let cols = (dt + 1) * (dz + 1);
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let row: Vec<Rational> = (0..cols)
            .map(|c| {
                let (j, i) = (c / (dt + 1), c % (dt + 1));
                if k >= i {
                    powers[j].coeff(k - i).clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        rows.push(row.iter().map(|q| q.numer() * (&l / q.denom())).collect());
    }
    rows
}

fn poly_from_vector(vars: &Arc<VarTable>, v: &[BigInt], dt: usize) -> MultiPoly {
    let terms = v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(c, x)| {
        let (j, i) = (c / (dt + 1), c % (dt + 1));
        (Monomial::new(vec![i as u32, j as u32]), Rational::from_integer(x.clone()))
    });
    MultiPoly::from_terms(vars, terms).canonical()
}

/// Kernel polynomial for exact bounds `(dt, dz)` checked to order `n`.
fn guess_exact(series: &TSeries, dt: usize, dz: usize, n: usize) -> Option<MultiPoly> {
    let kernel = integer_kernel(coefficient_matrix(series, dt, dz, n), (dt + 1) * (dz + 1));
    let vars = guess_table();
    kernel
        .iter()
        .map(|v| poly_from_vector(&vars, v, dt))
        .filter(|p| p.degree_in(1) > 0)
        .min_by_key(|p| (p.degree_in(1), p.degree_in(0), p.len()))
}

/// Nonzero `R` with `deg_t R <= dt`, `deg_z0 R <= dz`, minimal in `deg_z0`
/// and then `deg_t`, with `R(t, G) = 0 mod t^N`, `N` the series order.
pub fn guess_annihilator(spec: &GuessSpec) -> Result<Option<MultiPoly>> {
    if spec.margin < MIN_MARGIN {
        return Err(Error::precondition(format!("margin must be at least {MIN_MARGIN}")));
    }
    let n = spec.series.order();
    if n < spec.required_order() {
        return Err(Error::precondition(format!(
            "series known to order {n}; bounds ({}, {}) need {}",
            spec.dt,
            spec.dz,
            spec.required_order()
        )));
    }
    for dz in 1..=spec.dz {
        for dt in 0..=spec.dt {
            if let Some(p) = guess_exact(&spec.series, dt, dz, n) {
                if p.degree_in(1) == dz as u32 {
                    return Ok(Some(p));
                }
            }
        }
    }
    Ok(None)
}

/// Proven-bound label for a guess checked to order `n`: certified when
/// `n > (bound + 1)^2`.
pub fn provenance(n: usize, degree_bound: Option<&BigInt>) -> Provenance {
    match degree_bound {
        Some(b) => {
            let need = (b + BigInt::one()).pow(2);
            if BigInt::from(n) > need {
                Provenance::Certified
            } else {
                Provenance::Conjectural
            }
        }
        None => Provenance::Conjectural,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalAnnihilator {
    #[serde(serialize_with = "crate::serialize_poly")]
    pub poly: MultiPoly,
    /// `R_eliminated / poly`, when the division is exact.
    #[serde(serialize_with = "crate::serialize_opt_poly")]
    pub quotient: Option<MultiPoly>,
    pub minimal: bool,
    pub verified_to: usize,
    pub bounds: (usize, usize),
}

/// Smallest guessed annihilator dividing `r` exactly, searched with
/// bounds up to the degrees of `r` that the series order supports.
pub fn minimal_annihilator(r: &MultiPoly, series: &TSeries) -> Result<MinimalAnnihilator> {
    let vars = r.vars().clone();
    let (ti, zi) = (vars.index("t"), vars.require("z0")?);
    let check = verify_annihilator(r, series, series.order())?;
    if !check.holds {
        return Err(Error::precondition(format!(
            "the eliminated polynomial does not vanish on the series (order {})",
            check.first_failure.unwrap_or(0)
        )));
    }
    let max_dt = ti.map_or(0, |t| r.degree_in(t)) as usize;
    let max_dz = r.degree_in(zi) as usize;
    let n = series.order();
    for dz in 1..=max_dz {
        for dt in 0..=max_dt {
            if (dt + 1) * (dz + 1) + MIN_MARGIN > n {
                break;
            }
            let Some(cand) = guess_exact(series, dt, dz, n) else { continue };
            if cand.degree_in(1) != dz as u32 {
                continue;
            }
            let lifted = cand.embed(&vars)?;
            if let Some(q) = r.div_exact(&lifted) {
                return Ok(MinimalAnnihilator {
                    poly: lifted,
                    quotient: Some(q),
                    minimal: true,
                    verified_to: n,
                    bounds: (dt, dz),
                });
            }
        }
    }
    Ok(MinimalAnnihilator {
        poly: r.canonical(),
        quotient: None,
        minimal: false,
        verified_to: n,
        bounds: (max_dt, max_dz),
    })
}
