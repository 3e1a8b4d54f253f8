//! Basis computations modulo primes and rational reconstruction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::field::{primes_below_2_62, rational_reconstruction, Field, PrimeField};
use super::engine::Engine;
use super::{layout_for, run_engine, to_engine, Budget, IdealPresentation, TraceEvent};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, MultiPoly, Rational};

/// Reduced basis modulo `prime`.
#[derive(Debug, Clone)]
pub struct ModularBasis {
    pub prime: u64,
    pub elements: Vec<Vec<(Vec<u32>, u64)>>,
    pub trace: Vec<TraceEvent>,
}

pub fn modular_basis(gens: &IdealPresentation, prime: u64, budget: &Budget) -> Result<ModularBasis> {
    let f = PrimeField::new(prime);
    let (elements, trace) = run_engine(&f, &gens.generators, &gens.order, gens.vars.len(), budget)?;
    Ok(ModularBasis {
        prime,
        elements,
        trace,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MultimodularReport {
    pub primes_used: usize,
    pub primes_rejected: usize,
    pub basis_size: usize,
    pub millis_per_prime: Vec<u64>,
}

type Shape = Vec<Vec<Vec<u32>>>;

pub(crate) fn crt(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let f = PrimeField::new(p);
    let am = f.reduce_bigint(a);
    let mm = f.reduce_bigint(m);
    let k = f.mul(&f.sub(&b, &am), &f.inv(&mm));
    a + m * BigInt::from(k)
}

/// Elements of `gens ∩ ℚ[keep]` computed from reduced bases modulo
/// several primes. `gens.order` must rank `keep` in its last block.
///
/// Primes are added until the reconstructed polynomials stop changing
/// across one further prime. Primes whose basis shape disagrees with the
/// majority are discarded. The result is probabilistic; callers verify it
/// independently.
pub fn multimodular_elimination(
    gens: &IdealPresentation,
    keep: &[usize],
    budget: &Budget,
    max_primes: usize,
) -> Result<(Vec<MultiPoly>, MultimodularReport)> {
    let vars = gens.vars.clone();
    let n = vars.len();
    let primes = primes_below_2_62(max_primes);
    let mut groups: BTreeMap<Shape, (BigInt, Vec<Vec<BigInt>>, usize)> = BTreeMap::new();
    let mut rejected = 0;
    let mut timings = Vec::new();
    let mut previous: Option<Vec<Vec<Rational>>> = None;
    for &p in &primes {
        let f = PrimeField::new(p);
        if gens
            .generators
            .iter()
            .any(|g| g.terms().iter().any(|t| f.from_rational(&t.coeff).is_none()))
        {
            rejected += 1;
            continue;
        }
        let start = std::time::Instant::now();
        let mb = modular_basis(gens, p, budget)?;
        timings.push(start.elapsed().as_millis() as u64);
        let elim: Vec<&Vec<(Vec<u32>, u64)>> = mb
            .elements
            .iter()
            .filter(|el| el.iter().all(|(e, _)| (0..n).all(|v| keep.contains(&v) || e[v] == 0)))
            .collect();
        let mut shape: Shape = mb.elements.iter().map(|el| vec![el[0].0.clone()]).collect();
        shape.extend(elim.iter().map(|el| el.iter().map(|(e, _)| e.clone()).collect()));
        let entry = groups
            .entry(shape.clone())
            .or_insert_with(|| (BigInt::from(1), elim.iter().map(|el| vec![BigInt::from(0); el.len()]).collect(), 0));
        let m_old = entry.0.clone();
        for (acc, el) in entry.1.iter_mut().zip(&elim) {
            for (a, (_, c)) in acc.iter_mut().zip(el.iter()) {
                *a = crt(a, &m_old, *c, p);
            }
        }
        entry.0 = &m_old * BigInt::from(p);
        entry.2 += 1;
        // reconstruct from the most populated group
        let (best_shape, (modulus, residues, count)) = groups
            .iter()
            .max_by_key(|(_, g)| g.2)
            .map(|(s, g)| (s.clone(), g.clone()))
            .unwrap();
        let mut recon: Option<Vec<Vec<Rational>>> = Some(Vec::new());
        for el in &residues {
            let mut row = Vec::with_capacity(el.len());
            for a in el {
                match rational_reconstruction(&a.mod_floor(&modulus), &modulus) {
                    Some(r) => row.push(r),
                    None => {
                        recon = None;
                        break;
                    }
                }
            }
            match recon.as_mut() {
                Some(v) => v.push(row),
                None => break,
            }
        }
        if let Some(rec) = recon {
            if previous.as_ref() == Some(&rec) && count >= 2 {
                rejected += groups.values().map(|g| g.2).sum::<usize>() - count;
                let nelim = residues.len();
                let supports = &best_shape[best_shape.len() - nelim..];
                let polys = supports
                    .iter()
                    .zip(rec)
                    .map(|(sup, cs)| {
                        MultiPoly::from_terms(&vars, sup.iter().cloned().map(Monomial::new).zip(cs))
                            .canonical_with(&gens.order)
                    })
                    .collect();
                return Ok((
                    polys,
                    MultimodularReport {
                        primes_used: count,
                        primes_rejected: rejected,
                        basis_size: best_shape.len() - nelim,
                        millis_per_prime: timings,
                    },
                ));
            }
            previous = Some(rec);
        } else {
            previous = None;
        }
    }
    Err(Error::BudgetExhausted(format!(
        "rational reconstruction did not stabilise within {max_primes} primes"
    )))
}

/// Minimal polynomial of variable `v` modulo the ideal generated by `gens`,
/// reduced modulo `prime`, from a degrevlex basis. Coefficients ascending,
/// monic. `None` when the degree exceeds `max_degree`.
pub fn modular_minimal_polynomial(
    gens: &[MultiPoly],
    v: usize,
    prime: u64,
    max_degree: usize,
    budget: &Budget,
) -> Result<Option<Vec<u64>>> {
    let nvars = gens
        .first()
        .map(|g| g.vars().len())
        .ok_or_else(|| Error::precondition("no generators"))?;
    let f = PrimeField::new(prime);
    let lay = layout_for(&MonomialOrder::DegRevLex, nvars);
    let eng = Engine::new(&f, &lay, budget.clone());
    let mut polys = Vec::with_capacity(gens.len());
    for g in gens {
        polys.push(
            to_engine(&f, &eng, &lay, g)
                .ok_or_else(|| Error::precondition("coefficient denominator vanishes in the field"))?,
        );
    }
    let (basis, _) = eng.run(polys)?;
    let mut nf = Engine::new(&f, &lay, budget.clone());
    nf.load(basis);
    nf.minimal_polynomial(v, max_degree)
}
