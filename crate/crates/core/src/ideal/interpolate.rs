//! Elimination by specialisation: the minimal polynomial of one variable
//! over ℚ(t), rebuilt from minimal polynomials at many values of `t`
//! modulo several primes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::field::{primes_below_2_62, rational_reconstruction, Field, PrimeField};
use super::modular::{crt, modular_minimal_polynomial};
use super::Budget;
use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly, Rational};

/// Dense polynomial over ℤ/p, ascending.
type Zp = Vec<u64>;

fn trim(a: &mut Zp) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn deg(a: &Zp) -> isize {
    a.len() as isize - 1
}

fn zp_mul(f: &PrimeField, a: &Zp, b: &Zp) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

fn zp_sub(f: &PrimeField, a: &Zp, b: &Zp) -> Zp {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, x) in out.iter_mut().enumerate() {
        *x = f.sub(a.get(i).unwrap_or(&0), b.get(i).unwrap_or(&0));
    }
    trim(&mut out);
    out
}

fn zp_divrem(f: &PrimeField, a: &Zp, b: &Zp) -> (Zp, Zp) {
    let mut r = a.clone();
    trim(&mut r);
    if deg(&r) < deg(b) {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = f.inv(&b[db]);
    let mut q = vec![0u64; r.len() - db];
    while deg(&r) >= deg(b) {
        let s = r.len() - 1 - db;
        let c = f.mul(&r[r.len() - 1], &inv);
        q[s] = c;
        for (j, y) in b.iter().enumerate() {
            r[s + j] = f.sub(&r[s + j], &f.mul(&c, y));
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn zp_eval(f: &PrimeField, a: &Zp, x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, c| f.add(&f.mul(&acc, &x), c))
}

fn zp_monic(f: &PrimeField, a: &Zp) -> Zp {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let inv = f.inv(l);
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

fn zp_gcd(f: &PrimeField, a: &Zp, b: &Zp) -> Zp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = zp_divrem(f, &a, &b);
        a = std::mem::replace(&mut b, r);
    }
    zp_monic(f, &a)
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn zp_interpolate(f: &PrimeField, xs: &[u64], ys: &[u64]) -> Zp {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = f.sub(&dd[i], &dd[i - 1]);
            let den = f.sub(&xs[i], &xs[i - j]);
            dd[i] = f.mul(&num, &f.inv(&den));
        }
    }
    let mut out: Zp = vec![dd[n - 1]];
    for i in (0..n - 1).rev() {
        out = zp_mul(f, &out, &vec![f.neg(&xs[i]), 1]);
        if out.is_empty() {
            out.push(0);
        }
        out[0] = f.add(&out[0], &dd[i]);
    }
    trim(&mut out);
    out
}

/// `num/den` with `deg num, deg den <= (n-1)/2` agreeing with the
/// samples, `den` monic.
fn zp_rational_interpolate(f: &PrimeField, xs: &[u64], ys: &[u64]) -> Option<(Zp, Zp)> {
    let n = xs.len();
    let mut m: Zp = vec![1];
    for x in xs {
        m = zp_mul(f, &m, &vec![f.neg(x), 1]);
    }
    let a = zp_interpolate(f, xs, ys);
    let bound = ((n as isize) - 1) / 2;
    let (mut r0, mut r1) = (m, a);
    let (mut s0, mut s1): (Zp, Zp) = (Vec::new(), vec![1]);
    while deg(&r1) > bound {
        let (q, r) = zp_divrem(f, &r0, &r1);
        let s2 = zp_sub(f, &s0, &zp_mul(f, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_empty() || deg(&s1) > bound {
        return None;
    }
    if xs.iter().any(|x| zp_eval(f, &s1, *x) == 0) {
        return None;
    }
    let inv = f.inv(s1.last().unwrap());
    let num = r1.iter().map(|c| f.mul(c, &inv)).collect();
    Some((num, zp_monic(f, &s1)))
}

#[derive(Debug, Clone, Serialize)]
pub struct InterpolationReport {
    pub primes_used: usize,
    pub points_per_prime: usize,
    pub degree: usize,
    pub millis_per_prime: Vec<u64>,
}

/// `(exponent of t, exponent of z) -> coefficient mod p`.
type Image = BTreeMap<(u32, u32), u64>;

fn image_mod_prime(
    gens: &[MultiPoly],
    t: usize,
    z: usize,
    prime: u64,
    max_degree: usize,
    start_points: usize,
    budget: &Budget,
) -> Result<(Image, usize, usize)> {
    let f = PrimeField::new(prime);
    let mut samples: Vec<(u64, Vec<u64>)> = Vec::new();
    let mut degree = 0usize;
    let mut want = start_points.max(6);
    let mut next_point: u64 = 2;
    loop {
        while samples.len() < want {
            if budget.expired() {
                return Err(Error::BudgetExhausted("interpolation ran out of time".into()));
            }
            next_point += 1;
            let x = Rational::from_integer(BigInt::from(next_point));
            let special: Vec<MultiPoly> = gens.iter().map(|g| g.eval_var(t, &x)).collect();
            let Some(mp) = modular_minimal_polynomial(&special, z, prime, max_degree, budget)? else {
                return Err(Error::Degenerate(format!(
                    "no minimal polynomial of degree <= {max_degree} at t = {next_point}; the specialised ideal is not zero-dimensional"
                )));
            };
            let d = mp.len() - 1;
            if d > degree {
                degree = d;
                samples.clear();
            }
            if d == degree {
                samples.push((next_point % prime, mp));
            }
        }
        // hold two samples back to check the reconstruction
        let fit = &samples[..samples.len() - 2];
        let xs: Vec<u64> = fit.iter().map(|s| s.0).collect();
        let mut parts: Vec<(Zp, Zp)> = Vec::with_capacity(degree + 1);
        let mut ok = true;
        for j in 0..=degree {
            let ys: Vec<u64> = fit.iter().map(|s| s.1[j]).collect();
            match zp_rational_interpolate(&f, &xs, &ys) {
                Some(nd) => parts.push(nd),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            ok = samples[samples.len() - 2..].iter().all(|(x, mp)| {
                parts.iter().enumerate().all(|(j, (num, den))| {
                    let v = f.mul(&zp_eval(&f, num, *x), &f.inv(&zp_eval(&f, den, *x)));
                    v == mp[j]
                })
            });
        }
        if ok {
            let mut l: Zp = vec![1];
            for (_, den) in &parts {
                let g = zp_gcd(&f, &l, den);
                l = zp_divrem(&f, &zp_mul(&f, &l, den), &g).0;
            }
            let mut image = Image::new();
            for (j, (num, den)) in parts.iter().enumerate() {
                let coeff = zp_mul(&f, num, &zp_divrem(&f, &l, den).0);
                for (i, c) in coeff.iter().enumerate() {
                    if *c != 0 {
                        image.insert((i as u32, j as u32), *c);
                    }
                }
            }
            return Ok((image, degree, samples.len()));
        }
        want += want / 2;
    }
}

/// Generator of `I ∩ ℚ[t, z]` for an ideal `I` that is zero-dimensional
/// over ℚ(t): the minimal polynomial of `z` over ℚ(t) with denominators
/// cleared, primitive.
///
/// Each image comes from degrevlex bases at integer values of `t` modulo a
/// prime; coefficients in `t` are recovered by rational interpolation and
/// those in ℚ by Chinese remaindering until one further prime changes
/// nothing. The result is probabilistic; callers verify it.
pub fn interpolated_elimination(
    gens: &[MultiPoly],
    t: usize,
    z: usize,
    max_degree: usize,
    max_primes: usize,
    budget: &Budget,
) -> Result<(MultiPoly, InterpolationReport)> {
    let vars = gens
        .first()
        .map(|g| g.vars().clone())
        .ok_or_else(|| Error::precondition("no generators"))?;
    let mut modulus = BigInt::from(1);
    let mut acc: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    let mut support: Option<Vec<(u32, u32)>> = None;
    let mut previous: Option<Vec<Rational>> = None;
    let mut points = 0;
    let mut degree = 0;
    let mut timings = Vec::new();
    let mut used = 0;
    for prime in primes_below_2_62(max_primes) {
        let start = std::time::Instant::now();
        let (image, d, n) = match image_mod_prime(gens, t, z, prime, max_degree, points, budget) {
            Ok(r) => r,
            // a prime dividing a denominator of the input
            Err(Error::Precondition(_)) => continue,
            Err(e) => return Err(e),
        };
        timings.push(start.elapsed().as_millis() as u64);
        let keys: Vec<(u32, u32)> = image.keys().cloned().collect();
        match &support {
            Some(s) if *s != keys || d != degree => {
                if d < degree || keys.len() < s.len() {
                    continue; // unlucky prime
                }
                // the earlier primes were unlucky
                acc.clear();
                modulus = BigInt::from(1);
                used = 0;
                previous = None;
            }
            _ => {}
        }
        support = Some(keys);
        degree = d;
        points = points.max(n);
        for (k, c) in &image {
            let a = acc.entry(*k).or_insert_with(|| BigInt::from(0));
            *a = crt(a, &modulus, *c, prime);
        }
        modulus *= BigInt::from(prime);
        used += 1;
        let rec: Option<Vec<Rational>> = acc
            .values()
            .map(|a| rational_reconstruction(&a.mod_floor(&modulus), &modulus))
            .collect();
        if let Some(rec) = rec {
            if previous.as_ref() == Some(&rec) {
                let terms = acc.keys().zip(rec).map(|(&(i, j), c)| {
                    let mut e = vec![0u32; vars.len()];
                    e[t] = i;
                    e[z] = j;
                    (Monomial::new(e), c)
                });
                let r = MultiPoly::from_terms(&vars, terms).canonical();
                return Ok((
                    r,
                    InterpolationReport {
                        primes_used: used,
                        points_per_prime: points,
                        degree,
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_interpolation_recovers_a_fraction() {
        let f = PrimeField::new(1_000_003);
        // (x^2 + 3) / (x - 7)
        let xs: Vec<u64> = (10..20).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| f.mul(&f.add(&f.mul(&x, &x), &3), &f.inv(&f.sub(&x, &7))))
            .collect();
        let (num, den) = zp_rational_interpolate(&f, &xs, &ys).unwrap();
        assert_eq!(num, vec![3, 0, 1]);
        assert_eq!(den, vec![f.neg(&7), 1]);
    }
}
