//! Resultants by the subresultant pseudo-remainder sequence.



use super::{bareiss_determinant, MultiPoly};
use crate::error::{Error, Result};

type Coeffs = Vec<MultiPoly>;

fn trim(c: &mut Coeffs) {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
}

fn deg(c: &Coeffs) -> usize {
    c.len() - 1
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let db = deg(b);
    let lb = b[db].clone();
    let mut r = a.clone();
    let delta = deg(a) - db;
    let mut steps = 0;
    while !r.is_empty() && r.len() > db {
        let dr = deg(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x = &*x * &lb;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &lr * bj;
            r[j + shift] = &r[j + shift] - &t;
        }
        trim(&mut r);
        steps += 1;
    }
    let extra = (delta + 1) - steps;
    if extra > 0 && !r.is_empty() {
        let f = lb.pow(extra as u32);
        for x in r.iter_mut() {
            *x = &*x * &f;
        }
    }
    r
}

fn div_all(c: &mut Coeffs, d: &MultiPoly) {
    if d.is_one() {
        return;
    }
    for x in c.iter_mut() {
        *x = x.div_exact(d).expect("subresultant division is exact");
    }
}

/// Resultant of `p` and `q` with respect to variable `v`.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, v: usize) -> Result<MultiPoly> {
    if !crate::poly::same_table(p.vars(), q.vars()) {
        return Err(Error::structural("resultant operands use different tables"));
    }
    if p.is_zero() || q.is_zero() {
        return Err(Error::precondition("resultant of a zero polynomial"));
    }
    let vars = p.vars().clone();
    let mut a = p.coefficients_in(v);
    let mut b = q.coefficients_in(v);
    if deg(&a) == 0 && deg(&b) == 0 {
        return Err(Error::precondition(format!(
            "neither polynomial involves `{}`",
            vars.name(v)
        )));
    }
    let mut negate = false;
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            negate = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if deg(&b) == 0 {
        let r = b[0].pow(deg(&a) as u32);
        return Ok(if negate { -r } else { r });
    }
    let mut g = MultiPoly::one(&vars);
    let mut h = MultiPoly::one(&vars);
    loop {
        let (da, db) = (deg(&a), deg(&b));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let mut r = prem(&a, &b);
        if r.is_empty() {
            return Ok(MultiPoly::zero(&vars));
        }
        let div = &g * &h.pow(delta as u32);
        div_all(&mut r, &div);
        a = b;
        b = r;
        g = a[deg(&a)].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta as u32)
                .div_exact(&h.pow(delta as u32 - 1))
                .expect("subresultant division is exact"),
        };
        if deg(&b) == 0 {
            let da = deg(&a) as u32;
            let num = b[0].pow(da);
            let res = if da <= 1 {
                num
            } else {
                num.div_exact(&h.pow(da - 1))
                    .expect("subresultant division is exact")
            };
            return Ok(if negate { -res } else { res });
        }
    }
}

/// Principal subresultant coefficients `psc_0 .. psc_{min(deg p, deg q)-1}`
/// with respect to `v`, from the defining determinants. `psc_0` is the
/// resultant; `deg gcd >= d` iff `psc_0 .. psc_{d-1}` all vanish.
pub fn principal_subresultants(p: &MultiPoly, q: &MultiPoly, v: usize) -> Result<Vec<MultiPoly>> {
    let a = p.coefficients_in(v);
    let b = q.coefficients_in(v);
    let (m, n) = (deg(&a), deg(&b));
    let vars = p.vars().clone();
    let mut out = Vec::new();
    for j in 0..m.min(n) {
        let size = m + n - 2 * j;
        let mut rows: Vec<Vec<MultiPoly>> = Vec::with_capacity(size);
        // columns hold degrees m+n-j-1 down to j; the last column folds the
        // remaining low-degree coefficients as in the usual definition
        let push_rows = |rows: &mut Vec<Vec<MultiPoly>>, c: &Coeffs, cnt: usize| {
            let dc = deg(c);
            for s in (0..cnt).rev() {
                let mut row = Vec::with_capacity(size);
                for col in 0..size {
                    let d = m + n - j - 1 - col;
                    // row represents x^s * c
                    let idx = d as isize - s as isize;
                    let e = if col + 1 == size {
                        // last column: coefficient of x^j in x^s*c
                        let k = j as isize - s as isize;
                        if k >= 0 && (k as usize) <= dc {
                            c[k as usize].clone()
                        } else {
                            MultiPoly::zero(&vars)
                        }
                    } else if idx >= 0 && (idx as usize) <= dc {
                        c[idx as usize].clone()
                    } else {
                        MultiPoly::zero(&vars)
                    };
                    row.push(e);
                }
                rows.push(row);
            }
        };
        push_rows(&mut rows, &a, n - j);
        push_rows(&mut rows, &b, m - j);
        out.push(bareiss_determinant(&rows)?);
    }
    Ok(out)
}

