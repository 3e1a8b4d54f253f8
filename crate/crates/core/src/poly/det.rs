//! Determinants of polynomial matrices.

use super::MultiPoly;
use crate::error::{Error, Result};

fn check_square(m: &[Vec<MultiPoly>]) -> Result<()> {
    if m.is_empty() {
        return Err(Error::structural("empty matrix"));
    }
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::structural("matrix is not square"));
    }
    Ok(())
}

/// Fraction-free elimination: every intermediate entry is a minor of the
/// input, so the division by the previous pivot is exact.
pub fn bareiss_determinant(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    check_square(m)?;
    let n = m.len();
    let vars = m[0][0].vars().clone();
    let mut a: Vec<Vec<MultiPoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = MultiPoly::one(&vars);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(MultiPoly::zero(&vars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Alternating sum over permutations; exponential, used as a test oracle.
pub fn leibniz_determinant(m: &[Vec<MultiPoly>]) -> Result<MultiPoly> {
    check_square(m)?;
    let n = m.len();
    let vars = m[0][0].vars().clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = MultiPoly::zero(&vars);
    permute(&mut perm, 0, m, &mut acc);
    Ok(acc)
}

fn permute(perm: &mut Vec<usize>, at: usize, m: &[Vec<MultiPoly>], acc: &mut MultiPoly) {
    let n = perm.len();
    if at == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let mut prod = MultiPoly::one(m[0][0].vars());
        for (i, &p) in perm.iter().enumerate() {
            prod = &prod * &m[i][p];
        }
        *acc = if inversions % 2 == 0 { &*acc + &prod } else { &*acc - &prod };
        return;
    }
    for i in at..n {
        perm.swap(at, i);
        permute(perm, at + 1, m, acc);
        perm.swap(at, i);
    }
}

/// `det(∂ polys[i] / ∂ vars[j])`.
pub fn jacobian_determinant(polys: &[MultiPoly], vars: &[usize]) -> Result<MultiPoly> {
    if polys.len() != vars.len() {
        return Err(Error::structural(format!(
            "Jacobian of {} polynomials in {} variables is not square",
            polys.len(),
            vars.len()
        )));
    }
    let m: Vec<Vec<MultiPoly>> = polys
        .iter()
        .map(|p| vars.iter().map(|&v| p.partial_derivative(v)).collect())
        .collect();
    bareiss_determinant(&m)
}
