//! Degree bounds for the algebraicity of `F_1(t, a)`, evaluated exactly.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn pow(b: u64, e: u64) -> BigInt {
    BigInt::from(b).pow(e as u32)
}

/// `⌊n^{2n²k²} (k+1)^{n²k²(n+2)+n} δ^{n²k²(n+2)+n} / ((nk)!)^{nk}⌋`.
pub fn degree_bound_full(n: u64, k: u64, delta: u64) -> BigInt {
    let e = n * n * k * k * (n + 2) + n;
    let num = pow(n, 2 * n * n * k * k) * pow(k + 1, e) * pow(delta, e);
    num / factorial(n * k).pow((n * k) as u32)
}

/// Bound for the specialised series: `⌊n^{nk} (δ(k+1))^{nk(n+2)} / (nk)!⌋`.
pub fn degree_bound_specialized(n: u64, k: u64, delta: u64) -> BigInt {
    let num = pow(n, n * k) * pow(delta * (k + 1), n * k * (n + 2));
    num / factorial(n * k)
}

/// Degree of the polynomial eliminated from the duplicated system:
/// `⌊n^{2nk} (δ(k+1)+1)^{nk(n+2)} / (nk)!⌋`.
pub fn degree_bound_duplication(n: u64, k: u64, delta: u64) -> BigInt {
    let num = pow(n, 2 * n * k) * pow(delta * (k + 1) + 1, n * k * (n + 2));
    num / factorial(n * k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub n: u64,
    pub k: u64,
    pub delta: u64,
    #[serde(serialize_with = "crate::serialize_display")]
    pub full: BigInt,
    #[serde(serialize_with = "crate::serialize_display")]
    pub specialized: BigInt,
    #[serde(serialize_with = "crate::serialize_display")]
    pub duplication: BigInt,
}

pub fn all_bounds(n: u64, k: u64, delta: u64) -> Bounds {
    Bounds {
        n,
        k,
        delta,
        full: degree_bound_full(n, k, delta),
        specialized: degree_bound_specialized(n, k, delta),
        duplication: degree_bound_duplication(n, k, delta),
    }
}
