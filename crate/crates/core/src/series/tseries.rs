use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::poly::{rat, Rational, UPoly};

/// Univariate power series in `t` known modulo `t^order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TSeries {
    c: Vec<Rational>,
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TSeries({self})")
    }
}

impl TSeries {
    /// `coeffs` padded or cut to exactly `order` entries.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order, Rational::zero());
        TSeries { c: coeffs }
    }

    pub fn from_ints(c: &[i64], order: usize) -> Self {
        TSeries::new(c.iter().map(|&x| rat(x)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        TSeries::new(Vec::new(), order)
    }

    pub fn constant(r: Rational, order: usize) -> Self {
        TSeries::new(vec![r], order)
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        TSeries::new(vec![Rational::zero(), Rational::one()], order)
    }

    pub fn from_upoly(p: &UPoly, order: usize) -> Self {
        TSeries::new(p.coeffs().to_vec(), order)
    }

    pub fn order(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.c[i]
    }

    pub fn truncate(&self, order: usize) -> TSeries {
        assert!(order <= self.order(), "cannot extend precision");
        TSeries { c: self.c[..order].to_vec() }
    }

    /// Index of the first nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn add(&self, o: &TSeries) -> TSeries {
        let n = self.order().min(o.order());
        TSeries { c: (0..n).map(|i| &self.c[i] + &o.c[i]).collect() }
    }

    pub fn sub(&self, o: &TSeries) -> TSeries {
        let n = self.order().min(o.order());
        TSeries { c: (0..n).map(|i| &self.c[i] - &o.c[i]).collect() }
    }

    pub fn neg(&self) -> TSeries {
        TSeries { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, r: &Rational) -> TSeries {
        TSeries { c: self.c.iter().map(|x| x * r).collect() }
    }

    pub fn mul(&self, o: &TSeries) -> TSeries {
        let n = self.order().min(o.order());
        let mut c = vec![Rational::zero(); n];
        for (i, a) in self.c.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        TSeries { c }
    }

    pub fn pow(&self, e: u32) -> TSeries {
        let mut acc = TSeries::constant(Rational::one(), self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Option<TSeries> {
        let n = self.order();
        if n == 0 {
            return Some(self.clone());
        }
        if self.c[0].is_zero() {
            return None;
        }
        let inv0 = self.c[0].recip();
        let mut out = vec![Rational::zero(); n];
        out[0] = inv0.clone();
        for m in 1..n {
            let mut s = Rational::zero();
            for i in 1..=m {
                s += &self.c[i] * &out[m - i];
            }
            out[m] = -s * &inv0;
        }
        Some(TSeries { c: out })
    }

    /// Multiplies by `t^k`, keeping the order.
    pub fn shift(&self, k: usize) -> TSeries {
        let n = self.order();
        let mut c = vec![Rational::zero(); k.min(n)];
        c.extend(self.c.iter().take(n.saturating_sub(k)).cloned());
        TSeries { c }
    }

    /// Substitutes `t -> t^k`.
    pub fn inflate(&self, k: usize) -> TSeries {
        let n = self.order();
        let mut c = vec![Rational::zero(); n];
        for (i, x) in self.c.iter().enumerate() {
            if i * k < n {
                c[i * k] = x.clone();
            }
        }
        TSeries { c }
    }
}

fn fmt_coeff_term(out: &mut String, first: bool, c: &Rational, body: &str) {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let num = if abs.is_integer() {
        abs.numer().to_string()
    } else {
        format!("{}/{}", abs.numer(), abs.denom())
    };
    if body.is_empty() {
        out.push_str(&num);
    } else if abs.is_one() {
        out.push_str(body);
    } else {
        out.push_str(&num);
        out.push('*');
        out.push_str(body);
    }
}

impl fmt::Display for TSeries {
    /// `1 + 2*t + 10*t^2 + O(t^3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            fmt_coeff_term(&mut out, first, c, &body);
            first = false;
        }
        let tail = format!("O(t^{})", self.order());
        if first {
            out.push_str(&tail);
        } else {
            out.push_str(" + ");
            out.push_str(&tail);
        }
        f.write_str(&out)
    }
}

pub(crate) fn format_upoly(p: &UPoly, var: &str) -> String {
    let mut out = String::new();
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let body = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        fmt_coeff_term(&mut out, first, c, &body);
        first = false;
    }
    if first {
        out.push('0');
    }
    out
}
