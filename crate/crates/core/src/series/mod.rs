//! Truncated power series in `t` with polynomial coefficients in `u`.

mod expand;
mod newton;
mod tseries;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{rat, MultiPoly, Rational, UPoly};

pub use expand::{fixed_point_expand, picard_expand, Expansion, SpecializationVector};
pub use newton::{newton_root_count, Distinctness, PuiseuxDiagnostic};
pub use tseries::TSeries;
pub(crate) use tseries::format_upoly;

/// Element of ℚ[u][[t]] known modulo `t^order`; entry `j` is the
/// coefficient of `t^j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct USeries {
    c: Vec<UPoly>,
}

impl fmt::Debug for USeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "USeries({self})")
    }
}

impl USeries {
    pub fn new(mut coeffs: Vec<UPoly>, order: usize) -> Self {
        coeffs.resize(order, UPoly::zero());
        USeries { c: coeffs }
    }

    pub fn zero(order: usize) -> Self {
        USeries::new(Vec::new(), order)
    }

    /// A polynomial in `u` viewed as a series constant in `t`.
    pub fn from_upoly(p: &UPoly, order: usize) -> Self {
        USeries::new(vec![p.clone()], order)
    }

    pub fn from_tseries(s: &TSeries) -> Self {
        USeries {
            c: s.coeffs().iter().map(|r| UPoly::constant(r.clone())).collect(),
        }
    }

    pub fn u(order: usize) -> Self {
        USeries::from_upoly(&UPoly::x(), order)
    }

    pub fn t(order: usize) -> Self {
        USeries::from_tseries(&TSeries::t(order))
    }

    pub fn order(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.c
    }

    pub fn coeff(&self, j: usize) -> &UPoly {
        &self.c[j]
    }

    pub fn truncate(&self, order: usize) -> USeries {
        assert!(order <= self.order(), "cannot extend precision");
        USeries { c: self.c[..order].to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, o: &USeries) -> USeries {
        let n = self.order().min(o.order());
        USeries { c: (0..n).map(|i| &self.c[i] + &o.c[i]).collect() }
    }

    pub fn sub(&self, o: &USeries) -> USeries {
        let n = self.order().min(o.order());
        USeries { c: (0..n).map(|i| &self.c[i] - &o.c[i]).collect() }
    }

    pub fn scale(&self, r: &Rational) -> USeries {
        USeries { c: self.c.iter().map(|p| p.scale(r)).collect() }
    }

    pub fn mul_upoly(&self, p: &UPoly) -> USeries {
        USeries { c: self.c.iter().map(|x| x * p).collect() }
    }

    pub fn mul(&self, o: &USeries) -> USeries {
        let n = self.order().min(o.order());
        let mut c = vec![UPoly::zero(); n];
        for i in 0..n {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if !o.c[j].is_zero() {
                    c[i + j] = &c[i + j] + &(&self.c[i] * &o.c[j]);
                }
            }
        }
        USeries { c }
    }

    /// Multiplies by `t^k`, keeping the order.
    pub fn shift(&self, k: usize) -> USeries {
        let n = self.order();
        let mut c = vec![UPoly::zero(); k.min(n)];
        c.extend(self.c.iter().take(n.saturating_sub(k)).cloned());
        USeries { c }
    }

    /// Coefficient-wise `u`-derivative.
    pub fn derivative_u(&self) -> USeries {
        USeries { c: self.c.iter().map(|p| p.derivative()).collect() }
    }

    /// `F(t, a)`.
    pub fn eval_u(&self, a: &Rational) -> TSeries {
        TSeries::new(self.c.iter().map(|p| p.eval(a)).collect(), self.order())
    }

    /// `F(t, u + s)`.
    pub fn shift_u(&self, s: &Rational) -> USeries {
        USeries { c: self.c.iter().map(|p| p.taylor_shift(s)).collect() }
    }

    /// Transposes into coefficients of `u^i`, each a series in `t`.
    pub fn u_coefficients(&self) -> Vec<TSeries> {
        let d = self.c.iter().filter_map(|p| p.degree()).max();
        let Some(d) = d else {
            return vec![TSeries::zero(self.order())];
        };
        (0..=d)
            .map(|i| TSeries::new(self.c.iter().map(|p| p.coeff(i)).collect(), self.order()))
            .collect()
    }
}

impl fmt::Display for USeries {
    /// `1 + (u + 2*u^2)*t + O(t^2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (j, p) in self.c.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let body = tseries::format_upoly(p, "u");
            let nterms = p.coeffs().iter().filter(|c| !c.is_zero()).count();
            let tpow = match j {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{j}"),
            };
            let s = if j == 0 {
                body
            } else if body == "1" {
                tpow
            } else if nterms == 1 && !body.starts_with('-') {
                format!("{body}*{tpow}")
            } else {
                format!("({body})*{tpow}")
            };
            parts.push(s);
        }
        parts.push(format!("O(t^{})", self.order()));
        f.write_str(&parts.join(" + "))
    }
}

/// `Δ_a F = (F(t,u) - F(t,a)) / (u - a)`, coefficient by coefficient.
pub fn delta_a(f: &USeries, a: &Rational) -> USeries {
    USeries {
        c: f.c.iter().map(|p| divided_difference(p, a)).collect(),
    }
}

/// `(p(u) - p(a)) / (u - a)` by synthetic division.
pub fn divided_difference(p: &UPoly, a: &Rational) -> UPoly {
    let c = p.coeffs();
    if c.len() <= 1 {
        return UPoly::zero();
    }
    let n = c.len();
    let mut q = vec![Rational::zero(); n - 1];
    let mut acc = Rational::zero();
    for i in (1..n).rev() {
        acc = &acc * a + &c[i];
        q[i - 1] = acc.clone();
    }
    UPoly::new(q)
}

/// `∂_u^ℓ F` evaluated at `u = a`.
pub fn specialize(f: &USeries, a: &Rational, l: usize) -> TSeries {
    let mut g = f.clone();
    for _ in 0..l {
        g = g.derivative_u();
    }
    g.eval_u(a)
}

/// Value bound to a polynomial variable during series evaluation.
#[derive(Debug, Clone)]
pub enum Binding {
    U(USeries),
    T(TSeries),
}

impl Binding {
    fn to_useries(&self) -> USeries {
        match self {
            Binding::U(s) => s.clone(),
            Binding::T(s) => USeries::from_tseries(s),
        }
    }
}

/// Evaluates `p` with its variables replaced by series, modulo `t^order`.
/// Variables named `t` and `u` bind to themselves unless bound.
pub fn eval_poly_at_series(p: &MultiPoly, bindings: &HashMap<usize, Binding>, order: usize) -> Result<USeries> {
    let vars = p.vars();
    let mut vals: HashMap<usize, USeries> = HashMap::new();
    for v in p.effective_vars() {
        let s = match bindings.get(&v) {
            Some(b) => b.to_useries(),
            None => match vars.name(v) {
                "t" => USeries::t(order),
                "u" => USeries::u(order),
                name => {
                    return Err(Error::structural(format!("variable `{name}` is unbound")));
                }
            },
        };
        if s.order() < order {
            return Err(Error::Precision(format!(
                "binding for `{}` known to order {} < {}",
                vars.name(v),
                s.order(),
                order
            )));
        }
        vals.insert(v, s.truncate(order));
    }
    let mut powers: HashMap<(usize, u32), USeries> = HashMap::new();
    let mut acc = USeries::zero(order);
    for term in p.terms() {
        let mut prod = USeries::from_upoly(&UPoly::constant(term.coeff.clone()), order);
        for (v, &e) in term.mono.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let pw = match powers.get(&(v, e)) {
                Some(s) => s.clone(),
                None => {
                    let base = &vals[&v];
                    let mut s = base.clone();
                    for _ in 1..e {
                        s = s.mul(base);
                    }
                    powers.insert((v, e), s.clone());
                    s
                }
            };
            prod = prod.mul(&pw);
        }
        acc = acc.add(&prod);
    }
    Ok(acc)
}

pub(crate) fn factorial(l: usize) -> Rational {
    (1..=l).fold(Rational::one(), |acc, i| acc * rat(i as i64))
}
