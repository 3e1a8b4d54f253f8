//! Exact multivariate polynomials over the rationals.
//!
//! A [`MultiPoly`] is a sparse list of terms over a shared [`VarTable`].
//! Terms are always kept sorted in descending degree-reverse-lexicographic
//! order with respect to the table's variable order, so two equal
//! polynomials have identical term lists. Other monomial orders
//! ([`MonomialOrder`]) are applied on demand when a leading term is needed.

mod det;
mod gcd;
mod monomial;
mod order;
mod parse;
mod resultant;
pub mod upoly;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use det::{bareiss_determinant, jacobian_determinant, leibniz_determinant};
pub use gcd::{bivariate_gcd, squarefree_part, univariate_content};
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use parse::{parse_expression, Atom, AtomResolver, Expr, Pos};
pub use resultant::{principal_subresultants, resultant};
pub use upoly::UPoly;

/// Exact rational number; always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Ordered, immutable list of variable names.
///
/// The index order is the global tie-break order: variable 0 is the
/// largest variable under degrevlex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<VarTable>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::structural("empty variable name"));
            }
            if names[..i].contains(n) {
                return Err(Error::structural(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Arc::new(VarTable { names }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::structural(format!("unknown variable `{name}`")))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A single term `coeff * monomial`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub mono: Monomial,
    pub coeff: Rational,
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Arc<VarTable>,
    terms: Vec<Term>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl MultiPoly {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(vars: &Arc<VarTable>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Arc<VarTable>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.push(Term {
                mono: Monomial::one(vars.len()),
                coeff: c,
            });
        }
        p
    }

    pub fn from_int(vars: &Arc<VarTable>, c: i64) -> Self {
        Self::constant(vars, rat(c))
    }

    /// The polynomial consisting of the variable at index `i`.
    pub fn var(vars: &Arc<VarTable>, i: usize) -> Self {
        let mut e = vec![0u32; vars.len()];
        e[i] = 1;
        MultiPoly {
            vars: vars.clone(),
            terms: vec![Term {
                mono: Monomial::new(e),
                coeff: Rational::one(),
            }],
        }
    }

    pub fn var_named(vars: &Arc<VarTable>, name: &str) -> Result<Self> {
        Ok(Self::var(vars, vars.require(name)?))
    }

    pub fn monomial(vars: &Arc<VarTable>, mono: Monomial, coeff: Rational) -> Self {
        assert_eq!(mono.len(), vars.len(), "monomial length mismatch");
        let mut p = Self::zero(vars);
        if !coeff.is_zero() {
            p.terms.push(Term { mono, coeff });
        }
        p
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(vars: &Arc<VarTable>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "monomial length mismatch");
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, coeff)| Term { mono, coeff })
            .collect();
        terms.sort_by(|a, b| b.mono.grevlex_cmp(&a.mono));
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Wraps terms that are already sorted (descending degrevlex), merged and nonzero.
    pub(crate) fn from_sorted_terms(vars: &Arc<VarTable>, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].mono.grevlex_cmp(&w[1].mono).is_gt()));
        debug_assert!(terms.iter().all(|t| !t.coeff.is_zero()));
        MultiPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].mono.is_one() && self.terms[0].coeff.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].mono.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [t] if t.mono.is_one() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.mono.degree())
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|t| t.mono.exp(v)).max().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.iter().any(|t| t.mono.exp(v) > 0)
    }

    /// Indices of the variables that actually occur.
    pub fn effective_vars(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&v| self.involves(v)).collect()
    }

    /// Leading term under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<&Term> {
        match order {
            MonomialOrder::DegRevLex => self.terms.first(),
            _ => self
                .terms
                .iter()
                .max_by(|a, b| order.compare(&a.mono, &b.mono)),
        }
    }

    pub fn leading_coeff(&self, order: &MonomialOrder) -> Option<&Rational> {
        self.leading_term(order).map(|t| &t.coeff)
    }

    fn check_table(&self, other: &MultiPoly) -> Result<()> {
        if same_table(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::structural(format!(
                "variable tables differ: {:?} vs {:?}",
                self.vars.names(),
                other.vars.names()
            )))
        }
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_table(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_table(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_table(other)?;
        Ok(self.mul_impl(other))
    }

    fn merge(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].mono.grevlex_cmp(&b[j].mono) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -b[j].coeff.clone() } else { b[j].coeff.clone() };
                    out.push(Term {
                        mono: b[j].mono.clone(),
                        coeff: c,
                    });
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        &a[i].coeff - &b[j].coeff
                    } else {
                        &a[i].coeff + &b[j].coeff
                    };
                    if !c.is_zero() {
                        out.push(Term {
                            mono: a[i].mono.clone(),
                            coeff: c,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -t.coeff.clone() } else { t.coeff.clone() };
            out.push(Term {
                mono: t.mono.clone(),
                coeff: c,
            });
        }
        MultiPoly::from_sorted_terms(&self.vars, out)
    }

    fn mul_impl(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].mono, &other.terms[0].coeff);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].mono, &self.terms[0].coeff);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let m = a.mono.mul(&b.mono);
                let c = &a.coeff * &b.coeff;
                match acc.get_mut(&m) {
                    Some(e) => *e += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, coeff)| Term { mono, coeff })
            .collect();
        terms.sort_by(|a, b| b.mono.grevlex_cmp(&a.mono));
        MultiPoly::from_sorted_terms(&self.vars, terms)
    }

    /// Multiplies by `coeff * mono`; order is preserved since degrevlex is a
    /// monomial order.
    pub fn mul_term(&self, mono: &Monomial, coeff: &Rational) -> MultiPoly {
        if coeff.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                mono: t.mono.mul(mono),
                coeff: &t.coeff * coeff,
            })
            .collect();
        MultiPoly::from_sorted_terms(&self.vars, terms)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                mono: t.mono.clone(),
                coeff: &t.coeff * c,
            })
            .collect();
        MultiPoly::from_sorted_terms(&self.vars, terms)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn partial_derivative(&self, v: usize) -> MultiPoly {
        let mut terms = Vec::new();
        for t in &self.terms {
            let e = t.mono.exp(v);
            if e == 0 {
                continue;
            }
            let mut m = t.mono.clone();
            m.set_exp(v, e - 1);
            terms.push((m, &t.coeff * rat(e as i64)));
        }
        MultiPoly::from_terms(&self.vars, terms)
    }

    pub fn derivative_named(&self, name: &str) -> Result<MultiPoly> {
        Ok(self.partial_derivative(self.vars.require(name)?))
    }

    /// Simultaneous substitution `v -> bindings[v]`.
    ///
    /// The result lives in `target`; variables without a binding are carried
    /// over by name and must exist in `target`.
    pub fn substitute(
        &self,
        bindings: &HashMap<usize, MultiPoly>,
        target: &Arc<VarTable>,
    ) -> Result<MultiPoly> {
        for b in bindings.values() {
            if !same_table(b.vars(), target) {
                return Err(Error::structural("binding lives outside the target table"));
            }
        }
        let n = self.vars.len();
        let mut carry = vec![None; n];
        for v in 0..n {
            if !bindings.contains_key(&v) && self.involves(v) {
                carry[v] = Some(target.require(self.vars.name(v))?);
            }
        }
        let mut powers: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut acc = MultiPoly::zero(target);
        for t in &self.terms {
            let mut e = vec![0u32; target.len()];
            let mut prod = MultiPoly::constant(target, t.coeff.clone());
            for v in 0..n {
                let k = t.mono.exp(v);
                if k == 0 {
                    continue;
                }
                if let Some(b) = bindings.get(&v) {
                    let p = powers
                        .entry((v, k))
                        .or_insert_with(|| b.pow(k))
                        .clone();
                    prod = &prod * &p;
                } else {
                    e[carry[v].unwrap()] += k;
                }
            }
            let prod = prod.mul_term(&Monomial::new(e), &Rational::one());
            acc = &acc + &prod;
        }
        Ok(acc)
    }

    /// Moves the polynomial into another table, matching variables by name.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<MultiPoly> {
        if same_table(&self.vars, target) {
            return Ok(self.clone());
        }
        let mut map = vec![usize::MAX; self.vars.len()];
        for v in self.effective_vars() {
            map[v] = target.require(self.vars.name(v))?;
        }
        let terms = self.terms.iter().map(|t| {
            let mut e = vec![0u32; target.len()];
            for v in 0..self.vars.len() {
                let k = t.mono.exp(v);
                if k > 0 {
                    e[map[v]] += k;
                }
            }
            (Monomial::new(e), t.coeff.clone())
        });
        Ok(MultiPoly::from_terms(target, terms))
    }

    /// Substitutes a rational value for variable `v`.
    pub fn eval_var(&self, v: usize, value: &Rational) -> MultiPoly {
        let mut pows: Vec<Rational> = vec![Rational::one()];
        let terms = self.terms.iter().map(|t| {
            let k = t.mono.exp(v) as usize;
            while pows.len() <= k {
                let next = pows.last().unwrap() * value;
                pows.push(next);
            }
            let mut m = t.mono.clone();
            m.set_exp(v, 0);
            (m, &t.coeff * &pows[k])
        });
        MultiPoly::from_terms(&self.vars, terms)
    }

    /// Evaluates at a full point.
    pub fn eval_all(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut s = Rational::zero();
        for t in &self.terms {
            let mut c = t.coeff.clone();
            for (v, x) in point.iter().enumerate() {
                let k = t.mono.exp(v);
                if k > 0 {
                    c *= num_traits::pow(x.clone(), k as usize);
                }
            }
            s += c;
        }
        s
    }

    /// Views the polynomial as univariate in `v`: entry `i` is the
    /// coefficient of `v^i` (a polynomial free of `v`).
    pub fn coefficients_in(&self, v: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<Term>> = vec![Vec::new(); d + 1];
        for t in &self.terms {
            let k = t.mono.exp(v) as usize;
            let mut m = t.mono.clone();
            m.set_exp(v, 0);
            buckets[k].push(Term {
                mono: m,
                coeff: t.coeff.clone(),
            });
        }
        buckets
            .into_iter()
            .map(|mut ts| {
                // stripping one variable's exponent can break degrevlex order
                ts.sort_by(|a, b| b.mono.grevlex_cmp(&a.mono));
                MultiPoly::from_sorted_terms(&self.vars, ts)
            })
            .collect()
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(vars: &Arc<VarTable>, v: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut acc = MultiPoly::zero(vars);
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = vec![0u32; vars.len()];
            e[v] = i as u32;
            acc = &acc + &c.mul_term(&Monomial::new(e), &Rational::one());
        }
        acc
    }

    /// gcd of the numerators divided by lcm of the denominators, made
    /// positive; zero for the zero polynomial.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for t in &self.terms {
            num = num.gcd(t.coeff.numer());
            den = den.lcm(t.coeff.denom());
        }
        if num.is_zero() {
            Rational::zero()
        } else {
            Rational::new(num, den)
        }
    }

    /// Canonical representative: integer coefficients with unit content and
    /// a positive leading coefficient under `order`.
    pub fn canonical_with(&self, order: &MonomialOrder) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_coeff(order).unwrap().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    pub fn canonical(&self) -> MultiPoly {
        self.canonical_with(&MonomialOrder::DegRevLex)
    }

    /// Scales so that the leading coefficient under `order` is one.
    pub fn monic_with(&self, order: &MonomialOrder) -> MultiPoly {
        match self.leading_coeff(order) {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// True when `self = c * other` for a nonzero rational `c`.
    pub fn associate_of(&self, other: &MultiPoly) -> bool {
        same_table(&self.vars, &other.vars) && self.canonical() == other.canonical()
    }

    /// Multivariate division by a single divisor under degrevlex; returns
    /// `Some(q)` when the division is exact.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        let lt = &d.terms[0];
        let inv = lt.coeff.recip();
        let mut r = self.clone();
        let mut q_terms = Vec::new();
        while let Some(top) = r.terms.first() {
            let qm = top.mono.div(&lt.mono)?;
            let qc = &top.coeff * &inv;
            let sub = d.mul_term(&qm, &qc);
            q_terms.push(Term { mono: qm, coeff: qc });
            r = &r - &sub;
        }
        // quotient terms were produced in strictly decreasing order
        Some(MultiPoly::from_sorted_terms(&self.vars, q_terms))
    }

    /// True when `d` divides `self` exactly.
    pub fn divisible_by(&self, d: &MultiPoly) -> bool {
        self.div_exact(d).is_some()
    }

    /// Formats the polynomial with terms sorted under `order`.
    pub fn display_with(&self, order: &MonomialOrder) -> String {
        parse::format_poly(self, order)
    }

    pub fn parse(text: &str, vars: &Arc<VarTable>) -> Result<MultiPoly> {
        parse::parse_polynomial(text, vars)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::format_poly(self, &MonomialOrder::DegRevLex))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl<'a> $tr<&'a MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                self.$imp(rhs).expect("polynomial operands share a variable table")
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$imp(&rhs).expect("polynomial operands share a variable table")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                mono: t.mono.clone(),
                coeff: -t.coeff.clone(),
            })
            .collect();
        MultiPoly::from_sorted_terms(&self.vars, terms)
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// Arithmetic operation selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Pow(u32),
}

/// Checked arithmetic entry point; `Pow` ignores `q`.
pub fn poly_arith(p: &MultiPoly, q: &MultiPoly, op: ArithOp) -> Result<MultiPoly> {
    match op {
        ArithOp::Add => p.checked_add(q),
        ArithOp::Sub => p.checked_sub(q),
        ArithOp::Mul => p.checked_mul(q),
        ArithOp::Pow(e) => Ok(p.pow(e)),
    }
}

/// Multivariate division of `p` by `divisors` under `order`. Returns the
/// remainder: no term of it is divisible by any divisor's leading monomial.
pub fn normal_form(p: &MultiPoly, divisors: &[MultiPoly], order: &MonomialOrder) -> Result<MultiPoly> {
    for d in divisors {
        p.check_table(d)?;
        if d.is_zero() {
            return Err(Error::precondition("normal form against a zero divisor"));
        }
    }
    let leads: Vec<(Monomial, Rational)> = divisors
        .iter()
        .map(|d| {
            let t = d.leading_term(order).unwrap();
            (t.mono.clone(), t.coeff.clone())
        })
        .collect();
    let mut rest = p.clone();
    let mut rem: Vec<(Monomial, Rational)> = Vec::new();
    while let Some(top) = rest.leading_term(order).cloned() {
        let hit = leads
            .iter()
            .enumerate()
            .find_map(|(i, (m, c))| top.mono.div(m).map(|q| (i, q, c)));
        match hit {
            Some((i, q, c)) => {
                let factor = &top.coeff / c;
                rest = &rest - &divisors[i].mul_term(&q, &factor);
            }
            None => {
                rest = &rest - &MultiPoly::monomial(&p.vars, top.mono.clone(), top.coeff.clone());
                rem.push((top.mono, top.coeff));
            }
        }
    }
    Ok(MultiPoly::from_terms(&p.vars, rem))
}
