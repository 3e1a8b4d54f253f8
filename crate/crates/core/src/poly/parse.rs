//! Text format for polynomials and a small expression parser shared with
//! the DDE input language.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{MonomialOrder, MultiPoly, Rational, VarTable};
use crate::error::{Error, Result};

/// Leaf of an expression: a bare identifier, `head[arg]`, or `name(expr)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    Ident(String),
    Indexed { head: String, arg: String },
    Call { name: String, arg: Box<Expr> },
}

/// Source position (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational, Pos),
    Atom(Atom, Pos),
    Neg(Box<Expr>, Pos),
    Add(Box<Expr>, Box<Expr>, Pos),
    Sub(Box<Expr>, Box<Expr>, Pos),
    Mul(Box<Expr>, Box<Expr>, Pos),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, u32, Pos),
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Num(_, p)
            | Expr::Atom(_, p)
            | Expr::Neg(_, p)
            | Expr::Add(_, _, p)
            | Expr::Sub(_, _, p)
            | Expr::Mul(_, _, p)
            | Expr::Div(_, _, p)
            | Expr::Pow(_, _, p) => *p,
        }
    }

    /// Top-level summands with their signs (`true` = negated).
    pub fn summands(&self) -> Vec<(bool, &Expr)> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a Expr, neg: bool, out: &mut Vec<(bool, &'a Expr)>) {
            match e {
                Expr::Add(a, b, _) => {
                    walk(a, neg, out);
                    walk(b, neg, out);
                }
                Expr::Sub(a, b, _) => {
                    walk(a, neg, out);
                    walk(b, !neg, out);
                }
                Expr::Neg(a, _) => walk(a, !neg, out),
                _ => out.push((neg, e)),
            }
        }
        walk(self, false, &mut out);
        out
    }

    /// Expands to a polynomial, resolving atoms through `resolver`.
    pub fn eval(&self, vars: &Arc<VarTable>, resolver: &mut dyn AtomResolver) -> Result<MultiPoly> {
        Ok(match self {
            Expr::Num(r, _) => MultiPoly::constant(vars, r.clone()),
            Expr::Atom(a, p) => resolver.resolve(a, *p, vars)?,
            Expr::Neg(a, _) => -a.eval(vars, resolver)?,
            Expr::Add(a, b, _) => a.eval(vars, resolver)? + b.eval(vars, resolver)?,
            Expr::Sub(a, b, _) => a.eval(vars, resolver)? - b.eval(vars, resolver)?,
            Expr::Mul(a, b, _) => a.eval(vars, resolver)? * b.eval(vars, resolver)?,
            Expr::Div(a, b, p) => {
                let d = b.eval(vars, resolver)?;
                match d.constant_value() {
                    Some(c) if !c.is_zero() => a.eval(vars, resolver)?.scale(&c.recip()),
                    _ => {
                        return Err(Error::Semantic {
                            line: p.line,
                            column: p.column,
                            message: "division is only allowed by a nonzero constant".into(),
                        })
                    }
                }
            }
            Expr::Pow(a, e, _) => a.eval(vars, resolver)?.pow(*e),
        })
    }
}

/// Maps parsed atoms to polynomials.
pub trait AtomResolver {
    fn resolve(&mut self, atom: &Atom, pos: Pos, vars: &Arc<VarTable>) -> Result<MultiPoly>;
}

/// Resolves bare identifiers against the table; rejects everything else.
struct TableResolver;

impl AtomResolver for TableResolver {
    fn resolve(&mut self, atom: &Atom, pos: Pos, vars: &Arc<VarTable>) -> Result<MultiPoly> {
        match atom {
            Atom::Ident(name) => match vars.index(name) {
                Some(i) => Ok(MultiPoly::var(vars, i)),
                None => Err(Error::Semantic {
                    line: pos.line,
                    column: pos.column,
                    message: format!("unknown variable `{name}`"),
                }),
            },
            _ => Err(Error::Semantic {
                line: pos.line,
                column: pos.column,
                message: "unexpected indexed or call expression".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    End,
}

struct Lexer {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

impl Lexer {
    fn new(text: &str, line: usize, col0: usize) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line,
                column: col0 + i,
            };
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(s.parse().unwrap()), pos));
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                continue;
            }
            let t = match c {
                '+' => Tok::Plus,
                '-' | '\u{2212}' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                _ => return Err(syntax(pos, format!("unexpected character `{c}`"))),
            };
            toks.push((t, pos));
            i += 1;
        }
        toks.push((
            Tok::End,
            Pos {
                line,
                column: col0 + chars.len(),
            },
        ));
        Ok(Lexer { toks, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    // sum := term (('+'|'-') term)*
    fn sum(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let mut lhs = if *self.peek() == Tok::Minus {
            self.next();
            let t = self.term()?;
            Expr::Neg(Box::new(t), pos)
        } else {
            if *self.peek() == Tok::Plus {
                self.next();
            }
            self.term()?
        };
        loop {
            let p = self.pos();
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    let r = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(r), p);
                }
                Tok::Minus => {
                    self.next();
                    let r = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(r), p);
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := power (('*'|'/') power)*
    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            let p = self.pos();
            match self.peek() {
                Tok::Star => {
                    self.next();
                    let r = self.power()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(r), p);
                }
                Tok::Slash => {
                    self.next();
                    let r = self.power()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(r), p);
                }
                _ => return Ok(lhs),
            }
        }
    }

    // power := unary ('^' int)?
    fn power(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        if *self.peek() == Tok::Caret {
            let p = self.pos();
            self.next();
            match self.next() {
                (Tok::Int(n), _) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| syntax(p, "exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e, p))
                }
                (_, q) => Err(syntax(q, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek() {
            Tok::Minus => {
                self.next();
                let e = self.power()?;
                Ok(Expr::Neg(Box::new(e), pos))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let (tok, pos) = self.next();
        match tok {
            Tok::Int(n) => Ok(Expr::Num(Rational::from_integer(n), pos)),
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match self.peek() {
                Tok::LBracket => {
                    self.next();
                    let arg = match self.next() {
                        (Tok::Ident(a), _) => a,
                        (_, q) => return Err(syntax(q, "expected an identifier inside `[...]`")),
                    };
                    self.expect(Tok::RBracket, "`]`")?;
                    Ok(Expr::Atom(Atom::Indexed { head: name, arg }, pos))
                }
                Tok::LParen => {
                    self.next();
                    let arg = self.sum()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Atom(
                        Atom::Call {
                            name,
                            arg: Box::new(arg),
                        },
                        pos,
                    ))
                }
                _ => Ok(Expr::Atom(Atom::Ident(name), pos)),
            },
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            other => Err(syntax(pos, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses one expression into an AST; `column0` is the 1-based column of
/// the first character of `text`.
pub fn parse_expression(text: &str, line: usize, column0: usize) -> Result<Expr> {
    let mut lx = Lexer::new(text, line, column0)?;
    let e = lx.sum()?;
    if *lx.peek() != Tok::End {
        return Err(syntax(lx.pos(), "trailing input"));
    }
    Ok(e)
}

pub(crate) fn parse_polynomial(text: &str, vars: &Arc<VarTable>) -> Result<MultiPoly> {
    parse_expression(text, 1, 1)?.eval(vars, &mut TableResolver)
}

fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn format_poly(p: &MultiPoly, order: &MonomialOrder) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<_> = p.terms().iter().collect();
    if *order != MonomialOrder::DegRevLex {
        terms.sort_by(|a, b| order.compare(&b.mono, &a.mono));
    }
    let names = p.vars().names();
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let neg = t.coeff.is_negative();
        let abs = t.coeff.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for (v, &e) in t.mono.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[v].clone()),
                _ => factors.push(format!("{}^{}", names[v], e)),
            }
        }
        if factors.is_empty() {
            out.push_str(&format_rational(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&format_rational(&abs));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}
