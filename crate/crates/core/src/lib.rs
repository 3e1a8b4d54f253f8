//! Exact elimination engine for discrete differential equations with one
//! catalytic variable.
//!
//! The crate is layered: [`poly`] provides exact multivariate arithmetic,
//! [`series`] truncated power series in `t` with polynomial coefficients in
//! `u`, [`ideal`] Gröbner bases and elimination, [`dde`] the input model and
//! its polynomial systems, [`strategies`] the two resolution strategies, and
//! [`guess`] a series-based oracle.

pub mod dde;
pub mod error;
pub mod ideal;
pub mod poly;
pub mod series;

pub use error::{Error, Result};
pub mod guess;
pub mod strategies;

pub(crate) fn serialize_poly<S: serde::Serializer>(p: &poly::MultiPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

pub(crate) fn serialize_opt_poly<S: serde::Serializer>(
    p: &Option<poly::MultiPoly>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_some(&p.to_string()),
        None => s.serialize_none(),
    }
}

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
