use num_bigint::BigInt;
use num_traits::{One, Zero};

use catalytic::dde::parse_dde;
use catalytic::guess::*;
use catalytic::poly::{rat, MultiPoly, Rational};
use catalytic::series::{fixed_point_expand, TSeries};
use catalytic::Error;

const CUBIC: &str = "64*t^3*z0^3 + (48*t^3 - 72*t^2 + 2*t)*z0^2 - (15*t^3 - 9*t^2 - 19*t + 1)*z0 + t^3 + 27*t^2 - 19*t + 1";

fn orientations_series(order: usize) -> TSeries {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/orientations.dde")).unwrap();
    let sys = parse_dde(&text).unwrap();
    fixed_point_expand(&sys, order).unwrap().specializations.z(0).clone()
}

fn gpoly(s: &str) -> MultiPoly {
    MultiPoly::parse(s, &guess_table()).unwrap()
}

fn catalan(order: usize) -> TSeries {
    // C_n = binom(2n, n) / (n + 1)
    let mut c = Vec::new();
    let mut b = BigInt::one();
    for n in 0..order as u64 {
        if n > 0 {
            b = b * BigInt::from(2 * n) * BigInt::from(2 * n - 1) / BigInt::from(n * n);
        }
        c.push(Rational::from_integer(&b / BigInt::from(n + 1)));
    }
    TSeries::new(c, order)
}

#[test]
fn orientations_cubic_is_guessed_exactly() {
    let spec = GuessSpec::new(orientations_series(60), 3, 3);
    let r = guess_annihilator(&spec).unwrap().unwrap();
    assert!(r.associate_of(&gpoly(CUBIC)), "{r}");
}

#[test]
fn geometric_series() {
    let s = TSeries::new(vec![rat(1); 20], 20);
    let r = guess_annihilator(&GuessSpec::new(s, 1, 1)).unwrap().unwrap();
    assert!(r.associate_of(&gpoly("(1 - t)*z0 - 1")), "{r}");
}

#[test]
fn catalan_series() {
    let s = catalan(40);
    let r = guess_annihilator(&GuessSpec::new(s.clone(), 1, 2)).unwrap().unwrap();
    assert!(r.associate_of(&gpoly("t*z0^2 - z0 + 1")), "{r}");
    // t*C^2 - C + 1 by plain convolution
    for n in 0..30 {
        let mut v = if n == 0 { Rational::one() } else { Rational::zero() };
        v -= s.coeff(n);
        if n >= 1 {
            for i in 0..n {
                v += s.coeff(i) * s.coeff(n - 1 - i);
            }
        }
        assert!(v.is_zero(), "order {n}");
    }
}

#[test]
fn catalan_needs_degree_two() {
    let r = guess_annihilator(&GuessSpec::new(catalan(40), 3, 1)).unwrap();
    assert!(r.is_none());
}

#[test]
fn order_and_margin_preconditions() {
    let spec = GuessSpec::new(catalan(20), 3, 3);
    assert_eq!(spec.required_order(), 26);
    assert!(matches!(guess_annihilator(&spec), Err(Error::Precondition(_))));
    let mut spec = GuessSpec::new(catalan(40), 1, 2);
    spec.margin = 9;
    assert!(matches!(guess_annihilator(&spec), Err(Error::Precondition(_))));
}

#[test]
fn verification_of_cubic_and_negative_control() {
    let s = orientations_series(40);
    let ok = verify_annihilator(&gpoly(CUBIC), &s, 40).unwrap();
    assert!(ok.holds);
    assert_eq!(ok.first_failure, None);
    let bad = verify_annihilator(&gpoly("z0 - 1"), &s, 40).unwrap();
    assert!(!bad.holds);
    assert_eq!(bad.first_failure, Some(1));
    assert!(verify_annihilator(&MultiPoly::zero(&guess_table()), &s, 10).is_err());
    assert!(matches!(verify_annihilator(&gpoly(CUBIC), &s, 41), Err(Error::Precision(_))));
}

#[test]
fn guessing_is_stable_under_longer_series() {
    let a = guess_annihilator(&GuessSpec::new(orientations_series(30), 3, 3)).unwrap().unwrap();
    let b = guess_annihilator(&GuessSpec::new(orientations_series(60), 3, 3)).unwrap().unwrap();
    assert!(a.associate_of(&b));
}

#[test]
fn minimal_factor_of_a_product() {
    let s = orientations_series(40);
    let r = &gpoly(CUBIC) * &gpoly("t*z0^2 + 3*z0 - t + 2");
    let m = minimal_annihilator(&r, &s).unwrap();
    assert!(m.minimal);
    assert!(m.poly.associate_of(&gpoly(CUBIC)));
    let q = m.quotient.unwrap();
    assert_eq!(&m.poly * &q, r);
    assert!(verify_annihilator(&m.poly, &s, 40).unwrap().holds);
}

#[test]
fn minimal_factor_of_a_polynomial_solution() {
    let s = TSeries::from_ints(&[1, 1], 30);
    let r = &gpoly("z0 - 1 - t") * &gpoly("z0 + 3");
    let m = minimal_annihilator(&r, &s).unwrap();
    assert!(m.poly.associate_of(&gpoly("z0 - 1 - t")), "{}", m.poly);
    assert!(minimal_annihilator(&gpoly("z0 + 3"), &s).is_err());
}

#[test]
fn provenance_labels() {
    assert_eq!(provenance(60, Some(&BigInt::from(6))), Provenance::Certified);
    assert_eq!(provenance(49, Some(&BigInt::from(6))), Provenance::Conjectural);
    assert_eq!(provenance(60, None), Provenance::Conjectural);
}
