use std::collections::HashMap;

use catalytic::dde::{build_det_and_p, clear_denominators, parse_dde};
use catalytic::poly::{rat, ratio, MultiPoly, Rational, UPoly, VarTable};
use catalytic::series::*;
use num_bigint::BigInt;

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

#[test]
fn two_constellations_counts() {
    let sys = parse_dde(&fixture("2const.dde")).unwrap();
    let exp = fixed_point_expand(&sys, 16).unwrap();
    let g = exp.specializations.z(0);
    assert_eq!(g.truncate(4).to_string(), "1 + t + 3*t^2 + 12*t^3 + O(t^4)");
    for n in 1..16u64 {
        // 3 * 2^(n-1) / ((n+2)(n+1)) * C(2n, n)
        let num = BigInt::from(3) * BigInt::from(2).pow(n as u32 - 1) * binomial(2 * n, n);
        let expected = Rational::new(num, BigInt::from((n + 2) * (n + 1)));
        assert_eq!(g.coeff(n as usize), &expected, "n = {n}");
    }
}

#[test]
fn two_unknown_system_prefix() {
    let sys = parse_dde(&fixture("orientations.dde")).unwrap();
    let exp = fixed_point_expand(&sys, 4).unwrap();
    assert_eq!(exp.specializations.z(0).to_string(), "1 + 2*t + 10*t^2 + 66*t^3 + O(t^4)");
    let f2 = exp.specializations.z(1);
    assert!(f2.coeff(0) == &rat(0) && f2.coeff(1) != &rat(0));
}

#[test]
fn constant_system_is_exact() {
    let sys = parse_dde(&fixture("const.dde")).unwrap();
    let exp = fixed_point_expand(&sys, 9).unwrap();
    assert_eq!(exp.solutions[0], USeries::from_upoly(&UPoly::x(), 9));
}

#[test]
fn online_expansion_matches_plain_iteration() {
    for name in ["2const.dde", "orientations.dde"] {
        let sys = parse_dde(&fixture(name)).unwrap();
        let a = fixed_point_expand(&sys, 7).unwrap();
        let b = picard_expand(&sys, 7).unwrap();
        assert_eq!(a.solutions, b, "{name}");
    }
    let k2 = parse_dde("catalytic u at 1/2\nF1 = 1 + t*(u*F1^2 + D2[F1] - 3*D[F1])\n").unwrap();
    assert_eq!(fixed_point_expand(&k2, 6).unwrap().solutions, picard_expand(&k2, 6).unwrap());
}

#[test]
fn numerators_vanish_for_every_truncation() {
    let sys = parse_dde(&fixture("orientations.dde")).unwrap();
    let ns = build_det_and_p(&clear_denominators(&sys).unwrap()).unwrap();
    for order in [1, 3, 8, 15] {
        let exp = fixed_point_expand(&sys, order).unwrap();
        let mut b = HashMap::new();
        for i in 0..2 {
            b.insert(ns.x_index(i), Binding::U(exp.solutions[i].clone()));
            b.insert(ns.z_index(i), Binding::T(exp.specializations.z(i).clone()));
        }
        for e in &ns.e {
            assert!(eval_poly_at_series(e, &b, order).unwrap().is_zero());
        }
    }
}

#[test]
fn delta_examples() {
    let u2 = USeries::from_upoly(&UPoly::from_ints(&[0, 0, 1]), 3);
    assert_eq!(delta_a(&u2, &rat(1)), USeries::from_upoly(&UPoly::from_ints(&[1, 1]), 3));
    let c = USeries::from_upoly(&UPoly::from_ints(&[5]), 3);
    assert!(delta_a(&c, &ratio(2, 3)).is_zero());
    let twice = delta_a(&delta_a(&u2, &rat(0)), &rat(0));
    assert_eq!(twice, USeries::from_upoly(&UPoly::one(), 3));
}

#[test]
fn specialize_examples() {
    let u2 = USeries::from_upoly(&UPoly::from_ints(&[0, 0, 1]), 3);
    assert_eq!(specialize(&u2, &rat(1), 0), TSeries::from_ints(&[1], 3));
    assert!(specialize(&u2, &rat(0), 1).is_zero());
}

#[test]
fn eval_examples() {
    let v = VarTable::new(&["z0", "t"]).unwrap();
    let c = MultiPoly::from_int(&v, 7);
    let r = eval_poly_at_series(&c, &HashMap::new(), 4).unwrap();
    assert_eq!(r, USeries::from_upoly(&UPoly::from_ints(&[7]), 4));
    let z = MultiPoly::var(&v, 0);
    let s = TSeries::from_ints(&[1, 1, 3, 12], 4);
    let mut b = HashMap::new();
    b.insert(0, Binding::T(s.clone()));
    assert_eq!(eval_poly_at_series(&z, &b, 4).unwrap(), USeries::from_tseries(&s));
    assert!(matches!(
        eval_poly_at_series(&z, &HashMap::new(), 4),
        Err(catalytic::Error::Structural(_))
    ));
}

#[test]
fn series_printing() {
    let s = TSeries::from_ints(&[1, 2, 10], 3);
    assert_eq!(s.to_string(), "1 + 2*t + 10*t^2 + O(t^3)");
}

fn det_coefficients(name: &str, order: usize) -> Vec<TSeries> {
    let sys = parse_dde(&fixture(name)).unwrap().shift_catalytic_point().unwrap();
    let ns = build_det_and_p(&clear_denominators(&sys).unwrap()).unwrap();
    let exp = fixed_point_expand(&sys, order).unwrap();
    let mut b = HashMap::new();
    for i in 0..sys.n {
        b.insert(ns.x_index(i), Binding::U(exp.solutions[i].clone()));
    }
    for j in 0..sys.n * sys.k {
        b.insert(ns.z_index(j), Binding::T(exp.specializations.z(j).clone()));
    }
    eval_poly_at_series(ns.det.as_ref().unwrap(), &b, order)
        .unwrap()
        .u_coefficients()
}

#[test]
fn det_roots_of_two_unknown_system() {
    let d = newton_root_count(&det_coefficients("orientations.dde", 10), 4).unwrap();
    assert_eq!(d.root_count, 2);
    assert_eq!(d.distinctness, Distinctness::Confirmed);
}

#[test]
fn det_root_of_two_constellations() {
    let d = newton_root_count(&det_coefficients("2const.dde", 10), 4).unwrap();
    assert_eq!(d.root_count, 1);
    assert_eq!(d.distinctness, Distinctness::Confirmed);
}

#[test]
fn newton_on_simple_block() {
    // -u^k + t, one segment of slope 1/k
    for k in 1..4 {
        let mut d = vec![TSeries::from_ints(&[0, 1], 5)];
        d.extend((1..k).map(|_| TSeries::zero(5)));
        d.push(TSeries::from_ints(&[-1], 5));
        let r = newton_root_count(&d, 5).unwrap();
        assert_eq!(r.root_count, k);
        assert_eq!(r.distinctness, Distinctness::Confirmed);
    }
    let zero = vec![TSeries::zero(5), TSeries::zero(5)];
    assert!(matches!(newton_root_count(&zero, 5), Err(catalytic::Error::Precision(_))));
}
