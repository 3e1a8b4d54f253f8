use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use catalytic::dde::{parse_dde, DdeSystem, NumeratorSystem};
use catalytic::guess::guess_table;
use catalytic::ideal::Budget;
use catalytic::poly::MultiPoly;
use catalytic::series::{eval_poly_at_series, fixed_point_expand, Binding};
use catalytic::strategies::*;

fn fixture(name: &str) -> DdeSystem {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_dde(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn gpoly(s: &str) -> MultiPoly {
    MultiPoly::parse(s, &guess_table()).unwrap()
}

fn quick() -> SolveOptions {
    SolveOptions {
        budget: Budget::seconds(300.0),
        symbolic_seconds: 5.0,
        ..SolveOptions::default()
    }
}

/// `p` with every `x_i`, `z_j` replaced by the series solution, mod `t^order`.
fn vanishes_on_solution(sys: &DdeSystem, ns: &NumeratorSystem, p: &MultiPoly, order: usize) -> bool {
    let exp = fixed_point_expand(sys, order).unwrap();
    let mut b = HashMap::new();
    for i in 0..sys.n {
        b.insert(ns.x_index(i), Binding::U(exp.solutions[i].clone()));
    }
    for j in 0..sys.n * sys.k {
        b.insert(ns.z_index(j), Binding::T(exp.specializations.z(j).clone()));
    }
    eval_poly_at_series(p, &b, order).unwrap().is_zero()
}

fn big_pow(b: u64, e: u64) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

fn big_fact(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

#[test]
fn pinned_bounds() {
    let b = all_bounds(1, 1, 1);
    assert_eq!((b.full.clone(), b.duplication.clone()), (BigInt::from(16), BigInt::from(27)));
    assert_eq!(degree_bound_duplication(1, 1, 3), BigInt::from(343));
    assert_eq!(degree_bound_duplication(2, 1, 3), BigInt::from(46118408));
}

#[test]
fn bounds_match_repeated_multiplication_on_a_grid() {
    for n in 1..=3u64 {
        for k in 1..=3u64 {
            let mut prev: Option<Bounds> = None;
            for d in 1..=5u64 {
                let nk = n * k;
                let e = n * n * k * k * (n + 2) + n;
                let full = big_pow(n, 2 * n * n * k * k) * big_pow(k + 1, e) * big_pow(d, e) / big_pow_big(big_fact(nk), nk);
                let spec = big_pow(n, nk) * big_pow(d * (k + 1), nk * (n + 2)) / big_fact(nk);
                let dup = big_pow(n, 2 * nk) * big_pow(d * (k + 1) + 1, nk * (n + 2)) / big_fact(nk);
                let b = all_bounds(n, k, d);
                assert_eq!((&b.full, &b.specialized, &b.duplication), (&full, &spec, &dup), "({n},{k},{d})");
                if let Some(p) = prev {
                    assert!(b.full >= p.full && b.specialized >= p.specialized && b.duplication >= p.duplication);
                }
                prev = Some(b);
            }
        }
    }
}

fn big_pow_big(b: BigInt, e: u64) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= &b;
    }
    acc
}

#[test]
fn two_constellations_by_duplication() {
    let sys = fixture("2const.dde");
    let r = solve_by_duplication(&sys, &quick()).unwrap();
    assert_eq!(r.verified_to_order, VERIFY_ORDER);
    let m = r.minimal_factor.unwrap();
    assert!(m.minimal);
    let expected = gpoly("16*t^3*z0^2 - (8*t^2 + 12*t - 1)*t*z0 + t*(t^2 + 11*t - 1)");
    let content = expected.div_exact(&m.poly).expect("equal up to content");
    assert!(!content.involves(1), "{content}");
    assert_eq!(r.diagnostics.h1_root_count.state, TriState::Confirmed);
}

#[test]
fn two_constellations_by_reduction_and_guessing() {
    let sys = fixture("2const.dde");
    let a = solve_by_reduction(&sys, &quick()).unwrap();
    let b = solve_by_guessing(&sys, 60, &quick()).unwrap();
    let ma = a.minimal_factor.unwrap().poly;
    let mb = b.minimal_factor.unwrap().poly;
    assert!(ma.associate_of(&mb), "{ma} vs {mb}");
}

#[test]
fn degenerate_system_has_closed_form() {
    let sys = fixture("const.dde");
    let r = solve_by_duplication(&sys, &quick()).unwrap();
    assert_eq!(r.r, gpoly("z0"));
    assert_eq!(r.diagnostics.h1_root_count.state, TriState::Refuted);
}

#[test]
fn orientations_reduction_fails_on_root_count() {
    let sys = fixture("orientations.dde");
    match solve_by_reduction(&sys, &quick()) {
        Err(SolveError::Failed(f)) => {
            assert_eq!(f.kind, FailureKind::Hypothesis);
            assert_eq!(f.diagnostics.h2_root_count.state, TriState::Refuted);
            assert!(f.message.contains("1 Puiseux root(s)"), "{}", f.message);
            assert!(f.message.contains("nk = 2"), "{}", f.message);
        }
        other => panic!("expected a hypothesis failure, got {other:?}"),
    }
}

#[test]
fn orientations_reduction_generator_vanishes_on_the_solution() {
    let sys = fixture("orientations.dde");
    let (ns, red) = reduce_to_single_equation(&sys, &Budget::seconds(120.0)).unwrap();
    let Reduction::Principal(e) = red else { panic!("not principal") };
    assert!(vanishes_on_solution(&sys, &ns, &e, 12));
    assert!(!e.involves(ns.x_index(1)));
    // generator printed without the F2(t,1) term, which does not vanish
    let printed = MultiPoly::parse("-(x1-1)*(u-1)+t*u*(2*u*x1^2-u*z0-2*x1^2+u+x1-1)", &ns.vars).unwrap();
    assert!(!vanishes_on_solution(&sys, &ns, &printed, 12));
    let with_z1 = &printed + &MultiPoly::parse("2*t*u*(u-1)*z1", &ns.vars).unwrap();
    assert!(e.associate_of(&with_z1), "{e}");
}

#[test]
fn orientations_hypotheses() {
    let sys = fixture("orientations.dde");
    let h = check_hypotheses(&sys, &Budget::seconds(120.0)).unwrap();
    assert_eq!(h.required_roots, 2);
    assert_eq!(h.h1_root_count.state, TriState::Confirmed);
    assert_eq!(h.h1_zero_dimensional.state, TriState::Confirmed);
    assert_eq!(h.principal.state, TriState::Confirmed);
    assert_eq!(h.h2_root_count.state, TriState::Refuted);
}

#[test]
fn comparison_of_squarefree_parts() {
    let a = gpoly("(z0 - t)^2*(t*z0 + 1)");
    let b = gpoly("z0 - t");
    let c = compare_strategies(&a, &b).unwrap();
    assert_eq!(c.verdict, Verdict::Divides);
    assert!(c.quotient.unwrap().associate_of(&gpoly("t*z0 + 1")));
    let c = compare_strategies(&b, &a).unwrap();
    assert_eq!(c.verdict, Verdict::DoesNotDivide);
    assert!(c.quotient.is_none());
}

#[test]
fn auto_solves_two_constellations() {
    let sys = fixture("2const.dde");
    let r = solve_auto(&sys, &quick()).unwrap();
    assert_eq!(r.strategy, Strategy::Duplication);
}
