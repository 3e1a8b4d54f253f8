use std::collections::HashMap;

use catalytic::dde::*;
use catalytic::poly::{rat, MultiPoly, UPoly};
use catalytic::series::{eval_poly_at_series, fixed_point_expand, Binding};
use catalytic::Error;

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn poly(ns: &NumeratorSystem, s: &str) -> MultiPoly {
    MultiPoly::parse(s, &ns.vars).unwrap()
}

#[test]
fn parses_two_constellations() {
    let sys = parse_dde(&fixture("2const.dde")).unwrap();
    assert_eq!((sys.n, sys.k, sys.a.clone(), sys.delta), (1, 1, rat(1), 3));
    assert_eq!(sys.f[0], UPoly::one());
    assert_eq!(sys.q[0].to_string(), "F1^2*u + D[F1]*u");
}

#[test]
fn parses_two_unknown_system() {
    let sys = parse_dde(&fixture("orientations.dde")).unwrap();
    assert_eq!((sys.n, sys.k, sys.delta), (2, 1, 3));
    assert!(sys.f[1].is_zero());
}

#[test]
fn degenerate_system_without_q() {
    let sys = parse_dde(&fixture("const.dde")).unwrap();
    assert_eq!(sys.n, 1);
    assert!(sys.q[0].is_zero());
    let ns = clear_denominators(&sys).unwrap();
    assert_eq!(ns.m, vec![0]);
    assert_eq!(ns.e[0], poly(&ns, "u - x1"));
}

#[test]
fn dsl_round_trip() {
    for name in ["2const.dde", "orientations.dde", "const.dde"] {
        let sys = parse_dde(&fixture(name)).unwrap();
        let again = parse_dde(&sys.to_dsl()).unwrap();
        assert_eq!(sys, again, "{name}");
    }
}

#[test]
fn parse_errors_carry_positions() {
    let missing_t = "catalytic u at 1\nF1 = 1 + u*F1 + t*D[F1]\n";
    match parse_dde(missing_t) {
        Err(Error::Semantic { line, column, .. }) => assert_eq!((line, column), (2, 10)),
        other => panic!("{other:?}"),
    }
    let high_order = "catalytic u at 0\norder 1\nF1 = 1 + t*D2[F1]\n";
    match parse_dde(high_order) {
        Err(Error::Semantic { line, column, .. }) => assert_eq!((line, column), (3, 12)),
        other => panic!("{other:?}"),
    }
    let bad_token = "catalytic u at 0\nF1 = 1 + t*$\n";
    assert!(matches!(parse_dde(bad_token), Err(Error::Syntax { line: 2, .. })));
    let no_header = "F1 = 1 + t*F1\n";
    assert!(matches!(parse_dde(no_header), Err(Error::Syntax { line: 1, .. })));
    let wrong_point = "catalytic u at 1\nF1 = 1 + t*F1(0)\n";
    assert!(matches!(parse_dde(wrong_point), Err(Error::Semantic { line: 2, .. })));
    let undefined = "catalytic u at 1\nF1 = 1 + t*F2\n";
    assert!(matches!(parse_dde(undefined), Err(Error::Semantic { line: 2, .. })));
}

#[test]
fn order_defaults_to_largest_delta() {
    let sys = parse_dde("catalytic u at 0\nF1 = 1 + t*u*D2[F1]\n").unwrap();
    assert_eq!(sys.k, 2);
    let sys = parse_dde("catalytic u at 0\nF1 = 1 + t*F1^2\n").unwrap();
    assert_eq!(sys.k, 1);
}

#[test]
fn numerators_of_two_unknown_system() {
    let sys = parse_dde(&fixture("orientations.dde")).unwrap();
    let ns = build_det_and_p(&clear_denominators(&sys).unwrap()).unwrap();
    assert_eq!(ns.m, vec![1, 1]);
    let e1 = poly(&ns, "(1-x1)*(u-1)+t*(2*u^2*x1^2-u^2*z0+2*u^2*z1-2*u*x1^2+u^2+u*x1-2*u*z1-u)");
    let e2 = poly(&ns, "x2*(1-u)+t*(2*u^2*x1*x2+u^2*x1-2*u*x1*x2-u*x1+u*x2-u*z1)");
    assert_eq!(ns.e, vec![e1, e2]);
    let det = poly(&ns, "(4*t*u^2*x1-4*t*u*x1+t*u-u+1)*(2*t*u^2*x1-2*t*u*x1+t*u-u+1)");
    assert_eq!(ns.det.clone().unwrap(), det);
    let p0 = ns.p.clone().unwrap().coefficients_in(ns.u_index())[0].clone();
    assert_eq!(p0, poly(&ns, "-2*t*x1*x2 - t*x1 + t*x2 - t*z1 - x2"));
    assert_eq!(ns.p.as_ref().unwrap().degree_in(ns.u_index()), 3);
}

#[test]
fn numerator_of_two_constellations() {
    let sys = parse_dde(&fixture("2const.dde")).unwrap();
    let ns = build_det_and_p(&clear_denominators(&sys).unwrap()).unwrap();
    let e = poly(&ns, "(1-x1)*(u-1)+t*u*(u-1)*x1^2+t*u*(x1-z0)");
    assert_eq!(ns.e[0], e);
    assert_eq!(ns.det.clone().unwrap(), e.partial_derivative(0));
    assert_eq!(ns.p.clone().unwrap(), e.partial_derivative(ns.u_index()));
}

#[test]
fn det_and_p_of_decoupled_system() {
    // Q = 0: E_i = f_i - x_i, so Det = 1 and P = -f_1'
    let sys = parse_dde("catalytic u at 0\nF1 = u^2\nF2 = u^3 + 1\n").unwrap();
    let ns = build_det_and_p(&clear_denominators(&sys).unwrap()).unwrap();
    assert_eq!(ns.det.clone().unwrap(), MultiPoly::one(&ns.vars));
    // last column replaced: det [[-1, 2u], [0, 3u^2]] = -3u^2
    assert_eq!(ns.p.clone().unwrap(), poly(&ns, "-3*u^2"));
}

#[test]
fn p_matches_bordered_jacobian() {
    let sys = parse_dde(&fixture("orientations.dde")).unwrap();
    let ns = build_det_and_p(&clear_denominators(&sys).unwrap()).unwrap();
    let m = vec![
        vec![ns.e[0].partial_derivative(0), ns.e[0].partial_derivative(ns.u_index())],
        vec![ns.e[1].partial_derivative(0), ns.e[1].partial_derivative(ns.u_index())],
    ];
    let p = catalytic::poly::leibniz_determinant(&m).unwrap();
    assert_eq!(ns.p.clone().unwrap(), p);
}

#[test]
fn numerators_vanish_on_the_solution() {
    for name in ["2const.dde", "orientations.dde"] {
        let sys = parse_dde(&fixture(name)).unwrap();
        let ns = build_det_and_p(&clear_denominators(&sys).unwrap()).unwrap();
        let order = 12;
        let exp = fixed_point_expand(&sys, order).unwrap();
        let mut b = HashMap::new();
        for i in 0..sys.n {
            b.insert(ns.x_index(i), Binding::U(exp.solutions[i].clone()));
        }
        for j in 0..sys.n * sys.k {
            b.insert(ns.z_index(j), Binding::T(exp.specializations.z(j).clone()));
        }
        for e in &ns.e {
            assert!(eval_poly_at_series(e, &b, order).unwrap().is_zero(), "{name}");
        }
        let det = eval_poly_at_series(ns.det.as_ref().unwrap(), &b, order).unwrap();
        assert!(!det.is_zero());
    }
}

#[test]
fn duplication_shapes() {
    let sys = parse_dde(&fixture("orientations.dde")).unwrap();
    let dup = duplicate(&build_det_and_p(&clear_denominators(&sys).unwrap()).unwrap()).unwrap();
    assert_eq!(dup.equations.len(), 8);
    let names: Vec<&str> = dup.vars.names().iter().map(|s| s.as_str()).collect();
    assert_eq!(names, ["m", "x1", "x2", "x3", "x4", "u1", "u2", "z1", "t", "z0"]);
    let sat = MultiPoly::parse("t*(u1-1)*(u2-1)*(u1-u2)", &dup.vars).unwrap();
    assert_eq!(dup.sat, sat);
    assert_eq!(dup.order.describe(dup.vars.names()), "block[[m],[x1,x2,x3,x4,u1,u2],[z1],[t,z0]]");

    let one = parse_dde(&fixture("2const.dde")).unwrap();
    let ns = build_det_and_p(&clear_denominators(&one).unwrap()).unwrap();
    let dup = duplicate(&ns).unwrap();
    assert_eq!(dup.equations.len(), 3);

    let second = parse_dde("catalytic u at 0\nF1 = 1 + t*(u*F1^2 + D2[F1])\n").unwrap();
    let dup = duplicate(&build_det_and_p(&clear_denominators(&second).unwrap()).unwrap()).unwrap();
    assert_eq!(dup.equations.len(), 6);
    let names: Vec<&str> = dup.vars.names().iter().map(|s| s.as_str()).collect();
    assert_eq!(names, ["m", "x1", "x2", "u1", "u2", "z1", "t", "z0"]);
}

#[test]
fn duplicated_copy_maps_back_to_original() {
    let sys = parse_dde(&fixture("orientations.dde")).unwrap();
    let ns = build_det_and_p(&clear_denominators(&sys).unwrap()).unwrap();
    let dup = duplicate(&ns).unwrap();
    for j in 0..dup.copies {
        let mut b = HashMap::new();
        for i in 0..ns.n {
            b.insert(1 + j * ns.n + i, MultiPoly::var(&ns.vars, ns.x_index(i)));
        }
        b.insert(1 + dup.copies * ns.n + j, MultiPoly::var(&ns.vars, ns.u_index()));
        let originals = ns.e.iter().chain([ns.det.as_ref().unwrap(), ns.p.as_ref().unwrap()]);
        for (copy, orig) in dup.equations[j * (ns.n + 2)..].iter().zip(originals) {
            assert_eq!(&copy.substitute(&b, &ns.vars).unwrap(), orig);
        }
    }
}

#[test]
fn shift_round_trip() {
    let sys = parse_dde(&fixture("orientations.dde")).unwrap();
    let shifted = sys.shift_catalytic_point().unwrap();
    assert_eq!(shifted.a, rat(0));
    assert_eq!(shifted.origin_shift, rat(1));
    assert_eq!(shifted.unshift_catalytic_point().unwrap(), sys);
    assert_eq!(shifted.shift_catalytic_point().unwrap(), shifted);

    // solutions are u-translates of each other
    let a = fixed_point_expand(&sys, 8).unwrap();
    let b = fixed_point_expand(&shifted, 8).unwrap();
    for i in 0..sys.n {
        assert_eq!(a.solutions[i].shift_u(&rat(1)), b.solutions[i]);
    }
    assert_eq!(a.specializations, b.specializations);
}

#[test]
fn deformation_parameters() {
    let sys = parse_dde(&fixture("orientations.dde")).unwrap();
    assert!(matches!(build_deformed_system(&sys), Err(Error::Precondition(_))));
    let d = build_deformed_system(&sys.shift_catalytic_point().unwrap()).unwrap();
    assert_eq!((d.params.big_m, d.params.beta, d.params.alpha), (2, 4, 72));
    assert_eq!(
        d.params.gamma,
        vec![vec![(rat(1), 0), (rat(1), 4)], vec![(rat(1), 4), (rat(2), 0)]]
    );
    let one = parse_dde(&fixture("2const.dde")).unwrap();
    let d = build_deformed_system(&one.shift_catalytic_point().unwrap()).unwrap();
    assert_eq!((d.params.big_m, d.params.beta, d.params.alpha), (1, 2, 12));
    assert_eq!(d.params.gamma, vec![vec![(rat(1), 0)]]);
}

#[test]
fn deformed_det_modulo_low_powers_of_t() {
    for name in ["2const.dde", "orientations.dde"] {
        let sys = parse_dde(&fixture(name)).unwrap().shift_catalytic_point().unwrap();
        let d = build_deformed_system(&sys).unwrap();
        let ns = clear_denominators_with(&d.system, sys.k as u32).unwrap();
        let ns = build_det_and_p(&ns).unwrap();
        let t = ns.t_index();
        let got = truncate_in(ns.det.as_ref().unwrap(), t, sys.n as u32 + 1);
        assert_eq!(got, d.predicted_det(&ns.vars).unwrap(), "{name}");
    }
}

#[test]
fn undeformed_solution_is_recovered_at_eps_zero() {
    let sys = parse_dde(&fixture("2const.dde")).unwrap().shift_catalytic_point().unwrap();
    let d = build_deformed_system(&sys).unwrap();
    let alpha = d.params.alpha as usize;
    let g = fixed_point_expand(&d.with_eps(&rat(0)).unwrap(), 3 * alpha + 1).unwrap();
    let f = fixed_point_expand(&sys, 4).unwrap();
    for j in 0..=3 * alpha {
        let expected = if j % alpha == 0 { f.solutions[0].coeff(j / alpha).clone() } else { UPoly::zero() };
        assert_eq!(g.solutions[0].coeff(j), &expected, "t^{j}");
    }
    assert!(matches!(fixed_point_expand(&d.system, 4), Err(Error::Precondition(_))));
}
