//! Randomised checks of the algebraic contracts.

use std::sync::Arc;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use catalytic::dde::parse_dde;
use catalytic::guess::{guess_table, verify_annihilator};
use catalytic::ideal::*;
use catalytic::poly::*;
use catalytic::series::{delta_a, divided_difference, fixed_point_expand, TSeries, USeries};
use catalytic::strategies::{compare_strategies, solve_by_duplication, solve_by_reduction, SolveOptions, Verdict};

fn xyz() -> Arc<VarTable> {
    VarTable::new(&["x", "y", "z"]).unwrap()
}

fn arb_poly(vars: Arc<VarTable>, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), -6i64..=6), 0..=max_terms).prop_map(move |terms| {
        MultiPoly::from_terms(&vars, terms.into_iter().map(|(e, c)| (Monomial::new(e), rat(c))))
    })
}

fn arb_upoly(max_deg: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(-9i64..=9, 0..=max_deg + 1).prop_map(|c| UPoly::from_ints(&c))
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-7i64..=7, 1i64..=5).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in arb_poly(xyz(), 3, 5), b in arb_poly(xyz(), 3, 5), c in arb_poly(xyz(), 3, 5)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(&xyz()), a.clone());
        prop_assert_eq!(&a + &(-&b), &a - &b);
    }

    #[test]
    fn printing_round_trips(a in arb_poly(xyz(), 4, 6)) {
        prop_assert_eq!(MultiPoly::parse(&a.to_string(), &xyz()).unwrap(), a);
    }

    #[test]
    fn exact_division_recovers_factors(a in arb_poly(xyz(), 2, 4), b in arb_poly(xyz(), 2, 4)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn normal_form_contract(gens in prop::collection::vec(arb_poly(xyz(), 2, 3), 1..3), p in arb_poly(xyz(), 3, 5)) {
        let vars = xyz();
        let pres = IdealPresentation::new(&vars, gens.clone(), MonomialOrder::DegRevLex);
        prop_assume!(!pres.is_zero());
        let gb = buchberger_with_budget(&pres, &Budget::seconds(20.0));
        prop_assume!(gb.is_ok());
        let gb = gb.unwrap();
        for g in &pres.generators {
            prop_assert!(gb.contains(g).unwrap());
        }
        let r = gb.normal_form(&p).unwrap();
        prop_assert_eq!(gb.normal_form(&r).unwrap(), r.clone());
        prop_assert!(gb.contains(&(&p - &r)).unwrap());
        let leads = gb.leading_monomials();
        for term in r.terms() {
            prop_assert!(leads.iter().all(|m| !m.divides(&term.mono)));
        }
        // reduced bases do not depend on the order of the generators
        let mut rev = gens;
        rev.reverse();
        let again = buchberger(&IdealPresentation::new(&vars, rev, MonomialOrder::DegRevLex));
        prop_assert_eq!(again.elements, gb.elements);
    }

    #[test]
    fn eliminating_a_graph(f in arb_poly(VarTable::new(&["x", "y"]).unwrap(), 2, 3), g in arb_upoly(3)) {
        // <x - f(y), g(x)> ∩ Q[y] = <g(f(y))>
        let vars = VarTable::new(&["x", "y"]).unwrap();
        let f = f.eval_var(0, &rat(0));
        prop_assume!(g.degree().is_some_and(|d| d > 0));
        let x = MultiPoly::var(&vars, 0);
        let gx = MultiPoly::from_terms(&vars, g.coeffs().iter().enumerate().map(|(i, c)| (Monomial::new(vec![i as u32, 0]), c.clone())));
        let mut sub = std::collections::HashMap::new();
        sub.insert(0, f.clone());
        let composed = gx.substitute(&sub, &vars).unwrap();
        prop_assume!(!composed.is_constant());
        let pres = IdealPresentation::new(&vars, vec![&x - &f, gx], MonomialOrder::DegRevLex);
        let elim = eliminate(&pres, &[1]).unwrap();
        prop_assert_eq!(elim.generators.len(), 1);
        prop_assert!(elim.generators[0].associate_of(&composed));
    }

    #[test]
    fn saturation_removes_a_variable_factor(h in arb_poly(xyz(), 2, 4), e in 1u32..3) {
        // <x^e h> : x^inf = <h> when x does not divide h
        let vars = xyz();
        prop_assume!(!h.is_constant());
        prop_assume!(!h.eval_var(0, &rat(0)).is_zero());
        let x = MultiPoly::var(&vars, 0);
        let pres = IdealPresentation::new(&vars, vec![&x.pow(e) * &h], MonomialOrder::DegRevLex);
        let sat = saturate(&pres, &x).unwrap();
        prop_assert_eq!(sat.generators.len(), 1);
        prop_assert!(sat.generators[0].associate_of(&h));
    }

    #[test]
    fn squarefree_part_is_idempotent(a in arb_poly(guess_table(), 2, 4), b in arb_poly(guess_table(), 1, 3)) {
        prop_assume!(!a.is_constant() && !b.is_zero());
        let p = &(&a * &a) * &b;
        let s = squarefree_part(&p).unwrap();
        prop_assert_eq!(squarefree_part(&s).unwrap(), s.clone());
        prop_assert!(p.divisible_by(&s));
        prop_assert!(s.divisible_by(&squarefree_part(&a).unwrap()));
    }

    #[test]
    fn divided_difference_identity(p in arb_upoly(6), a in arb_rational()) {
        // p(u) = p(a) + (u - a) Δ_a p
        let lin = &UPoly::x() - &UPoly::constant(a.clone());
        let back = &UPoly::constant(p.eval(&a)) + &(&lin * &divided_difference(&p, &a));
        prop_assert_eq!(back, p);
    }

    #[test]
    fn delta_of_series(ps in prop::collection::vec(arb_upoly(4), 1..6), a in arb_rational()) {
        let n = ps.len();
        let f = USeries::new(ps, n);
        let d = delta_a(&f, &a);
        let lin = UPoly::from_ints(&[0, 1]);
        let shifted = &lin - &UPoly::constant(a.clone());
        let back = d.mul_upoly(&shifted).add(&USeries::from_tseries(&f.eval_u(&a)));
        prop_assert_eq!(back, f.clone());
        // Δ_a of (u - a) F is F
        prop_assert_eq!(delta_a(&f.mul_upoly(&shifted), &a), f);
    }

    #[test]
    fn expansion_is_deterministic_and_prefix_stable(c in prop::collection::vec(-2i64..=2, 4), n in 4usize..10) {
        let text = format!(
            "catalytic u at 1\nF1 = 1 + t*({}*u*F1^2 + {}*u*D[F1] + {}*u + {}*F1(1))\n",
            c[0], c[1], c[2], c[3]
        );
        let sys = parse_dde(&text).unwrap();
        let a = fixed_point_expand(&sys, n).unwrap();
        let b = fixed_point_expand(&sys, n).unwrap();
        prop_assert_eq!(&a.solutions, &b.solutions);
        let long = fixed_point_expand(&sys, n + 3).unwrap();
        prop_assert_eq!(long.specializations.z(0).truncate(n), a.specializations.z(0).clone());
    }

    #[test]
    fn verification_rejects_perturbed_annihilators(c in 1i64..5, j in 0u32..3, i in 0u32..3) {
        // Catalan: t z^2 - z + 1; adding c t^i z^j breaks it at order i
        let vars = guess_table();
        let s = catalan(30);
        let r = MultiPoly::parse("t*z0^2 - z0 + 1", &vars).unwrap();
        prop_assert!(verify_annihilator(&r, &s, 30).unwrap().holds);
        let bump = MultiPoly::from_terms(&vars, [(Monomial::new(vec![i, j]), rat(c))]);
        let v = verify_annihilator(&(&r + &bump), &s, 30).unwrap();
        prop_assert!(!v.holds);
        prop_assert_eq!(v.first_failure, Some(i as usize));
    }
}

fn catalan(order: usize) -> TSeries {
    let mut c = vec![rat(1)];
    for n in 1..order {
        let mut s = rat(0);
        for i in 0..n {
            s += &c[i] * &c[n - 1 - i];
        }
        c.push(s);
    }
    TSeries::new(c, order)
}

/// `F1 = 1 + t Q1`, `F2 = t Q2` with `Q_i` linear in `F_j`, `D[F_j]`.
fn random_linear_system(rng: &mut StdRng) -> String {
    let mut eqs = String::from("catalytic u at 1\n");
    for i in 1..=2 {
        let mut terms = Vec::new();
        for j in 1..=2 {
            let c: i64 = rng.gen_range(-2..=2);
            let d: i64 = rng.gen_range(0..=2);
            if c != 0 {
                terms.push(format!("{c}*u*F{j}"));
            }
            if d != 0 {
                terms.push(format!("{d}*u*D[F{j}]"));
            }
        }
        terms.push(format!("{}*u", rng.gen_range(1..=2)));
        let head = if i == 1 { "1 + " } else { "" };
        eqs.push_str(&format!("F{i} = {head}t*({})\n", terms.join(" + ")));
    }
    eqs
}

#[test]
fn reduction_output_divides_duplication_output() {
    let mut rng = StdRng::seed_from_u64(17);
    let opts = || SolveOptions {
        budget: Budget::seconds(60.0),
        symbolic_seconds: 5.0,
        ..SolveOptions::default()
    };
    let mut both = 0;
    let mut tried = Vec::new();
    for _ in 0..40 {
        if both >= 5 {
            break;
        }
        let text = random_linear_system(&mut rng);
        let sys = parse_dde(&text).unwrap();
        let (Ok(dup), Ok(red)) = (solve_by_duplication(&sys, &opts()), solve_by_reduction(&sys, &opts())) else {
            tried.push(text);
            continue;
        };
        let c = compare_strategies(&dup.r, &red.r).unwrap();
        assert_eq!(c.verdict, Verdict::Divides, "{text}\nR1 = {}\nR2 = {}", dup.r, red.r);
        both += 1;
    }
    assert!(both >= 5, "only {both} systems solved by both strategies; skipped:\n{}", tried.join("\n"));
}
