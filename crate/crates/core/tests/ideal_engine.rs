use catalytic::ideal::*;
use catalytic::poly::*;

fn table(names: &[&str]) -> std::sync::Arc<VarTable> {
    VarTable::new(names).unwrap()
}

fn p(s: &str, v: &std::sync::Arc<VarTable>) -> MultiPoly {
    MultiPoly::parse(s, v).unwrap()
}

#[test]
fn buchberger_hand_example() {
    let v = table(&["x", "y"]);
    let pres = IdealPresentation::new(&v, vec![p("x^2-1", &v), p("x*y-1", &v)], MonomialOrder::DegRevLex);
    let gb = buchberger(&pres);
    let got: Vec<String> = gb.elements.iter().map(|g| g.to_string()).collect();
    assert_eq!(got, vec!["x - y", "y^2 - 1"]);
}

#[test]
fn unit_and_principal() {
    let v = table(&["x"]);
    let gb = buchberger(&IdealPresentation::new(&v, vec![p("x", &v), p("x+1", &v)], MonomialOrder::DegRevLex));
    assert!(gb.is_unit());
    let gb = buchberger(&IdealPresentation::new(&v, vec![p("x", &v)], MonomialOrder::DegRevLex));
    assert_eq!(gb.elements, vec![p("x", &v)]);
}

#[test]
fn saturation_examples() {
    let v = table(&["x", "y"]);
    let s = saturate(&IdealPresentation::new(&v, vec![p("x*y", &v)], MonomialOrder::DegRevLex), &p("x", &v)).unwrap();
    assert_eq!(s.generators, vec![p("y", &v)]);
    let s = saturate(&IdealPresentation::new(&v, vec![p("x", &v)], MonomialOrder::DegRevLex), &p("y", &v)).unwrap();
    assert_eq!(s.generators, vec![p("x", &v)]);
}

#[test]
fn elimination_example() {
    let v = table(&["x", "y"]);
    let pres = IdealPresentation::new(&v, vec![p("x^2+y^2-1", &v), p("x-y", &v)], MonomialOrder::DegRevLex);
    let e = eliminate(&pres, &[1]).unwrap();
    assert_eq!(e.generators, vec![p("2*y^2-1", &v)]);
    let all = eliminate(&pres, &[0, 1]).unwrap();
    let gb = buchberger(&pres);
    for g in &all.generators {
        assert!(gb.contains(g).unwrap());
    }
}

#[test]
fn zero_dimensionality() {
    let v = table(&["x", "y"]);
    let gb = buchberger(&IdealPresentation::new(&v, vec![p("x^2-1", &v), p("y-x", &v)], MonomialOrder::DegRevLex));
    assert!(is_zero_dimensional(&gb, &[]));
    let gb = buchberger(&IdealPresentation::new(&v, vec![p("x*y", &v)], MonomialOrder::DegRevLex));
    assert!(!is_zero_dimensional(&gb, &[]));
}

#[test]
fn resultant_cascade() {
    let v = table(&["l", "z", "t"]);
    let r = iterated_resultant_eliminate(&[p("l^2-t", &v), p("z-l", &v)], &[0], &[1, 2]).unwrap();
    assert!(r.associate_of(&p("z^2-t", &v)));
    let w = table(&["x", "y", "t"]);
    let r = iterated_resultant_eliminate(&[p("x-y^2", &w), p("y-t", &w)], &[1], &[0, 2]).unwrap();
    assert!(r.associate_of(&p("x-t^2", &w)));
    let err = iterated_resultant_eliminate(&[p("(x-1)*y", &w), p("(x-1)*t", &w)], &[0], &[1, 2]);
    assert!(matches!(err, Err(catalytic::Error::Degenerate(_))));
}

#[test]
fn budget_is_reported() {
    let v = table(&["x", "y", "z"]);
    let pres = IdealPresentation::new(
        &v,
        vec![p("x^2*y-z-1", &v), p("x*y^2-z-2", &v), p("x*y*z-3", &v)],
        MonomialOrder::DegRevLex,
    );
    let b = Budget {
        max_pairs: Some(1),
        ..Budget::default()
    };
    assert!(matches!(buchberger_with_budget(&pres, &b), Err(catalytic::Error::BudgetExhausted(_))));
}

#[test]
fn modular_elimination_matches_rational() {
    let v = table(&["x", "y", "t"]);
    let order = elimination_order(3, &[2]);
    let pres = IdealPresentation::new(&v, vec![p("x^2-3*y*t-1/2", &v), p("y^2-x+5*t", &v), p("x*y-t^2-7", &v)], order);
    let exact = eliminate(&pres, &[2]).unwrap();
    let (modular, report) = multimodular_elimination(&pres, &[2], &Budget::unlimited(), 20).unwrap();
    assert_eq!(exact.generators, modular);
    assert!(report.primes_used >= 2);
}
