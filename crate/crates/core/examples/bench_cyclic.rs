use std::time::Instant;

use catalytic::ideal::*;
use catalytic::poly::*;

fn main() {
    let n: usize = std::env::args().nth(1).map(|s| s.parse().unwrap()).unwrap_or(5);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let v = VarTable::new(&names).unwrap();
    let mut gens = Vec::new();
    for d in 1..n {
        let mut s = MultiPoly::zero(&v);
        for i in 0..n {
            let mut p = MultiPoly::one(&v);
            for j in 0..d {
                p = &p * &MultiPoly::var(&v, (i + j) % n);
            }
            s = &s + &p;
        }
        gens.push(s);
    }
    let mut p = MultiPoly::one(&v);
    for i in 0..n {
        p = &p * &MultiPoly::var(&v, i);
    }
    gens.push(&p - &MultiPoly::one(&v));
    let pres = IdealPresentation::new(&v, gens, MonomialOrder::DegRevLex);
    let prime = catalytic::ideal::field::primes_below_2_62(1)[0];
    let start = Instant::now();
    let mb = modular_basis(&pres, prime, &Budget::unlimited()).unwrap();
    println!("cyclic-{n}: basis {} in {:?}", mb.elements.len(), start.elapsed());
    if let Some(ev) = mb.trace.last() {
        println!("{:?}", ev);
    }
}
