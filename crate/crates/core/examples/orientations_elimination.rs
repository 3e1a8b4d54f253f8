use std::time::Instant;

use catalytic::dde::*;
use catalytic::ideal::*;
use catalytic::poly::*;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| "fixtures/orientations.dde".into());
    let sys = parse_dde(&std::fs::read_to_string(path).unwrap()).unwrap();
    let ns = build_det_and_p(&clear_denominators(&sys).unwrap()).unwrap();
    let dup = duplicate(&ns).unwrap();
    let pres = dup.presentation();
    let s = Instant::now();
    let (r, rep) = interpolated_elimination(&pres.generators, dup.t_index(), dup.z0_index(), 400, 40, &Budget::seconds(1800.0)).unwrap();
    println!("{:?} {:?}", rep, s.elapsed());
    println!("R: {} terms, deg z0 {}, deg t {}", r.len(), r.degree_in(dup.z0_index()), r.degree_in(dup.t_index()));
    let cubic = MultiPoly::parse("64*t^3*z0^3+(48*t^3-72*t^2+2*t)*z0^2-(15*t^3-9*t^2-19*t+1)*z0+t^3+27*t^2-19*t+1", &dup.vars).unwrap();
    println!("divisible by cubic: {}", r.divisible_by(&cubic));
    println!("{r}");
}
