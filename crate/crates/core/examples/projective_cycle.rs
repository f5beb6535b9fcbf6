//! Cyclic order on the projective line, cutting it open at a point, and
//! Möbius maps acting on it.

use unilocal::cyclic::{cyclic_orient, default_triples, linearize_at, mobius_orientation, MobiusMap, ProjPoint};
use unilocal::Rational;

fn p(s: &str) -> ProjPoint {
    s.parse().expect("point")
}

fn main() {
    for t in [["1", "2", "3"], ["2", "3", "1"], ["1", "3", "inf"], ["3", "1", "inf"]] {
        let o = cyclic_orient(&p(t[0]), &p(t[1]), &p(t[2])).expect("distinct");
        println!("cyclic({}) = {o}", t.join(", "));
    }

    let pts: Vec<ProjPoint> = ["-1", "inf", "2", "1/2", "-3"].iter().map(|s| p(s)).collect();
    for cut in ["inf", "0", "1"] {
        let rest: Vec<ProjPoint> = pts.iter().filter(|x| **x != p(cut)).cloned().collect();
        let sorted = linearize_at(p(cut)).sort(&rest).expect("cut removed");
        let shown: Vec<String> = sorted.iter().map(ToString::to_string).collect();
        println!("cut at {cut:>3}: {}", shown.join(" < "));
    }

    let r = |n: i64| Rational::integer(n);
    let maps = [
        MobiusMap::new(r(1), r(1), r(0), r(1)),
        MobiusMap::new(r(0), r(1), r(1), r(0)),
        MobiusMap::new(r(2), r(-1), r(1), r(3)),
    ];
    for m in maps {
        let m = m.expect("non-singular");
        let o = mobius_orientation(&m, &default_triples()).expect("consistent");
        println!("{m}: det {} -> {o:?}", m.det());
    }
}
