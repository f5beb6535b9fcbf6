//! Galois closures of finite sets and the principal/gap classification of
//! cuts given by membership oracles.

use unilocal::cuts::{classify_cut, connectivity_probe, galois_closure_check, CutOracle};
use unilocal::Rational;

fn q(s: &str) -> Rational {
    s.parse().expect("rational")
}

fn main() {
    let xs = [q("1"), q("2"), q("3")];
    let rep = galois_closure_check(&xs).expect("non-empty");
    println!("X = {{1, 2, 3}}");
    println!("  X^> = {}, X^>< = {}, X^><> = {}", rep.upper, rep.upper_lower, rep.upper_lower_upper);
    println!("  X^< = {}, X^<> = {}, X^<>< = {}", rep.lower, rep.lower_upper, rep.lower_upper_lower);

    let oracles = [
        CutOracle::lt(q("3/7")),
        CutOracle::le(q("1/2")),
        CutOracle::sq_lt(q("2")).expect("positive"),
        CutOracle::sq_lt(q("9/4")).expect("positive"),
    ];
    println!();
    for o in &oracles {
        println!("{:<10} {}", o.label(), classify_cut(o, 1_000_000).expect("monotone oracle"));
    }

    let verdict = connectivity_probe(&oracles, 1_000_000).expect("non-empty family");
    println!("\nprobe: {}", serde_json::to_string(&verdict).expect("serializable"));
}
