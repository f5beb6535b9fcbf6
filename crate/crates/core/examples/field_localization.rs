//! Field operations built from a choice of zero and one, and the affine
//! isomorphism between two such choices.

use unilocal::fieldgen::{localization_iso, stretch_image, verify_field_axioms, Localization};
use unilocal::ordline::Interval;
use unilocal::Rational;

fn q(s: &str) -> Rational {
    s.parse().expect("rational")
}

fn main() {
    let l = Localization::new(q("1"), q("3")).expect("zero differs from one");
    let (a, b) = (q("2"), q("3"));
    println!("zero 1, one 3:");
    println!("  2 + 3 = {}", l.add(&a, &b));
    println!("  2 * 3 = {}", l.mul(&a, &b));
    println!("  -2    = {}", l.neg(&a));
    println!("  1/2   = {}", l.inv(&a).expect("non-zero"));

    let rep = verify_field_axioms(&l, 1000, 42).expect("samples");
    println!("  axioms on 1000 triples: {}", if rep.all_pass() { "all pass" } else { "failure" });

    let std = Localization::standard();
    let phi = localization_iso(&std, &l);
    println!("\nisomorphism from (0,1) to (1,3): {phi}");
    println!("  phi(2 + 3) = {} = phi(2) + phi(3) = {}", phi.apply(&std.add(&a, &b)), l.add(&phi.apply(&a), &phi.apply(&b)));

    let unit = Interval::new(q("0"), q("1")).expect("ordered");
    for factor in ["3", "1/2", "-2"] {
        let img = stretch_image(&std, &q(factor), &unit).expect("non-zero factor");
        println!("stretch by {factor:>3}: {unit} -> {} reversed {}", img.interval, img.reversed);
    }
}
