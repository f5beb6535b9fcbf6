//! Decide 1- and 2-uniformity with both deciders and print the
//! certificates they produce.

use unilocal::structures::FiniteStructure;
use unilocal::uniformity::{check_uniformity_orbits, check_uniformity_schema, distinguishing_formula, Outcome};

fn report(name: &str, s: &FiniteStructure) {
    println!("{name}");
    for n in 1..=2 {
        let schema = check_uniformity_schema(s, n, 3).expect("within limits");
        let orbit = check_uniformity_orbits(s, n).expect("within limits");
        let detail = match &schema.outcome {
            Outcome::Formula { formula, witness, violating } => format!(
                "{formula}  holds at {:?}, fails on every arrangement of {:?}",
                witness, violating
            ),
            _ => "no counterexample up to height 3".into(),
        };
        println!(
            "  n={n}: schema {:<5} orbit {:<5} {detail}",
            schema.is_uniform(),
            orbit.is_uniform()
        );
    }
}

fn main() {
    report("three-chain", &FiniteStructure::binary("lt", 3, |i, j| i < j));
    report("directed 5-cycle", &FiniteStructure::binary("e", 5, |i, j| j == (i + 1) % 5));
    report("undirected 5-cycle", &FiniteStructure::binary("e", 5, |i, j| (i + 1) % 5 == j || (j + 1) % 5 == i));
    report("antichain", &FiniteStructure::binary("e", 4, |_, _| false));

    let c = FiniteStructure::binary("e", 5, |i, j| j == (i + 1) % 5);
    let f = distinguishing_formula(&c, &[0, 1], &[0, 2], 3).expect("within limits");
    println!("\nseparating an edge from a diagonal of the 5-cycle: {}", f.expect("different orbits"));
}
