//! Parse a structure, list its automorphisms and the orbits they cut out.

use unilocal::autgroup::{automorphisms, orbit_partition, OrbitMode};
use unilocal::structures::parse_structure;

const PETAL: &str = "\
# two triangles sharing the vertex c
signature
e/2
universe
a b c d f
relations
e (a,b) (b,c) (c,a) (c,d) (d,f) (f,c)
";

fn main() {
    let s = parse_structure(PETAL).expect("valid structure");
    print!("{}", s.render_text());

    let group = automorphisms(&s).expect("small universe");
    println!("\n{} automorphisms", group.len());
    for p in &group {
        println!("  {}", p.cycles(&s));
    }

    for n in 1..=2 {
        let orbits = orbit_partition(&s, n, OrbitMode::Subsets).expect("small universe");
        println!("\norbits on {n}-subsets:");
        for class in &orbits.classes {
            let shown: Vec<String> = class
                .iter()
                .map(|t| t.iter().map(|&i| s.element_name(i)).collect::<Vec<_>>().join(""))
                .collect();
            println!("  {{{}}}", shown.join(", "));
        }
    }
}
