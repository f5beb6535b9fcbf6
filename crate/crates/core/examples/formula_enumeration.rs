//! Walk the formula space level by level and show how semantic
//! deduplication shrinks it on a fixed structure.

use std::ops::ControlFlow;

use unilocal::formulas::{enumerate_formulas, parse_formula, FormulaEnumerator};
use unilocal::structures::{FiniteStructure, Signature};

fn main() {
    let sig = Signature::new().with("lt", 2);
    for depth in 0..=2 {
        println!("height <= {depth}: {} formulas in x1", enumerate_formulas(&sig, 1, depth).len());
    }
    println!("first few:");
    for f in enumerate_formulas(&sig, 1, 1).iter().take(8) {
        println!("  {f}");
    }

    let chain = FiniteStructure::binary("lt", 4, |i, j| i < j);
    for dedup in [false, true] {
        let mut count = 0usize;
        FormulaEnumerator::new(chain.signature(), 1, 2)
            .with_structure(&chain)
            .semantic_dedup(dedup)
            .for_each(|_| {
                count += 1;
                ControlFlow::<()>::Continue(())
            });
        println!("on the 4-chain, height <= 2, dedup {dedup}: {count} formulas visited");
    }

    let phi = parse_formula("forall y1. (lt(x1,y1) | x1 = y1)", &sig).expect("well formed");
    println!("\nparsed: {phi}  (height {})", phi.height());
}
