//! Affine maps of the rational line: commutation, tilings by a shift and
//! the tile-count measure.

use unilocal::ordline::{
    classify_displacement, commutes, default_samples, factor_through_shift, preserves_construct, shift_measure,
    tile_line, AffineMap, Interval, Shift, Side,
};
use unilocal::Rational;

fn map(s: &str) -> AffineMap {
    s.parse().expect("affine map")
}

fn q(s: &str) -> Rational {
    s.parse().expect("rational")
}

fn main() {
    for s in ["x+1", "x-2", "x", "2*x", "-x+3"] {
        println!("{s:>6}: {:?}", classify_displacement(&map(s)));
    }

    let (f, g) = (map("x+1"), map("2*x"));
    let check = preserves_construct(&g, &f, &default_samples());
    println!("\n{f} and {g} commute: {}", commutes(&f, &g));
    if let Some((x, a, b)) = check.witness {
        println!("  {g} moves ({x}, {}) to ({a}, {b}), off the graph of {f}", f.apply(&x));
    }

    let step = Shift::new(q("2/3"));
    let tiling = tile_line(&step, &q("0"), 3).expect("non-identity shift");
    println!("\ntiles of {step}:");
    for (j, tile) in &tiling.tiles {
        println!("  {j:>2} {tile}");
    }
    println!("  union {:?}, disjoint {}", tiling.union(), tiling.is_disjoint());

    let h = factor_through_shift(&map("2*x+1"), &Shift::new(q("1")), Side::Left);
    println!("\n2*x+1 = (x+1) after {h}");

    let i = Interval::new(q("0"), q("7/2")).expect("ordered");
    let (count, rest) = shift_measure(&Shift::new(q("1")), &i).expect("raising shift");
    println!("{i} holds {count} unit tiles, remainder {rest}");
}
