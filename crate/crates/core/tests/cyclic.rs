mod common;

use common::arb_rational;
use proptest::prelude::*;
use unilocal::cyclic::{
    cyclic_orient, default_triples, linearize_at, mobius_orientation, CyclicError, MobiusMap, Orientation, ProjPoint,
};
use unilocal::Rational;

fn arb_point() -> impl Strategy<Value = ProjPoint> {
    prop_oneof![1 => Just(ProjPoint::Infinity), 8 => arb_rational().prop_map(ProjPoint::Finite)]
}

fn twelve() -> Vec<ProjPoint> {
    ["-9", "-2", "-1/2", "0", "1/3", "1", "3/2", "2", "5", "17/3", "40", "inf"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

#[test]
fn linearizations_are_strict_total_orders() {
    let pts = twelve();
    for c in &pts {
        let lin = linearize_at(c.clone());
        let rest: Vec<&ProjPoint> = pts.iter().filter(|p| *p != c).collect();
        for x in &rest {
            assert!(!lin.less(x, x).unwrap());
            for y in &rest {
                if x != y {
                    assert_ne!(lin.less(x, y).unwrap(), lin.less(y, x).unwrap());
                }
                for z in &rest {
                    if lin.less(x, y).unwrap() && lin.less(y, z).unwrap() {
                        assert!(lin.less(x, z).unwrap(), "cut {c}: {x} {y} {z}");
                    }
                }
            }
        }
    }
}

#[test]
fn cut_at_infinity_is_the_usual_order() {
    let lin = linearize_at(ProjPoint::Infinity);
    let pts: Vec<Rational> = twelve()
        .into_iter()
        .filter_map(|p| match p {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        })
        .collect();
    for x in &pts {
        for y in &pts {
            let (a, b) = (ProjPoint::Finite(x.clone()), ProjPoint::Finite(y.clone()));
            assert_eq!(lin.less(&a, &b).unwrap(), x < y);
        }
    }
}

#[test]
fn degenerate_inputs() {
    let p: ProjPoint = "1".parse().unwrap();
    assert_eq!(cyclic_orient(&p, &p, &ProjPoint::Infinity), Err(CyclicError::NotDistinct));
    let z = Rational::zero;
    assert_eq!(MobiusMap::new(z(), z(), z(), z()), Err(CyclicError::Singular));
    assert_eq!(default_triples().len(), 20);
}

proptest! {
    #[test]
    fn cyclic_order_axioms(p in arb_point(), q in arb_point(), r in arb_point()) {
        prop_assume!(p != q && q != r && p != r);
        let o = cyclic_orient(&p, &q, &r).unwrap();
        prop_assert_eq!(cyclic_orient(&q, &r, &p).unwrap(), o);
        prop_assert_eq!(cyclic_orient(&p, &r, &q).unwrap(), !o);
    }

    #[test]
    fn orientation_follows_determinant(a in arb_rational(), b in arb_rational(), c in arb_rational(), d in arb_rational()) {
        let Ok(m) = MobiusMap::new(a, b, c, d) else { return Ok(()); };
        let o = mobius_orientation(&m, &default_triples()).unwrap();
        prop_assert_eq!(o, Orientation::expected(&m));
        prop_assert_eq!(o == Orientation::Preserves, m.det().is_positive());
    }
}
