mod common;

use common::{arb_nonzero, arb_rational};
use proptest::prelude::*;
use unilocal::fieldgen::{
    iso_holds_at, loc_add, loc_mul, localization_iso, order_compatibility, stretch_image, verify_field_axioms,
    Localization,
};
use unilocal::ordline::{AffineMap, Interval, PointShift};
use unilocal::Rational;

fn arb_loc() -> impl Strategy<Value = Localization> {
    (arb_rational(), arb_nonzero()).prop_map(|(z, d)| Localization::new(z.clone(), z + d).unwrap())
}

#[test]
fn named_localizations_pass() {
    for (z, u) in [("0", "1"), ("-7/3", "5/2")] {
        let l = Localization::new(z.parse().unwrap(), u.parse().unwrap()).unwrap();
        assert!(verify_field_axioms(&l, 1000, 0).unwrap().all_pass());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Addition is composition of the shifts taking zero to each operand.
    #[test]
    fn addition_is_shift_composition(l in arb_loc(), x in arb_rational(), y in arb_rational()) {
        let c = PointShift::new(l.zero().clone());
        let composed = c.to_shift(&x).compose(&c.to_shift(&y));
        prop_assert_eq!(c.to_shift(&loc_add(&l, &x, &y)), composed);
    }

    /// Multiplication by x is the scaling automorphism of the shift group
    /// sending the unit shift to the shift of x, read back at zero.
    #[test]
    fn multiplication_is_scaling_of_shifts(l in arb_loc(), x in arb_rational(), y in arb_rational()) {
        let c = PointShift::new(l.zero().clone());
        let unit = c.to_shift(l.one()).displacement().clone();
        let factor = c.to_shift(&x).displacement() / &unit;
        let scaled = unilocal::ordline::Shift::new(c.to_shift(&y).displacement() * &factor);
        prop_assert_eq!(loc_mul(&l, &x, &y), c.to_point(&scaled));
    }

    #[test]
    fn axioms_hold(l in arb_loc(), seed in any::<u64>()) {
        let rep = verify_field_axioms(&l, 50, seed).unwrap();
        prop_assert!(rep.all_pass(), "{:?}", rep);
    }

    #[test]
    fn isomorphisms_compose(l1 in arb_loc(), l2 in arb_loc(), l3 in arb_loc(), x in arb_rational(), y in arb_rational()) {
        let a = localization_iso(&l1, &l2);
        let b = localization_iso(&l2, &l3);
        prop_assert_eq!(b.compose(&a), localization_iso(&l1, &l3));
        prop_assert!(iso_holds_at(&a, &l1, &l2, &x, &y));
        prop_assert!(localization_iso(&l1, &l1).is_identity());
    }

    #[test]
    fn stretch_orientation(l in arb_loc(), a in arb_rational(), x in arb_rational(), d in arb_nonzero()) {
        prop_assume!(&a != l.zero());
        let m = l.stretch(&a).unwrap();
        let y = &x + d.abs();
        let same_side = (a > *l.zero()) == (l.one() > l.zero());
        prop_assert_eq!(m.apply(&x) < m.apply(&y), same_side);
        prop_assert_eq!(m.apply(l.zero()), l.zero().clone());
        prop_assert_eq!(m.apply(l.one()), a.clone());
        let unit = Interval::new(l.zero().clone().min(l.one().clone()), l.zero().clone().max(l.one().clone())).unwrap();
        let img = stretch_image(&l, &a, &unit).unwrap();
        prop_assert_eq!(img.reversed, !same_side);
        prop_assert_eq!(img.interval.width(), (&a - l.zero()).abs());
    }

    #[test]
    fn positive_orientation_is_ordered(z in arb_rational(), d in arb_nonzero(), seed in any::<u64>()) {
        let l = Localization::new(z.clone(), z + d.abs()).unwrap();
        prop_assert!(order_compatibility(&l, 40, seed).unwrap().passed());
    }
}

#[test]
fn stretch_is_affine_multiplication() {
    let l = Localization::new(Rational::new(1, 1), Rational::new(3, 1)).unwrap();
    let m = l.stretch(&Rational::new(2, 1)).unwrap();
    assert_eq!(m, "1/2*x+1/2".parse::<AffineMap>().unwrap());
    assert_eq!(m.apply(&Rational::new(2, 1)), loc_mul(&l, &Rational::new(2, 1), &Rational::new(2, 1)));
}
