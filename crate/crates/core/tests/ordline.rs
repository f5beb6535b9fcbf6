mod common;

use common::{arb_nonzero, arb_rational};
use proptest::prelude::*;
use unilocal::ordline::{
    classify_displacement, commutes, conjugate, default_samples, factor_through_shift, interval_laws,
    preserves_construct, shift_measure, tile_line, AffineMap, Displacement, Interval, PointShift, Shift, Side,
};
use unilocal::Rational;

fn arb_map() -> impl Strategy<Value = AffineMap> {
    (arb_nonzero(), arb_rational()).prop_map(|(a, b)| AffineMap::new(a, b).unwrap())
}

#[test]
fn default_samples_start_at_zero() {
    let s = default_samples();
    assert_eq!(s.len(), 100);
    assert_eq!(s[0], Rational::zero());
}

proptest! {
    #[test]
    fn display_round_trip(f in arb_map()) {
        prop_assert_eq!(f.to_string().parse::<AffineMap>().unwrap(), f);
    }

    #[test]
    fn affine_algebra(f in arb_map(), g in arb_map(), h in arb_map(), x in arb_rational()) {
        prop_assert_eq!(f.compose(&g).apply(&x), f.apply(&g.apply(&x)));
        prop_assert!(f.compose(&f.inverse()).is_identity());
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        if f.is_order_preserving() && g.is_order_preserving() {
            prop_assert!(f.compose(&g).is_order_preserving());
            prop_assert!(f.inverse().is_order_preserving());
        }
    }

    #[test]
    fn commutation_is_construct_preservation(f in arb_map(), g in arb_map()) {
        let s = default_samples();
        let c = commutes(&f, &g);
        prop_assert_eq!(preserves_construct(&g, &f, &s).preserved, c);
        prop_assert_eq!(preserves_construct(&f, &g, &s).preserved, c);
        prop_assert_eq!(conjugate(&g, &f) == f, c);
    }

    #[test]
    fn shifts_form_an_abelian_group(a in arb_rational(), b in arb_rational()) {
        let (f, g) = (Shift::new(a.clone()), Shift::new(b));
        prop_assert!(commutes(f.map(), g.map()));
        prop_assert_eq!(f.compose(&g).map().clone(), f.map().compose(g.map()));
        prop_assert_eq!(f.compose(&f.inverse()), Shift::identity());
        let class = f.classify();
        prop_assert_ne!(class, Displacement::Mixed);
        // a shift with a fixed point is the identity
        if f.apply(&Rational::zero()) == Rational::zero() {
            prop_assert_eq!(class, Displacement::Identity);
        }
    }

    #[test]
    fn non_unit_slopes_are_mixed(a in arb_nonzero(), b in arb_rational()) {
        prop_assume!(a != Rational::one());
        prop_assert_eq!(classify_displacement(&AffineMap::new(a, b).unwrap()), Displacement::Mixed);
    }

    #[test]
    fn tiling_covers_exactly(t in arb_nonzero(), a in arb_rational(), k in 1i64..200) {
        let f = Shift::new(t);
        let tiling = tile_line(&f, &a, k).unwrap();
        prop_assert_eq!(tiling.tiles.len() as i64, 2 * k);
        prop_assert!(tiling.is_disjoint());
        prop_assert!(tiling.advances());
        prop_assert_eq!(tiling.union(), Some(tiling.expected_cover()));
        let laws = interval_laws(&f, &a);
        prop_assert!(laws.disjoint && laws.union_exact);
    }

    #[test]
    fn factorization_is_unique(x in arb_map(), t in arb_rational()) {
        let s = Shift::new(t);
        let h = factor_through_shift(&x, &s, Side::Left);
        prop_assert_eq!(s.map().compose(&h), x.clone());
        let h = factor_through_shift(&x, &s, Side::Right);
        prop_assert_eq!(h.compose(s.map()), x);
    }

    #[test]
    fn measure_is_translation_invariant(t in arb_nonzero(), lo in arb_rational(), w in arb_nonzero(), g in arb_rational()) {
        let f = Shift::new(t.abs());
        let i = Interval::new(lo.clone(), &lo + w.abs()).unwrap();
        let (c1, r1) = shift_measure(&f, &i).unwrap();
        let (c2, r2) = shift_measure(&f, &i.translate(&g)).unwrap();
        prop_assert_eq!(c1, c2);
        prop_assert_eq!(r1.width(), r2.width());
        prop_assert!(r1.width() < t.abs());
    }

    #[test]
    fn points_and_shifts_correspond(z in arb_rational(), x in arb_rational(), y in arb_rational()) {
        let c = PointShift::new(z);
        prop_assert_eq!(c.to_point(&c.to_shift(&x)), x.clone());
        let (f, g) = (c.to_shift(&x), c.to_shift(&y));
        prop_assert_eq!(f.dominates(&g), x >= y);
    }
}
