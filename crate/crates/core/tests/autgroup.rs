mod common;

use proptest::prelude::*;
use unilocal::autgroup::{
    automorphisms, automorphisms_brute_force, automorphisms_capped, is_n_set_transitive, orbit_partition, AutError,
    OrbitMode, Permutation,
};

#[test]
fn cycle_group_is_rotations() {
    let s = common::cycle(5);
    let g = automorphisms(&s).unwrap();
    assert_eq!(g.len(), 5);
    assert!(g.iter().all(|p| (0..5).all(|i| p.apply(i) == (i + p.apply(0)) % 5)));
    assert_eq!(g[1].cycles(&s), "(e0 e1 e2 e3 e4)");
}

#[test]
fn chain_is_rigid_and_antichain_symmetric() {
    assert_eq!(automorphisms(&common::chain(6)).unwrap().len(), 1);
    assert_eq!(automorphisms(&common::antichain(5)).unwrap().len(), 120);
    assert_eq!(automorphisms(&common::cycles(2, 3)).unwrap().len(), 18);
}

#[test]
fn cap_and_checked_construction() {
    let s = common::antichain(4);
    assert!(matches!(automorphisms_capped(&s, 3), Err(AutError::CapExceeded { size: 4, cap: 3 })));
    let c = common::chain(3);
    assert!(Permutation::automorphism(&c, vec![1, 0, 2]).is_err());
    assert!(Permutation::automorphism(&c, vec![0, 0, 2]).is_err());
    assert!(Permutation::automorphism(&c, vec![0, 1, 2]).unwrap().is_identity());
}

#[test]
fn orbits_of_cycles() {
    let s = common::cycle(5);
    let p = orbit_partition(&s, 2, OrbitMode::Subsets).unwrap();
    assert_eq!(p.len(), 2);
    assert!(is_n_set_transitive(&s, 1).unwrap());
    assert!(!is_n_set_transitive(&s, 2).unwrap());
    let t = orbit_partition(&s, 2, OrbitMode::Tuples).unwrap();
    assert_eq!(t.len(), 4);
}

proptest! {
    #[test]
    fn backtracking_matches_brute_force(s in common::arb_structure(6)) {
        prop_assert_eq!(automorphisms(&s).unwrap(), automorphisms_brute_force(&s).unwrap());
    }

    #[test]
    fn automorphisms_form_a_group(s in common::arb_structure(5)) {
        let g = automorphisms(&s).unwrap();
        prop_assert!(g[0].is_identity());
        for a in &g {
            prop_assert!(g.contains(&a.inverse()));
            for b in &g {
                prop_assert!(g.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn orbits_partition_and_are_invariant(s in common::arb_structure(5), n in 1usize..=3) {
        prop_assume!(n <= s.size());
        let g = automorphisms(&s).unwrap();
        for mode in [OrbitMode::Tuples, OrbitMode::Subsets] {
            let p = orbit_partition(&s, n, mode).unwrap();
            let total: usize = p.classes.iter().map(Vec::len).sum();
            let all = match mode {
                OrbitMode::Tuples => unilocal::autgroup::distinct_tuples(s.size(), n).len(),
                OrbitMode::Subsets => unilocal::autgroup::subsets(s.size(), n).len(),
            };
            prop_assert_eq!(total, all);
            for class in &p.classes {
                for t in class {
                    for a in &g {
                        prop_assert_eq!(p.class_of(&a.apply_tuple(t)), p.class_of(t));
                    }
                }
            }
        }
    }
}
