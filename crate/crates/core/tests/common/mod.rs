//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use unilocal::structures::FiniteStructure;

/// One representative per isomorphism class of binary relations on
/// `n` points (loops allowed), as `n*n`-bit adjacency masks with bit
/// `i*n + j` set iff `(i, j)` is in the relation. The representative is the
/// numerically least mask of its class.
pub fn binary_relations_up_to_iso(n: usize) -> Vec<u64> {
    assert!(n <= 5, "corpus generation is sized for n <= 5");
    let bits = n * n;
    let perms = permutations(n);
    let chunks = bits.div_ceil(8);
    // table[p][c][byte] = image of `byte` placed at chunk `c` under perm `p`
    let table: Vec<Vec<[u32; 256]>> = perms
        .iter()
        .map(|p| {
            (0..chunks)
                .map(|c| {
                    let mut t = [0u32; 256];
                    for (byte, slot) in t.iter_mut().enumerate() {
                        let mut img = 0u32;
                        for b in 0..8 {
                            let bit = c * 8 + b;
                            if bit < bits && byte >> b & 1 == 1 {
                                let (i, j) = (bit / n, bit % n);
                                img |= 1 << (p[i] * n + p[j]);
                            }
                        }
                        *slot = img;
                    }
                    t
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    'mask: for m in 0u64..(1u64 << bits) {
        for t in &table[1..] {
            let mut img = 0u32;
            for (c, tc) in t.iter().enumerate() {
                img |= tc[(m >> (8 * c)) as usize & 0xff];
            }
            if (img as u64) < m {
                continue 'mask;
            }
        }
        out.push(m);
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn go(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(k + 1, p, out);
            p.swap(k, i);
        }
    }
    go(0, &mut p, &mut out);
    out.sort();
    out
}

pub fn from_mask(n: usize, mask: u64) -> FiniteStructure {
    FiniteStructure::binary("e", n, |i, j| mask >> (i * n + j) & 1 == 1)
}

pub fn chain(n: usize) -> FiniteStructure {
    FiniteStructure::binary("lt", n, |i, j| i < j)
}

pub fn cycle(n: usize) -> FiniteStructure {
    FiniteStructure::binary("e", n, |i, j| j == (i + 1) % n)
}

pub fn antichain(n: usize) -> FiniteStructure {
    FiniteStructure::binary("e", n, |_, _| false)
}

/// Disjoint union of `copies` directed cycles of length `len`.
pub fn cycles(copies: usize, len: usize) -> FiniteStructure {
    FiniteStructure::binary("e", copies * len, |i, j| i / len == j / len && j % len == (i % len + 1) % len)
}

/// Disjoint union of `copies` chains of length `len`.
pub fn chains(copies: usize, len: usize) -> FiniteStructure {
    FiniteStructure::binary("lt", copies * len, |i, j| i / len == j / len && i < j)
}

/// Random structures: up to five elements, one to three relations of
/// arity one to three.
pub fn arb_structure(max_size: usize) -> impl proptest::strategy::Strategy<Value = FiniteStructure> {
    use proptest::prelude::*;
    use std::collections::BTreeSet;
    use unilocal::structures::Signature;
    (1..=max_size, proptest::collection::vec(1usize..=3, 1..=3)).prop_flat_map(|(n, arities)| {
        let rels: Vec<_> = arities
            .iter()
            .map(|&k| proptest::collection::vec(proptest::collection::vec(0..n, k), 0..8))
            .collect();
        (Just(n), Just(arities), rels).prop_map(|(n, arities, rels)| {
            let mut sig = Signature::new();
            for (i, &k) in arities.iter().enumerate() {
                sig.add(format!("r{i}"), k);
            }
            let universe = (0..n).map(|i| format!("v{i}")).collect();
            let sets = rels.into_iter().map(|ts| ts.into_iter().collect::<BTreeSet<_>>()).collect();
            FiniteStructure::from_indices(sig, universe, sets).unwrap()
        })
    })
}

pub fn arb_rational() -> impl proptest::strategy::Strategy<Value = unilocal::Rational> {
    use proptest::prelude::*;
    (-500i64..=500, 1i64..=60).prop_map(|(n, d)| unilocal::Rational::new(n, d))
}

pub fn arb_nonzero() -> impl proptest::strategy::Strategy<Value = unilocal::Rational> {
    use proptest::prelude::*;
    (1i64..=500, 1i64..=60, any::<bool>()).prop_map(|(n, d, neg)| unilocal::Rational::new(if neg { -n } else { n }, d))
}
