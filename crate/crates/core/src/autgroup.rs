//! Automorphism groups of finite structures and their orbits on tuples and
//! subsets.

use std::collections::HashMap;
use std::fmt;

use crate::structures::FiniteStructure;

/// Largest universe the backtracking search accepts by default.
pub const DEFAULT_CAP: usize = 10;
/// Largest universe the exhaustive permutation scan accepts.
pub const BRUTE_FORCE_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutError {
    #[error("universe of size {size} exceeds the search cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("arity {n} out of range 1..={size}")]
    ArityOutOfRange { n: usize, size: usize },
    #[error("not a bijection on {size} positions")]
    NotBijection { size: usize },
    #[error("permutation does not preserve relation `{relation}`")]
    NotAutomorphism { relation: String },
}

/// An automorphism, stored as the image of each universe position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// Checks that `images` is a bijection preserving every relation of `s`.
    pub fn automorphism(s: &FiniteStructure, images: Vec<usize>) -> Result<Self, AutError> {
        let n = s.size();
        let mut hit = vec![false; n];
        if images.len() != n {
            return Err(AutError::NotBijection { size: n });
        }
        for &i in &images {
            if i >= n || std::mem::replace(&mut hit[i], true) {
                return Err(AutError::NotBijection { size: n });
            }
        }
        let p = Permutation(images);
        for (r, (name, _)) in s.signature().iter().enumerate() {
            if s.tuples(r).iter().any(|t| !s.holds(r, &p.apply_tuple(t))) {
                return Err(AutError::NotAutomorphism {
                    relation: name.to_string(),
                });
            }
        }
        Ok(p)
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn apply_tuple(&self, t: &[usize]) -> Vec<usize> {
        t.iter().map(|&i| self.0[i]).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Cycle notation over element names, e.g. `(a b c)`; `()` for identity.
    pub fn cycles(&self, s: &FiniteStructure) -> String {
        let mut seen = vec![false; self.0.len()];
        let mut out = String::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(s.element_name(i));
                i = self.0[i];
            }
            out.push_str(&format!("({})", cyc.join(" ")));
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Per-element invariant used to prune candidate images: for every relation
/// and argument slot, how many tuples have the element in that slot, plus
/// how many tuples are constant at the element.
fn element_profiles(s: &FiniteStructure) -> Vec<Vec<usize>> {
    let n = s.size();
    let mut prof = vec![Vec::new(); n];
    for (r, (_, arity)) in s.signature().iter().enumerate() {
        let mut counts = vec![vec![0usize; arity + 1]; n];
        for t in s.tuples(r) {
            for (slot, &e) in t.iter().enumerate() {
                counts[e][slot] += 1;
            }
            if t.iter().all(|&e| e == t[0]) {
                counts[t[0]][arity] += 1;
            }
        }
        for (e, c) in counts.into_iter().enumerate() {
            prof[e].extend(c);
        }
    }
    prof
}

fn next_tuple(t: &mut [usize], radix: usize) -> bool {
    for d in t.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Checks every tuple over the assigned prefix `0..=last` that mentions `last`.
fn consistent(s: &FiniteStructure, map: &[usize], last: usize) -> bool {
    for (r, (_, arity)) in s.signature().iter().enumerate() {
        let mut t = vec![0usize; arity];
        loop {
            if t.contains(&last) {
                let img: Vec<usize> = t.iter().map(|&i| map[i]).collect();
                if s.holds(r, &t) != s.holds(r, &img) {
                    return false;
                }
            }
            if !next_tuple(&mut t, last + 1) {
                break;
            }
        }
    }
    true
}

/// The full automorphism group by backtracking over partial maps, in
/// lexicographic order of image sequences.
pub fn automorphisms(s: &FiniteStructure) -> Result<Vec<Permutation>, AutError> {
    automorphisms_capped(s, DEFAULT_CAP)
}

pub fn automorphisms_capped(s: &FiniteStructure, cap: usize) -> Result<Vec<Permutation>, AutError> {
    let n = s.size();
    if n > cap {
        return Err(AutError::CapExceeded { size: n, cap });
    }
    let prof = element_profiles(s);
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(s, &prof, &mut map, &mut used, &mut out);
    Ok(out)
}

fn extend(
    s: &FiniteStructure,
    prof: &[Vec<usize>],
    map: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Permutation>,
) {
    let i = map.len();
    if i == s.size() {
        out.push(Permutation(map.clone()));
        return;
    }
    for j in 0..s.size() {
        if used[j] || prof[i] != prof[j] {
            continue;
        }
        map.push(j);
        if consistent(s, map, i) {
            used[j] = true;
            extend(s, prof, map, used, out);
            used[j] = false;
        }
        map.pop();
    }
}

/// Exhaustive scan of all `|U|!` permutations; the reference for
/// [`automorphisms`] on small universes.
pub fn automorphisms_brute_force(s: &FiniteStructure) -> Result<Vec<Permutation>, AutError> {
    let n = s.size();
    if n > BRUTE_FORCE_CAP {
        return Err(AutError::CapExceeded {
            size: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        if let Ok(p) = Permutation::automorphism(s, perm.clone()) {
            out.push(p);
        }
        if !next_permutation(&mut perm) {
            return Ok(out);
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitMode {
    /// Ordered tuples of pairwise-distinct elements.
    Tuples,
    /// Unordered subsets.
    Subsets,
}

/// Orbits of the automorphism group on distinct `n`-tuples or `n`-subsets.
/// Classes are ordered by their least member; members are in lexicographic
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub arity: usize,
    pub mode: OrbitMode,
    pub classes: Vec<Vec<Vec<usize>>>,
}

impl OrbitPartition {
    pub fn class_of(&self, item: &[usize]) -> Option<usize> {
        let key = match self.mode {
            OrbitMode::Tuples => item.to_vec(),
            OrbitMode::Subsets => {
                let mut k = item.to_vec();
                k.sort_unstable();
                k
            }
        };
        self.classes.iter().position(|c| c.binary_search(&key).is_ok())
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// All `n`-tuples of pairwise-distinct positions below `size`, lexicographic.
pub fn distinct_tuples(size: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(size: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..size {
            if !cur.contains(&e) {
                cur.push(e);
                go(size, n, cur, out);
                cur.pop();
            }
        }
    }
    go(size, n, &mut cur, &mut out);
    out
}

/// All `n`-subsets of `0..size` as increasing sequences, lexicographic.
pub fn subsets(size: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(start: usize, size: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in start..size {
            cur.push(e);
            go(e + 1, size, n, cur, out);
            cur.pop();
        }
    }
    go(0, size, n, &mut cur, &mut out);
    out
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn orbit_partition(s: &FiniteStructure, n: usize, mode: OrbitMode) -> Result<OrbitPartition, AutError> {
    if n == 0 || n > s.size() {
        return Err(AutError::ArityOutOfRange { n, size: s.size() });
    }
    let group = automorphisms(s)?;
    Ok(orbits_under(&group, s.size(), n, mode))
}

/// Orbit partition under an explicitly given set of permutations.
pub fn orbits_under(group: &[Permutation], size: usize, n: usize, mode: OrbitMode) -> OrbitPartition {
    let items = match mode {
        OrbitMode::Tuples => distinct_tuples(size, n),
        OrbitMode::Subsets => subsets(size, n),
    };
    let index: HashMap<&[usize], usize> = items.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut parent: Vec<usize> = (0..items.len()).collect();
    for (i, item) in items.iter().enumerate() {
        for g in group {
            let mut img = g.apply_tuple(item);
            if mode == OrbitMode::Subsets {
                img.sort_unstable();
            }
            let j = index[img.as_slice()];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<Vec<Vec<usize>>> = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let root = find(&mut parent, i);
        let c = *class_of_root.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(item.clone());
    }
    OrbitPartition {
        arity: n,
        mode,
        classes,
    }
}

/// True iff the automorphism group is transitive on `n`-subsets.
pub fn is_n_set_transitive(s: &FiniteStructure, n: usize) -> Result<bool, AutError> {
    Ok(orbit_partition(s, n, OrbitMode::Subsets)?.len() <= 1)
}
