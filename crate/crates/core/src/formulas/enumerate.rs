//! Bounded-height enumeration of constant-free formulas.
//!
//! Free variables are `x1..xn`; bound variables come from the pool
//! `y1..yd` and are assigned by nesting level, so a quantifier sitting under
//! `L` other quantifiers always binds `y{L+1}`. This fixes one
//! representative per alpha-equivalence class. Syntactic pruning removes
//! commuted and idempotent conjunctions/disjunctions, `a -> a`, double
//! negation and vacuous quantifiers.
//!
//! When a structure is attached, every generated formula also carries its
//! truth table over its own free variables, and with `dedup` enabled only
//! the first formula per (free variables, table) survives at each nesting
//! level. Replacing a subformula by an earlier equivalent one never raises
//! height, so the set of top-level tables reachable at each height is
//! unchanged.

use std::collections::HashSet;
use std::ops::ControlFlow;

use super::Formula;
use crate::structures::{FiniteStructure, Signature};

type Emit<'a> = dyn FnMut(u32, Vec<u64>, &dyn Fn() -> Formula) -> ControlFlow<()> + 'a;

/// A top-level formula with exactly the free variables `x1..xn`.
#[derive(Debug, Clone)]
pub struct EnumeratedFormula {
    pub formula: Formula,
    pub height: usize,
    /// Satisfying assignments of `x1..xn` when a structure is attached.
    pub table: Option<TruthTable>,
}

/// Truth table of an `n`-ary formula over a universe of `size` elements;
/// tuple `(t1..tn)` lives at bit `t1 + t2*size + ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    size: usize,
    arity: usize,
    bits: Vec<u64>,
}

impl TruthTable {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        debug_assert_eq!(tuple.len(), self.arity);
        let mut idx = 0;
        for &t in tuple.iter().rev() {
            idx = idx * self.size + t;
        }
        get_bit(&self.bits, idx)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    And,
    Or,
    Implies,
}

struct Node {
    formula: Formula,
    free: u32,
    table: Vec<u64>,
}

fn get_bit(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn words(len: usize) -> usize {
    len.div_ceil(64).max(1)
}

/// Enumerates formulas with exactly the free variables `x1..xn` and AST
/// height at most `depth`.
pub struct FormulaEnumerator<'a> {
    signature: &'a Signature,
    n: usize,
    depth: usize,
    structure: Option<&'a FiniteStructure>,
    dedup: bool,
}

impl<'a> FormulaEnumerator<'a> {
    pub fn new(signature: &'a Signature, n: usize, depth: usize) -> Self {
        assert!(n >= 1, "at least one free variable");
        assert!(n + depth <= 31, "variable budget exceeded");
        FormulaEnumerator {
            signature,
            n,
            depth,
            structure: None,
            dedup: false,
        }
    }

    /// Attaches truth tables computed in `s`.
    pub fn with_structure(mut self, s: &'a FiniteStructure) -> Self {
        assert_eq!(s.signature(), self.signature, "signature mismatch");
        self.structure = Some(s);
        self
    }

    /// Keeps one formula per truth table; requires a structure.
    pub fn semantic_dedup(mut self, on: bool) -> Self {
        assert!(!on || self.structure.is_some(), "semantic dedup needs a structure");
        self.dedup = on;
        self
    }

    fn var_name(&self, v: usize) -> String {
        if v < self.n {
            format!("x{}", v + 1)
        } else {
            format!("y{}", v - self.n + 1)
        }
    }

    fn bound_var(&self, level: usize) -> usize {
        self.n + level
    }

    /// Variables visible at nesting `level`, newest binder first.
    fn context(&self, level: usize) -> Vec<usize> {
        (0..level)
            .rev()
            .map(|l| self.bound_var(l))
            .chain(0..self.n)
            .collect()
    }

    pub fn collect(&self) -> Vec<EnumeratedFormula> {
        let mut out = Vec::new();
        self.for_each(|f| {
            out.push(f.clone());
            ControlFlow::<()>::Continue(())
        });
        out
    }

    /// Visits top-level formulas in enumeration order until `visit` breaks.
    pub fn for_each<B>(&self, mut visit: impl FnMut(&EnumeratedFormula) -> ControlFlow<B>) -> Option<B> {
        let d = self.depth;
        let top_mask: u32 = (1 << self.n) - 1;
        let mut store: Vec<Vec<Node>> = (0..=d).map(|_| Vec::new()).collect();
        // seg[level][h] = start of height-h nodes in store[level]
        let mut seg: Vec<Vec<usize>> = (0..=d).map(|_| Vec::new()).collect();
        let mut seen: Vec<HashSet<(u32, Vec<u64>)>> = (0..=d).map(|_| HashSet::new()).collect();

        for h in 0..=d {
            for level in 0..=(d - h) {
                let keep = level > 0 || h < d;
                let mut fresh = Vec::new();
                let mut stop = None;
                self.candidates(level, h, &store, &seg, &mut |free, table, build| {
                    if self.dedup && !seen[level].insert((free, table.clone())) {
                        return ControlFlow::Continue(());
                    }
                    let formula = build();
                    if level == 0 && free == top_mask {
                        let item = EnumeratedFormula {
                            formula: formula.clone(),
                            height: h,
                            table: self.structure.map(|s| TruthTable {
                                size: s.size(),
                                arity: self.n,
                                bits: table.clone(),
                            }),
                        };
                        if let ControlFlow::Break(b) = visit(&item) {
                            stop = Some(b);
                            return ControlFlow::Break(());
                        }
                    }
                    if keep {
                        fresh.push(Node { formula, free, table });
                    }
                    ControlFlow::Continue(())
                });
                if stop.is_some() {
                    return stop;
                }
                seg[level].push(store[level].len());
                store[level].extend(fresh);
            }
        }
        None
    }

    /// Generates height-`h` candidates at nesting `level` in canonical order.
    fn candidates(
        &self,
        level: usize,
        h: usize,
        store: &[Vec<Node>],
        seg: &[Vec<usize>],
        emit: &mut Emit<'_>,
    ) {
        let _ = self.try_candidates(level, h, store, seg, emit);
    }

    fn try_candidates(
        &self,
        level: usize,
        h: usize,
        store: &[Vec<Node>],
        seg: &[Vec<usize>],
        emit: &mut Emit<'_>,
    ) -> ControlFlow<()> {
        let tables = self.structure.map(Tables::new);
        if h == 0 {
            let ctx = self.context(level);
            for (ri, (name, arity)) in self.signature.iter().enumerate() {
                let mut args = vec![0usize; arity];
                loop {
                    let vars: Vec<usize> = args.iter().map(|&i| ctx[i]).collect();
                    let free = vars.iter().fold(0u32, |m, &v| m | 1 << v);
                    let table = tables.as_ref().map_or_else(Vec::new, |t| t.atom(ri, &vars));
                    emit(free, table, &|| Formula::Atom {
                        relation: name.to_string(),
                        args: vars.iter().map(|&v| self.var_name(v)).collect(),
                    })?;
                    if !advance(&mut args, ctx.len()) {
                        break;
                    }
                }
            }
            for i in 0..ctx.len() {
                for j in i..ctx.len() {
                    let (a, b) = (ctx[i], ctx[j]);
                    let free = 1 << a | 1 << b;
                    let table = tables.as_ref().map_or_else(Vec::new, |t| t.equal(a, b));
                    emit(free, table, &|| Formula::Equal(self.var_name(a), self.var_name(b)))?;
                }
            }
            return ControlFlow::Continue(());
        }

        let nodes = &store[level];
        let total = nodes.len();
        let last = seg[level][h - 1];

        for node in &nodes[last..] {
            if matches!(node.formula, Formula::Not(_)) {
                continue;
            }
            let table = tables.as_ref().map_or_else(Vec::new, |t| t.not(node.free, &node.table));
            emit(node.free, table, &|| Formula::not(node.formula.clone()))?;
        }
        for op in [Op::And, Op::Or] {
            for i in 0..total {
                for j in last.max(i + 1)..total {
                    let (a, b) = (&nodes[i], &nodes[j]);
                    let free = a.free | b.free;
                    let table = tables
                        .as_ref()
                        .map_or_else(Vec::new, |t| t.binary(op, a.free, &a.table, b.free, &b.table));
                    emit(free, table, &|| match op {
                        Op::And => Formula::and(a.formula.clone(), b.formula.clone()),
                        _ => Formula::or(a.formula.clone(), b.formula.clone()),
                    })?;
                }
            }
        }
        for i in 0..total {
            for j in 0..total {
                if i == j || (i < last && j < last) {
                    continue;
                }
                let (a, b) = (&nodes[i], &nodes[j]);
                let free = a.free | b.free;
                let table = tables
                    .as_ref()
                    .map_or_else(Vec::new, |t| t.binary(Op::Implies, a.free, &a.table, b.free, &b.table));
                emit(free, table, &|| Formula::implies(a.formula.clone(), b.formula.clone()))?;
            }
        }
        if level < self.depth {
            let v = self.bound_var(level);
            let inner = &store[level + 1];
            let start = seg[level + 1][h - 1];
            let end = seg[level + 1].get(h).copied().unwrap_or(inner.len());
            for exists in [true, false] {
                for body in &inner[start..end] {
                    if body.free & 1 << v == 0 {
                        continue;
                    }
                    let free = body.free & !(1 << v);
                    let table = tables
                        .as_ref()
                        .map_or_else(Vec::new, |t| t.quantify(exists, v, body.free, &body.table));
                    let name = self.var_name(v);
                    emit(free, table, &|| {
                        if exists {
                            Formula::exists(&name, body.formula.clone())
                        } else {
                            Formula::forall(&name, body.formula.clone())
                        }
                    })?;
                }
            }
        }
        ControlFlow::Continue(())
    }
}

/// Advances a mixed-radix counter; false on wrap-around.
fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Truth tables over the free variables of a node, indexed with the
/// lowest-numbered variable as the least significant digit.
struct Tables<'s> {
    s: &'s FiniteStructure,
    size: usize,
}

impl<'s> Tables<'s> {
    fn new(s: &'s FiniteStructure) -> Self {
        Tables { s, size: s.size() }
    }

    fn len(&self, mask: u32) -> usize {
        self.size.pow(mask.count_ones())
    }

    /// Stride of each variable of `outer` inside the table of `inner`.
    fn strides(&self, outer: u32, inner: u32) -> Vec<usize> {
        let mut out = Vec::new();
        for v in 0..32 {
            if outer & 1 << v != 0 {
                if inner & 1 << v != 0 {
                    let rank = (inner & ((1u32 << v) - 1)).count_ones();
                    out.push(self.size.pow(rank));
                } else {
                    out.push(0);
                }
            }
        }
        out
    }

    /// Walks every assignment of `mask`, passing the linear index and the
    /// matching index in each projected table.
    fn walk<const K: usize>(&self, mask: u32, strides: [&[usize]; K], mut f: impl FnMut(usize, [usize; K])) {
        let k = mask.count_ones() as usize;
        let n = self.size;
        let mut digits = vec![0usize; k];
        let mut idx = [0usize; K];
        for lin in 0..self.len(mask) {
            f(lin, idx);
            for p in 0..k {
                digits[p] += 1;
                for (i, s) in strides.iter().enumerate() {
                    idx[i] += s[p];
                }
                if digits[p] < n {
                    break;
                }
                digits[p] = 0;
                for (i, s) in strides.iter().enumerate() {
                    idx[i] -= s[p] * n;
                }
            }
        }
    }

    fn atom(&self, rel: usize, vars: &[usize]) -> Vec<u64> {
        let mask = vars.iter().fold(0u32, |m, &v| m | 1 << v);
        let order: Vec<usize> = (0..32).filter(|v| mask & 1 << v != 0).collect();
        let pos: Vec<usize> = vars.iter().map(|v| order.iter().position(|o| o == v).unwrap()).collect();
        let mut bits = vec![0u64; words(self.len(mask))];
        let mut digits = vec![0usize; order.len()];
        let mut tuple = vec![0usize; vars.len()];
        for lin in 0..self.len(mask) {
            for (t, &p) in tuple.iter_mut().zip(&pos) {
                *t = digits[p];
            }
            if self.s.holds(rel, &tuple) {
                set_bit(&mut bits, lin);
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < self.size {
                    break;
                }
                *d = 0;
            }
        }
        bits
    }

    fn equal(&self, a: usize, b: usize) -> Vec<u64> {
        let mask = 1u32 << a | 1 << b;
        let mut bits = vec![0u64; words(self.len(mask))];
        if a == b {
            for i in 0..self.size {
                set_bit(&mut bits, i);
            }
        } else {
            for i in 0..self.size {
                set_bit(&mut bits, i + i * self.size);
            }
        }
        bits
    }

    fn not(&self, mask: u32, t: &[u64]) -> Vec<u64> {
        let len = self.len(mask);
        let mut bits: Vec<u64> = t.iter().map(|w| !w).collect();
        let tail = len % 64;
        if tail != 0 {
            *bits.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
        if len == 0 {
            bits.iter_mut().for_each(|w| *w = 0);
        }
        bits
    }

    fn binary(&self, op: Op, am: u32, a: &[u64], bm: u32, b: &[u64]) -> Vec<u64> {
        let mask = am | bm;
        let sa = self.strides(mask, am);
        let sb = self.strides(mask, bm);
        let mut bits = vec![0u64; words(self.len(mask))];
        self.walk(mask, [&sa, &sb], |lin, [ia, ib]| {
            let (x, y) = (get_bit(a, ia), get_bit(b, ib));
            let r = match op {
                Op::And => x && y,
                Op::Or => x || y,
                Op::Implies => !x || y,
            };
            if r {
                set_bit(&mut bits, lin);
            }
        });
        bits
    }

    fn quantify(&self, exists: bool, var: usize, mask: u32, t: &[u64]) -> Vec<u64> {
        let out = mask & !(1 << var);
        let sr = self.strides(mask, out);
        let mut hit = vec![0u64; words(self.len(out))];
        // exists: some value satisfies; forall: no value falsifies
        self.walk(mask, [&sr], |lin, [ir]| {
            if get_bit(t, lin) == exists {
                set_bit(&mut hit, ir);
            }
        });
        if exists {
            hit
        } else {
            self.not(out, &hit)
        }
    }
}

/// All formulas with exactly the free variables `x1..xn` and height at most
/// `depth`, without semantic deduplication.
pub fn enumerate_formulas(signature: &Signature, n: usize, depth: usize) -> Vec<Formula> {
    FormulaEnumerator::new(signature, n, depth)
        .collect()
        .into_iter()
        .map(|e| e.formula)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{evaluate_tuple, free_var_names, parse_formula};

    fn lt() -> Signature {
        Signature::new().with("lt", 2)
    }

    #[test]
    fn depth_zero_atoms() {
        let got: Vec<String> = enumerate_formulas(&lt(), 1, 0).iter().map(|f| f.to_string()).collect();
        assert_eq!(got, ["lt(x1,x1)", "x1 = x1"]);
    }

    #[test]
    fn depth_two_contains_both_neighbours() {
        let all = enumerate_formulas(&lt(), 1, 2);
        let sig = lt();
        for text in ["exists y1. lt(y1,x1)", "exists y1. lt(x1,y1)"] {
            let f = parse_formula(text, &sig).unwrap();
            assert!(all.contains(&f), "{text}");
        }
        assert!(all.iter().all(|f| f.height() <= 2));
        let names: HashSet<String> = ["x1".to_string()].into();
        assert!(all.iter().all(|f| f.free_vars().into_iter().collect::<HashSet<_>>() == names));
    }

    #[test]
    fn empty_signature_only_equalities() {
        let all = enumerate_formulas(&Signature::new(), 1, 1);
        assert_eq!(all[0].to_string(), "x1 = x1");
        assert!(all.contains(&Formula::not(Formula::eq("x1", "x1"))));
        fn no_atoms(f: &Formula) -> bool {
            match f {
                Formula::Atom { .. } => false,
                Formula::Equal(..) => true,
                Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => no_atoms(g),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => no_atoms(a) && no_atoms(b),
            }
        }
        assert!(all.iter().all(no_atoms));
    }

    #[test]
    fn no_duplicates_and_commutativity_pruned() {
        let all = enumerate_formulas(&lt(), 1, 2);
        let set: HashSet<&Formula> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        for f in &all {
            if let Formula::And(a, b) | Formula::Or(a, b) = f {
                let swapped = match f {
                    Formula::And(..) => Formula::and((**b).clone(), (**a).clone()),
                    _ => Formula::or((**b).clone(), (**a).clone()),
                };
                assert!(!set.contains(&swapped) || a == b, "{f}");
            }
        }
    }

    #[test]
    fn deterministic_order() {
        assert_eq!(enumerate_formulas(&lt(), 2, 2), enumerate_formulas(&lt(), 2, 2));
    }

    #[test]
    fn tables_match_direct_evaluation() {
        let s = FiniteStructure::binary("lt", 3, |i, j| (j + 3 - i) % 3 == 1 || (i == 0 && j == 0));
        let sig = s.signature().clone();
        let vars = free_var_names(2);
        let items = FormulaEnumerator::new(&sig, 2, 2).with_structure(&s).collect();
        assert!(items.len() > 100);
        for e in items.iter().step_by(7) {
            let table = e.table.as_ref().unwrap();
            for a in 0..3 {
                for b in 0..3 {
                    let direct = evaluate_tuple(&s, &e.formula, &vars, &[a, b]).unwrap();
                    assert_eq!(table.contains(&[a, b]), direct, "{} at ({a},{b})", e.formula);
                }
            }
        }
    }

    #[test]
    fn dedup_preserves_reachable_tables() {
        let s = FiniteStructure::binary("lt", 3, |i, j| i < j);
        let sig = s.signature().clone();
        let plain: HashSet<TruthTable> = FormulaEnumerator::new(&sig, 1, 2)
            .with_structure(&s)
            .collect()
            .into_iter()
            .map(|e| e.table.unwrap())
            .collect();
        let deduped = FormulaEnumerator::new(&sig, 1, 2)
            .with_structure(&s)
            .semantic_dedup(true)
            .collect();
        let tables: HashSet<TruthTable> = deduped.iter().map(|e| e.table.clone().unwrap()).collect();
        assert_eq!(tables.len(), deduped.len());
        assert_eq!(tables, plain);
    }
}
