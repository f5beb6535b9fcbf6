//! The two n-uniformity deciders.
//!
//! The schema decider scans constant-free formulas `A(x1..xn)` up to a
//! height bound and looks for one that holds on some tuple of pairwise
//! distinct elements while some other distinct tuple satisfies it under no
//! rearrangement of its entries. The orbit decider asks whether the
//! automorphism group is transitive on `n`-element subsets. On a finite
//! structure every constant-free definable relation is a union of orbits,
//! so the orbit verdict is the limit of the schema verdict as the height
//! bound grows.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::autgroup::{self, orbit_partition, subsets, AutError, OrbitMode};
use crate::formulas::{evaluate_tuple, free_var_names, EvalError, Formula, FormulaEnumerator};
use crate::structures::FiniteStructure;

/// Upper bound on truth-table length (`|U|^(n+depth)`) for the schema scan.
pub const TABLE_LIMIT: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UniformityError {
    #[error("arity {n} out of range 1..={size}")]
    ArityOutOfRange { n: usize, size: usize },
    #[error("depth {depth} too large for arity {n} on {size} elements")]
    DepthOutOfRange { depth: usize, n: usize, size: usize },
    #[error("tuples have different sizes ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("tuple must list distinct elements of the universe")]
    BadTuple,
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    Schema { depth: usize },
    Orbit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Uniform,
    /// `formula` holds at `witness`; no rearrangement of `violating` satisfies it.
    Formula {
        formula: Formula,
        witness: Vec<usize>,
        violating: Vec<usize>,
    },
    /// Two `n`-subsets lying in different automorphism orbits.
    Orbits { first: Vec<usize>, second: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityVerdict {
    pub method: Method,
    pub n: usize,
    pub outcome: Outcome,
}

impl UniformityVerdict {
    pub fn is_uniform(&self) -> bool {
        self.outcome == Outcome::Uniform
    }

    /// Re-checks a counterexample from scratch. Uniform verdicts certify
    /// trivially.
    pub fn certify(&self, s: &FiniteStructure) -> Result<bool, UniformityError> {
        match &self.outcome {
            Outcome::Uniform => Ok(true),
            Outcome::Formula {
                formula,
                witness,
                violating,
            } => {
                let vars = free_var_names(self.n);
                if !pairwise_distinct(witness, s.size()) || !pairwise_distinct(violating, s.size()) {
                    return Ok(false);
                }
                if !evaluate_tuple(s, formula, &vars, witness)? {
                    return Ok(false);
                }
                for arr in arrangements(violating) {
                    if evaluate_tuple(s, formula, &vars, &arr)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Outcome::Orbits { first, second } => {
                let p = orbit_partition(s, self.n, OrbitMode::Subsets)?;
                Ok(p.class_of(first).is_some() && p.class_of(first) != p.class_of(second))
            }
        }
    }
}

fn pairwise_distinct(t: &[usize], size: usize) -> bool {
    t.iter().enumerate().all(|(i, &a)| a < size && !t[..i].contains(&a))
}

/// Every ordering of the entries of `t`.
pub fn arrangements(t: &[usize]) -> Vec<Vec<usize>> {
    if t.len() <= 1 {
        return vec![t.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..t.len() {
        let mut rest = t.to_vec();
        let head = rest.remove(i);
        for mut tail in arrangements(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn check_range(s: &FiniteStructure, n: usize, depth: usize) -> Result<(), UniformityError> {
    if n == 0 || n > s.size() {
        return Err(UniformityError::ArityOutOfRange { n, size: s.size() });
    }
    let vars = (n + depth) as u32;
    if n + depth > 16 || s.size().checked_pow(vars).is_none_or(|len| len > TABLE_LIMIT) {
        return Err(UniformityError::DepthOutOfRange {
            depth,
            n,
            size: s.size(),
        });
    }
    Ok(())
}

/// Schema decider with semantic deduplication of the formula scan.
pub fn check_uniformity_schema(s: &FiniteStructure, n: usize, depth: usize) -> Result<UniformityVerdict, UniformityError> {
    check_uniformity_schema_with(s, n, depth, true)
}

/// Schema decider; `dedup` keeps one formula per truth table during the
/// scan. Either way the first violating formula in scan order is reported.
pub fn check_uniformity_schema_with(
    s: &FiniteStructure,
    n: usize,
    depth: usize,
    dedup: bool,
) -> Result<UniformityVerdict, UniformityError> {
    check_range(s, n, depth)?;
    let tuples = autgroup::distinct_tuples(s.size(), n);
    let sets: Vec<(Vec<usize>, Vec<Vec<usize>>)> = subsets(s.size(), n)
        .into_iter()
        .map(|set| {
            let arr = arrangements(&set);
            (set, arr)
        })
        .collect();
    let sig = s.signature().clone();
    let found = FormulaEnumerator::new(&sig, n, depth)
        .with_structure(s)
        .semantic_dedup(dedup)
        .for_each(|item| {
            let table = item.table.as_ref().expect("tables attached");
            let Some(witness) = tuples.iter().find(|t| table.contains(t)) else {
                return ControlFlow::Continue(());
            };
            for (set, arr) in &sets {
                if !arr.iter().any(|t| table.contains(t)) {
                    return ControlFlow::Break(Outcome::Formula {
                        formula: item.formula.clone(),
                        witness: witness.clone(),
                        violating: set.clone(),
                    });
                }
            }
            ControlFlow::Continue(())
        });
    Ok(UniformityVerdict {
        method: Method::Schema { depth },
        n,
        outcome: found.unwrap_or(Outcome::Uniform),
    })
}

/// Orbit decider: uniform iff the automorphism group is transitive on
/// `n`-subsets.
pub fn check_uniformity_orbits(s: &FiniteStructure, n: usize) -> Result<UniformityVerdict, UniformityError> {
    if n == 0 || n > s.size() {
        return Err(UniformityError::ArityOutOfRange { n, size: s.size() });
    }
    let p = orbit_partition(s, n, OrbitMode::Subsets)?;
    let outcome = if p.len() <= 1 {
        Outcome::Uniform
    } else {
        Outcome::Orbits {
            first: p.classes[0][0].clone(),
            second: p.classes[1][0].clone(),
        }
    };
    Ok(UniformityVerdict {
        method: Method::Orbit,
        n,
        outcome,
    })
}

/// First enumerated formula true on some arrangement of `t1` and on no
/// arrangement of `t2`.
pub fn distinguishing_formula(
    s: &FiniteStructure,
    t1: &[usize],
    t2: &[usize],
    max_depth: usize,
) -> Result<Option<Formula>, UniformityError> {
    if t1.len() != t2.len() {
        return Err(UniformityError::ArityMismatch(t1.len(), t2.len()));
    }
    if !pairwise_distinct(t1, s.size()) || !pairwise_distinct(t2, s.size()) {
        return Err(UniformityError::BadTuple);
    }
    let n = t1.len();
    check_range(s, n, max_depth)?;
    let (mut a, mut b) = (t1.to_vec(), t2.to_vec());
    a.sort_unstable();
    b.sort_unstable();
    if a == b {
        return Ok(None);
    }
    let (arr1, arr2) = (arrangements(&a), arrangements(&b));
    let sig = s.signature().clone();
    Ok(FormulaEnumerator::new(&sig, n, max_depth)
        .with_structure(s)
        .semantic_dedup(true)
        .for_each(|item| {
            let table = item.table.as_ref().unwrap();
            if arr1.iter().any(|t| table.contains(t)) && !arr2.iter().any(|t| table.contains(t)) {
                ControlFlow::Break(item.formula.clone())
            } else {
                ControlFlow::Continue(())
            }
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;

    fn chain(n: usize) -> FiniteStructure {
        FiniteStructure::binary("lt", n, |i, j| i < j)
    }

    fn cycle(n: usize) -> FiniteStructure {
        FiniteStructure::binary("e", n, |i, j| j == (i + 1) % n)
    }

    fn antichain(n: usize) -> FiniteStructure {
        FiniteStructure::binary("e", n, |_, _| false)
    }

    #[test]
    fn two_chain_has_predecessor_counterexample() {
        let s = chain(2);
        let v = check_uniformity_schema(&s, 1, 2).unwrap();
        let expect = parse_formula("exists y1. lt(y1,x1)", s.signature()).unwrap();
        assert_eq!(
            v.outcome,
            Outcome::Formula {
                formula: expect,
                witness: vec![1],
                violating: vec![0]
            }
        );
        assert!(v.certify(&s).unwrap());
        assert_eq!(check_uniformity_schema_with(&s, 1, 2, false).unwrap(), v);
    }

    #[test]
    fn antichain_pairs_uniform() {
        let v = check_uniformity_schema(&antichain(4), 2, 2).unwrap();
        assert!(v.is_uniform());
        assert!(check_uniformity_schema_with(&antichain(4), 2, 2, false).unwrap().is_uniform());
    }

    #[test]
    fn directed_cycle_uniform_at_depth_three() {
        assert!(check_uniformity_schema(&cycle(3), 1, 3).unwrap().is_uniform());
    }

    #[test]
    fn orbit_decider() {
        let v = check_uniformity_orbits(&chain(3), 1).unwrap();
        assert_eq!(
            v.outcome,
            Outcome::Orbits {
                first: vec![0],
                second: vec![1]
            }
        );
        assert!(v.certify(&chain(3)).unwrap());
        assert!(check_uniformity_orbits(&cycle(3), 1).unwrap().is_uniform());
        assert!(check_uniformity_orbits(&antichain(5), 3).unwrap().is_uniform());
    }

    #[test]
    fn distinguishing() {
        let s = chain(2);
        let f = distinguishing_formula(&s, &[0], &[1], 2).unwrap().unwrap();
        assert_eq!(f, parse_formula("exists y1. lt(x1,y1)", s.signature()).unwrap());
        let g = distinguishing_formula(&s, &[1], &[0], 2).unwrap().unwrap();
        assert_eq!(g, parse_formula("exists y1. lt(y1,x1)", s.signature()).unwrap());
        assert_eq!(distinguishing_formula(&cycle(3), &[0], &[1], 3).unwrap(), None);
        assert_eq!(distinguishing_formula(&s, &[0], &[0], 2).unwrap(), None);
        assert!(matches!(
            distinguishing_formula(&s, &[0], &[0, 1], 2),
            Err(UniformityError::ArityMismatch(1, 2))
        ));
    }

    #[test]
    fn range_errors() {
        assert!(matches!(
            check_uniformity_schema(&chain(2), 3, 1),
            Err(UniformityError::ArityOutOfRange { .. })
        ));
        assert!(matches!(
            check_uniformity_schema(&chain(9), 2, 9),
            Err(UniformityError::DepthOutOfRange { .. })
        ));
        assert!(check_uniformity_orbits(&chain(2), 0).is_err());
    }

    #[test]
    fn forged_certificate_rejected() {
        let s = chain(3);
        let v = UniformityVerdict {
            method: Method::Schema { depth: 0 },
            n: 1,
            outcome: Outcome::Formula {
                formula: Formula::eq("x1", "x1"),
                witness: vec![0],
                violating: vec![1],
            },
        };
        assert!(!v.certify(&s).unwrap());
    }
}
