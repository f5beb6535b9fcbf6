//! Constant-free first-order formulas over a relational signature.
//!
//! The AST cannot express constants or function symbols. Formulas are
//! printed in an ASCII concrete syntax that [`parse_formula`] reads back:
//!
//! ```text
//! formula := "forall" var "." formula | "exists" var "." formula | imp
//! imp     := or [ "->" imp | "<->" imp ]
//! or      := and { "|" and }
//! and     := neg { "&" neg }
//! neg     := "~" neg | atom
//! atom    := name "(" var {"," var} ")" | var "=" var | "(" formula ")"
//! ```
//!
//! `a <-> b` is sugar for `(a -> b) & (b -> a)`.

mod enumerate;
mod parse;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::structures::{FiniteStructure, Signature};

pub use enumerate::{enumerate_formulas, EnumeratedFormula, FormulaEnumerator};
pub use parse::{parse_formula, FormulaError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom { relation: String, args: Vec<String> },
    Equal(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

/// Variable name to universe position.
pub type Assignment = HashMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("free variable `{0}` is not assigned")]
    Unassigned(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("assignment maps `{0}` outside the universe")]
    OutOfUniverse(String),
}

impl Formula {
    pub fn atom<S: Into<String>>(relation: &str, args: impl IntoIterator<Item = S>) -> Self {
        Formula::Atom {
            relation: relation.to_string(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn eq(a: &str, b: &str) -> Self {
        Formula::Equal(a.into(), b.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(f))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut add = |v: &str, bound: &Vec<&str>| {
            if !bound.contains(&v) {
                out.insert(v.to_string());
            }
        };
        match self {
            Formula::Atom { args, .. } => args.iter().for_each(|v| add(v, bound)),
            Formula::Equal(a, b) => {
                add(a, bound);
                add(b, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// AST height; atoms have height 0 and every connective or quantifier
    /// adds one.
    pub fn height(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::Equal(..) => 0,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.height(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.height().max(b.height())
            }
        }
    }

    /// Checks every atom against `signature`.
    pub fn check(&self, signature: &Signature) -> Result<(), FormulaError> {
        match self {
            Formula::Atom { relation, args } => match signature.arity(relation) {
                None => Err(FormulaError::UnknownRelation(relation.clone())),
                Some(a) if a != args.len() => Err(FormulaError::ArityMismatch {
                    relation: relation.clone(),
                    expected: a,
                    found: args.len(),
                }),
                Some(_) => Ok(()),
            },
            Formula::Equal(..) => Ok(()),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.check(signature),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.check(signature)?;
                b.check(signature)
            }
        }
    }

    /// Renames bound variables to `prefix0`, `prefix1`, ... by binding depth.
    pub fn rename_bound(&self, prefix: &str) -> Formula {
        fn go(f: &Formula, prefix: &str, env: &mut Vec<(String, String)>) -> Formula {
            let look = |v: &String, env: &Vec<(String, String)>| {
                env.iter()
                    .rev()
                    .find(|(old, _)| old == v)
                    .map(|(_, new)| new.clone())
                    .unwrap_or_else(|| v.clone())
            };
            match f {
                Formula::Atom { relation, args } => Formula::Atom {
                    relation: relation.clone(),
                    args: args.iter().map(|v| look(v, env)).collect(),
                },
                Formula::Equal(a, b) => Formula::Equal(look(a, env), look(b, env)),
                Formula::Not(g) => Formula::not(go(g, prefix, env)),
                Formula::And(a, b) => Formula::and(go(a, prefix, env), go(b, prefix, env)),
                Formula::Or(a, b) => Formula::or(go(a, prefix, env), go(b, prefix, env)),
                Formula::Implies(a, b) => Formula::implies(go(a, prefix, env), go(b, prefix, env)),
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    let new = format!("{prefix}{}", env.len());
                    env.push((v.clone(), new.clone()));
                    let body = go(g, prefix, env);
                    env.pop();
                    if matches!(f, Formula::Exists(..)) {
                        Formula::Exists(new, Box::new(body))
                    } else {
                        Formula::Forall(new, Box::new(body))
                    }
                }
            }
        }
        go(self, prefix, &mut Vec::new())
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            Formula::Atom { .. } | Formula::Equal(..) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Atom { relation, args } => write!(f, "{relation}({})", args.join(","))?,
            Formula::Equal(a, b) => write!(f, "{a} = {b}")?,
            Formula::Not(g) => {
                f.write_str("~")?;
                g.write_at(f, 4)?;
            }
            Formula::And(a, b) => {
                a.write_at(f, 3)?;
                f.write_str(" & ")?;
                b.write_at(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" | ")?;
                b.write_at(f, 3)?;
            }
            Formula::Implies(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(" -> ")?;
                b.write_at(f, 1)?;
            }
            Formula::Exists(v, g) => {
                write!(f, "exists {v}. ")?;
                g.write_at(f, 0)?;
            }
            Formula::Forall(v, g) => {
                write!(f, "forall {v}. ")?;
                g.write_at(f, 0)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// Classical satisfaction over the finite universe of `s`.
pub fn evaluate(s: &FiniteStructure, phi: &Formula, alpha: &Assignment) -> Result<bool, EvalError> {
    for (v, &e) in alpha {
        if e >= s.size() {
            return Err(EvalError::OutOfUniverse(v.clone()));
        }
    }
    let mut env: Vec<(&str, usize)> = Vec::new();
    eval_in(s, phi, alpha, &mut env)
}

fn lookup<'a>(v: &'a str, alpha: &Assignment, env: &[(&'a str, usize)]) -> Result<usize, EvalError> {
    if let Some(&(_, e)) = env.iter().rev().find(|(name, _)| *name == v) {
        return Ok(e);
    }
    alpha
        .get(v)
        .copied()
        .ok_or_else(|| EvalError::Unassigned(v.to_string()))
}

fn eval_in<'a>(
    s: &FiniteStructure,
    phi: &'a Formula,
    alpha: &Assignment,
    env: &mut Vec<(&'a str, usize)>,
) -> Result<bool, EvalError> {
    Ok(match phi {
        Formula::Atom { relation, args } => {
            let rel = s
                .signature()
                .index_of(relation)
                .ok_or_else(|| EvalError::UnknownRelation(relation.clone()))?;
            let tuple = args
                .iter()
                .map(|v| lookup(v, alpha, env))
                .collect::<Result<Vec<_>, _>>()?;
            s.holds(rel, &tuple)
        }
        Formula::Equal(a, b) => lookup(a, alpha, env)? == lookup(b, alpha, env)?,
        Formula::Not(f) => !eval_in(s, f, alpha, env)?,
        Formula::And(a, b) => eval_in(s, a, alpha, env)? && eval_in(s, b, alpha, env)?,
        Formula::Or(a, b) => eval_in(s, a, alpha, env)? || eval_in(s, b, alpha, env)?,
        Formula::Implies(a, b) => !eval_in(s, a, alpha, env)? || eval_in(s, b, alpha, env)?,
        Formula::Exists(v, f) | Formula::Forall(v, f) => {
            let want = matches!(phi, Formula::Exists(..));
            let mut result = !want;
            for e in 0..s.size() {
                env.push((v, e));
                let r = eval_in(s, f, alpha, env);
                env.pop();
                if r? == want {
                    result = want;
                    break;
                }
            }
            result
        }
    })
}

/// Evaluates `phi` with `vars[i]` bound to `tuple[i]`.
pub fn evaluate_tuple(
    s: &FiniteStructure,
    phi: &Formula,
    vars: &[String],
    tuple: &[usize],
) -> Result<bool, EvalError> {
    let alpha: Assignment = vars.iter().cloned().zip(tuple.iter().copied()).collect();
    evaluate(s, phi, &alpha)
}

/// The canonical free variable names `x1`, ..., `xn`.
pub fn free_var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::parse_structure;

    fn chain3() -> FiniteStructure {
        parse_structure("signature\nlt/2\nuniverse\na b c\nrelations\nlt (a,b) (b,c) (a,c)\n").unwrap()
    }

    fn at(s: &FiniteStructure, pairs: &[(&str, &str)]) -> Assignment {
        pairs
            .iter()
            .map(|(v, e)| (v.to_string(), s.element_index(e).unwrap()))
            .collect()
    }

    #[test]
    fn has_predecessor_on_chain() {
        let s = chain3();
        let phi = parse_formula("exists y. lt(y,x)", s.signature()).unwrap();
        assert!(!evaluate(&s, &phi, &at(&s, &[("x", "a")])).unwrap());
        assert!(evaluate(&s, &phi, &at(&s, &[("x", "b")])).unwrap());
        assert!(evaluate(&s, &phi, &at(&s, &[("x", "c")])).unwrap());
    }

    #[test]
    fn reflexive_equality() {
        let s = chain3();
        let phi = Formula::eq("x", "x");
        for e in ["a", "b", "c"] {
            assert!(evaluate(&s, &phi, &at(&s, &[("x", e)])).unwrap());
        }
    }

    #[test]
    fn chain_is_total() {
        let s = chain3();
        let phi = parse_formula("forall y. y = x | lt(x,y) | lt(y,x)", s.signature()).unwrap();
        for e in ["a", "b", "c"] {
            assert!(evaluate(&s, &phi, &at(&s, &[("x", e)])).unwrap());
        }
    }

    #[test]
    fn unassigned_variable() {
        let s = chain3();
        let phi = Formula::atom("lt", ["x", "z"]);
        assert_eq!(
            evaluate(&s, &phi, &at(&s, &[("x", "a")])),
            Err(EvalError::Unassigned("z".into()))
        );
    }

    #[test]
    fn shadowing_binds_innermost() {
        let s = chain3();
        // The inner x shadows the outer one.
        let phi = parse_formula("exists x. forall x. x = x", s.signature()).unwrap();
        assert!(evaluate(&s, &phi, &Assignment::new()).unwrap());
        let phi = parse_formula("exists y. (lt(x,y) & (exists x. lt(y,x)))", s.signature()).unwrap();
        assert!(evaluate(&s, &phi, &at(&s, &[("x", "a")])).unwrap());
        assert!(!evaluate(&s, &phi, &at(&s, &[("x", "b")])).unwrap());
    }

    #[test]
    fn heights_and_free_vars() {
        let sig = Signature::new().with("lt", 2);
        let phi = parse_formula("exists y. lt(y,x)", &sig).unwrap();
        assert_eq!(phi.height(), 1);
        assert_eq!(phi.free_vars().into_iter().collect::<Vec<_>>(), ["x"]);
        let closed = parse_formula("forall x. x = x", &sig).unwrap();
        assert!(closed.free_vars().is_empty());
    }
}
