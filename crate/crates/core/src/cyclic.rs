//! Cyclic order on the rational projective line `ℚ ∪ {∞}` and the action
//! of Möbius maps on it.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CyclicError {
    #[error("points must be pairwise distinct")]
    NotDistinct,
    #[error("determinant ad - bc must be non-zero")]
    Singular,
    #[error("orientation is inconsistent across samples")]
    Inconsistent,
    #[error("need at least one sample triple")]
    NoSamples,
    #[error(transparent)]
    Parse(#[from] ParseRationalError),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(Rational),
    Infinity,
}

impl ProjPoint {
    pub fn finite(x: Rational) -> Self {
        ProjPoint::Finite(x)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }
}

impl From<Rational> for ProjPoint {
    fn from(x: Rational) -> Self {
        ProjPoint::Finite(x)
    }
}

impl FromStr for ProjPoint {
    type Err = CyclicError;

    fn from_str(s: &str) -> Result<Self, CyclicError> {
        match s.trim() {
            "inf" | "∞" => Ok(ProjPoint::Infinity),
            t => Ok(ProjPoint::Finite(t.parse()?)),
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => fmt::Display::fmt(x, f),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `true` when `p, q, r` go round the projective line in the positive
/// sense. `∞` sits after every rational: `(p, q, ∞)` holds iff `p < q`.
pub fn cyclic_orient(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<bool, CyclicError> {
    if p == q || q == r || p == r {
        return Err(CyclicError::NotDistinct);
    }
    use ProjPoint::*;
    Ok(match (p, q, r) {
        (Finite(a), Finite(b), Finite(c)) => (a < b && b < c) || (b < c && c < a) || (c < a && a < b),
        (Finite(a), Finite(b), Infinity) | (Finite(b), Infinity, Finite(a)) | (Infinity, Finite(a), Finite(b)) => a < b,
        _ => unreachable!("distinct points have at most one infinity"),
    })
}

/// The linear order obtained by cutting the circle at `c`:
/// `x ≺ y` iff `(c, x, y)` is positively oriented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linearization {
    pub cut: ProjPoint,
}

impl Linearization {
    pub fn at(cut: ProjPoint) -> Self {
        Linearization { cut }
    }

    pub fn less(&self, x: &ProjPoint, y: &ProjPoint) -> Result<bool, CyclicError> {
        if x == y {
            return Ok(false);
        }
        cyclic_orient(&self.cut, x, y)
    }

    pub fn compare(&self, x: &ProjPoint, y: &ProjPoint) -> Result<Ordering, CyclicError> {
        if x == &self.cut || y == &self.cut {
            return Err(CyclicError::NotDistinct);
        }
        if x == y {
            return Ok(Ordering::Equal);
        }
        Ok(if cyclic_orient(&self.cut, x, y)? {
            Ordering::Less
        } else {
            Ordering::Greater
        })
    }

    /// `points` sorted along the cut circle; fails if `points` contains
    /// the cut.
    pub fn sort(&self, points: &[ProjPoint]) -> Result<Vec<ProjPoint>, CyclicError> {
        if points.contains(&self.cut) {
            return Err(CyclicError::NotDistinct);
        }
        let mut out = points.to_vec();
        out.sort_by(|x, y| self.compare(x, y).expect("checked above"));
        Ok(out)
    }
}

pub fn linearize_at(c: ProjPoint) -> Linearization {
    Linearization::at(c)
}

/// `x ↦ (a·x + b) / (c·x + d)` on the projective line.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct MobiusMap {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl MobiusMap {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self, CyclicError> {
        let m = MobiusMap { a, b, c, d };
        if m.det().is_zero() {
            return Err(CyclicError::Singular);
        }
        Ok(m)
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, x: &ProjPoint) -> ProjPoint {
        match x {
            ProjPoint::Infinity => {
                if self.c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(&self.a / &self.c)
                }
            }
            ProjPoint::Finite(x) => {
                let den = &self.c * x + &self.d;
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite((&self.a * x + &self.b) / den)
                }
            }
        }
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |k: &Rational| if k.is_negative() { format!("{k}") } else { format!("+{k}") };
        write!(f, "({}*x{})/({}*x{})", self.a, term(&self.b), self.c, term(&self.d))
    }
}

impl fmt::Debug for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserves,
    Reverses,
}

impl Orientation {
    /// What the sign of the determinant predicts.
    pub fn expected(m: &MobiusMap) -> Self {
        if m.det().is_positive() {
            Orientation::Preserves
        } else {
            Orientation::Reverses
        }
    }
}

/// Orientation of `m`, read off the sample triples. Every triple must agree.
pub fn mobius_orientation(m: &MobiusMap, samples: &[[ProjPoint; 3]]) -> Result<Orientation, CyclicError> {
    let mut seen = None;
    for [p, q, r] in samples {
        let before = cyclic_orient(p, q, r)?;
        let after = cyclic_orient(&m.apply(p), &m.apply(q), &m.apply(r))?;
        let o = if before == after {
            Orientation::Preserves
        } else {
            Orientation::Reverses
        };
        if seen.is_some_and(|s| s != o) {
            return Err(CyclicError::Inconsistent);
        }
        seen = Some(o);
    }
    seen.ok_or(CyclicError::NoSamples)
}

/// A fixed set of sample triples covering finite points and `∞`.
pub fn default_triples() -> Vec<[ProjPoint; 3]> {
    let pts: Vec<ProjPoint> = ["-2", "-1/3", "0", "1", "5/2", "inf"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            for k in 0..pts.len() {
                if i != j && j != k && i != k && out.len() < 20 {
                    out.push([pts[i].clone(), pts[j].clone(), pts[k].clone()]);
                }
            }
        }
    }
    out
}
