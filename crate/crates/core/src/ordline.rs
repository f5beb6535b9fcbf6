//! The rational line: affine order (anti-)automorphisms, shifts,
//! half-open intervals, tilings generated by a shift and the tile-count
//! measure.
//!
//! Only the affine maps `x ↦ a·x + b` are represented. Every law checked
//! here is an exact identity between rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LineError {
    #[error("slope must be non-zero")]
    ZeroSlope,
    #[error("map `{0}` is not a shift")]
    NotAShift(String),
    #[error("degenerate tiling: the identity shift has no tiles")]
    DegenerateTiling,
    #[error("measure needs a raising shift, got `{0}`")]
    NotRaising(String),
    #[error("empty interval")]
    EmptyInterval,
    #[error("interval bounds out of order: {lo} > {hi}")]
    Inverted { lo: String, hi: String },
    #[error("tiling window must be positive")]
    EmptyWindow,
    #[error("cannot parse affine map `{0}`")]
    ParseMap(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

/// `x ↦ slope·x + offset` with non-zero slope.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    slope: Rational,
    offset: Rational,
}

impl AffineMap {
    pub fn new(slope: Rational, offset: Rational) -> Result<Self, LineError> {
        if slope.is_zero() {
            return Err(LineError::ZeroSlope);
        }
        Ok(AffineMap { slope, offset })
    }

    pub fn identity() -> Self {
        AffineMap {
            slope: Rational::one(),
            offset: Rational::zero(),
        }
    }

    pub fn translation(t: Rational) -> Self {
        AffineMap {
            slope: Rational::one(),
            offset: t,
        }
    }

    pub fn scaling(a: Rational) -> Result<Self, LineError> {
        Self::new(a, Rational::zero())
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.offset
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            slope: &self.slope * &inner.slope,
            offset: &self.slope * &inner.offset + &self.offset,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let slope = self.slope.recip();
        let offset = -(&self.offset * &slope);
        AffineMap { slope, offset }
    }

    /// The `k`-th iterate, negative `k` iterating the inverse.
    pub fn power(&self, k: i64) -> AffineMap {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = AffineMap::identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                out = sq.compose(&out);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        out
    }

    pub fn is_order_preserving(&self) -> bool {
        self.slope.is_positive()
    }

    pub fn is_identity(&self) -> bool {
        self == &AffineMap::identity()
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = Rational::one();
        if self.slope == one {
            f.write_str("x")?;
        } else if self.slope == -one {
            f.write_str("-x")?;
        } else {
            write!(f, "{}*x", self.slope)?;
        }
        if self.offset.is_positive() {
            write!(f, "+{}", self.offset)?;
        } else if self.offset.is_negative() {
            write!(f, "{}", self.offset)?;
        }
        Ok(())
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for AffineMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for AffineMap {
    type Err = LineError;

    /// Accepts `a*x+b`, `x+b`, `a*x`, `x`, `-x`, `b+a*x` and similar sums of
    /// one linear term and at most one constant.
    fn from_str(s: &str) -> Result<Self, LineError> {
        let err = || LineError::ParseMap(s.to_string());
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(err());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = text.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'*' | b'/' | b'+' | b'-') {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);
        let mut slope: Option<Rational> = None;
        let mut offset: Option<Rational> = None;
        for term in terms {
            let (sign, body) = match term.as_bytes()[0] {
                b'+' => (1, &term[1..]),
                b'-' => (-1, &term[1..]),
                _ => (1, term),
            };
            let sign = Rational::integer(sign);
            if let Some(coef) = body.strip_suffix('x') {
                let c = if coef.is_empty() {
                    Rational::one()
                } else {
                    let c = coef.strip_suffix('*').ok_or_else(err)?;
                    c.parse::<Rational>().map_err(|_| err())?
                };
                if slope.replace(sign * c).is_some() {
                    return Err(err());
                }
            } else {
                if body.contains('x') {
                    return Err(err());
                }
                let c = body.parse::<Rational>().map_err(|_| err())?;
                if offset.replace(sign * c).is_some() {
                    return Err(err());
                }
            }
        }
        AffineMap::new(slope.ok_or_else(err)?, offset.unwrap_or_else(Rational::zero))
    }
}

/// How a map moves points relative to themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Displacement {
    Raising,
    Identity,
    Lowering,
    /// Has a fixed point without being the identity, or reverses order.
    Mixed,
}

pub fn classify_displacement(f: &AffineMap) -> Displacement {
    if f.slope() != &Rational::one() {
        return Displacement::Mixed;
    }
    if f.offset().is_positive() {
        Displacement::Raising
    } else if f.offset().is_negative() {
        Displacement::Lowering
    } else {
        Displacement::Identity
    }
}

pub fn commutes(f: &AffineMap, g: &AffineMap) -> bool {
    f.compose(g) == g.compose(f)
}

/// `g⁻¹ ∘ f ∘ g`.
pub fn conjugate(g: &AffineMap, f: &AffineMap) -> AffineMap {
    g.inverse().compose(f).compose(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructCheck {
    pub preserved: bool,
    /// A sample `x` with `(g(x), g(f(x)))` off the graph of `f`.
    pub witness: Option<(Rational, Rational, Rational)>,
}

/// 100 fixed rationals starting at 0.
pub fn default_samples() -> Vec<Rational> {
    (0..100i64)
        .map(|k| {
            if k == 0 {
                Rational::zero()
            } else {
                Rational::new((k * 37) % 41 - 20, k % 9 + 1)
            }
        })
        .collect()
}

/// Whether `g` carries the graph `{(x, f(x))}` of `f` onto itself. Decided
/// exactly as the identity `g∘f = f∘g`; `samples` only supply a witness
/// point when it fails.
pub fn preserves_construct(g: &AffineMap, f: &AffineMap, samples: &[Rational]) -> ConstructCheck {
    let preserved = g.compose(f) == f.compose(g);
    let witness = if preserved {
        None
    } else {
        samples.iter().find_map(|x| {
            let gx = g.apply(x);
            let gfx = g.apply(&f.apply(x));
            (f.apply(&gx) != gfx).then(|| (x.clone(), gx, gfx))
        })
    };
    ConstructCheck { preserved, witness }
}

/// An affine map with slope exactly 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Shift(AffineMap);

impl Shift {
    pub fn new(t: Rational) -> Self {
        Shift(AffineMap::translation(t))
    }

    pub fn identity() -> Self {
        Shift(AffineMap::identity())
    }

    pub fn displacement(&self) -> &Rational {
        self.0.offset()
    }

    pub fn map(&self) -> &AffineMap {
        &self.0
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        x + self.displacement()
    }

    pub fn compose(&self, other: &Shift) -> Shift {
        Shift::new(self.displacement() + other.displacement())
    }

    pub fn inverse(&self) -> Shift {
        Shift::new(-self.displacement())
    }

    pub fn power(&self, k: i64) -> Shift {
        Shift::new(self.displacement() * Rational::integer(k))
    }

    pub fn classify(&self) -> Displacement {
        classify_displacement(&self.0)
    }

    /// `f ≥ g` pointwise; for shifts a single point decides it.
    pub fn dominates(&self, other: &Shift) -> bool {
        self.displacement() >= other.displacement()
    }
}

impl TryFrom<AffineMap> for Shift {
    type Error = LineError;

    fn try_from(f: AffineMap) -> Result<Self, LineError> {
        if f.slope() == &Rational::one() {
            Ok(Shift(f))
        } else {
            Err(LineError::NotAShift(f.to_string()))
        }
    }
}

impl FromStr for Shift {
    type Err = LineError;

    fn from_str(s: &str) -> Result<Self, LineError> {
        let t = s.trim();
        if !t.contains('x') {
            return Ok(Shift::new(t.parse()?));
        }
        Shift::try_from(t.parse::<AffineMap>()?)
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Half-open `[lo, hi)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, LineError> {
        if lo > hi {
            return Err(LineError::Inverted {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x < &self.hi
    }

    /// Intersection; empty results collapse onto the larger lower bound.
    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        if lo >= hi {
            Interval { hi: lo.clone(), lo }
        } else {
            Interval { lo, hi }
        }
    }

    /// Union, if it is again a half-open interval.
    pub fn union(&self, other: &Interval) -> Option<Interval> {
        if self.is_empty() {
            return Some(other.clone());
        }
        if other.is_empty() {
            return Some(self.clone());
        }
        if self.hi < other.lo || other.hi < self.lo {
            return None;
        }
        Some(Interval {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
        })
    }

    pub fn translate(&self, t: &Rational) -> Interval {
        Interval {
            lo: &self.lo + t,
            hi: &self.hi + t,
        }
    }

    /// The image under an order-preserving map.
    pub fn image(&self, f: &AffineMap) -> Interval {
        let (a, b) = (f.apply(&self.lo), f.apply(&self.hi));
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The two consecutive tiles at `c` are disjoint and their union is the
/// interval spanned by `c` and `f²(c)`, in whichever direction `f` moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalLaws {
    pub disjoint: bool,
    pub union_exact: bool,
}

pub fn interval_laws(f: &Shift, c: &Rational) -> IntervalLaws {
    let fc = f.apply(c);
    let ffc = f.apply(&fc);
    let (first, second, whole) = if c < &fc {
        (
            Interval { lo: c.clone(), hi: fc.clone() },
            Interval { lo: fc, hi: ffc.clone() },
            Interval { lo: c.clone(), hi: ffc },
        )
    } else if c > &fc {
        (
            Interval { lo: fc.clone(), hi: c.clone() },
            Interval { lo: ffc.clone(), hi: fc },
            Interval { lo: ffc, hi: c.clone() },
        )
    } else {
        return IntervalLaws {
            disjoint: true,
            union_exact: true,
        };
    };
    IntervalLaws {
        disjoint: first.intersect(&second).is_empty(),
        union_exact: first.union(&second).as_ref() == Some(&whole),
    }
}

/// Tiles `I_j` for `j = -k .. k-1` generated by a non-identity shift.
#[derive(Debug, Clone)]
pub struct Tiling {
    pub shift: Shift,
    pub base: Rational,
    pub window: i64,
    pub tiles: Vec<(i64, Interval)>,
}

impl Tiling {
    /// Pairwise disjoint, checked on the tiles sorted by lower bound.
    pub fn is_disjoint(&self) -> bool {
        let mut sorted: Vec<&Interval> = self.tiles.iter().map(|(_, t)| t).collect();
        sorted.sort_by(|a, b| a.lo.cmp(&b.lo));
        sorted.windows(2).all(|w| w[0].hi <= w[1].lo)
    }

    /// The union, if the tiles leave no gaps.
    pub fn union(&self) -> Option<Interval> {
        let mut sorted: Vec<&Interval> = self.tiles.iter().map(|(_, t)| t).collect();
        sorted.sort_by(|a, b| a.lo.cmp(&b.lo));
        if sorted.windows(2).any(|w| w[0].hi != w[1].lo) {
            return None;
        }
        Some(Interval {
            lo: sorted.first()?.lo.clone(),
            hi: sorted.last()?.hi.clone(),
        })
    }

    /// The interval the window is supposed to cover exactly.
    pub fn expected_cover(&self) -> Interval {
        let a = self.shift.power(-self.window).apply(&self.base);
        let b = self.shift.power(self.window).apply(&self.base);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Each tile is carried onto its successor by the shift.
    pub fn advances(&self) -> bool {
        self.tiles
            .windows(2)
            .all(|w| w[0].1.translate(self.shift.displacement()) == w[1].1)
    }
}

pub fn tile_line(f: &Shift, base: &Rational, window: i64) -> Result<Tiling, LineError> {
    if window <= 0 {
        return Err(LineError::EmptyWindow);
    }
    let t = f.displacement();
    if t.is_zero() {
        return Err(LineError::DegenerateTiling);
    }
    let tiles = (-window..window)
        .map(|j| {
            let a = base + t * Rational::integer(j);
            let b = &a + t;
            let tile = if t.is_positive() {
                Interval { lo: a, hi: b }
            } else {
                Interval { lo: b, hi: a }
            };
            (j, tile)
        })
        .collect();
    Ok(Tiling {
        shift: f.clone(),
        base: base.clone(),
        window,
        tiles,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// The unique `h` with `s∘h = x` (left) or `h∘s = x` (right).
pub fn factor_through_shift(x: &AffineMap, s: &Shift, side: Side) -> AffineMap {
    match side {
        Side::Left => s.inverse().map().compose(x),
        Side::Right => x.compose(s.inverse().map()),
    }
}

/// Number of whole tiles of a raising shift that fit in `interval`, and
/// the leftover piece.
pub fn shift_measure(f: &Shift, interval: &Interval) -> Result<(BigInt, Interval), LineError> {
    if f.classify() != Displacement::Raising {
        return Err(LineError::NotRaising(f.to_string()));
    }
    if interval.is_empty() {
        return Err(LineError::EmptyInterval);
    }
    let t = f.displacement();
    let count = (interval.width() / t).floor();
    let lo = &interval.lo + t.scale(&count);
    Ok((
        count,
        Interval {
            lo,
            hi: interval.hi.clone(),
        },
    ))
}

/// The order isomorphism between shifts and points, anchored at `zero`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointShift {
    pub zero: Rational,
}

impl PointShift {
    pub fn new(zero: Rational) -> Self {
        PointShift { zero }
    }

    pub fn to_point(&self, f: &Shift) -> Rational {
        f.apply(&self.zero)
    }

    pub fn to_shift(&self, x: &Rational) -> Shift {
        Shift::new(x - &self.zero)
    }
}
