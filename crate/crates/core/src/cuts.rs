//! Rays, the Galois pair `X ↦ X^>`, `X ↦ X^<`, and classification of
//! Dedekind cuts given by a membership oracle.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CutError {
    #[error("galois closure needs a non-empty set")]
    EmptySet,
    #[error("invalid oracle bounds: need lo < hi, member(lo) and not member(hi)")]
    InvalidBounds,
    #[error("oracle is not monotone: {above} is a member but {below} is not")]
    NonMonotone { below: String, above: String },
    #[error("denominator bound must be positive")]
    ZeroBound,
    #[error("oracle target must be positive")]
    NonPositiveTarget,
    #[error("empty oracle family")]
    EmptyFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RayKind {
    Upward,
    Downward,
    All,
    Empty,
}

/// A ray of the rational line, or the whole line, or nothing.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Ray {
    pub kind: RayKind,
    pub endpoint: Option<Rational>,
    pub closed: bool,
}

impl Ray {
    pub fn all() -> Self {
        Ray {
            kind: RayKind::All,
            endpoint: None,
            closed: false,
        }
    }

    pub fn empty() -> Self {
        Ray {
            kind: RayKind::Empty,
            endpoint: None,
            closed: false,
        }
    }

    pub fn upward(e: Rational, closed: bool) -> Self {
        Ray {
            kind: RayKind::Upward,
            endpoint: Some(e),
            closed,
        }
    }

    pub fn downward(e: Rational, closed: bool) -> Self {
        Ray {
            kind: RayKind::Downward,
            endpoint: Some(e),
            closed,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match (self.kind, &self.endpoint) {
            (RayKind::All, _) => true,
            (RayKind::Empty, _) => false,
            (RayKind::Upward, Some(e)) => x > e || (self.closed && x == e),
            (RayKind::Downward, Some(e)) => x < e || (self.closed && x == e),
            _ => unreachable!("bounded rays carry an endpoint"),
        }
    }

    /// Set inclusion `self ⊆ other`.
    pub fn is_subset(&self, other: &Ray) -> bool {
        use RayKind::*;
        match (self.kind, other.kind) {
            (Empty, _) | (_, All) => true,
            (_, Empty) | (All, _) => false,
            (Upward, Upward) => {
                let (a, b) = (self.endpoint.as_ref().unwrap(), other.endpoint.as_ref().unwrap());
                a > b || (a == b && (other.closed || !self.closed))
            }
            (Downward, Downward) => {
                let (a, b) = (self.endpoint.as_ref().unwrap(), other.endpoint.as_ref().unwrap());
                a < b || (a == b && (other.closed || !self.closed))
            }
            _ => false,
        }
    }

    /// Everything strictly above every element of the ray.
    pub fn upper(&self) -> Ray {
        match self.kind {
            RayKind::Empty => Ray::all(),
            RayKind::All | RayKind::Upward => Ray::empty(),
            RayKind::Downward => Ray::upward(self.endpoint.clone().unwrap(), !self.closed),
        }
    }

    /// Everything strictly below every element of the ray.
    pub fn lower(&self) -> Ray {
        match self.kind {
            RayKind::Empty => Ray::all(),
            RayKind::All | RayKind::Downward => Ray::empty(),
            RayKind::Upward => Ray::downward(self.endpoint.clone().unwrap(), !self.closed),
        }
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, &self.endpoint) {
            (RayKind::All, _) => f.write_str("(-inf, inf)"),
            (RayKind::Empty, _) => f.write_str("{}"),
            (RayKind::Upward, Some(e)) => write!(f, "{}{}, inf)", if self.closed { "[" } else { "(" }, e),
            (RayKind::Downward, Some(e)) => write!(f, "(-inf, {}{}", e, if self.closed { "]" } else { ")" }),
            _ => unreachable!(),
        }
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `X^>`; the whole line when `X` is empty.
pub fn upper_set(xs: &[Rational]) -> Ray {
    match xs.iter().max() {
        Some(m) => Ray::upward(m.clone(), false),
        None => Ray::all(),
    }
}

/// `X^<`; the whole line when `X` is empty.
pub fn lower_set(xs: &[Rational]) -> Ray {
    match xs.iter().min() {
        Some(m) => Ray::downward(m.clone(), false),
        None => Ray::all(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisReport {
    pub upper: Ray,
    pub upper_lower: Ray,
    pub upper_lower_upper: Ray,
    pub lower: Ray,
    pub lower_upper: Ray,
    pub lower_upper_lower: Ray,
}

impl GaloisReport {
    pub fn upper_stable(&self) -> bool {
        self.upper_lower_upper == self.upper
    }

    pub fn lower_stable(&self) -> bool {
        self.lower_upper_lower == self.lower
    }

    pub fn passed(&self) -> bool {
        self.upper_stable() && self.lower_stable()
    }
}

pub fn galois_closure_check(xs: &[Rational]) -> Result<GaloisReport, CutError> {
    if xs.is_empty() {
        return Err(CutError::EmptySet);
    }
    let upper = upper_set(xs);
    let upper_lower = upper.lower();
    let upper_lower_upper = upper_lower.upper();
    let lower = lower_set(xs);
    let lower_upper = lower.upper();
    let lower_upper_lower = lower_upper.lower();
    Ok(GaloisReport {
        upper,
        upper_lower,
        upper_lower_upper,
        lower,
        lower_upper,
        lower_upper_lower,
    })
}

type Membership = dyn Fn(&Rational) -> bool + Send + Sync;

/// A downward-closed set of rationals given by a membership test, with
/// one known member `lo` and one known non-member `hi`.
pub struct CutOracle {
    label: String,
    lo: Rational,
    hi: Rational,
    total: bool,
    member: Box<Membership>,
}

impl CutOracle {
    pub fn new(
        label: impl Into<String>,
        lo: Rational,
        hi: Rational,
        total: bool,
        member: impl Fn(&Rational) -> bool + Send + Sync + 'static,
    ) -> Self {
        CutOracle {
            label: label.into(),
            lo,
            hi,
            total,
            member: Box::new(member),
        }
    }

    /// `{q | q < c}`.
    pub fn lt(c: Rational) -> Self {
        let lo = &c - Rational::one();
        let hi = c.clone();
        let label = format!("lt {c}");
        CutOracle::new(label, lo, hi, true, move |q| q < &c)
    }

    /// `{q | q ≤ c}`.
    pub fn le(c: Rational) -> Self {
        let lo = c.clone();
        let hi = &c + Rational::one();
        let label = format!("le {c}");
        CutOracle::new(label, lo, hi, true, move |q| q <= &c)
    }

    /// `{q | q < 0 or q² < t}` for `t > 0`.
    pub fn sq_lt(t: Rational) -> Result<Self, CutError> {
        if !t.is_positive() {
            return Err(CutError::NonPositiveTarget);
        }
        let hi = if t > Rational::one() { t.clone() } else { Rational::one() };
        let label = format!("sq-lt {t}");
        Ok(CutOracle::new(label, Rational::zero(), hi, true, move |q| {
            q.is_negative() || q * q < t
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_total(&self) -> bool {
        self.total
    }

    pub fn member(&self, q: &Rational) -> bool {
        (self.member)(q)
    }
}

impl fmt::Debug for CutOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CutOracle")
            .field("label", &self.label)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("total", &self.total)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum CutClass {
    /// The cut is `{q < point}` or `{q ≤ point}`.
    Principal { point: Rational, closed: bool },
    /// No boundary with denominator at most `bound`; the boundary lies
    /// strictly between the Farey neighbours `lower < upper`.
    Gap { lower: Rational, upper: Rational, bound: u64 },
    /// As for a gap, but the oracle is not declared total.
    Unresolved { lower: Rational, upper: Rational, bound: u64 },
}

impl CutClass {
    pub fn is_principal(&self) -> bool {
        matches!(self, CutClass::Principal { .. })
    }

    pub fn is_gap(&self) -> bool {
        matches!(self, CutClass::Gap { .. })
    }
}

impl fmt::Display for CutClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutClass::Principal { point, closed } => {
                write!(f, "principal {point} ({})", if *closed { "closed" } else { "open" })
            }
            CutClass::Gap { lower, upper, bound } => write!(f, "gap in ({lower}, {upper}) at bound {bound}"),
            CutClass::Unresolved { lower, upper, bound } => {
                write!(f, "unresolved in ({lower}, {upper}) at bound {bound}")
            }
        }
    }
}

fn frac(p: &BigInt, q: &BigInt) -> Rational {
    Rational::from_big(p.clone(), q.clone())
}

/// Largest `j` in `1..=jmax` with `pred(j)`, given `pred(1)` and `pred`
/// monotone decreasing.
fn gallop(jmax: &BigInt, pred: impl Fn(&BigInt) -> bool) -> BigInt {
    let mut good = BigInt::one();
    let mut step = BigInt::one();
    let bad = loop {
        let probe = &good + &step;
        if &probe > jmax {
            break jmax + 1u32;
        }
        if pred(&probe) {
            good = probe;
            step *= 2u32;
        } else {
            break probe;
        }
    };
    let mut bad = bad;
    while &bad - &good > BigInt::one() {
        let mid: BigInt = (&good + &bad) / 2u32;
        if pred(&mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Farey neighbours `(l, r)` of order `bound` with `member(l)` and not
/// `member(r)`, found by descending the Stern–Brocot tree.
fn bracket(o: &CutOracle, bound: u64) -> Result<(Rational, Rational), CutError> {
    let member = |p: &BigInt, q: &BigInt| o.member(&frac(p, q));
    let one = BigInt::one();
    let mut lo_i = o.lo.floor();
    let mut hi_i = -(-o.hi.clone()).floor();
    if !member(&lo_i, &one) {
        return Err(CutError::NonMonotone {
            below: lo_i.to_string(),
            above: o.lo.to_string(),
        });
    }
    if member(&hi_i, &one) {
        return Err(CutError::NonMonotone {
            below: o.hi.to_string(),
            above: hi_i.to_string(),
        });
    }
    while &hi_i - &lo_i > one {
        let mid: BigInt = (&lo_i + &hi_i).div_floor(&BigInt::from(2));
        if member(&mid, &one) {
            lo_i = mid;
        } else {
            hi_i = mid;
        }
    }
    let n = BigInt::from(bound);
    let (mut a, mut b) = (lo_i, one.clone());
    let (mut c, mut d) = (hi_i, one);
    loop {
        if &b + &d > n {
            return Ok((frac(&a, &b), frac(&c, &d)));
        }
        if member(&(&a + &c), &(&b + &d)) {
            let jmax = (&n - &b) / &d;
            let j = gallop(&jmax, |j| member(&(&a + j * &c), &(&b + j * &d)));
            a += &j * &c;
            b += &j * &d;
        } else {
            let jmax = (&n - &d) / &b;
            let j = gallop(&jmax, |j| !member(&(&c + j * &a), &(&d + j * &b)));
            c += &j * &a;
            d += &j * &b;
        }
    }
}

/// Offsets used to probe either side of a candidate boundary point.
fn probes(width: &Rational) -> Vec<Rational> {
    [20, 64, 128]
        .iter()
        .map(|&k| width / Rational::from(BigInt::one() << k))
        .collect()
}

/// Spot checks of monotonicity away from the bracket.
fn sentinels(o: &CutOracle, l: &Rational, r: &Rational) -> Result<(), CutError> {
    let two = Rational::integer(2);
    let below = [
        o.lo.clone(),
        (&o.lo + l) / &two,
        l - Rational::one(),
        l - l.abs() - Rational::integer(1000),
    ];
    for q in below.iter().filter(|q| *q <= l) {
        if !o.member(q) {
            return Err(CutError::NonMonotone {
                below: q.to_string(),
                above: l.to_string(),
            });
        }
    }
    let above = [
        o.hi.clone(),
        (&o.hi + r) / &two,
        r + Rational::one(),
        r + r.abs() + Rational::integer(1000),
    ];
    for q in above.iter().filter(|q| *q >= r) {
        if o.member(q) {
            return Err(CutError::NonMonotone {
                below: r.to_string(),
                above: q.to_string(),
            });
        }
    }
    Ok(())
}

/// Principal if the membership flip sits at a rational of denominator at
/// most `bound`; otherwise a gap at that precision (unresolved when the
/// oracle is not declared total).
pub fn classify_cut(o: &CutOracle, bound: u64) -> Result<CutClass, CutError> {
    if bound == 0 {
        return Err(CutError::ZeroBound);
    }
    if o.lo >= o.hi || !o.member(&o.lo) || o.member(&o.hi) {
        return Err(CutError::InvalidBounds);
    }
    let (l, r) = bracket(o, bound)?;
    sentinels(o, &l, &r)?;
    let eps = probes(&(&r - &l));
    if eps.iter().all(|e| !o.member(&(&l + e))) {
        return Ok(CutClass::Principal { point: l, closed: true });
    }
    if eps.iter().all(|e| o.member(&(&r - e))) {
        return Ok(CutClass::Principal { point: r, closed: false });
    }
    Ok(if o.total {
        CutClass::Gap { lower: l, upper: r, bound }
    } else {
        CutClass::Unresolved { lower: l, upper: r, bound }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Connectivity {
    /// Every cut in the family is principal at the given bound. Evidence
    /// only: other cuts are not examined.
    ConnectedEvidence { classes: Vec<CutClass> },
    /// The cut at `index` is a gap.
    Disconnected { index: usize, label: String, class: CutClass },
    /// No gap, but some cut is unresolved.
    Inconclusive { classes: Vec<CutClass> },
}

pub fn connectivity_probe(family: &[CutOracle], bound: u64) -> Result<Connectivity, CutError> {
    if family.is_empty() {
        return Err(CutError::EmptyFamily);
    }
    let mut classes = Vec::with_capacity(family.len());
    for (index, o) in family.iter().enumerate() {
        let class = classify_cut(o, bound)?;
        if class.is_gap() {
            return Ok(Connectivity::Disconnected {
                index,
                label: o.label.clone(),
                class,
            });
        }
        classes.push(class);
    }
    Ok(if classes.iter().all(CutClass::is_principal) {
        Connectivity::ConnectedEvidence { classes }
    } else {
        Connectivity::Inconclusive { classes }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn set(xs: &[&str]) -> Vec<Rational> {
        xs.iter().map(|s| r(s)).collect()
    }

    #[test]
    fn rays() {
        assert_eq!(upper_set(&set(&["1", "2", "3"])), Ray::upward(r("3"), false));
        assert_eq!(upper_set(&[]), Ray::all());
        assert_eq!(upper_set(&set(&["0"])).to_string(), "(0, inf)");
        assert_eq!(lower_set(&set(&["0"])).to_string(), "(-inf, 0)");
        assert!(Ray::upward(r("1"), false).is_subset(&Ray::upward(r("1"), true)));
        assert!(!Ray::upward(r("1"), true).is_subset(&Ray::upward(r("1"), false)));
        assert!(Ray::empty().is_subset(&Ray::downward(r("0"), false)));
        assert!(Ray::downward(r("0"), true).contains(&r("0")));
    }

    #[test]
    fn galois() {
        let rep = galois_closure_check(&set(&["1", "2", "3"])).unwrap();
        assert_eq!(rep.upper_lower.to_string(), "(-inf, 3]");
        assert_eq!(rep.upper_lower_upper.to_string(), "(3, inf)");
        assert!(rep.passed());
        assert!(galois_closure_check(&set(&["0"])).unwrap().passed());
        assert_eq!(galois_closure_check(&[]), Err(CutError::EmptySet));
    }

    #[test]
    fn principal_cuts() {
        let c = classify_cut(&CutOracle::lt(r("3/7")), 1_000_000).unwrap();
        assert_eq!(c, CutClass::Principal { point: r("3/7"), closed: false });
        let c = classify_cut(&CutOracle::le(r("1/2")), 1_000_000).unwrap();
        assert_eq!(c, CutClass::Principal { point: r("1/2"), closed: true });
        let c = classify_cut(&CutOracle::lt(r("-12345/678")), 1000).unwrap();
        assert_eq!(c, CutClass::Principal { point: r("-12345/678"), closed: false });
    }

    #[test]
    fn irrational_cut_is_gap() {
        let c = classify_cut(&CutOracle::sq_lt(r("2")).unwrap(), 1_000_000).unwrap();
        let CutClass::Gap { lower, upper, .. } = c else {
            panic!("{c:?}")
        };
        assert!(&lower * &lower < r("2") && &upper * &upper > r("2"));
        assert!(upper.denom() <= &BigInt::from(1_000_000) && lower.denom() <= &BigInt::from(1_000_000));
        assert!((upper - lower) < r("1/1000000000"));
        let quarter = classify_cut(&CutOracle::sq_lt(r("1/4")).unwrap(), 100).unwrap();
        assert_eq!(quarter, CutClass::Principal { point: r("1/2"), closed: false });
    }

    #[test]
    fn unresolved_when_not_total() {
        let o = CutOracle::new("partial", r("0"), r("2"), false, |q| q.is_negative() || q * q < r("2"));
        assert!(matches!(classify_cut(&o, 1000).unwrap(), CutClass::Unresolved { .. }));
    }

    #[test]
    fn bad_oracles() {
        let o = CutOracle::new("inverted", r("0"), r("1"), true, |q| q > &r("1/2"));
        assert_eq!(classify_cut(&o, 100), Err(CutError::InvalidBounds));
        let o = CutOracle::new("window", r("0"), r("1"), true, |q| q < &r("1/2") && q > &r("-3"));
        assert!(matches!(classify_cut(&o, 100), Err(CutError::NonMonotone { .. })));
        assert!(CutOracle::sq_lt(r("0")).is_err());
        assert_eq!(classify_cut(&CutOracle::lt(r("1")), 0), Err(CutError::ZeroBound));
    }

    #[test]
    fn connectivity() {
        let fam = [CutOracle::sq_lt(r("2")).unwrap()];
        assert!(matches!(
            connectivity_probe(&fam, 1000).unwrap(),
            Connectivity::Disconnected { index: 0, .. }
        ));
        let fam = [CutOracle::lt(r("1/2")), CutOracle::lt(r("3/7"))];
        assert!(matches!(
            connectivity_probe(&fam, 1000).unwrap(),
            Connectivity::ConnectedEvidence { .. }
        ));
        let fam = [CutOracle::lt(r("0"))];
        assert!(matches!(
            connectivity_probe(&fam, 10).unwrap(),
            Connectivity::ConnectedEvidence { .. }
        ));
        assert_eq!(connectivity_probe(&[], 10), Err(CutError::EmptyFamily));
    }
}
