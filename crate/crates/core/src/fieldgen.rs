//! Field operations on the rational line relative to a chosen zero and one.
//!
//! Addition is composition of the shifts that carry `z` to each operand;
//! multiplication applies the scaling automorphism of the shift group that
//! sends the unit shift `z ↦ u` to the shift `z ↦ x`. Both are written in
//! closed form.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ordline::{AffineMap, Interval};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("zero and one must differ")]
    Degenerate,
    #[error("division by localized zero")]
    DivisionByZero,
    #[error("degenerate stretch: factor equals the localized zero")]
    DegenerateStretch,
    #[error("positivity needs one above zero")]
    NegativeOrientation,
    #[error("sample count must be positive")]
    NoSamples,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Localization {
    zero: Rational,
    one: Rational,
}

impl Localization {
    pub fn new(zero: Rational, one: Rational) -> Result<Self, FieldError> {
        if zero == one {
            return Err(FieldError::Degenerate);
        }
        Ok(Localization { zero, one })
    }

    pub fn standard() -> Self {
        Localization {
            zero: Rational::zero(),
            one: Rational::one(),
        }
    }

    pub fn zero(&self) -> &Rational {
        &self.zero
    }

    pub fn one(&self) -> &Rational {
        &self.one
    }

    /// `u − z`, the length of the unit.
    pub fn unit(&self) -> Rational {
        &self.one - &self.zero
    }

    pub fn add(&self, x: &Rational, y: &Rational) -> Rational {
        x + y - &self.zero
    }

    pub fn neg(&self, x: &Rational) -> Rational {
        &self.zero + &self.zero - x
    }

    pub fn sub(&self, x: &Rational, y: &Rational) -> Rational {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Rational, y: &Rational) -> Rational {
        &self.zero + (x - &self.zero) * (y - &self.zero) / self.unit()
    }

    pub fn inv(&self, x: &Rational) -> Result<Rational, FieldError> {
        if x == &self.zero {
            return Err(FieldError::DivisionByZero);
        }
        let u = self.unit();
        Ok(&self.zero + &u * &u / (x - &self.zero))
    }

    pub fn div(&self, x: &Rational, y: &Rational) -> Result<Rational, FieldError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// Multiplication by `a` as a map of the line.
    pub fn stretch(&self, a: &Rational) -> Result<AffineMap, FieldError> {
        if a == &self.zero {
            return Err(FieldError::DegenerateStretch);
        }
        let slope = (a - &self.zero) / self.unit();
        let offset = &self.zero - &slope * &self.zero;
        Ok(AffineMap::new(slope, offset).expect("non-zero slope"))
    }
}

pub fn loc_add(l: &Localization, x: &Rational, y: &Rational) -> Rational {
    l.add(x, y)
}

pub fn loc_neg(l: &Localization, x: &Rational) -> Rational {
    l.neg(x)
}

pub fn loc_sub(l: &Localization, x: &Rational, y: &Rational) -> Rational {
    l.sub(x, y)
}

pub fn loc_mul(l: &Localization, x: &Rational, y: &Rational) -> Rational {
    l.mul(x, y)
}

pub fn loc_inv(l: &Localization, x: &Rational) -> Result<Rational, FieldError> {
    l.inv(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    AddAssociative,
    AddCommutative,
    AddIdentity,
    AddInverse,
    MulAssociative,
    MulCommutative,
    MulIdentity,
    MulInverse,
    Distributive,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::AddAssociative,
        Axiom::AddCommutative,
        Axiom::AddIdentity,
        Axiom::AddInverse,
        Axiom::MulAssociative,
        Axiom::MulCommutative,
        Axiom::MulIdentity,
        Axiom::MulInverse,
        Axiom::Distributive,
    ];

    /// Whether the axiom holds at `(x, y, w)`.
    pub fn holds(self, l: &Localization, x: &Rational, y: &Rational, w: &Rational) -> bool {
        match self {
            Axiom::AddAssociative => l.add(&l.add(x, y), w) == l.add(x, &l.add(y, w)),
            Axiom::AddCommutative => l.add(x, y) == l.add(y, x),
            Axiom::AddIdentity => l.add(l.zero(), x) == *x && l.add(x, l.zero()) == *x,
            Axiom::AddInverse => l.add(x, &l.neg(x)) == *l.zero(),
            Axiom::MulAssociative => l.mul(&l.mul(x, y), w) == l.mul(x, &l.mul(y, w)),
            Axiom::MulCommutative => l.mul(x, y) == l.mul(y, x),
            Axiom::MulIdentity => l.mul(l.one(), x) == *x && l.mul(x, l.one()) == *x,
            Axiom::MulInverse => match l.inv(x) {
                Ok(ix) => l.mul(x, &ix) == *l.one(),
                Err(_) => x == l.zero(),
            },
            Axiom::Distributive => l.mul(x, &l.add(y, w)) == l.add(&l.mul(x, y), &l.mul(x, w)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    pub passed: bool,
    pub counterexample: Option<[Rational; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldReport {
    pub localization: Localization,
    pub samples: usize,
    pub axioms: Vec<AxiomResult>,
}

impl FieldReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }
}

/// Deterministic rational triples; the first triple always includes the
/// localized zero and one.
pub fn sample_triples(l: &Localization, count: usize, seed: u64) -> Vec<[Rational; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push([l.zero().clone(), l.one().clone(), Rational::sample(&mut rng, 50, 12)]);
    }
    while out.len() < count {
        out.push([
            Rational::sample(&mut rng, 1000, 97),
            Rational::sample(&mut rng, 1000, 97),
            Rational::sample(&mut rng, 1000, 97),
        ]);
    }
    out
}

pub fn verify_field_axioms(l: &Localization, count: usize, seed: u64) -> Result<FieldReport, FieldError> {
    if count == 0 {
        return Err(FieldError::NoSamples);
    }
    let triples = sample_triples(l, count, seed);
    let axioms = Axiom::ALL
        .iter()
        .map(|&axiom| {
            let counterexample = triples.iter().find(|[x, y, w]| !axiom.holds(l, x, y, w)).cloned();
            AxiomResult {
                axiom,
                passed: counterexample.is_none(),
                counterexample,
            }
        })
        .collect();
    Ok(FieldReport {
        localization: l.clone(),
        samples: count,
        axioms,
    })
}

/// The affine map carrying `l1` onto `l2`; it is a field isomorphism.
pub fn localization_iso(l1: &Localization, l2: &Localization) -> AffineMap {
    let slope = l2.unit() / l1.unit();
    let offset = l2.zero() - &slope * l1.zero();
    AffineMap::new(slope, offset).expect("units are non-zero")
}

/// Checks `φ` on one pair: zero, one, sums and products are carried over.
pub fn iso_holds_at(phi: &AffineMap, l1: &Localization, l2: &Localization, x: &Rational, y: &Rational) -> bool {
    phi.apply(l1.zero()) == *l2.zero()
        && phi.apply(l1.one()) == *l2.one()
        && phi.apply(&l1.add(x, y)) == l2.add(&phi.apply(x), &phi.apply(y))
        && phi.apply(&l1.mul(x, y)) == l2.mul(&phi.apply(x), &phi.apply(y))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StretchImage {
    pub interval: Interval,
    /// The stretch reverses order, so the closed end of the image is on
    /// the right: the true image is `(lo, hi]`.
    pub reversed: bool,
}

pub fn stretch_image(l: &Localization, a: &Rational, interval: &Interval) -> Result<StretchImage, FieldError> {
    let m = l.stretch(a)?;
    Ok(StretchImage {
        interval: interval.image(&m),
        reversed: !m.is_order_preserving(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub samples: usize,
    pub positives_closed: bool,
    pub negation_reverses: bool,
    /// First sampled pair breaking either property.
    pub counterexample: Option<[Rational; 2]>,
}

impl OrderReport {
    pub fn passed(&self) -> bool {
        self.positives_closed && self.negation_reverses
    }
}

pub fn order_compatibility(l: &Localization, count: usize, seed: u64) -> Result<OrderReport, FieldError> {
    if count == 0 {
        return Err(FieldError::NoSamples);
    }
    if l.one() < l.zero() {
        return Err(FieldError::NegativeOrientation);
    }
    let minus_one = l.neg(l.one());
    let mut positives_closed = true;
    let mut negation_reverses = true;
    let mut counterexample = None;
    for [x, y, _] in sample_triples(l, count, seed) {
        let z = l.zero();
        let closed = !(&x > z && &y > z) || (&l.add(&x, &y) > z && &l.mul(&x, &y) > z);
        let reverses = x == y || {
            let (lo, hi) = if x < y { (&x, &y) } else { (&y, &x) };
            l.mul(&minus_one, lo) > l.mul(&minus_one, hi)
        };
        positives_closed &= closed;
        negation_reverses &= reverses;
        if !(closed && reverses) && counterexample.is_none() {
            counterexample = Some([x, y]);
        }
    }
    Ok(OrderReport {
        samples: count,
        positives_closed,
        negation_reverses,
        counterexample,
    })
}
