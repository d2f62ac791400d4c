//! Finite unions of half-open subintervals of `[0, 1)`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Sorted, pairwise disjoint, non-empty half-open intervals `[a, b)` inside
/// `[0, 1)`. Touching intervals are coalesced, so the representation of a
/// set is unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    parts: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self { parts: vec![(Rational::zero(), Rational::one())] }
    }

    /// `[a, b)`; an empty interval when `a >= b`.
    pub fn interval(a: Rational, b: Rational) -> Result<Self> {
        Self::from_intervals(vec![(a, b)])
    }

    /// Builds a set from arbitrary (possibly overlapping, unsorted) intervals.
    /// Endpoints must lie in `[0, 1]`; degenerate intervals are dropped.
    pub fn from_intervals(mut raw: Vec<(Rational, Rational)>) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        for (a, b) in &raw {
            if *a < zero || *b > one || *a > one || *b < zero {
                return Err(Error::Domain(format!(
                    "interval [{}, {}) not inside [0, 1]",
                    rational::format(a),
                    rational::format(b)
                )));
            }
        }
        raw.retain(|(a, b)| a < b);
        raw.sort();
        let mut parts: Vec<(Rational, Rational)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match parts.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => parts.push((a, b)),
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[(Rational, Rational)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.parts.iter().fold(Rational::zero(), |acc, (a, b)| acc + (b - a))
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.parts.iter().any(|(a, b)| a <= t && t < b)
    }

    pub fn complement(&self) -> Self {
        let mut parts = Vec::with_capacity(self.parts.len() + 1);
        let mut cursor = Rational::zero();
        for (a, b) in &self.parts {
            if cursor < *a {
                parts.push((cursor.clone(), a.clone()));
            }
            cursor = b.clone();
        }
        if cursor < Rational::one() {
            parts.push((cursor, Rational::one()));
        }
        Self { parts }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.parts.clone();
        all.extend(other.parts.iter().cloned());
        Self::from_intervals(all).expect("endpoints already validated")
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a0, a1) = &self.parts[i];
            let (b0, b1) = &other.parts[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { parts: out }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// The leftmost subset of measure exactly `mass`.
    pub fn prefix(&self, mass: &Rational) -> Result<Self> {
        let (head, _) = self.split_at_mass(mass)?;
        Ok(head)
    }

    /// Splits into the leftmost part of measure `mass` and the remainder.
    pub fn split_at_mass(&self, mass: &Rational) -> Result<(Self, Self)> {
        if mass.is_negative() || *mass > self.measure() {
            return Err(Error::pre(
                "IntervalSet::split_at_mass",
                format!("mass {} not in [0, {}]", rational::format(mass), rational::format(&self.measure())),
            ));
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut need = mass.clone();
        for (a, b) in &self.parts {
            let len = b - a;
            if need >= len {
                need -= &len;
                left.push((a.clone(), b.clone()));
            } else if need.is_zero() {
                right.push((a.clone(), b.clone()));
            } else {
                let cut = a + &need;
                left.push((a.clone(), cut.clone()));
                right.push((cut, b.clone()));
                need = Rational::zero();
            }
        }
        Ok((Self { parts: left }, Self { parts: right }))
    }

    /// The part lying between masses `lo` and `hi`, counted from the left.
    pub fn mass_range(&self, lo: &Rational, hi: &Rational) -> Result<Self> {
        let (head, _) = self.split_at_mass(hi)?;
        Ok(head.split_at_mass(lo)?.1)
    }

    /// Consecutive disjoint pieces, each of measure `mass`, carved left to
    /// right. Fails if fewer than `count` pieces fit.
    pub fn carve(&self, mass: &Rational, count: usize) -> Result<Vec<Self>> {
        let mut rest = self.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let (head, tail) = rest.split_at_mass(mass)?;
            out.push(head);
            rest = tail;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct Span {
    #[serde(with = "rational::serde_pq")]
    t0: Rational,
    #[serde(with = "rational::serde_pq")]
    t1: Rational,
}

impl Serialize for IntervalSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let spans: Vec<Span> = self.parts.iter().map(|(t0, t1)| Span { t0: t0.clone(), t1: t1.clone() }).collect();
        spans.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spans = Vec::<Span>::deserialize(d)?;
        IntervalSet::from_intervals(spans.into_iter().map(|s| (s.t0, s.t1)).collect()).map_err(serde::de::Error::custom)
    }
}
