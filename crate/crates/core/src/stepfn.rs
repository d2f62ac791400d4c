//! Piecewise-constant random variables on `([0, 1), Lebesgue)`.
//!
//! A [`StepFunction`] holds breakpoints `0 = t_0 < t_1 < ... < t_m = 1` and the
//! value `v_i` taken on `[t_{i-1}, t_i)`. Adjacent segments never share a
//! value; every constructor and operation re-establishes that canonical form,
//! so structural equality is equality almost everywhere.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepFunction {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
}

/// One constant piece `[t0, t1) -> v` of a step function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "rational::serde_pq")]
    pub t0: Rational,
    #[serde(with = "rational::serde_pq")]
    pub t1: Rational,
    #[serde(with = "rational::serde_pq")]
    pub v: Rational,
}

impl Segment {
    pub fn len(&self) -> Rational {
        &self.t1 - &self.t0
    }
}

impl StepFunction {
    /// Builds from breakpoints and values, validating the partition and
    /// merging equal neighbours.
    pub fn new(breaks: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::Domain(format!("{} breakpoints for {} values", breaks.len(), values.len())));
        }
        if !breaks[0].is_zero() || !breaks[breaks.len() - 1].is_one() {
            return Err(Error::Domain("breakpoints must start at 0 and end at 1".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("breakpoints must be strictly increasing".into()));
        }
        Ok(Self::canonical(breaks, values))
    }

    /// Builds from segments that tile `[0, 1)` in order.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        let mut breaks = Vec::with_capacity(segments.len() + 1);
        let mut values = Vec::with_capacity(segments.len());
        breaks.push(Rational::zero());
        for seg in segments {
            if breaks.last() != Some(&seg.t0) {
                return Err(Error::Domain(format!(
                    "segment starting at {} does not continue the tiling",
                    rational::format(&seg.t0)
                )));
            }
            breaks.push(seg.t1);
            values.push(seg.v);
        }
        Self::new(breaks, values)
    }

    /// Builds from pairwise disjoint pieces `[t0, t1) -> v` in any order; the
    /// uncovered remainder of `[0, 1)` is zero.
    pub fn from_pieces(mut pieces: Vec<(Rational, Rational, Rational)>) -> Result<Self> {
        pieces.retain(|(a, b, _)| a < b);
        pieces.sort_by(|x, y| x.0.cmp(&y.0));
        let mut breaks = vec![Rational::zero()];
        let mut values = Vec::with_capacity(2 * pieces.len() + 1);
        for (a, b, v) in pieces {
            let cursor = breaks.last().unwrap();
            if a < *cursor || a.is_negative() || b > Rational::one() {
                return Err(Error::Domain(format!(
                    "piece [{}, {}) overlaps another piece or leaves [0, 1)",
                    rational::format(&a),
                    rational::format(&b)
                )));
            }
            if a > *cursor {
                breaks.push(a);
                values.push(Rational::zero());
            }
            breaks.push(b);
            values.push(v);
        }
        if !breaks.last().unwrap().is_one() {
            breaks.push(Rational::one());
            values.push(Rational::zero());
        }
        Self::new(breaks, values)
    }

    fn canonical(breaks: Vec<Rational>, values: Vec<Rational>) -> Self {
        let mut nb = Vec::with_capacity(breaks.len());
        let mut nv: Vec<Rational> = Vec::with_capacity(values.len());
        nb.push(breaks[0].clone());
        for (i, v) in values.into_iter().enumerate() {
            if nv.last() == Some(&v) {
                *nb.last_mut().unwrap() = breaks[i + 1].clone();
            } else {
                nv.push(v);
                nb.push(breaks[i + 1].clone());
            }
        }
        Self { breaks: nb, values: nv }
    }

    pub fn constant(c: Rational) -> Self {
        Self { breaks: vec![Rational::zero(), Rational::one()], values: vec![c] }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `v * 1_A`.
    pub fn scaled_indicator(set: &IntervalSet, v: &Rational) -> Self {
        let pieces = set.parts().iter().map(|(a, b)| (a.clone(), b.clone(), v.clone())).collect();
        Self::from_pieces(pieces).expect("interval sets are disjoint and inside [0, 1)")
    }

    pub fn indicator(set: &IntervalSet) -> Self {
        Self::scaled_indicator(set, &Rational::one())
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Number of segments.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn segments(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (&self.breaks[i], &self.breaks[i + 1], v))
    }

    pub fn to_segments(&self) -> Vec<Segment> {
        self.segments().map(|(t0, t1, v)| Segment { t0: t0.clone(), t1: t1.clone(), v: v.clone() }).collect()
    }

    /// Value at `t` in `[0, 1)`.
    pub fn value_at(&self, t: &Rational) -> Result<&Rational> {
        if t.is_negative() || *t >= Rational::one() {
            return Err(Error::Domain(format!("{} is not in [0, 1)", rational::format(t))));
        }
        let idx = self.breaks.partition_point(|b| b <= t) - 1;
        Ok(&self.values[idx])
    }

    pub fn is_constant(&self) -> bool {
        self.values.len() == 1
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self::canonical(self.breaks.clone(), self.values.iter().map(f).collect())
    }

    /// Pointwise combination on the common refinement of both partitions.
    pub fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let (breaks, cols) = common_partition(&[self, other]);
        let values = cols[0].iter().zip(&cols[1]).map(|(a, b)| f(a, b)).collect();
        Self::canonical(breaks, values)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|v| v * c)
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn positive_part(&self) -> Self {
        self.map(|v| if v.is_positive() { v.clone() } else { Rational::zero() })
    }

    pub fn negative_part(&self) -> Self {
        self.map(|v| if v.is_negative() { -v } else { Rational::zero() })
    }

    pub fn max_value(&self) -> &Rational {
        self.values.iter().max().unwrap()
    }

    pub fn min_value(&self) -> &Rational {
        self.values.iter().min().unwrap()
    }

    /// `‖X‖_∞`.
    pub fn sup_abs(&self) -> Rational {
        self.values.iter().map(|v| v.abs()).max().unwrap()
    }

    /// `E[X] = ∫_0^1 X dt`.
    pub fn mean(&self) -> Rational {
        self.segments().fold(Rational::zero(), |acc, (a, b, v)| acc + v * (b - a))
    }

    /// `∫_0^s X dt`, exactly. The segment containing `s` is split.
    pub fn partial_integral(&self, s: &Rational) -> Result<Rational> {
        if s.is_negative() || *s > Rational::one() {
            return Err(Error::Domain(format!(
                "partial_integral upper limit {} is outside [0, 1]",
                rational::format(s)
            )));
        }
        let mut acc = Rational::zero();
        for (a, b, v) in self.segments() {
            if a >= s {
                break;
            }
            let hi = if b < s { b } else { s };
            acc += v * (hi - a);
        }
        Ok(acc)
    }

    /// `E[X·Y]`.
    pub fn pairing(&self, other: &Self) -> Rational {
        let (breaks, cols) = common_partition(&[self, other]);
        breaks
            .windows(2)
            .zip(cols[0].iter().zip(&cols[1]))
            .fold(Rational::zero(), |acc, (w, (a, b))| acc + a * b * (&w[1] - &w[0]))
    }

    /// `X*`: the segments of `|X|` sorted by value, largest first (ties by
    /// left endpoint), packed left to right.
    pub fn decreasing_rearrangement(&self) -> Self {
        let mut pieces: Vec<(Rational, Rational, &Rational)> =
            self.segments().map(|(a, b, v)| (v.abs(), b - a, a)).collect();
        pieces.sort_by(|x, y| y.0.cmp(&x.0).then_with(|| x.2.cmp(y.2)));
        let mut breaks = Vec::with_capacity(pieces.len() + 1);
        let mut values = Vec::with_capacity(pieces.len());
        let mut cursor = Rational::zero();
        breaks.push(cursor.clone());
        for (v, len, _) in pieces {
            cursor += len;
            breaks.push(cursor.clone());
            values.push(v);
        }
        Self::canonical(breaks, values)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.min_value().is_negative()
    }

    pub fn distribution(&self) -> Distribution {
        let mut masses = BTreeMap::new();
        for (a, b, v) in self.segments() {
            *masses.entry(v.clone()).or_insert_with(Rational::zero) += b - a;
        }
        Distribution { masses }
    }

    pub fn same_distribution(&self, other: &Self) -> bool {
        self.distribution() == other.distribution()
    }

    /// `X · 1_A`.
    pub fn restrict(&self, set: &IntervalSet) -> Self {
        self.zip_with(&Self::indicator(set), |x, a| x * a)
    }

    /// The set where `pred(X(t))` holds.
    pub fn set_where(&self, pred: impl Fn(&Rational) -> bool) -> IntervalSet {
        let raw = self.segments().filter(|(_, _, v)| pred(v)).map(|(a, b, _)| (a.clone(), b.clone())).collect();
        IntervalSet::from_intervals(raw).expect("segments lie in [0, 1)")
    }

    /// `{|X| >= c}`.
    pub fn level_set(&self, c: &Rational) -> IntervalSet {
        self.set_where(|v| v.abs() >= *c)
    }

    /// `{X != 0}`.
    pub fn support(&self) -> IntervalSet {
        self.set_where(|v| !v.is_zero())
    }

    pub fn support_measure(&self) -> Rational {
        self.segments().filter(|(_, _, v)| !v.is_zero()).fold(Rational::zero(), |acc, (a, b, _)| acc + (b - a))
    }

    /// `self <= other` almost everywhere.
    pub fn le_pointwise(&self, other: &Self) -> bool {
        let (_, cols) = common_partition(&[self, other]);
        cols[0].iter().zip(&cols[1]).all(|(a, b)| a <= b)
    }

    /// `inf` and `sup` of `X` over a set of positive measure; `None` when the
    /// set is null.
    pub fn range_on(&self, set: &IntervalSet) -> Option<(Rational, Rational)> {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (a, b, v) in self.segments() {
            let seg = IntervalSet::interval(a.clone(), b.clone()).expect("segment in [0, 1)");
            if seg.is_disjoint_from(set) {
                continue;
            }
            if lo.as_ref().map_or(true, |l| v < l) {
                lo = Some(v.clone());
            }
            if hi.as_ref().map_or(true, |h| v > h) {
                hi = Some(v.clone());
            }
        }
        lo.zip(hi)
    }
}

/// Refines several step functions to their common partition. Returns the
/// merged breakpoints and, per input, its value on each cell.
pub fn common_partition(fs: &[&StepFunction]) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    let mut breaks: Vec<Rational> = fs.iter().flat_map(|f| f.breaks.iter().cloned()).collect();
    breaks.sort();
    breaks.dedup();
    let cols = fs
        .iter()
        .map(|f| {
            let mut out = Vec::with_capacity(breaks.len() - 1);
            let mut seg = 0;
            for w in breaks.windows(2) {
                while f.breaks[seg + 1] <= w[0] {
                    seg += 1;
                }
                out.push(f.values[seg].clone());
            }
            out
        })
        .collect();
    (breaks, cols)
}

/// `Σ c_i f_i`, by a sweep over jump events instead of repeated refinement.
pub fn linear_combination<'a>(terms: impl IntoIterator<Item = (&'a Rational, &'a StepFunction)>) -> StepFunction {
    let mut jumps: BTreeMap<Rational, Rational> = BTreeMap::new();
    for (c, f) in terms {
        if c.is_zero() {
            continue;
        }
        let mut prev = Rational::zero();
        for (t, v) in f.breaks.iter().zip(&f.values) {
            let v = v * c;
            *jumps.entry(t.clone()).or_insert_with(Rational::zero) += &v - &prev;
            prev = v;
        }
    }
    jumps.entry(Rational::one()).or_insert_with(Rational::zero);
    let mut breaks = vec![Rational::zero()];
    let mut values = Vec::with_capacity(jumps.len());
    let mut level = Rational::zero();
    for (t, jump) in jumps {
        if t.is_zero() {
            level += jump;
            continue;
        }
        values.push(level.clone());
        breaks.push(t);
        level += jump;
    }
    StepFunction::canonical(breaks, values)
}

pub fn same_distribution(x: &StepFunction, y: &StepFunction) -> bool {
    x.same_distribution(y)
}

pub fn decreasing_rearrangement(x: &StepFunction) -> StepFunction {
    x.decreasing_rearrangement()
}

/// Law of a step function: value ↦ total mass. Masses are positive and sum
/// to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    masses: BTreeMap<Rational, Rational>,
}

impl Distribution {
    pub fn masses(&self) -> &BTreeMap<Rational, Rational> {
        &self.masses
    }

    pub fn mass_of(&self, v: &Rational) -> Rational {
        self.masses.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.masses.values().fold(Rational::zero(), |a, m| a + m)
    }
}

impl Serialize for StepFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_segments().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let segs = Vec::<Segment>::deserialize(d)?;
        StepFunction::from_segments(segs).map_err(serde::de::Error::custom)
    }
}

impl StepFunction {
    /// JSON array of `{"t0", "t1", "v"}` segments with `"p/q"` rationals.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("segments always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&StepFunction> for &StepFunction {
            type Output = StepFunction;
            fn $m(self, rhs: &StepFunction) -> StepFunction {
                self.zip_with(rhs, |a, b| a $op b)
            }
        }
        impl $tr<StepFunction> for StepFunction {
            type Output = StepFunction;
            fn $m(self, rhs: StepFunction) -> StepFunction {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &StepFunction {
    type Output = StepFunction;
    fn neg(self) -> StepFunction {
        self.map(|v| -v)
    }
}

impl Neg for StepFunction {
    type Output = StepFunction;
    fn neg(self) -> StepFunction {
        -&self
    }
}
