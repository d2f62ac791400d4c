//! Measure-preserving rearrangements between step functions: transport of a
//! restriction onto another set, disjoint sums, and the order-preserving
//! rank coupling.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::rational::{self, Rational};
use crate::stepfn::StepFunction;

/// Values of `x` on `set`, in left-to-right order, as `(length, value)`.
fn pieces_on(x: &StepFunction, set: &IntervalSet) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    for (a, b) in set.parts() {
        for (s0, s1, v) in x.segments() {
            let lo = if s0 > a { s0 } else { a };
            let hi = if s1 < b { s1 } else { b };
            if lo < hi {
                out.push((hi - lo, v.clone()));
            }
        }
    }
    out
}

/// Lays `(length, value)` pieces onto `to` left to right.
fn lay_onto(pieces: &[(Rational, Rational)], to: &IntervalSet) -> Vec<(Rational, Rational, Rational)> {
    let mut out = Vec::with_capacity(pieces.len() + to.parts().len());
    let mut slots = to.parts().iter();
    let mut slot = slots.next().cloned();
    for (len, v) in pieces {
        let mut need = len.clone();
        while !need.is_zero() {
            let (a, b) = slot.clone().expect("target has enough measure");
            let room = &b - &a;
            if room <= need {
                out.push((a, b, v.clone()));
                need -= room;
                slot = slots.next().cloned();
            } else {
                let cut = &a + &need;
                out.push((a, cut.clone(), v.clone()));
                slot = Some((cut, b));
                need = Rational::zero();
            }
        }
    }
    out
}

/// Moves `x·1_from` onto `to` by the order-preserving measure-preserving map
/// between the two sets. The result is supported in `to` and `result|_to`
/// has the law of `x|_from`.
pub fn transport(x: &StepFunction, from: &IntervalSet, to: &IntervalSet) -> Result<StepFunction> {
    if from.measure() != to.measure() {
        return Err(Error::pre(
            "transport",
            format!(
                "source measure {} differs from target measure {}",
                rational::format(&from.measure()),
                rational::format(&to.measure())
            ),
        ));
    }
    StepFunction::from_pieces(lay_onto(&pieces_on(x, from), to))
}

/// A representative of `⊕ X_i`: the non-zero parts of each `X_i`, packed left
/// to right in input order, zero elsewhere. Requires
/// `Σ_i P(X_i ≠ 0) ≤ 1`.
pub fn disjoint_sum(xs: &[StepFunction]) -> Result<StepFunction> {
    let total = xs.iter().fold(Rational::zero(), |acc, x| acc + x.support_measure());
    if total > Rational::from_integer(1.into()) {
        return Err(Error::pre(
            "disjoint_sum",
            format!("summand supports have total measure {} > 1", rational::format(&total)),
        ));
    }
    let mut pieces = Vec::new();
    let mut cursor = Rational::zero();
    for x in xs {
        for (len, v) in pieces_on(x, &x.support()) {
            let end = &cursor + &len;
            pieces.push((cursor, end.clone(), v));
            cursor = end;
        }
    }
    StepFunction::from_pieces(pieces)
}

/// Which pointwise order `x1` and `x2` satisfy in [`rank_coupling`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `x1 >= x2`; the output lies below `xp`.
    Dominates,
    /// `x1 <= x2`; the output lies above `xp`.
    Dominated,
}

/// Given `xp ~ x1` and `x1 >= x2` (resp. `<=`), returns `x2'` with
/// `x2' ~ x2` and `xp >= x2'` (resp. `<=`).
///
/// For each value `a`, the level set `{x1 = a}` and `{xp = a}` have equal
/// measure; `x2` restricted to the former is transported onto the latter.
/// On `{xp = a}` the output then takes values of `x2` where `x1 = a`, which
/// are bounded by `a` in the requested direction.
pub fn rank_coupling(
    xp: &StepFunction,
    x1: &StepFunction,
    x2: &StepFunction,
    direction: Direction,
) -> Result<StepFunction> {
    if !xp.same_distribution(x1) {
        return Err(Error::pre("rank_coupling", "xp and x1 are not equidistributed"));
    }
    let ordered = match direction {
        Direction::Dominates => x2.le_pointwise(x1),
        Direction::Dominated => x1.le_pointwise(x2),
    };
    if !ordered {
        return Err(Error::pre("rank_coupling", format!("x1 and x2 violate the {direction:?} order")));
    }
    let mut pieces = Vec::new();
    for value in x1.distribution().masses().keys() {
        let from = x1.set_where(|v| v == value);
        let to = xp.set_where(|v| v == value);
        pieces.extend(lay_onto(&pieces_on(x2, &from), &to));
    }
    StepFunction::from_pieces(pieces)
}
