//! Hardy–Littlewood majorization and the two disjoint-sum comparison lemmas.
//!
//! `Y ≺ X` means `∫_0^s Y* <= ∫_0^s X*` for every `s` in `[0, 1]`. Both sides
//! are piecewise linear in `s` with kinks only at breakpoints of `Y*` or
//! `X*`, so their difference is linear between consecutive merged
//! breakpoints and attains its maximum at one of them. Checking the merged
//! breakpoints is therefore exact and complete.

use num_traits::{One, Signed, Zero};

use crate::coupling::{disjoint_sum, rank_coupling, transport, Direction};
use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::norms::{norm, NormDescriptor, NormValue};
use crate::rational::{self, Rational};
use crate::stepfn::StepFunction;

/// Non-negative weights summing to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexWeights(Vec<Rational>);

impl ConvexWeights {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::pre("ConvexWeights", "no weights"));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::pre("ConvexWeights", "negative weight"));
        }
        let total = weights.iter().fold(Rational::zero(), |a, w| a + w);
        if !total.is_one() {
            return Err(Error::pre("ConvexWeights", format!("weights sum to {}", rational::format(&total))));
        }
        Ok(Self(weights))
    }

    pub fn uniform(k: usize) -> Self {
        let w = Rational::new(1.into(), (k as i64).into());
        Self(vec![w; k])
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `∫_0^s f` at each of the sorted points `ss`, in one pass.
fn prefix_integrals(f: &StepFunction, ss: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(ss.len());
    let mut acc = Rational::zero();
    let mut pos = Rational::zero();
    let mut seg = 0;
    let bp = f.breakpoints();
    let vals = f.values();
    for s in ss {
        while pos < *s {
            let end = if bp[seg + 1] < *s { bp[seg + 1].clone() } else { s.clone() };
            acc += &vals[seg] * (&end - &pos);
            if end == bp[seg + 1] {
                seg += 1;
            }
            pos = end;
        }
        out.push(acc.clone());
    }
    out
}

/// `Y ≺ X`.
pub fn prec(y: &StepFunction, x: &StepFunction) -> bool {
    let (ys, xs) = (y.decreasing_rearrangement(), x.decreasing_rearrangement());
    let mut points: Vec<Rational> = ys.breakpoints().iter().chain(xs.breakpoints()).cloned().collect();
    points.sort();
    points.dedup();
    prefix_integrals(&ys, &points).iter().zip(prefix_integrals(&xs, &points)).all(|(a, b)| *a <= b)
}

/// Evaluates `(1/k)·⊕^k X ≺ Σ λ_i X_i` for non-negative `X` with
/// `P(X ≠ 0) <= 1/k` and `X_i ~ X`, `k = shuffles.len()`.
pub fn check_majorization_lemma(x: &StepFunction, shuffles: &[StepFunction], w: &ConvexWeights) -> Result<bool> {
    let k = shuffles.len();
    if k == 0 {
        return Err(Error::hyp("shuffles", "need at least one shuffle"));
    }
    if w.len() != k {
        return Err(Error::hyp("weights", format!("{} weights for {k} shuffles", w.len())));
    }
    if !x.is_nonnegative() {
        return Err(Error::hyp("X", "X must be non-negative"));
    }
    let k_r = Rational::from_integer((k as i64).into());
    if x.support_measure() * &k_r > Rational::one() {
        return Err(Error::hyp("X", format!("P(X != 0) = {} exceeds 1/{k}", rational::format(&x.support_measure()))));
    }
    if let Some(i) = shuffles.iter().position(|s| !s.same_distribution(x)) {
        return Err(Error::hyp("shuffles", format!("shuffle {i} is not equidistributed with X")));
    }
    let copies = vec![x.clone(); k];
    let lhs = disjoint_sum(&copies)?.scale(&k_r.recip());
    let rhs = shuffles.iter().zip(w.as_slice()).fold(StepFunction::zero(), |acc, (s, l)| &acc + &s.scale(l));
    Ok(prec(&lhs, &rhs))
}

fn check_another_hypotheses(x: &StepFunction, a: &IntervalSet, sets: &[IntervalSet], k: usize) -> Result<()> {
    if sets.len() != k {
        return Err(Error::hyp("k", format!("{} sets A_i for k = {k}", sets.len())));
    }
    let mu = a.measure();
    if k == 0 || &mu * Rational::from_integer((k as i64).into()) > Rational::one() {
        return Err(Error::hyp("A", format!("P(A) = {} exceeds 1/{k}", rational::format(&mu))));
    }
    let ax = x.abs();
    if let (Some((inside, _)), Some((_, outside))) = (ax.range_on(a), ax.range_on(&a.complement())) {
        if inside < outside {
            return Err(Error::hyp(
                "X",
                format!(
                    "inf |X| on A = {} < sup |X| off A = {}",
                    rational::format(&inside),
                    rational::format(&outside)
                ),
            ));
        }
    }
    if let Some(i) = sets.iter().position(|s| s.measure() > mu) {
        return Err(Error::hyp("A_i", format!("P(A_{i}) > P(A)")));
    }
    Ok(())
}

/// `(‖⊕_i X·1_{A_i}‖, ‖⊕_i X·1_A‖)` under the hypotheses `P(A) <= 1/k`,
/// `inf_A |X| >= sup_{A^c} |X|` and `P(A_i) <= P(A)`; the first never
/// exceeds the second.
pub fn check_lemma_another(
    x: &StepFunction,
    a: &IntervalSet,
    sets: &[IntervalSet],
    k: usize,
    d: &NormDescriptor,
) -> Result<(NormValue, NormValue)> {
    check_another_hypotheses(x, a, sets, k)?;
    let moved: Vec<StepFunction> = sets.iter().map(|s| x.restrict(s)).collect();
    let top = vec![x.restrict(a); k];
    Ok((norm(&disjoint_sum(&moved)?, d)?, norm(&disjoint_sum(&top)?, d)?))
}

/// The explicit coupling behind [`check_lemma_another`], for `|X|`.
#[derive(Debug, Clone)]
pub struct AnotherTrace {
    /// `Z_i ~ |X|1_{A_i}` with `Z_i <= |X|1_A`.
    pub z: Vec<StepFunction>,
    /// Disjoint copies of `|X|1_A`.
    pub u: Vec<StepFunction>,
    /// `V_i ~ Z_i` with `V_i <= U_i`.
    pub v: Vec<StepFunction>,
    /// Every pointwise and distributional claim of the construction held.
    pub verified: bool,
}

/// Builds `Z_i`, `U_i`, `V_i`: `Z_i` keeps `|X|` on `A_i ∩ A` and moves
/// `|X|` on `A_i \ A` onto a piece `B_i` of `A \ A_i`; the `U_i` are packed
/// copies of `|X|1_A`; `V_i` is the rank coupling of `Z_i` under `U_i`.
pub fn another_coupling_trace(x: &StepFunction, a: &IntervalSet, sets: &[IntervalSet]) -> Result<AnotherTrace> {
    let k = sets.len();
    check_another_hypotheses(x, a, sets, k)?;
    let ax = x.abs();
    let top = ax.restrict(a);
    let mu = a.measure();
    let mut trace =
        AnotherTrace { z: Vec::with_capacity(k), u: Vec::with_capacity(k), v: Vec::with_capacity(k), verified: true };
    for (i, ai) in sets.iter().enumerate() {
        let outside = ai.difference(a);
        let room = a.difference(ai);
        let b = room.prefix(&outside.measure())?;
        let z = &ax.restrict(&ai.intersection(a)) + &transport(&ax, &outside, &b)?;
        let start = &mu * Rational::from_integer((i as i64).into());
        let block = IntervalSet::interval(start.clone(), start + &mu)?;
        let u = transport(&ax, a, &block)?;
        let v = rank_coupling(&u, &top, &z, Direction::Dominates)?;
        trace.verified &= z.same_distribution(&ax.restrict(ai))
            && z.le_pointwise(&top)
            && v.same_distribution(&z)
            && v.le_pointwise(&u);
        trace.z.push(z);
        trace.u.push(u);
        trace.v.push(v);
    }
    let sum_u = trace.u.iter().fold(StepFunction::zero(), |acc, f| &acc + f);
    let sum_v = trace.v.iter().fold(StepFunction::zero(), |acc, f| &acc + f);
    let lhs = disjoint_sum(&sets.iter().map(|s| ax.restrict(s)).collect::<Vec<_>>())?;
    trace.verified &= sum_v.le_pointwise(&sum_u)
        && sum_v.same_distribution(&lhs)
        && sum_u.same_distribution(&disjoint_sum(&vec![top; k])?);
    Ok(trace)
}
