use num_traits::{One, Signed, Zero};

use super::{EquidistributedPair, SpanDecomposition};
use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::rational::{self, Rational};
use crate::stepfn::StepFunction;

fn r(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

/// `1_A - P(A)·1 = (1/m) Σ_i (1_A - 1_{A_i}) + residual` with `A_1 = A` and
/// `A_2, …, A_m` carved left to right from the complement of `A`.
pub fn smallcom_decomposition(a: &IntervalSet, m: u64) -> Result<SpanDecomposition> {
    if m == 0 {
        return Err(Error::pre("smallcom_decomposition", "m must be at least 1"));
    }
    let mu = a.measure();
    if &mu * r(m) > Rational::one() {
        return Err(Error::pre("smallcom_decomposition", format!("P(A) = {} exceeds 1/{m}", rational::format(&mu))));
    }
    if a.is_empty() {
        return Ok(SpanDecomposition::trivial());
    }
    let ind = StepFunction::indicator(a);
    let mut sets = vec![a.clone()];
    sets.extend(a.complement().carve(&mu, (m - 1) as usize)?);
    let coef = r(m).recip();
    let union = sets.iter().fold(IntervalSet::empty(), |acc, s| acc.union(s));
    let pairs = sets
        .iter()
        .map(|s| Ok((coef.clone(), EquidistributedPair::new(ind.clone(), StepFunction::indicator(s))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpanDecomposition {
        target: &ind - &StepFunction::constant(mu.clone()),
        pairs,
        residual: &StepFunction::scaled_indicator(&union, &coef) - &StepFunction::constant(mu),
    })
}

/// Exact decomposition when `P(A) = n/m` with `1 <= n < m`.
///
/// Cut `A` into `n` blocks of measure `1/m` and the complement into `m - n`
/// more, labelled cyclically. Applying [`smallcom_decomposition`] to each
/// block of `A` with the other blocks as partners gives `n·m` pairs; grouped
/// by label offset they become the `m` pairs `(1_A, 1_{V_s})`, where `V_s`
/// is the union of `n` consecutive blocks starting at label `s`.
pub fn rational_measure_decomposition(a: &IntervalSet, m: u64) -> Result<SpanDecomposition> {
    let mu = a.measure();
    let scaled = &mu * r(m);
    if m == 0 || !scaled.is_integer() || scaled < Rational::one() || scaled >= r(m) {
        return Err(Error::pre(
            "rational_measure_decomposition",
            format!("P(A) = {} is not n/{m} with 1 <= n < {m}", rational::format(&mu)),
        ));
    }
    let rest = a.complement();
    // blocks of A occupy [0, mu) on the label line, the complement [mu, 1)
    let real = |lo: &Rational, hi: &Rational| -> Result<IntervalSet> {
        let clamp = |t: &Rational| if *t < mu { t.clone() } else { mu.clone() };
        let shift = |t: &Rational| if *t > mu { t - &mu } else { Rational::zero() };
        Ok(a.mass_range(&clamp(lo), &clamp(hi))?.union(&rest.mass_range(&shift(lo), &shift(hi))?))
    };
    let ind = StepFunction::indicator(a);
    let coef = r(m).recip();
    let mut pairs = Vec::with_capacity(m as usize);
    for s in 0..m {
        let lo = Rational::new(s.into(), m.into());
        let hi = &lo + &mu;
        let window = if hi <= Rational::one() {
            real(&lo, &hi)?
        } else {
            real(&lo, &Rational::one())?.union(&real(&Rational::zero(), &(hi - Rational::one()))?)
        };
        pairs.push((coef.clone(), EquidistributedPair::new(ind.clone(), StepFunction::indicator(&window))?));
    }
    Ok(SpanDecomposition { target: &ind - &StepFunction::constant(mu), pairs, residual: StepFunction::zero() })
}

/// `1_A - P(A)·1` up to a residual of norm at most `(2/m)·‖1‖`: with
/// `n = ⌈m·P(A)⌉`, the leftmost `(n-1)/m` of `A` is decomposed exactly and
/// the remainder, of measure below `1/m`, by [`smallcom_decomposition`].
pub fn general_set_decomposition(a: &IntervalSet, m: u64) -> Result<SpanDecomposition> {
    let mu = a.measure();
    if !mu.is_positive() || mu >= Rational::one() || m < 3 {
        return Err(Error::pre(
            "general_set_decomposition",
            format!("need 0 < P(A) < 1 and m >= 3, got P(A) = {}, m = {m}", rational::format(&mu)),
        ));
    }
    let scaled = &mu * r(m);
    if scaled.is_integer() {
        return rational_measure_decomposition(a, m);
    }
    let n = scaled.ceil().to_integer();
    let head_mass = Rational::new(n - 1u32, m.into());
    let (b, c) = a.split_at_mass(&head_mass)?;
    let tail = smallcom_decomposition(&c, m)?;
    if b.is_empty() {
        return Ok(tail);
    }
    Ok(rational_measure_decomposition(&b, m)?.scaled_add(&Rational::one(), tail))
}

/// `X - E[X]·1` as `Σ_v v·(1_{X=v} - P(X=v)·1)` over the non-zero values of
/// `X`, each level set decomposed with `max(m, 3)` (exactly when it fits).
pub fn simple_function_decomposition(x: &StepFunction, m: u64) -> Result<SpanDecomposition> {
    if m == 0 {
        return Err(Error::pre("simple_function_decomposition", "m must be at least 1"));
    }
    let mut out = SpanDecomposition::trivial();
    for (v, mass) in x.distribution().masses() {
        if v.is_zero() || mass.is_one() {
            continue;
        }
        let level = x.set_where(|t| t == v);
        let fits = (mass * r(m)).is_integer();
        let part = if fits {
            rational_measure_decomposition(&level, m)?
        } else {
            general_set_decomposition(&level, m.max(3))?
        };
        out = part.scaled_add(v, out);
    }
    Ok(out)
}
