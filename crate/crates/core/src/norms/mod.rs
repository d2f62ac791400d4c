//! Rearrangement-invariant norms of step functions.
//!
//! Every norm here depends only on the decreasing rearrangement `X*`. L¹, L^∞
//! and the counterexample norm are computed exactly; Lp is exact when `p` is
//! an integer and the p-th root happens to be rational; Lorentz and Orlicz
//! norms are evaluated in `f64` and carry an absolute error bound.

mod counterexample;
mod descriptor;
pub mod float;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use counterexample::{
    counterexample_cutoff, counterexample_norm, counterexample_term, norm_term_profile, window, TermProfile,
};
pub use descriptor::{NormDescriptor, YoungFunction};

use crate::error::Result;
use crate::rational::{self, Rational};
use crate::stepfn::StepFunction;
use float::Profile;

/// A norm value: exact when available, always with an `f64` rendering and an
/// absolute error bound on that rendering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormValue {
    #[serde(serialize_with = "ser_opt_pq")]
    pub exact: Option<Rational>,
    pub approx: f64,
    pub error_bound: f64,
}

fn ser_opt_pq<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&rational::format(r)),
        None => s.serialize_none(),
    }
}

impl NormValue {
    pub fn exact(r: Rational) -> Self {
        let approx = rational::to_f64(&r);
        Self { approx, error_bound: approx.abs() * f64::EPSILON, exact: Some(r) }
    }

    pub fn approx(value: f64, error_bound: f64) -> Self {
        Self { exact: None, approx: value, error_bound }
    }

    pub fn zero() -> Self {
        Self::exact(Rational::zero())
    }

    pub fn value(&self) -> f64 {
        self.approx
    }

    /// `self <= other`: exact when both sides are exact, otherwise with
    /// relative slack `rel` on the `f64` renderings.
    pub fn le_within(&self, other: &NormValue, rel: f64) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a <= b,
            _ => self.approx <= other.approx + rel * self.approx.abs().max(other.approx.abs()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(r) => r.is_zero(),
            None => self.approx == 0.0,
        }
    }
}

impl Profile {
    /// The decreasing profile of `x` in `f64`, from exact breakpoints.
    pub fn of(x: &StepFunction) -> Self {
        let star = x.decreasing_rearrangement();
        let mut p = Profile::default();
        for (a, b, v) in star.segments() {
            p.starts.push(rational::to_f64(a));
            p.lens.push(rational::to_f64(&(b - a)));
            p.vals.push(rational::to_f64(v));
        }
        p
    }
}

/// `‖X‖_d`.
pub fn norm(x: &StepFunction, d: &NormDescriptor) -> Result<NormValue> {
    d.validate()?;
    match d {
        NormDescriptor::L1 => Ok(NormValue::exact(x.abs().mean())),
        NormDescriptor::Linf => Ok(NormValue::exact(x.sup_abs())),
        NormDescriptor::Counterexample => Ok(NormValue::exact(counterexample_norm(x))),
        NormDescriptor::Lp { p } if p.fract() == 0.0 && *p <= 64.0 => {
            let e = p.to_u32().expect("small integer exponent");
            let sum = x.segments().fold(Rational::zero(), |acc, (a, b, v)| acc + v.abs().pow(e as i32) * (b - a));
            if let Some(root) = exact_rational_root(&sum, e) {
                return Ok(NormValue::exact(root));
            }
            let (v, err) = float::eval(d, &Profile::of(x))?;
            Ok(NormValue::approx(v, err))
        }
        _ => {
            let (v, err) = float::eval(d, &Profile::of(x))?;
            Ok(NormValue::approx(v, err))
        }
    }
}

fn exact_rational_root(r: &Rational, n: u32) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = rational::exact_root(r.numer(), n)?;
    let den = rational::exact_root(r.denom(), n)?;
    Some(Rational::new(num, den))
}

/// A constant `C` with `‖X‖_1 <= C·‖X‖_d` for every `X`.
pub fn l1_embedding_constant(d: &NormDescriptor) -> f64 {
    match d {
        NormDescriptor::L1 | NormDescriptor::Linf | NormDescriptor::Lp { .. } | NormDescriptor::Counterexample => 1.0,
        // ∫X* <= ‖X‖_{p,∞}·p/(p-1) and ‖X‖_{p,∞} <= (q/p)^{1/q}‖X‖_{p,q}
        NormDescriptor::Lorentz { p, q } => {
            let weak = p / (p - 1.0);
            if q.is_infinite() {
                weak
            } else {
                weak * (q / p).powf(1.0 / q)
            }
        }
        // Jensen: Φ(E|X|/λ) <= E Φ(|X|/λ) <= 1
        NormDescriptor::Orlicz(phi) => phi.inverse_at_one(),
    }
}

/// `(‖X‖_1, ‖X‖_d)`; callers check `‖X‖_1 <= C·‖X‖_d` with
/// [`l1_embedding_constant`].
pub fn l1_domination_check(x: &StepFunction, d: &NormDescriptor) -> Result<(Rational, NormValue)> {
    Ok((x.abs().mean(), norm(x, d)?))
}

#[cfg(test)]
mod tests;
