//! The witness `Y = Σ_{n>=3} n!·1_[c_{n+1}, c_n)` with `c_n = 1/(2^n (n+1)!)`
//! and its truncations.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::norms::{counterexample_norm, norm, norm_term_profile, window, NormDescriptor, NormValue};
use crate::rational::{self, factorial, pow2, Rational};
use crate::report::ExperimentReport;
use crate::stepfn::StepFunction;

/// Truncation level of the witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessConfig {
    n_max: u32,
}

impl WitnessConfig {
    pub fn new(n_max: u32) -> Result<Self> {
        if n_max < 4 {
            return Err(Error::pre("WitnessConfig", format!("n_max = {n_max} < 4")));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }
}

/// `c_n = 1/(2^n (n+1)!)`.
pub fn c(n: u32) -> Rational {
    Rational::new(BigInt::one(), pow2(n) * factorial(n + 1))
}

fn fact(n: u32) -> Rational {
    Rational::from_integer(factorial(n))
}

/// `Y_{n_max} = Σ_{n=3}^{n_max} n!·1_[c_{n+1}, c_n)`, zero on `[0, c_{n_max+1})`
/// and on `[c_3, 1)`.
pub fn build_witness(cfg: WitnessConfig) -> StepFunction {
    let pieces = (3..=cfg.n_max).map(|n| (c(n + 1), c(n), fact(n))).collect();
    StepFunction::from_pieces(pieces).expect("c_n strictly decreasing")
}

/// `Σ_{n>N} 1/(2^n (n+1)) <= 1/((N+2)·2^N)`, an exact bound on the mean of
/// the part of `Y` beyond the truncation.
pub fn mean_tail_bound(n_max: u32) -> Rational {
    Rational::new(BigInt::one(), pow2(n_max) * BigInt::from(n_max + 2))
}

/// `‖X·1_{|X| >= c}‖_d`.
pub fn tail_norm(x: &StepFunction, c: &Rational, d: &NormDescriptor) -> Result<NormValue> {
    norm(&x.restrict(&x.level_set(c)), d)
}

/// Term profile of `‖Y_{n_max}‖`, the bound `term(l) <= 3` for every `l >= 4`,
/// and monotonicity of `‖Y_j‖` over `4 <= j <= n_max`.
pub fn verify_witness_norm(cfg: WitnessConfig) -> ExperimentReport {
    let n_max = cfg.n_max;
    let mut report = ExperimentReport::new("verify_witness_norm", json!({ "n_max": n_max }));
    let y = build_witness(cfg);
    let star = y.decreasing_rearrangement();
    let cutoff = crate::norms::counterexample_cutoff(&star);
    // beyond the cutoff the window sits inside the top plateau, so
    // term(l) = l·max/l! only decreases
    let last = cutoff.max(n_max);
    let profile = norm_term_profile(&y, last);
    let three = rational::int(3);
    let mut worst = Rational::zero();
    for l in 4..=last {
        let t = profile.term(l).expect("profile covers l").clone();
        report.check_le(format!("term({l}) <= 3"), &t, &three);
        worst = worst.max(t);
    }
    report.record("max term(l), l >= 4", &worst);
    let value = counterexample_norm(&y);
    report.record(format!("norm(Y_{n_max})"), &value);
    report.info("cutoff", cutoff, format!("window({cutoff}) = {}", rational::format(&window(cutoff))));

    let mut prev: Option<Rational> = None;
    for j in 4..=n_max {
        let v = counterexample_norm(&build_witness(WitnessConfig { n_max: j }));
        report.record(format!("norm(Y_{j})"), &v);
        if let Some(p) = &prev {
            report.check_le(format!("norm(Y_{}) <= norm(Y_{j})", j - 1), p, &v);
        }
        prev = Some(v);
    }
    report.term_profile = Some(profile);
    report.finish()
}

/// Exact `E[Y_{n_max}]`, the tail bound, their sum against `1/8`, and the
/// identities of the `c` sequence used along the way.
pub fn verify_witness_mean(cfg: WitnessConfig) -> ExperimentReport {
    let n_max = cfg.n_max;
    let mut report = ExperimentReport::new("verify_witness_mean", json!({ "n_max": n_max }));
    for n in 3..=n_max {
        let gap = c(n) - c(n + 1);
        let formula = (Rational::from_integer(n.into()) + rational::ratio(3, 2))
            / Rational::from_integer(pow2(n) * factorial(n + 2));
        report.check_eq(format!("c_{n} - c_{} closed form", n + 1), &gap, &formula);
        report.check(
            format!("c_{n} < 1/(2^{n} {n}!) < c_{}", n - 1),
            c(n) < window(n) && window(n) < c(n - 1),
            rational::format(&window(n)),
            format!("({}, {})", rational::format(&c(n)), rational::format(&c(n - 1))),
        );
    }
    let y = build_witness(cfg);
    let mean = y.mean();
    let by_formula = (3..=n_max).fold(Rational::zero(), |acc, n| acc + fact(n) * (c(n) - c(n + 1)));
    report.check_eq("E[Y] equals the partial sum", &mean, &by_formula);
    let tail = mean_tail_bound(n_max);
    let total = &mean + &tail;
    report.record(format!("E[Y_{n_max}]"), &mean);
    report.record("tail bound", &tail);
    report.record("E[Y] upper bound", &total);
    report.check_lt("E[Y_n_max] > 0", &Rational::zero(), &mean);
    report.check_lt("E[Y_n_max] + tail bound < 1/8", &total, &rational::ratio(1, 8));
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{self, instance_rng};
    use crate::rational::{int, ratio, to_f64};

    #[test]
    fn c_sequence() {
        assert_eq!(c(3), ratio(1, 192));
        assert_eq!(c(4), ratio(1, 1920));
        assert_eq!(c(3) - c(4), ratio(3, 640));
        for n in 2..40 {
            assert!(c(n + 1) < c(n));
        }
        assert!(WitnessConfig::new(3).is_err());
    }

    #[test]
    fn witness_shape() {
        let y = build_witness(WitnessConfig::new(6).unwrap());
        assert_eq!(y.value_at(&ratio(1, 1000)).unwrap(), &int(6));
        assert_eq!(y.value_at(&c(3)).unwrap(), &int(0));
        assert_eq!(y.value_at(&(c(7) / int(2))).unwrap(), &int(0));
        // non-increasing after the zeroed head, and its rearrangement is the
        // same profile moved to the origin
        let head = c(7);
        let rest = y.restrict(&crate::interval::IntervalSet::interval(head.clone(), int(1)).unwrap());
        let shifted = StepFunction::from_pieces(
            rest.segments()
                .filter(|(a, _, _)| **a >= head)
                .map(|(a, b, v)| (a - &head, b - &head, v.clone()))
                .collect(),
        )
        .unwrap();
        assert_eq!(y.decreasing_rearrangement(), shifted);
        let y4 = build_witness(WitnessConfig::new(4).unwrap());
        let y5 = build_witness(WitnessConfig::new(5).unwrap());
        assert!(y4.le_pointwise(&y5));
    }

    #[test]
    fn mean_values() {
        let r = verify_witness_mean(WitnessConfig::new(20).unwrap());
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let mean = build_witness(WitnessConfig::new(20).unwrap()).mean();
        // direct oracle: Σ (n + 3/2) / (2^n (n+1)(n+2))
        let oracle: f64 = (3..=20).map(|n| (n as f64 + 1.5) / (2f64.powi(n) * ((n + 1) * (n + 2)) as f64)).sum();
        assert!((to_f64(&mean) - oracle).abs() < 1e-15);
        assert!((to_f64(&mean) - 0.048).abs() < 1e-3);
    }

    #[test]
    fn norm_profile_bounds() {
        let r = verify_witness_norm(WitnessConfig::new(12).unwrap());
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.term_profile.is_some());
    }

    #[test]
    fn terms_are_law_invariant() {
        let y = build_witness(WitnessConfig::new(8).unwrap());
        let p = norm_term_profile(&y, 12);
        let mut rng = instance_rng(41, "witness-shuffle", 0);
        for _ in 0..5 {
            let s = gen::shuffle(&mut rng, &y);
            assert_eq!(norm_term_profile(&s, 12).terms, p.terms);
        }
    }

    #[test]
    fn tail_norms() {
        let y = build_witness(WitnessConfig::new(12).unwrap());
        let x = StepFunction::constant(int(2));
        assert!(tail_norm(&x, &int(3), &NormDescriptor::Counterexample).unwrap().is_zero());
        for m in 3..=10u32 {
            let thr = fact(m) + int(1);
            let v = tail_norm(&y, &thr, &NormDescriptor::Counterexample).unwrap().exact.unwrap();
            assert!(v >= ratio(m as i64 + 2, m as i64 + 3), "m = {m}");
        }
        let mut prev = None;
        for m in 3..=12u32 {
            let v = tail_norm(&y, &fact(m), &NormDescriptor::L1).unwrap().exact.unwrap();
            if let Some(p) = prev {
                assert!(v < p);
            }
            prev = Some(v);
        }
    }
}
