//! Seeded randomized property suites. Instance `i` of a suite draws from
//! its own generator seeded by `derive_seed(seed, suite, i)`, so results do
//! not depend on scheduling; instances run in parallel and are reported in
//! index order.

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::error::Result;
use crate::gen::{self, instance_rng, InstanceRng};
use crate::interval::IntervalSet;
use crate::lab::{lemma41_construct, lemma42_iterate, GrowthInstance};
use crate::majorization::{check_lemma_another, check_majorization_lemma, ConvexWeights};
use crate::norms::{norm, NormDescriptor, NormValue};
use crate::rational::{self, ratio, Rational};
use crate::report::ExperimentReport;
use crate::span::{
    general_set_decomposition, law_invariance_witness, positive_part_functional, rational_measure_decomposition,
    RepresentedFunctional,
};
use crate::stepfn::StepFunction;

/// Relative slack for comparisons involving floating-point norms.
pub const FLOAT_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub instances: usize,
}

struct Outcome {
    ok: bool,
    lhs: String,
    rhs: String,
}

impl Outcome {
    fn new(ok: bool, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        Self { ok, lhs: lhs.into(), rhs: rhs.into() }
    }
}

fn run<F>(cfg: SuiteConfig, name: &str, f: F) -> Result<ExperimentReport>
where
    F: Fn(&mut InstanceRng) -> Result<Outcome> + Sync,
{
    let outcomes: Vec<Outcome> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| f(&mut instance_rng(cfg.seed, name, i as u64)))
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new(name, json!({ "instances": cfg.instances })).with_seed(cfg.seed);
    for (i, o) in outcomes.into_iter().enumerate() {
        report.check(format!("{name} #{i:03}"), o.ok, o.lhs, o.rhs);
    }
    Ok(report.finish())
}

fn render(v: &NormValue) -> String {
    match &v.exact {
        Some(r) => rational::format(r),
        None => format!("{:e}", v.approx),
    }
}

/// Non-negative `X` with `P(X ≠ 0) <= 1/k`, `k` shuffles of it and random
/// convex weights.
pub fn majorization_instance(rng: &mut InstanceRng) -> (StepFunction, Vec<StepFunction>, ConvexWeights) {
    let k = rng.gen_range(1..=6usize);
    let base = gen::random_step(rng, 6, 12, 0, 5, 1);
    let s = ratio(rng.gen_range(1..=4), 4 * k as i64);
    let x = gen::compress(&base, &s);
    let shuffles = (0..k).map(|_| gen::shuffle(rng, &x)).collect();
    let w = ConvexWeights::new(gen::random_weights(rng, k)).expect("random weights are convex");
    (x, shuffles, w)
}

pub fn majorization_suite(cfg: SuiteConfig) -> Result<ExperimentReport> {
    run(cfg, "majorization", |rng| {
        let (x, shuffles, w) = majorization_instance(rng);
        let ok = check_majorization_lemma(&x, &shuffles, &w)?;
        Ok(Outcome::new(ok, format!("k = {}", shuffles.len()), "prec"))
    })
}

/// `X`, a set `A` of measure at most `1/k` made of the top levels of `|X|`
/// (the last one possibly partial), and `k` sets of measure at most `P(A)`.
pub fn top_set_instance(rng: &mut InstanceRng) -> (StepFunction, IntervalSet, Vec<IntervalSet>) {
    let x = gen::random_step(rng, 6, 24, -5, 5, 1);
    let k = rng.gen_range(1..=4usize);
    let cap = ratio(1, k as i64);
    let ax = x.abs();
    let mut a = IntervalSet::empty();
    for v in ax.distribution().masses().keys().rev() {
        let level = ax.set_where(|t| t == v);
        let room = &cap - a.measure();
        if level.measure() <= room {
            a = a.union(&level);
        } else {
            a = a.union(&gen::random_subset(rng, &level, &room, 16));
            break;
        }
    }
    let mu = a.measure();
    let sets = (0..k)
        .map(|_| {
            let s = gen::random_interval_set(rng, 3, 24);
            let target = s.measure().min(&mu * ratio(rng.gen_range(0..=4), 4));
            s.prefix(&target).expect("target below measure")
        })
        .collect();
    (x, a, sets)
}

pub fn top_set_suite(cfg: SuiteConfig) -> Result<ExperimentReport> {
    run(cfg, "top_set", |rng| {
        let (x, a, sets) = top_set_instance(rng);
        let k = sets.len();
        let mut bad = Vec::new();
        for d in NormDescriptor::panel() {
            let (lhs, rhs) = check_lemma_another(&x, &a, &sets, k, &d)?;
            if !lhs.le_within(&rhs, FLOAT_REL_TOL) {
                bad.push(format!("{}: {} > {}", d.label(), render(&lhs), render(&rhs)));
            }
        }
        let total = NormDescriptor::panel().len();
        Ok(Outcome::new(bad.is_empty(), format!("{}/{total} kinds", total - bad.len()), bad.join("; ")))
    })
}

/// A random set of measure exactly `n/m`.
fn set_of_measure(rng: &mut InstanceRng, target: &Rational) -> IntervalSet {
    let s = gen::random_interval_set(rng, 4, 97);
    if s.measure() >= *target {
        s.prefix(target).expect("target below measure")
    } else {
        let extra = target - s.measure();
        s.union(&s.complement().prefix(&extra).expect("complement is large enough"))
    }
}

/// By coin flip, either a set of measure `n/m` with residual exactly zero,
/// or a random set and `3 <= m < 200` with residual at most `(2/m)·‖1‖` in
/// every panel norm.
pub fn decomposition_suite(cfg: SuiteConfig) -> Result<ExperimentReport> {
    run(cfg, "decomposition", |rng| {
        if rng.gen_bool(0.5) {
            let m = rng.gen_range(2..=50u64);
            let n = rng.gen_range(1..m);
            let a = set_of_measure(rng, &Rational::new(n.into(), m.into()));
            let d = rational_measure_decomposition(&a, m)?;
            return Ok(Outcome::new(d.verify() && d.is_exact(), format!("P(A) = {n}/{m}"), "residual = 0"));
        }
        let a = loop {
            let s = gen::random_interval_set(rng, 4, 997);
            if !s.is_empty() && !s.measure().is_one() {
                break s;
            }
        };
        let m = rng.gen_range(3..200u64);
        let dec = general_set_decomposition(&a, m)?;
        let factor = Rational::new(2.into(), m.into());
        let mut bad = Vec::new();
        for d in NormDescriptor::panel() {
            let res = norm(&dec.residual, &d)?;
            let one = norm(&StepFunction::one(), &d)?;
            let bound = match &one.exact {
                Some(r) => NormValue::exact(r * &factor),
                None => NormValue::approx(one.approx * rational::to_f64(&factor), one.error_bound),
            };
            if !res.le_within(&bound, FLOAT_REL_TOL) {
                bad.push(format!("{}: {} > {}", d.label(), render(&res), render(&bound)));
            }
        }
        Ok(Outcome::new(
            dec.verify() && bad.is_empty(),
            format!("P(A) = {}, m = {m}", rational::format(&a.measure())),
            bad.join("; "),
        ))
    })
}

/// Single growth rounds on generated instances; every tenth instance also
/// runs three rounds.
pub fn growth_suite(cfg: SuiteConfig) -> Result<ExperimentReport> {
    run(cfg, "growth", |rng| {
        let m = rng.gen_range(1..=3usize);
        let n = rng.gen_range(3..=6u32);
        let inst = GrowthInstance::generate(rng, m, n, 1);
        let (_, single) = lemma41_construct(&inst)?;
        let mut ok = single.passed();
        let mut detail = format!("m = {m}, n = {n}");
        if rng.gen_range(0..10) == 0 {
            let inst3 = GrowthInstance::generate(rng, 2, 6, 3);
            let (_, triple) = lemma42_iterate(&inst3)?;
            ok &= triple.passed();
            detail.push_str(", k = 3 iteration");
        }
        Ok(Outcome::new(ok, detail, "growth inequalities"))
    })
}

/// A non-constant kernel has a witness with unequal expectations; a
/// constant kernel has none and collapses on a random `X`.
pub fn collapse_suite(cfg: SuiteConfig) -> Result<ExperimentReport> {
    run(cfg, "collapse", |rng| {
        let f = RepresentedFunctional::new(gen::random_nonconstant(rng, 6, 30, -5, 5));
        let witnessed = match law_invariance_witness(&f) {
            Some((a, b)) => {
                a.measure() == b.measure()
                    && a.measure() > Rational::zero()
                    && f.apply(&StepFunction::indicator(&a)) != f.apply(&StepFunction::indicator(&b))
            }
            None => false,
        };
        let c = RepresentedFunctional::new(StepFunction::constant(gen::random_rational(rng, -5, 5, 7)));
        let x = gen::random_step(rng, 6, 30, -5, 5, 3);
        let collapses = law_invariance_witness(&c).is_none() && c.collapses_on(&x);
        Ok(Outcome::new(witnessed && collapses, "witness / collapse", "found / exact"))
    })
}

/// `E[X·Y⁺]` against the sign-rule maximizer `Z = X·1_{Y>0}` on 32-cell
/// grids.
pub fn positive_part_suite(cfg: SuiteConfig) -> Result<ExperimentReport> {
    run(cfg, "positive_part", |rng| {
        let y = gen::random_step(rng, 32, 32, -4, 4, 2);
        let x = gen::random_step(rng, 32, 32, 0, 4, 2);
        let f = RepresentedFunctional::new(y.clone());
        let z = x.restrict(&y.set_where(|v| *v > Rational::zero()));
        let lhs = positive_part_functional(&f).apply(&x);
        let rhs = f.apply(&z);
        Ok(Outcome::new(lhs == rhs, rational::format(&lhs), rational::format(&rhs)))
    })
}

/// Luxemburg norm for `Φ(u) = u^p` against the Lp norm.
pub fn orlicz_lp_suite(cfg: SuiteConfig) -> Result<ExperimentReport> {
    run(cfg, "orlicz_lp", |rng| {
        let x = gen::random_step(rng, 8, 40, -6, 6, 3);
        let p = [1.5, 2.0, 3.0, 4.5][rng.gen_range(0..4)];
        let a = norm(&x, &NormDescriptor::orlicz_power(p)?)?.value();
        let b = norm(&x, &NormDescriptor::lp(p)?)?.value();
        let ok = (a - b).abs() <= FLOAT_REL_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        Ok(Outcome::new(ok, format!("{a:e}"), format!("{b:e}")))
    })
}

/// Every suite above with the same seed and instance count.
pub fn property_suite(cfg: SuiteConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("property_suite", json!({ "instances": cfg.instances })).with_seed(cfg.seed);
    type Suite = fn(SuiteConfig) -> Result<ExperimentReport>;
    let suites: [(&str, Suite); 7] = [
        ("majorization", majorization_suite),
        ("top_set", top_set_suite),
        ("decomposition", decomposition_suite),
        ("growth", growth_suite),
        ("collapse", collapse_suite),
        ("positive_part", positive_part_suite),
        ("orlicz_lp", orlicz_lp_suite),
    ];
    for (name, suite) in suites {
        let r = suite(cfg)?;
        report.record(
            format!("{name} passed"),
            &Rational::new(r.count(crate::report::Status::Pass).into(), cfg.instances.max(1).into()),
        );
        report.absorb(name, r);
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_reproducible() {
        let cfg = SuiteConfig { seed: 3, instances: 12 };
        let a = property_suite(cfg).unwrap();
        assert!(a.passed(), "{:?}", a.failures().collect::<Vec<_>>());
        let b = property_suite(cfg).unwrap();
        assert_eq!(a.assertions, b.assertions);
        assert_eq!(a.exact_values, b.exact_values);
    }

    #[test]
    fn generated_instances_meet_hypotheses() {
        for i in 0..30 {
            let mut rng = instance_rng(4, "hyp", i);
            let (x, shuffles, _) = majorization_instance(&mut rng);
            assert!(x.support_measure() * Rational::from_integer((shuffles.len() as i64).into()) <= Rational::one());
            let (x, a, sets) = top_set_instance(&mut rng);
            assert!(a.measure() * Rational::from_integer((sets.len() as i64).into()) <= Rational::one());
            if let (Some((lo, _)), Some((_, hi))) = (x.abs().range_on(&a), x.abs().range_on(&a.complement())) {
                assert!(lo >= hi);
            }
        }
    }
}
