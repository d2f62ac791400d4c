use num_traits::One;
use rikit::gen::{self, instance_rng};
use rikit::lab::{
    aocea_minima, averaged_minima, build_witness, c, growth_demo, tail_norm, verify_witness_mean, verify_witness_norm,
    SearchPoint, WitnessConfig,
};
use rikit::norms::{norm, NormDescriptor, NormValue};
use rikit::rational::{self, factorial, int, ratio, Rational};
use rikit::report::ExperimentReport;
use rikit::span::{
    distance_upper_bound, general_set_decomposition, simple_function_decomposition, smallcom_decomposition,
    EquidistributedPair,
};
use rikit::suite::{property_suite, SuiteConfig};
use rikit::{IntervalSet, StepFunction};
use serde_json::{json, Value};

/// Invalid configuration (exit 2) or a failed computation.
pub enum Failure {
    Config(String),
    Run(String),
}

impl From<rikit::Error> for Failure {
    fn from(e: rikit::Error) -> Self {
        match e {
            rikit::Error::Precondition { .. } | rikit::Error::Parse(_) | rikit::Error::Domain(_) => {
                Failure::Config(e.to_string())
            }
            other => Failure::Run(other.to_string()),
        }
    }
}

type Outcome = Result<ExperimentReport, Failure>;

fn l2() -> NormDescriptor {
    NormDescriptor::Lp { p: 2.0 }
}

fn floor(points: &[SearchPoint]) -> Option<&SearchPoint> {
    points.iter().min_by(|a, b| match (&a.value.exact, &b.value.exact) {
        (Some(x), Some(y)) => x.cmp(y),
        _ => a.value.approx.total_cmp(&b.value.approx),
    })
}

pub fn verify_counterexample(n_max: u32, k: u32, seed: u64, config: Value) -> Outcome {
    if !(4..=60).contains(&n_max) {
        return Err(Failure::Config(format!("--n-max {n_max} must lie in 4..=60")));
    }
    if !(1..=6).contains(&k) {
        return Err(Failure::Config(format!("--k {k} must lie in 1..=6")));
    }
    let cfg = WitnessConfig::new(n_max)?;
    let mut report = ExperimentReport::new("verify-counterexample", config).with_seed(seed);
    report.absorb("mean", verify_witness_mean(cfg));
    report.absorb("norm", verify_witness_norm(cfg));

    let y = build_witness(cfg);
    let cx = NormDescriptor::Counterexample;
    let three_quarters = ratio(3, 4);
    let mut prev_l1: Option<Rational> = None;
    for m in 1..n_max {
        let thr = Rational::from_integer(factorial(m));
        let t = tail_norm(&y, &thr, &cx)?.exact.expect("exact kind");
        report.check_le(format!("tail/counterexample at {m}! >= 3/4"), &three_quarters, &t);
        if m + 2 < n_max {
            let lifted = tail_norm(&y, &(&thr + Rational::one()), &cx)?.exact.expect("exact kind");
            report.check_le(
                format!("tail/counterexample at {m}!+1 >= {}/{}", m + 2, m + 3),
                &ratio(m as i64 + 2, m as i64 + 3),
                &lifted,
            );
        }
        let l1 = tail_norm(&y, &thr, &NormDescriptor::L1)?.exact.expect("exact kind");
        report.record(format!("tail/L1 at {m:02}!"), &l1);
        if let Some(p) = &prev_l1 {
            report.check_le(format!("tail/L1 at {m}! <= at {}!", m - 1), &l1, p);
        }
        prev_l1 = Some(l1);
    }

    if n_max > 8 {
        report.absorb("growth", growth_demo(n_max, k)?);
    }

    // exploratory: distance of Y - E[Y] to a small seeded family of pairs
    let x = &y - &StepFunction::constant(y.mean());
    let mut gens = Vec::new();
    for i in 0..6u64 {
        let mut rng = instance_rng(seed, "plateau", i);
        let u = if i < 3 { y.clone() } else { gen::random_step(&mut rng, 6, 32, 0, 8, 1) };
        let v = gen::shuffle(&mut rng, &u);
        gens.push(EquidistributedPair::new(u, v)?);
    }
    let plateau = distance_upper_bound(&x, &gens, &cx, 600)?;
    report.record_norm("plateau/descent bound", &plateau);
    report.info("plateau/descent bound vs 1/8", format!("{:e}", plateau.approx), "1/8");
    Ok(report.finish())
}

pub fn aocea_search(k_max: usize, depth: u32, n_max: u32, seed: u64, config: Value) -> Outcome {
    if !(1..=256).contains(&k_max) || !(1..=40).contains(&depth) {
        return Err(Failure::Config("--k-max must lie in 1..=256 and --depth in 1..=40".into()));
    }
    if !(4..=40).contains(&n_max) || depth + 1 > n_max {
        return Err(Failure::Config(format!("--n-max {n_max} must lie in 4..=40 and exceed --depth")));
    }
    let mut report = ExperimentReport::new("aocea-search", config).with_seed(seed);

    let mut rng = instance_rng(seed, "aocea-bounded", 0);
    let bounded = gen::random_step(&mut rng, 8, 32, 1, 9, 1);
    let dyadic: Vec<IntervalSet> = (1..=depth)
        .map(|n| IntervalSet::interval(int(0), Rational::new(1.into(), rational::pow2(n))))
        .collect::<rikit::Result<_>>()?;
    let pts = averaged_minima(&bounded, &dyadic, k_max, &l2())?;
    let full = norm(&bounded, &l2())?;
    let best = floor(&pts).map(|p| p.value.clone()).unwrap_or_else(NormValue::zero);
    report.record_norm("L2/bounded X norm", &full);
    report.record_norm("L2/floor", &best);
    report.check(
        "L2/floor < 0.05 ‖X‖_2",
        best.approx < 0.05 * full.approx,
        format!("{:e}", best.approx),
        format!("{:e}", 0.05 * full.approx),
    );

    let y = build_witness(WitnessConfig::new(n_max)?);
    let tails: Vec<IntervalSet> =
        (1..=depth).map(|n| IntervalSet::interval(int(0), c(n))).collect::<rikit::Result<_>>()?;
    let threshold = ratio(2, 5);
    for (label, pts) in [
        ("counterexample/(0,c_n)", averaged_minima(&y, &tails, k_max, &NormDescriptor::Counterexample)?),
        ("counterexample/tails", aocea_minima(&y, &NormDescriptor::Counterexample, k_max)?),
    ] {
        for p in &pts {
            report.record_norm(format!("{label}/k={:03}", p.k), &p.value);
        }
        let f = floor(&pts).expect("at least one k").value.exact.clone().expect("exact kind");
        report.record(format!("{label}/floor"), &f);
        report.check_le(format!("{label}/floor >= 2/5"), &threshold, &f);
    }

    let l1_pts = aocea_minima(&y, &NormDescriptor::L1, k_max)?;
    let first = l1_pts.first().expect("k = 1").value.exact.clone().expect("exact kind");
    let last = l1_pts.last().expect("k = 1").value.exact.clone().expect("exact kind");
    report.record("L1 tails/k=1", &first);
    report.record("L1 tails/last", &last);
    report.check_le("L1 tails/last <= 10^-3 · E[Y]", &last, &(y.mean() * ratio(1, 1000)));
    Ok(report.finish())
}

pub fn span_distance(m: u64, budget: usize, d: &NormDescriptor, seed: u64, config: Value) -> Outcome {
    if !(3..=2000).contains(&m) {
        return Err(Failure::Config(format!("--m {m} must lie in 3..=2000")));
    }
    if budget > 1_000_000 {
        return Err(Failure::Config("--budget must be at most 10^6".into()));
    }
    let mut report = ExperimentReport::new("span-distance", config).with_seed(seed);
    let m_r = Rational::from_integer(m.into());

    let exact = smallcom_decomposition(&IntervalSet::interval(int(0), m_r.recip())?, m)?;
    report.check("smallcom/P(A) = 1/m is exact", exact.verify() && exact.is_exact(), exact.pairs.len(), m);

    let mut rng = instance_rng(seed, "span-sets", 0);
    let a = loop {
        let s = gen::random_interval_set(&mut rng, 4, 997);
        if !s.is_empty() && !s.measure().is_one() {
            break s;
        }
    };
    let dec = general_set_decomposition(&a, m)?;
    report.record("general/P(A)", &a.measure());
    report.check("general/reconstruction", dec.verify(), "target", "span + residual");
    for kind in NormDescriptor::panel() {
        let res = norm(&dec.residual, &kind)?;
        let one = norm(&StepFunction::one(), &kind)?;
        let bound = NormValue::approx(one.approx * 2.0 / m as f64, 0.0);
        let bound = match &one.exact {
            Some(r) => NormValue::exact(r * ratio(2, 1) / &m_r),
            None => bound,
        };
        report.record_norm(format!("general/residual {}", kind.label()), &res);
        report.check_norm_le(format!("general/residual {} <= 2/m ‖1‖", kind.label()), &res, &bound, 1e-9);
    }

    let x = gen::random_step(&mut rng, 5, 101, -6, 6, 1);
    let sdec = simple_function_decomposition(&x, m)?;
    let total: Rational = x.distribution().masses().keys().map(num_traits::Signed::abs).sum();
    let l1 = sdec.residual.abs().mean();
    report.check("simple/reconstruction", sdec.verify(), "target", "span + residual");
    report.check_le("simple/residual L1 <= 2/m Σ|v|", &l1, &(total * ratio(2, 1) / &m_r));

    // descent: a member of the span, the empty family, and the chosen kind
    let gens: Vec<EquidistributedPair> = (0..4)
        .map(|_| {
            let u = gen::random_step(&mut rng, 4, 16, -3, 3, 1);
            let v = gen::shuffle(&mut rng, &u);
            EquidistributedPair::new(u, v)
        })
        .collect::<rikit::Result<_>>()?;
    let member = gens
        .iter()
        .enumerate()
        .fold(StepFunction::zero(), |acc, (j, p)| &acc + &p.difference().scale(&ratio(2 * j as i64 - 3, 4)));
    let member_norm = norm(&member, &l2())?;
    let got = distance_upper_bound(&member, &gens, &l2(), budget)?;
    report.record_norm("descent/member bound (L2)", &got);
    if budget >= 1000 {
        report.check(
            "descent/member bound <= 1e-6 ‖X‖_2",
            got.approx <= 1e-6 * member_norm.approx,
            format!("{:e}", got.approx),
            format!("{:e}", 1e-6 * member_norm.approx),
        );
    }
    let empty = distance_upper_bound(&x, &[], d, budget)?;
    report.check("descent/empty family gives ‖X‖", empty == norm(&x, d)?, format!("{:e}", empty.approx), "‖X‖");
    let half = distance_upper_bound(&x, &gens, d, budget / 2)?;
    let full = distance_upper_bound(&x, &gens, d, budget)?;
    report.record_norm(format!("descent/{} bound", d.label()), &full);
    report.check(
        "descent/non-increasing in budget",
        full.approx <= half.approx,
        format!("{:e}", full.approx),
        format!("{:e}", half.approx),
    );

    let y = build_witness(WitnessConfig::new(20)?);
    let centered = &y - &StepFunction::constant(y.mean());
    let family: Vec<EquidistributedPair> = (0..4u64)
        .map(|i| {
            let mut r = instance_rng(seed, "plateau", i);
            EquidistributedPair::new(y.clone(), gen::shuffle(&mut r, &y))
        })
        .collect::<rikit::Result<_>>()?;
    let plateau = distance_upper_bound(&centered, &family, &NormDescriptor::Counterexample, budget.min(2000))?;
    report.record_norm("plateau/Y_20 - E[Y_20] (counterexample)", &plateau);
    report.info("plateau/descent bound vs 1/8", format!("{:e}", plateau.approx), "1/8");
    Ok(report.finish())
}

pub fn property(instances: usize, seed: u64, config: Value) -> Outcome {
    if instances == 0 || instances > 100_000 {
        return Err(Failure::Config(format!("--instances {instances} must lie in 1..=100000")));
    }
    let mut report = property_suite(SuiteConfig { seed, instances })?;
    report.operation = "property-suite".into();
    report.config = config;
    Ok(report)
}

pub fn norm_of_file(text: &str, d: &NormDescriptor, config: Value) -> Outcome {
    let x = StepFunction::from_json(text).map_err(|e| Failure::Config(format!("input: {e}")))?;
    let mut report = ExperimentReport::new("norm", config);
    let v = norm(&x, d)?;
    report.record_norm(d.label(), &v);
    report.info("error bound", format!("{:e}", v.error_bound), d.label());
    if matches!(d, NormDescriptor::Counterexample) {
        let cutoff = rikit::norms::counterexample_cutoff(&x.decreasing_rearrangement());
        report.term_profile = Some(rikit::norms::norm_term_profile(&x, cutoff));
    }
    Ok(report.finish())
}

pub fn describe(d: &NormDescriptor) -> Value {
    json!(d.label())
}
