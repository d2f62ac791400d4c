//! The growth construction: from `ΣU_i >= Y - Z + ΣV_i` with `U_i ~ V_i`,
//! enlarge a small set `A` to `A'` on which `U` gains almost `E[Y·1_A]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::json;

use super::witness::{build_witness, c, WitnessConfig};
use crate::coupling::{rank_coupling, Direction};
use crate::error::{Error, Result};
use crate::gen;
use crate::interval::IntervalSet;
use crate::norms::{counterexample_norm, window};
use crate::rational::{self, factorial, pow2, ratio, Rational};
use crate::report::ExperimentReport;
use crate::span::EquidistributedPair;
use crate::stepfn::StepFunction;

#[derive(Debug, Clone)]
pub struct GrowthInstance {
    pub y: StepFunction,
    pub z: StepFunction,
    pub pairs: Vec<EquidistributedPair>,
    pub epsilon: Rational,
    pub a: IntervalSet,
    pub n: u32,
    pub k: u32,
}

fn r(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

/// `1/((m+1)^rounds · 2^n · n!)`.
fn measure_cap(m: usize, n: u32, rounds: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(m as u64 + 1).pow(rounds) * pow2(n) * factorial(n))
}

impl GrowthInstance {
    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    /// `U = Σ U_i`.
    pub fn u(&self) -> StepFunction {
        self.pairs.iter().fold(StepFunction::zero(), |acc, p| &acc + p.u())
    }

    fn sum_v(&self) -> StepFunction {
        self.pairs.iter().fold(StepFunction::zero(), |acc, p| &acc + p.v())
    }

    /// `1/(n 2^n)`.
    fn slack_factor(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.n) * pow2(self.n))
    }

    /// Every hypothesis except the measure of `A`, which depends on the
    /// number of rounds.
    fn check_common(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::hyp("n", "n must be at least 1"));
        }
        if self.k == 0 {
            return Err(Error::hyp("k", "k must be at least 1"));
        }
        if !self.y.is_nonnegative() {
            return Err(Error::hyp("Y", "Y must be non-negative"));
        }
        if !self.z.is_nonnegative() {
            return Err(Error::hyp("Z", "Z must be non-negative"));
        }
        if let Some(i) = self.pairs.iter().position(|p| !p.u().is_nonnegative() || !p.v().is_nonnegative()) {
            return Err(Error::hyp("pairs", format!("pair {i} has a negative part")));
        }
        let zn = counterexample_norm(&self.z);
        if zn >= self.epsilon {
            return Err(Error::hyp(
                "epsilon",
                format!("‖Z‖ = {} is not below epsilon = {}", rational::format(&zn), rational::format(&self.epsilon)),
            ));
        }
        let rhs = &(&self.y - &self.z) + &self.sum_v();
        if !rhs.le_pointwise(&self.u()) {
            return Err(Error::hyp("U", "ΣU_i >= Y - Z + ΣV_i fails"));
        }
        Ok(())
    }

    /// All hypotheses for `rounds` growth steps.
    pub fn check_hypotheses(&self, rounds: u32) -> Result<()> {
        self.check_common()?;
        let cap = measure_cap(self.m(), self.n, rounds);
        if self.a.measure() > cap {
            return Err(Error::hyp(
                "A",
                format!("P(A) = {} exceeds {}", rational::format(&self.a.measure()), rational::format(&cap)),
            ));
        }
        Ok(())
    }

    /// Draws non-negative `V_i` on a grid, `U_i` a shuffle of `V_i`,
    /// `D = ΣU_i - ΣV_i`, `Y = D⁺`, `Z = D⁻ + 1/1000`,
    /// `ε = ‖Z‖ + 1/1000`, and `A` inside the support of `Y` at the largest
    /// admissible scale times a random factor in `{1/4, …, 1}`.
    pub fn generate<R: Rng>(rng: &mut R, m: usize, n: u32, k: u32) -> Self {
        let pairs: Vec<EquidistributedPair> = (0..m)
            .map(|_| {
                let v = gen::random_step(rng, 6, 16, 0, 5, 1);
                let u = gen::shuffle(rng, &v);
                EquidistributedPair::new(u, v).expect("shuffles are equidistributed")
            })
            .collect();
        let sum_u = pairs.iter().fold(StepFunction::zero(), |acc, p| &acc + p.u());
        let sum_v = pairs.iter().fold(StepFunction::zero(), |acc, p| &acc + p.v());
        let d = &sum_u - &sum_v;
        let y = d.positive_part();
        let z = &d.negative_part() + &StepFunction::constant(ratio(1, 1000));
        let epsilon = counterexample_norm(&z) + ratio(1, 1000);
        let target = measure_cap(m, n, k) * ratio(rng.gen_range(1..=4), 4);
        let support = y.support();
        let a = if support.measure() >= target {
            let inner = gen::random_subset(rng, &support, &Rational::one(), 16);
            let base = if inner.measure() >= target { inner } else { support };
            base.prefix(&target).expect("target below measure")
        } else {
            IntervalSet::interval(Rational::zero(), target).expect("target below one")
        };
        Self { y, z, pairs, epsilon, a, n, k }
    }
}

/// One growth step from `a`, with its assertions pushed to `report` under
/// `prefix`.
fn grow(inst: &GrowthInstance, a: &IntervalSet, report: &mut ExperimentReport, prefix: &str) -> Result<IntervalSet> {
    let m = inst.m();
    let mut a2 = a.clone();
    for (i, p) in inst.pairs.iter().enumerate() {
        let on_a = p.u().restrict(a);
        let w = rank_coupling(p.v(), p.u(), &on_a, Direction::Dominates)?;
        report.check(
            format!("{prefix}W_{i} ~ U_{i}·1_A and W_{i} <= V_{i}"),
            w.same_distribution(&on_a) && w.le_pointwise(p.v()),
            "W",
            "V",
        );
        a2 = a2.union(&w.support());
    }
    let u = inst.u();
    let mu = a.measure();
    let mu2 = a2.measure();
    report.check(format!("{prefix}A ⊂ A'"), a.is_subset_of(&a2), "A", "A'");
    report.check_le(format!("{prefix}P(A') <= (m+1)P(A)"), &mu2, &(r(m as u64 + 1) * &mu));
    report.check_le(format!("{prefix}P(A') <= 1/(2^n n!)"), &mu2, &window(inst.n));

    let ez = inst.z.restrict(&a2).mean();
    let zstar = inst.z.decreasing_rearrangement();
    let head = zstar.partial_integral(&window(inst.n))?;
    let slack = counterexample_norm(&inst.z) * inst.slack_factor();
    report.check_le(format!("{prefix}E[Z·1_A'] <= ∫_0^(1/(2^n n!)) Z*"), &ez, &head);
    report.check_le(format!("{prefix}∫_0^(1/(2^n n!)) Z* <= ‖Z‖/(n 2^n)"), &head, &slack);

    let gain = u.restrict(&a2).mean() - u.restrict(a).mean();
    let ey = inst.y.restrict(a).mean();
    report.check_le(format!("{prefix}E[Y·1_A] - E[Z·1_A'] <= gain"), &(&ey - &ez), &gain);
    report.check_le(
        format!("{prefix}E[Y·1_A] - ε/(n 2^n) <= E[U·1_A'] - E[U·1_A]"),
        &(&ey - &inst.epsilon * inst.slack_factor()),
        &gain,
    );
    Ok(a2)
}

/// One growth step under the single-round hypotheses.
pub fn lemma41_construct(inst: &GrowthInstance) -> Result<(IntervalSet, ExperimentReport)> {
    inst.check_hypotheses(1)?;
    let mut report = ExperimentReport::new("lemma41_construct", instance_config(inst));
    let a2 = grow(inst, &inst.a, &mut report, "")?;
    Ok((a2, report.finish()))
}

/// `k` growth steps, `A ← A'` each round; checks
/// `E[U·1_A_k] >= k·E[Y·1_A] + E[U·1_A] - k·ε/(n 2^n)` and
/// `P(A_k) <= (m+1)^k P(A)`.
pub fn lemma42_iterate(inst: &GrowthInstance) -> Result<(IntervalSet, ExperimentReport)> {
    inst.check_common()?;
    let mut report = ExperimentReport::new("lemma42_iterate", instance_config(inst));
    let one_round = measure_cap(inst.m(), inst.n, 1);
    let mut a = inst.a.clone();
    for round in 1..=inst.k {
        if a.measure() > one_round {
            return Err(Error::MeasureBudget {
                round: round as usize,
                detail: format!(
                    "P(A) = {} exceeds {} before round {round}",
                    rational::format(&a.measure()),
                    rational::format(&one_round)
                ),
            });
        }
        a = grow(inst, &a, &mut report, &format!("round {round}: "))?;
    }
    let u = inst.u();
    let k = r(inst.k as u64);
    let lhs = u.restrict(&a).mean();
    let rhs =
        &k * inst.y.restrict(&inst.a).mean() + u.restrict(&inst.a).mean() - &k * &inst.epsilon * inst.slack_factor();
    report.record("E[U·1_A']", &lhs);
    report.record("k E[Y·1_A] + E[U·1_A] - k ε/(n 2^n)", &rhs);
    report.check_le("k-fold growth inequality", &rhs, &lhs);
    let budget = r(inst.m() as u64 + 1).pow(inst.k as i32) * inst.a.measure();
    report.check_le("P(A') <= (m+1)^k P(A)", &a.measure(), &budget);
    Ok((a, report.finish()))
}

fn instance_config(inst: &GrowthInstance) -> serde_json::Value {
    json!({
        "m": inst.m(),
        "n": inst.n,
        "k": inst.k,
        "epsilon": rational::format(&inst.epsilon),
        "P(A)": rational::format(&inst.a.measure()),
    })
}

/// Reflection `t ↦ 1 - t`, equidistributed with the input.
fn reflect(x: &StepFunction) -> StepFunction {
    let one = Rational::one();
    StepFunction::from_pieces(x.segments().map(|(a, b, v)| (&one - b, &one - a, v.clone())).collect())
        .expect("reflected pieces tile [0, 1)")
}

/// The smallest `n >= 6` with `c_n - c_{n+1} <= 1/((m+1)^k 2^n n!)`.
pub fn growth_scale(m: usize, k: u32) -> u32 {
    (6..).find(|&n| c(n) - c(n + 1) <= measure_cap(m, n, k)).expect("the gap shrinks faster than the cap")
}

/// Runs `k` growth rounds on the witness with `U_1 = Y`, `V_1` its
/// reflection, `Z = V_1 + 1/1000` and `A = [c_{n+1}, c_n)`, and reports
/// `n 2^n E[U·1_A']` against the line `k/4`. Report only: no instance of
/// this shape can have `‖Z‖ < 1/4`, so nothing here is asserted beyond the
/// inequalities of each round.
pub fn growth_demo(n_max: u32, k: u32) -> Result<ExperimentReport> {
    let y = build_witness(WitnessConfig::new(n_max)?);
    let n = growth_scale(1, k);
    if n >= n_max {
        return Err(Error::pre("growth_demo", format!("n_max = {n_max} must exceed n = {n}")));
    }
    let v = reflect(&y);
    let z = &v + &StepFunction::constant(ratio(1, 1000));
    let inst = GrowthInstance {
        epsilon: counterexample_norm(&z) + ratio(1, 1000),
        pairs: vec![EquidistributedPair::new(y.clone(), v)?],
        a: IntervalSet::interval(c(n + 1), c(n))?,
        y,
        z,
        n,
        k,
    };
    let (a2, inner) = lemma42_iterate(&inst)?;
    let mut report = ExperimentReport::new("growth_demo", json!({ "n_max": n_max, "k": k, "n": n }));
    report.absorb("iterate", inner);
    let scaled = Rational::from_integer(BigInt::from(n) * pow2(n)) * inst.u().restrict(&a2).mean();
    let line = ratio(k as i64, 4);
    report.record("n 2^n E[U·1_A']", &scaled);
    report.record("k/4", &line);
    report.info("n 2^n E[U·1_A'] vs k/4", rational::to_decimal(&scaled, 12), rational::to_decimal(&line, 12));
    report.info("‖Z‖ (no decomposition reaches 1/4)", rational::format(&inst.epsilon), "1/4");
    debug_assert!(!scaled.is_negative());
    Ok(report.finish())
}
