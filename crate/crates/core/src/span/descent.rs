//! Upper bounds on `d(X, span{U_j - V_j})` by cyclic coordinate descent on
//! the coefficients. The objective `c ↦ ‖X - Σ c_j (U_j - V_j)‖` is convex,
//! so every 1-D restriction is unimodal and golden-section search applies.

use rand::Rng;
use rayon::prelude::*;

use super::EquidistributedPair;
use crate::error::Result;
use crate::gen::instance_rng;
use crate::norms::float::{self, Profile};
use crate::norms::{norm, NormDescriptor, NormValue};
use crate::rational;
use crate::stepfn::{common_partition, StepFunction};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone)]
pub struct DescentConfig {
    /// Total number of 1-D line searches, split evenly across restarts.
    pub budget: usize,
    pub restarts: usize,
    /// Absolute golden-section tolerance in coefficient space.
    pub tol: f64,
    /// Initial coefficients are drawn uniformly from `[-init_range, init_range]`.
    pub init_range: f64,
    pub seed: u64,
}

impl DescentConfig {
    pub fn with_budget(budget: usize) -> Self {
        Self { budget, restarts: 8, tol: 1e-10, init_range: 2.0, seed: 0x5eed_d15c }
    }
}

#[derive(Debug, Clone)]
pub struct DescentResult {
    pub value: NormValue,
    /// Coefficients attaining `value`; all zero when no restart beat `‖X‖`.
    pub coefficients: Vec<f64>,
    pub line_searches: usize,
}

struct Objective<'a> {
    d: &'a NormDescriptor,
    lens: Vec<f64>,
}

impl Objective<'_> {
    fn eval(&self, r: &[f64]) -> Result<(f64, f64)> {
        float::eval(self.d, &Profile::from_cells(self.lens.iter().copied().zip(r.iter().copied())))
    }

    fn along(&self, r: &[f64], g: &[f64], t: f64, buf: &mut Vec<f64>) -> Result<f64> {
        buf.clear();
        buf.extend(r.iter().zip(g).map(|(a, b)| a - t * b));
        Ok(self.eval(buf)?.0)
    }

    /// Minimizer of `t ↦ ‖r - t·g‖` and its value, or `None` when no step
    /// improves on `f0`.
    fn line_search(&self, r: &[f64], g: &[f64], f0: f64, h0: f64, tol: f64) -> Result<Option<(f64, f64)>> {
        let mut buf = Vec::with_capacity(r.len());
        let mut phi = |t: f64| self.along(r, g, t, &mut buf);
        let mut h = h0;
        let fp = phi(h)?;
        let (mut lo, mut hi);
        if fp < f0 {
            let (mut prev, mut cur, mut fcur) = (0.0, h, fp);
            loop {
                h *= 2.0;
                let next = cur + h;
                let fnext = phi(next)?;
                if fnext >= fcur || h > 1e12 {
                    lo = prev;
                    hi = next;
                    break;
                }
                prev = cur;
                cur = next;
                fcur = fnext;
            }
        } else {
            let fm = phi(-h)?;
            if fm < f0 {
                let (mut prev, mut cur, mut fcur) = (0.0, -h, fm);
                loop {
                    h *= 2.0;
                    let next = cur - h;
                    let fnext = phi(next)?;
                    if fnext >= fcur || h > 1e12 {
                        lo = next;
                        hi = prev;
                        break;
                    }
                    prev = cur;
                    cur = next;
                    fcur = fnext;
                }
            } else {
                lo = -h;
                hi = h;
            }
        }
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let (mut f1, mut f2) = (phi(x1)?, phi(x2)?);
        let mut iters = 0;
        while hi - lo > tol && iters < 200 {
            iters += 1;
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = phi(x1)?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = phi(x2)?;
            }
        }
        let (t, ft) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
        Ok((ft < f0).then_some((t, ft)))
    }
}

/// Best `(value, coefficients, line searches)` of one restart.
fn run_restart(
    obj: &Objective,
    x: &[f64],
    gens: &[Vec<f64>],
    start: Vec<f64>,
    quota: usize,
    tol: f64,
) -> Result<(f64, Vec<f64>, usize)> {
    let mut c = start;
    let mut r: Vec<f64> = x.to_vec();
    for (cj, g) in c.iter().zip(gens) {
        for (ri, gi) in r.iter_mut().zip(g) {
            *ri -= cj * gi;
        }
    }
    let mut f = obj.eval(&r)?.0;
    let mut steps = vec![1.0f64; gens.len()];
    let mut used = 0;
    let mut sweep_start = f;
    while used < quota {
        let j = used % gens.len();
        used += 1;
        if gens[j].iter().any(|v| *v != 0.0) {
            if let Some((t, _)) = obj.line_search(&r, &gens[j], f, steps[j], tol)? {
                c[j] += t;
                for (ri, gi) in r.iter_mut().zip(&gens[j]) {
                    *ri -= t * gi;
                }
                f = obj.eval(&r)?.0;
                steps[j] = (2.0 * t.abs()).max(1e-6);
            }
        }
        if j + 1 == gens.len() {
            if sweep_start - f <= 1e-15 * sweep_start.max(f64::MIN_POSITIVE) {
                break;
            }
            sweep_start = f;
        }
    }
    Ok((f, c, used))
}

/// Convex descent with the settings of `cfg`; never worse than `‖X‖`.
pub fn descend(
    x: &StepFunction,
    gens: &[EquidistributedPair],
    d: &NormDescriptor,
    cfg: &DescentConfig,
) -> Result<DescentResult> {
    let base = norm(x, d)?;
    let trivial = DescentResult { value: base.clone(), coefficients: vec![0.0; gens.len()], line_searches: 0 };
    if cfg.budget == 0 || gens.is_empty() || cfg.restarts == 0 {
        return Ok(trivial);
    }
    let diffs: Vec<StepFunction> = gens.iter().map(|p| p.difference()).collect();
    let mut all: Vec<&StepFunction> = vec![x];
    all.extend(diffs.iter());
    let (breaks, cols) = common_partition(&all);
    let lens: Vec<f64> = breaks.windows(2).map(|w| rational::to_f64(&(&w[1] - &w[0]))).collect();
    let cols: Vec<Vec<f64>> = cols.iter().map(|c| c.iter().map(rational::to_f64).collect()).collect();
    let obj = Objective { d, lens };

    let starts: Vec<(Vec<f64>, usize)> = (0..cfg.restarts)
        .map(|i| {
            let mut rng = instance_rng(cfg.seed, "descent-restart", i as u64);
            let c = (0..gens.len()).map(|_| rng.gen_range(-cfg.init_range..=cfg.init_range)).collect();
            let quota = cfg.budget / cfg.restarts + usize::from(i < cfg.budget % cfg.restarts);
            (c, quota)
        })
        .collect();
    let runs: Vec<(f64, Vec<f64>, usize)> = starts
        .into_par_iter()
        .map(|(c, quota)| {
            if quota == 0 {
                return Ok((f64::INFINITY, c, 0));
            }
            run_restart(&obj, &cols[0], &cols[1..], c, quota, cfg.tol)
        })
        .collect::<Result<_>>()?;

    let total: usize = runs.iter().map(|r| r.2).sum();
    let best = runs
        .into_iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(a.0.cmp(&b.0)))
        .map(|(_, r)| r)
        .expect("at least one restart");
    if best.0 >= base.value() {
        return Ok(DescentResult { line_searches: total, ..trivial });
    }
    let mut r = cols[0].clone();
    for (cj, g) in best.1.iter().zip(&cols[1..]) {
        for (ri, gi) in r.iter_mut().zip(g) {
            *ri -= cj * gi;
        }
    }
    let (v, err) = obj.eval(&r)?;
    Ok(DescentResult { value: NormValue::approx(v, err), coefficients: best.1, line_searches: total })
}

/// Upper bound on the distance from `x` to the span of `gens` after at most
/// `budget` line searches with the default configuration.
pub fn distance_upper_bound(
    x: &StepFunction,
    gens: &[EquidistributedPair],
    d: &NormDescriptor,
    budget: usize,
) -> Result<NormValue> {
    Ok(descend(x, gens, d, &DescentConfig::with_budget(budget))?.value)
}
