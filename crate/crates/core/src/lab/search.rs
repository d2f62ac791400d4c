//! Searches for small averaged disjoint sums `(1/k)·⊕_i X·1_{A_{n_i}}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::norms::{norm, NormDescriptor, NormValue};
use crate::rational::{self, Rational};
use crate::report::ExperimentReport;
use crate::stepfn::StepFunction;

/// Width of the exhaustive pass over the deepest indices.
pub const EXHAUSTIVE_WIDTH: usize = 8;

/// Best index multiset found for one `k` (indices are 1-based).
#[derive(Debug, Clone, Serialize)]
pub struct SearchPoint {
    pub k: usize,
    pub indices: Vec<usize>,
    pub value: NormValue,
}

fn cmp_norm(a: &NormValue, b: &NormValue) -> Ordering {
    match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => x.cmp(y),
        _ => a.approx.total_cmp(&b.approx),
    }
}

/// Distribution of `|X·1_A|` off zero, with the measure of its support.
struct Piece {
    masses: BTreeMap<Rational, Rational>,
    support: Rational,
}

impl Piece {
    fn new(x: &StepFunction, a: &IntervalSet) -> Self {
        let masses: BTreeMap<Rational, Rational> = x
            .restrict(a)
            .abs()
            .distribution()
            .masses()
            .iter()
            .filter(|(v, _)| !v.is_zero())
            .map(|(v, m)| (v.clone(), m.clone()))
            .collect();
        let support = masses.values().fold(Rational::zero(), |acc, m| acc + m);
        Self { masses, support }
    }
}

/// `‖(1/k)·⊕ pieces‖`, evaluated on the decreasing rearrangement built
/// straight from the merged distribution.
fn averaged_norm(pieces: &[&Piece], d: &NormDescriptor) -> Result<NormValue> {
    let k = Rational::from_integer((pieces.len() as i64).into());
    let mut merged: BTreeMap<Rational, Rational> = BTreeMap::new();
    for p in pieces {
        for (v, m) in &p.masses {
            *merged.entry(v / &k).or_insert_with(Rational::zero) += m;
        }
    }
    let mut cursor = Rational::zero();
    let mut out = Vec::with_capacity(merged.len());
    for (v, m) in merged.into_iter().rev() {
        let start = cursor.clone();
        cursor += m;
        out.push((start, cursor.clone(), v));
    }
    norm(&StepFunction::from_pieces(out)?, d)
}

fn admissible(pieces: &[&Piece]) -> bool {
    pieces.iter().fold(Rational::zero(), |acc, p| acc + &p.support) <= Rational::one()
}

fn validate_sets(sets: &[IntervalSet]) -> Result<()> {
    if let Some(i) = sets.windows(2).position(|w| !w[1].is_subset_of(&w[0])) {
        return Err(Error::pre("condition33_search", format!("A_{} is not contained in A_{}", i + 2, i + 1)));
    }
    let total = sets.iter().fold(Rational::zero(), |acc, s| acc + s.measure());
    if total > Rational::one() {
        return Err(Error::pre("condition33_search", format!("Σ P(A_n) = {} exceeds 1", rational::format(&total))));
    }
    Ok(())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Minimum over index multisets per `k <= k_max`. The greedy pass extends
/// the best multiset for `k - 1` by the index giving the smallest averaged
/// norm (ties to the deepest set); for `k <= 8` every `k`-subset of the
/// last eight indices is tried as well. Multisets whose supports would not
/// fit disjointly in `[0, 1)` are skipped; `k` values with no admissible
/// multiset are omitted.
pub fn averaged_minima(
    x: &StepFunction,
    sets: &[IntervalSet],
    k_max: usize,
    d: &NormDescriptor,
) -> Result<Vec<SearchPoint>> {
    validate_sets(sets)?;
    d.validate()?;
    if sets.is_empty() {
        return Ok(Vec::new());
    }
    let pieces: Vec<Piece> = sets.iter().map(|a| Piece::new(x, a)).collect();
    let tail_start = sets.len().saturating_sub(EXHAUSTIVE_WIDTH);
    let mut greedy: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for k in 1..=k_max {
        let tried: Vec<(usize, NormValue)> = (0..pieces.len())
            .into_par_iter()
            .filter_map(|j| {
                let mut chosen: Vec<&Piece> = greedy.iter().map(|&i| &pieces[i]).collect();
                chosen.push(&pieces[j]);
                admissible(&chosen).then(|| averaged_norm(&chosen, d).map(|v| (j, v)))
            })
            .collect::<Result<_>>()?;
        let Some((j, mut best_value)) = tried.into_iter().min_by(|a, b| cmp_norm(&a.1, &b.1).then(b.0.cmp(&a.0)))
        else {
            break;
        };
        greedy.push(j);
        let mut best: Vec<usize> = greedy.clone();
        if k <= sets.len() - tail_start {
            let combos = combinations(sets.len() - tail_start, k);
            let evaluated: Vec<(Vec<usize>, NormValue)> = combos
                .into_par_iter()
                .filter_map(|combo| {
                    let idx: Vec<usize> = combo.iter().map(|i| i + tail_start).collect();
                    let chosen: Vec<&Piece> = idx.iter().map(|&i| &pieces[i]).collect();
                    admissible(&chosen).then(|| averaged_norm(&chosen, d).map(|v| (idx, v)))
                })
                .collect::<Result<_>>()?;
            for (idx, v) in evaluated {
                if cmp_norm(&v, &best_value) == Ordering::Less {
                    best_value = v;
                    best = idx;
                }
            }
        }
        best.sort_unstable();
        out.push(SearchPoint { k, indices: best.iter().map(|i| i + 1).collect(), value: best_value });
    }
    Ok(out)
}

fn search_report(operation: &str, config: serde_json::Value, points: &[SearchPoint]) -> ExperimentReport {
    let mut report = ExperimentReport::new(operation, config);
    for p in points {
        report.record_norm(format!("min k={:02}", p.k), &p.value);
        report.info(format!("indices k={:02}", p.k), format!("{:?}", p.indices), "");
    }
    if let Some(floor) = points.iter().map(|p| &p.value).min_by(|a, b| cmp_norm(a, b)) {
        report.record_norm("floor", floor);
    }
    report
}

/// [`averaged_minima`] as a report.
pub fn condition33_search(
    x: &StepFunction,
    sets: &[IntervalSet],
    k_max: usize,
    d: &NormDescriptor,
) -> Result<ExperimentReport> {
    let points = averaged_minima(x, sets, k_max, d)?;
    let config = json!({ "k_max": k_max, "norm": d.label(), "sets": sets.len() });
    Ok(search_report("condition33_search", config, &points).finish())
}

/// `{X >= α}` for the positive values `α` of `X`, taken from the top while
/// the measures sum to at most one, ordered as a decreasing sequence.
pub fn level_tail_sets(x: &StepFunction) -> Result<Vec<IntervalSet>> {
    if !x.is_nonnegative() {
        return Err(Error::pre("aocea_probe", "X must be non-negative"));
    }
    let mut sets = Vec::new();
    let mut total = Rational::zero();
    for alpha in x.distribution().masses().keys().rev().filter(|v| v.is_positive()) {
        let set = x.set_where(|v| v >= alpha);
        total += set.measure();
        if total > Rational::one() {
            break;
        }
        sets.push(set);
    }
    sets.reverse();
    Ok(sets)
}

pub fn aocea_minima(x: &StepFunction, d: &NormDescriptor, k_max: usize) -> Result<Vec<SearchPoint>> {
    averaged_minima(x, &level_tail_sets(x)?, k_max, d)
}

/// The tail-set instance of the search for non-negative `X`.
pub fn aocea_probe(x: &StepFunction, d: &NormDescriptor, k_max: usize) -> Result<ExperimentReport> {
    let sets = level_tail_sets(x)?;
    let points = averaged_minima(x, &sets, k_max, d)?;
    let config = json!({ "k_max": k_max, "norm": d.label(), "thresholds": sets.len() });
    Ok(search_report("aocea_probe", config, &points).finish())
}
