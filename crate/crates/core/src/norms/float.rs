//! Floating-point evaluation of norms on a decreasing profile.

use super::descriptor::{NormDescriptor, YoungFunction};
use crate::error::{Error, Result};

/// The decreasing rearrangement of `|X|` in `f64`: segment `i` is
/// `[start_i, start_i + len_i)` with value `val_i`, values non-increasing.
#[derive(Debug, Clone, Default)]
pub struct Profile {
    pub starts: Vec<f64>,
    pub lens: Vec<f64>,
    pub vals: Vec<f64>,
}

impl Profile {
    /// From unordered cells `(length, value)`; values are replaced by their
    /// absolute values and sorted in decreasing order.
    pub fn from_cells(cells: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut cells: Vec<(f64, f64)> =
            cells.into_iter().filter(|(len, _)| *len > 0.0).map(|(len, v)| (len, v.abs())).collect();
        cells.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut p = Profile::default();
        let mut cursor = 0.0;
        for (len, v) in cells {
            if p.vals.last() == Some(&v) {
                *p.lens.last_mut().expect("nonempty") += len;
                cursor += len;
                continue;
            }
            p.starts.push(cursor);
            p.lens.push(len);
            p.vals.push(v);
            cursor += len;
        }
        p
    }

    pub fn sup(&self) -> f64 {
        self.vals.first().copied().unwrap_or(0.0)
    }

    fn partial_integral(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for ((a, len), v) in self.starts.iter().zip(&self.lens).zip(&self.vals) {
            if *a >= s {
                break;
            }
            acc += v * len.min(s - a);
        }
        acc
    }
}

/// `(value, absolute error bound)`.
pub fn eval(d: &NormDescriptor, p: &Profile) -> Result<(f64, f64)> {
    let eps = f64::EPSILON;
    let m = p.vals.len() as f64;
    let round = |v: f64, scale: f64| (v, v.abs() * (m + 4.0) * scale * eps);
    Ok(match d {
        NormDescriptor::L1 => round(p.lens.iter().zip(&p.vals).map(|(l, v)| l * v).sum(), 2.0),
        NormDescriptor::Linf => (p.sup(), 0.0),
        NormDescriptor::Lp { p: e } => round(lp(p, *e), 4.0 * (1.0 + e)),
        NormDescriptor::Lorentz { p: pp, q } => round(lorentz(p, *pp, *q), 8.0 * (1.0 + q.min(1e6) / pp)),
        NormDescriptor::Orlicz(phi) => {
            let (hi, lo) = luxemburg(p, phi)?;
            (hi, (hi - lo) + hi * (m + 4.0) * 8.0 * eps)
        }
        NormDescriptor::Counterexample => round(counterexample(p), 4.0),
    })
}

fn lp(p: &Profile, e: f64) -> f64 {
    let sup = p.sup();
    if sup == 0.0 {
        return 0.0;
    }
    // scale by the sup to stay in range
    let s: f64 = p.lens.iter().zip(&p.vals).map(|(l, v)| l * (v / sup).powf(e)).sum();
    sup * s.powf(1.0 / e)
}

/// `b^r - a^r` for `0 <= a < b`, without cancellation.
fn power_gap(a: f64, len: f64, r: f64) -> f64 {
    if a == 0.0 {
        len.powf(r)
    } else {
        a.powf(r) * (r * (len / a).ln_1p()).exp_m1()
    }
}

fn lorentz(p: &Profile, pp: f64, q: f64) -> f64 {
    let sup = p.sup();
    if sup == 0.0 {
        return 0.0;
    }
    if q.is_infinite() {
        return p
            .starts
            .iter()
            .zip(&p.lens)
            .zip(&p.vals)
            .map(|((a, l), v)| (a + l).powf(1.0 / pp) * v)
            .fold(0.0, f64::max);
    }
    let r = q / pp;
    let s: f64 = p
        .starts
        .iter()
        .zip(&p.lens)
        .zip(&p.vals)
        .map(|((a, l), v)| (v / sup).powf(q) * (pp / q) * power_gap(*a, *l, r))
        .sum();
    sup * s.powf(1.0 / q)
}

/// Bracket by doubling/halving from `‖X‖_∞`, then bisect to relative width
/// `1e-12`. Returns `(feasible λ, infeasible λ)`.
fn luxemburg(p: &Profile, phi: &YoungFunction) -> Result<(f64, f64)> {
    let sup = p.sup();
    if sup == 0.0 {
        return Ok((0.0, 0.0));
    }
    let modular = |lambda: f64| -> f64 {
        p.lens.iter().zip(&p.vals).filter(|(_, v)| **v > 0.0).map(|(l, v)| l * phi.eval(v / lambda)).sum()
    };
    let fails = |lambda: f64| -> Result<bool> {
        let e = modular(lambda);
        if e.is_nan() {
            return Err(Error::OrliczBracket(format!("E[Φ(|X|/λ)] is NaN at λ = {lambda:e} for Φ = {}", phi.name())));
        }
        Ok(e > 1.0)
    };
    let (mut lo, mut hi);
    if fails(sup)? {
        lo = sup;
        hi = sup;
        let mut steps = 0;
        while fails(hi)? {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > 2100 || !hi.is_finite() {
                return Err(Error::OrliczBracket(format!(
                    "E[Φ(|X|/λ)] > 1 for every λ up to {lo:e} (Φ = {}, ‖X‖_∞ = {sup:e})",
                    phi.name()
                )));
            }
        }
    } else {
        hi = sup;
        lo = sup;
        let mut steps = 0;
        while !fails(lo)? {
            hi = lo;
            lo *= 0.5;
            steps += 1;
            if steps > 2100 || lo == 0.0 {
                return Err(Error::OrliczBracket(format!(
                    "E[Φ(|X|/λ)] <= 1 for every λ down to {hi:e} (Φ = {})",
                    phi.name()
                )));
            }
        }
    }
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if fails(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((hi, lo))
}

/// `s_n = 1/(2^n n!)` in `f64`; zero once it underflows.
pub(crate) fn window(n: u32) -> f64 {
    let mut s = 1.0f64;
    for k in 1..=n {
        s /= 2.0 * k as f64;
    }
    s
}

fn counterexample(p: &Profile) -> f64 {
    let top = p.lens.first().copied().unwrap_or(1.0);
    let mut best = 0.0f64;
    let mut n = 1u32;
    loop {
        let s = window(n);
        if s == 0.0 {
            break;
        }
        let term = n as f64 * 2f64.powi(n as i32) * p.partial_integral(s);
        best = best.max(term);
        if s <= top {
            break;
        }
        n += 1;
    }
    best
}
