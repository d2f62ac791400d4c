use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::rational::{self, factorial, pow2, Rational};
use crate::stepfn::StepFunction;

/// `s_n = 1/(2^n·n!)`, the width of the n-th window of the norm.
pub fn window(n: u32) -> Rational {
    Rational::new(BigInt::from(1), pow2(n) * factorial(n))
}

/// `n·2^n·∫_0^{s_n} X*`, given `X*`.
pub fn counterexample_term(star: &StepFunction, n: u32) -> Rational {
    let integral = star.partial_integral(&window(n)).expect("windows lie in [0, 1]");
    integral * Rational::from_integer(pow2(n) * n)
}

/// Least `n >= 1` with `s_n` inside the top plateau of `X*`. From there on
/// `term(n) = ‖X‖_∞/(n-1)!`, which never increases, so the supremum is
/// attained at some `n <= cutoff`.
pub fn counterexample_cutoff(star: &StepFunction) -> u32 {
    let bp = star.breakpoints();
    let top = &bp[1] - &bp[0];
    let mut n = 1;
    while window(n) > top {
        n += 1;
    }
    n
}

pub fn counterexample_norm(x: &StepFunction) -> Rational {
    let star = x.decreasing_rearrangement();
    let cutoff = counterexample_cutoff(&star);
    (1..=cutoff).map(|n| counterexample_term(&star, n)).max().unwrap_or_else(Rational::zero)
}

/// Exact terms `term(1..=n_max)` and the certified cutoff.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermProfile {
    #[serde(serialize_with = "ser_terms")]
    pub terms: Vec<(u32, Rational)>,
    pub cutoff: u32,
}

fn ser_terms<S: serde::Serializer>(terms: &[(u32, Rational)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(terms.len()))?;
    for (n, t) in terms {
        seq.serialize_element(&(n, rational::format(t)))?;
    }
    seq.end()
}

impl TermProfile {
    pub fn term(&self, n: u32) -> Option<&Rational> {
        self.terms.iter().find(|(k, _)| *k == n).map(|(_, t)| t)
    }

    /// `n,term_exact,term_decimal` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,term_exact,term_decimal\n");
        for (n, t) in &self.terms {
            out.push_str(&format!("{n},{},{}\n", rational::format(t), rational::to_decimal(t, 30)));
        }
        out
    }
}

pub fn norm_term_profile(x: &StepFunction, n_max: u32) -> TermProfile {
    let star = x.decreasing_rearrangement();
    TermProfile {
        terms: (1..=n_max).map(|n| (n, counterexample_term(&star, n))).collect(),
        cutoff: counterexample_cutoff(&star),
    }
}
