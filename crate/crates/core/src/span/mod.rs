//! The span of equidistributed differences: constructive decompositions of
//! mean-zero functions, distance estimates to finite sub-spans, and
//! functionals represented by a kernel.

mod decompose;
mod descent;
mod functional;

pub use decompose::{
    general_set_decomposition, rational_measure_decomposition, simple_function_decomposition, smallcom_decomposition,
};
pub use descent::{descend, distance_upper_bound, DescentConfig, DescentResult};
pub use functional::{law_invariance_witness, positive_part_functional, RepresentedFunctional};

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::norms::{norm, NormDescriptor, NormValue};
use crate::rational::{self, Rational};
use crate::stepfn::{linear_combination, StepFunction};

/// Two step functions with the same distribution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquidistributedPair {
    u: StepFunction,
    v: StepFunction,
}

impl EquidistributedPair {
    pub fn new(u: StepFunction, v: StepFunction) -> Result<Self> {
        if !u.same_distribution(&v) {
            return Err(Error::pre("EquidistributedPair::new", "U and V are not equidistributed"));
        }
        Ok(Self { u, v })
    }

    pub fn u(&self) -> &StepFunction {
        &self.u
    }

    pub fn v(&self) -> &StepFunction {
        &self.v
    }

    /// `U - V`.
    pub fn difference(&self) -> StepFunction {
        &self.u - &self.v
    }
}

/// `target = Σ c_j (U_j - V_j) + residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanDecomposition {
    pub target: StepFunction,
    pub pairs: Vec<(Rational, EquidistributedPair)>,
    pub residual: StepFunction,
}

impl SpanDecomposition {
    /// A decomposition of zero with no pairs.
    pub fn trivial() -> Self {
        Self { target: StepFunction::zero(), pairs: Vec::new(), residual: StepFunction::zero() }
    }

    /// `Σ c_j (U_j - V_j)`.
    pub fn span_part(&self) -> StepFunction {
        let neg: Vec<Rational> = self.pairs.iter().map(|(c, _)| -c).collect();
        linear_combination(
            self.pairs.iter().map(|(c, p)| (c, &p.u)).chain(self.pairs.iter().zip(&neg).map(|((_, p), n)| (n, &p.v))),
        )
    }

    /// Exact reconstruction identity.
    pub fn verify(&self) -> bool {
        let rest = &(&self.target - &self.span_part()) - &self.residual;
        rest.values().iter().all(|v| v.is_zero())
    }

    pub fn is_exact(&self) -> bool {
        self.residual.values().iter().all(|v| v.is_zero())
    }

    /// `c·self + other`, merging pair lists.
    pub(crate) fn scaled_add(mut self, c: &Rational, other: SpanDecomposition) -> Self {
        self.target = &self.target.scale(c) + &other.target;
        self.residual = &self.residual.scale(c) + &other.residual;
        for (coef, _) in &mut self.pairs {
            *coef *= c;
        }
        self.pairs.extend(other.pairs);
        self
    }

    pub fn residual_norms(&self, kinds: &[NormDescriptor]) -> Result<Vec<(String, NormValue)>> {
        kinds.iter().map(|d| Ok((d.label(), norm(&self.residual, d)?))).collect()
    }

    pub fn to_json_value(&self) -> Result<Value> {
        let norms: serde_json::Map<String, Value> = self
            .residual_norms(&NormDescriptor::panel())?
            .into_iter()
            .map(|(k, v)| (k, serde_json::to_value(v).expect("norm value serializes")))
            .collect();
        Ok(json!({
            "target": self.target,
            "pairs": self.pairs.iter().map(|(c, p)| json!({
                "coefficient": rational::format(c),
                "u": p.u,
                "v": p.v,
            })).collect::<Vec<_>>(),
            "residual": self.residual,
            "residual_norms": norms,
        }))
    }
}

#[cfg(test)]
mod tests;
