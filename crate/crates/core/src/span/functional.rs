use num_traits::Zero;
use serde::Serialize;

use crate::interval::IntervalSet;
use crate::rational::Rational;
use crate::stepfn::StepFunction;

/// The functional `X ↦ E[XY]` for a kernel `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepresentedFunctional {
    pub kernel: StepFunction,
}

impl RepresentedFunctional {
    pub fn new(kernel: StepFunction) -> Self {
        Self { kernel }
    }

    pub fn apply(&self, x: &StepFunction) -> Rational {
        x.pairing(&self.kernel)
    }

    /// `ρ(1) = E[Y]`.
    pub fn at_one(&self) -> Rational {
        self.kernel.mean()
    }

    /// `ρ(X) = ρ(1)·E[X]` for every `X`, which for a kernel means `Y` is
    /// constant.
    pub fn collapses(&self) -> bool {
        self.kernel.is_constant()
    }

    /// `ρ(X) = ρ(1)·E[X]` on one `X`.
    pub fn collapses_on(&self, x: &StepFunction) -> bool {
        self.apply(x) == self.at_one() * x.mean()
    }
}

/// Equal-measure sets `A ⊂ {Y = max Y}` and `B ⊂ {Y = min Y}` (leftmost
/// pieces of half the smaller level set), so `E[1_A Y] ≠ E[1_B Y]` although
/// `1_A ~ 1_B`. `None` when the kernel is constant.
pub fn law_invariance_witness(f: &RepresentedFunctional) -> Option<(IntervalSet, IntervalSet)> {
    let y = &f.kernel;
    if y.is_constant() {
        return None;
    }
    let (hi, lo) = (y.max_value().clone(), y.min_value().clone());
    let top = y.set_where(|v| *v == hi);
    let bottom = y.set_where(|v| *v == lo);
    let mu = top.measure().min(bottom.measure()) / Rational::from_integer(2.into());
    let a = top.prefix(&mu).expect("mu below level measure");
    let b = bottom.prefix(&mu).expect("mu below level measure");
    debug_assert!(!mu.is_zero());
    debug_assert_ne!(f.apply(&StepFunction::indicator(&a)), f.apply(&StepFunction::indicator(&b)));
    Some((a, b))
}

/// The kernel `Y⁺`: for `X >= 0`, `E[X·Y⁺] = sup{E[ZY] : 0 <= Z <= X}`.
pub fn positive_part_functional(f: &RepresentedFunctional) -> RepresentedFunctional {
    RepresentedFunctional::new(f.kernel.positive_part())
}
