//! Exact computations with rearrangement-invariant function spaces over the
//! unit interval.
//!
//! Random variables are [`StepFunction`]s with [`Rational`] breakpoints and
//! values. On top of them the crate provides decreasing rearrangements,
//! equimeasurable couplings and disjoint sums ([`coupling`]), a family of
//! rearrangement-invariant norms ([`norms`]), Hardy–Littlewood majorization
//! ([`majorization`]), decompositions into spans of equidistributed
//! differences and kernel-represented functionals ([`span`]), and the
//! verification machinery for a space whose law-invariant functionals need
//! not be multiples of the expectation ([`lab`]).

pub mod coupling;
pub mod error;
pub mod gen;
pub mod interval;
pub mod lab;
pub mod majorization;
pub mod norms;
pub mod rational;
pub mod report;
pub mod span;
pub mod stepfn;
pub mod suite;

pub use coupling::{disjoint_sum, rank_coupling, transport, Direction};
pub use error::{Error, Result};
pub use interval::IntervalSet;
pub use rational::Rational;
pub use stepfn::{Distribution, Segment, StepFunction};
