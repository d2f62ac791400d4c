//! Exact construction and verification of the witness space: the sequence
//! `c_n`, the witness `Y`, its norm and mean, tail norms, the growth lemmas,
//! and the disjoint-average searches.

mod growth;
mod search;
mod witness;

pub use growth::{growth_demo, growth_scale, lemma41_construct, lemma42_iterate, GrowthInstance};
pub use search::{
    aocea_minima, aocea_probe, averaged_minima, condition33_search, level_tail_sets, SearchPoint, EXHAUSTIVE_WIDTH,
};
pub use witness::{
    build_witness, c, mean_tail_bound, tail_norm, verify_witness_mean, verify_witness_norm, WitnessConfig,
};
