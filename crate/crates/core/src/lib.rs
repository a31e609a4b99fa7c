//! Weighted representation functions on `Z_m`.
//!
//! For `A ⊆ Z_m` and weights `k_1, ..., k_t`, the representation function
//! counts ordered tuples `(a_1, ..., a_t) ∈ A^t` with
//! `k_1 a_1 + ... + k_t a_t ≡ n (mod m)`. This crate computes those profiles
//! (exactly, and through exponential sums), decides when `A` and its
//! complement share a profile, and runs bounded searches around that question.

pub mod arith;
pub mod characterization;
pub mod convolution;
pub mod error;
pub mod profile;
pub mod search;
pub mod set;
pub mod spectral;
pub mod verify;

pub use arith::{canonicalize, gcd_profile, v2, GcdProfile, Instance, Valuation};
pub use characterization::{
    balanced_by_factors, balanced_oracle, balanced_predicate, canonical_balanced_set,
    count_balanced, count_balanced_exact, exists_divisibility, exists_parity, is_uniform_mod,
};
pub use error::{Error, Result};
pub use profile::{rep_convolution, rep_naive, weighted_indicator, RepProfile, WeightedIndicator};
pub use search::{
    enumerate_balanced, pair_search, t_ary_balanced_search, Decider, SearchConfig, SearchLimits,
    SearchMode, SearchReport, Witness,
};
pub use set::ResidueSet;
pub use spectral::{exp_sum, g_a, lemma4_lhs, lemma4_rhs, rep_spectral};
