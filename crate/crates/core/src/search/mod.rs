//! Computing `SP(k)`: witness search for the upper half, the lower-bound
//! certificate pipeline, and their combination.

mod certificate;
mod lower;
mod upper;

pub use certificate::{
    assemble_certificate, assemble_certificate_cached, expected_value, load_cached_upper, resolve_cache_dir,
    store_cached_upper, upper_problems, SpCertificate, CACHE_ENV, DEFAULT_MAX_ELEMENT,
};
pub use lower::{
    open_lower_bound, verify_lower_bound, Assumption, Component, LowerCertificate, FAMILY_P_MAX, FAMILY_SAMPLES,
    FAMILY_WINDOW, GRID_P_MAX,
};
pub use upper::{branch_and_bound_sp, exhaustive_oracle, SpUpperBound, ORACLE_MAX_ELEMENT};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("oracle budget: k = {k}, M = {m} outside 1 <= k <= M <= 24")]
    OracleBudget { k: usize, m: u64 },
    #[error("invalid search parameters: {0}")]
    InvalidParameters(String),
    #[error("cache: {0}")]
    Cache(String),
}

/// Small-doubling example sets: `(k, A, |A+A|, |AA|)`.
pub const EXAMPLE_SETS: [(usize, &[u64], usize, usize); 6] = [
    (4, &[1, 2, 3, 4], 7, 9),
    (5, &[1, 2, 3, 4, 6], 10, 12),
    (6, &[1, 2, 3, 4, 6, 8], 13, 15),
    (7, &[1, 2, 3, 4, 6, 8, 12], 18, 18),
    (8, &[1, 2, 3, 4, 6, 8, 9, 12], 20, 22),
    (9, &[1, 2, 3, 4, 6, 8, 9, 12, 16], 25, 25),
];

/// Best known ten-element set, with `|A+A| = 30` and `|AA| = 29`.
pub const SP10_WITNESS: [u64; 10] = [1, 2, 3, 4, 6, 8, 9, 12, 16, 18];

/// A good starting set for the search at size `k`.
pub fn seed_witness(k: usize) -> Option<Vec<u64>> {
    if k == 10 {
        return Some(SP10_WITNESS.to_vec());
    }
    if let Some((_, a, _, _)) = EXAMPLE_SETS.iter().find(|row| row.0 == k) {
        return Some(a.to_vec());
    }
    (k >= 1).then(|| (1..=k as u64).collect())
}
