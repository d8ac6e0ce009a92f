//! Exact sum-product toolkit: sumsets and product sets of small sets,
//! progression structure detectors, pair-poset chain certificates, unions of
//! two geometric progressions, and the search for `SP(k)`, the least value
//! of `max(|A+A|, |AA|)` over `k`-element sets of positive integers.

pub mod chains;
pub mod cli;
pub mod combin;
pub mod exponent;
pub mod freiman;
pub mod gpunion;
pub mod json;
pub mod num;
pub mod poly;
pub mod search;
pub mod sets;
