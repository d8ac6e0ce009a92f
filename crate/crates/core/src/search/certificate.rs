//! Combined upper and lower records for `SP(k)`, and the on-disk cache of
//! search results.

use std::fs;
use std::path::{Path, PathBuf};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::json::{canonical_json, sha256_hex};
use crate::sets::max_pair;

use super::lower::{open_lower_bound, verify_lower_bound, LowerCertificate};
use super::{branch_and_bound_sp, SearchError, SpUpperBound, SP10_WITNESS};

/// Default search cap.
pub const DEFAULT_MAX_ELEMENT: u64 = 64;

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "SUMPROD_CACHE";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpCertificate {
    pub k: usize,
    /// `None` when only an upper bound is reported.
    pub claimed_value: Option<usize>,
    pub upper: SpUpperBound,
    pub lower: LowerCertificate,
    pub all_pass: bool,
}

/// `3k - 3` up to 7, `3k - 2` for 8 and 9.
pub fn expected_value(k: usize) -> Option<usize> {
    match k {
        2..=7 => Some(3 * k - 3),
        8 | 9 => Some(3 * k - 2),
        _ => None,
    }
}

/// Problems with the upper half: witness sizes, gcd, attained value.
pub fn upper_problems(u: &SpUpperBound) -> Vec<String> {
    let mut out = Vec::new();
    if u.witnesses.is_empty() {
        out.push("no witness".to_string());
    }
    for w in &u.witnesses {
        let Some(v) = w.to_u64s() else {
            out.push(format!("witness {w:?} does not fit u64"));
            continue;
        };
        if v.len() != u.k {
            out.push(format!("witness {v:?} has size {} != {}", v.len(), u.k));
        }
        if v.iter().fold(0u64, |g, x| g.gcd(x)) != 1 {
            out.push(format!("witness {v:?} is not gcd-normalized"));
        }
        if v.last().is_some_and(|&x| x > u.max_element) {
            out.push(format!("witness {v:?} exceeds M = {}", u.max_element));
        }
        let mp = max_pair(w);
        if mp.maximum != u.value {
            out.push(format!("witness {v:?} attains {} not {}", mp.maximum, u.value));
        }
    }
    out
}

fn combine(k: usize, upper: SpUpperBound, lower: LowerCertificate) -> SpCertificate {
    let claimed_value = expected_value(k);
    let all_pass = match claimed_value {
        Some(c) => {
            upper.value == c && lower.bound == Some(c) && lower.pass && upper_problems(&upper).is_empty()
        }
        None => upper_problems(&upper).is_empty() && lower.mode == "open",
    };
    SpCertificate {
        k,
        claimed_value,
        upper,
        lower,
        all_pass,
    }
}

/// Upper bound from the search (through the cache when given) combined with
/// the lower-bound record. For `k = 10` the lower bound is labelled open.
pub fn assemble_certificate_cached(k: usize, m: u64, cache: Option<&Path>) -> Result<SpCertificate, SearchError> {
    if !(2..=10).contains(&k) {
        return Err(SearchError::InvalidParameters(format!("certificates cover 2 <= k <= 10, got {k}")));
    }
    let upper = cached_upper(k, m, cache)?;
    let lower = if k == 10 { open_lower_bound(k) } else { verify_lower_bound(k)? };
    Ok(combine(k, upper, lower))
}

pub fn assemble_certificate(k: usize, m: u64) -> Result<SpCertificate, SearchError> {
    assemble_certificate_cached(k, m, None)
}

impl SpCertificate {
    /// Recomputes every lower component from its stored inputs and re-checks
    /// every witness. Returns the discrepancies; empty means the certificate
    /// stands as serialized.
    pub fn revalidate(&self) -> Result<Vec<String>, SearchError> {
        let mut out = upper_problems(&self.upper);
        if self.upper.k != self.k {
            out.push(format!("upper is for k = {}", self.upper.k));
        }
        if self.claimed_value != expected_value(self.k) {
            out.push(format!("claimed value {:?} differs from {:?}", self.claimed_value, expected_value(self.k)));
        }
        for c in &self.lower.components {
            let fresh = c.rerun()?;
            if &fresh != c {
                out.push(format!(
                    "component changed on rerun: stored {} fresh {}",
                    serde_json::to_string(c).expect("serializable"),
                    serde_json::to_string(&fresh).expect("serializable")
                ));
            }
        }
        let recombined = combine(self.k, self.upper.clone(), self.lower.clone());
        if recombined.all_pass != self.all_pass {
            out.push(format!("all_pass recomputes to {}", recombined.all_pass));
        }
        if self.k == 10 && self.upper.max_element >= 18 {
            let has = self.upper.witnesses.iter().any(|w| w.to_u64s().as_deref() == Some(&SP10_WITNESS[..]));
            if self.upper.value == 30 && !has {
                out.push("ten-element witness missing".into());
            }
        }
        Ok(out)
    }
}

/// Cache directory from an explicit path, else the environment variable.
pub fn resolve_cache_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| explicit.map(Path::to_path_buf))
}

fn cache_paths(dir: &Path, k: usize, m: u64) -> (PathBuf, PathBuf) {
    let base = format!("upper_k{k}_M{m}");
    (dir.join(format!("{base}.json")), dir.join(format!("{base}.sha256")))
}

/// Cached search result for `(k, m)`, if present, intact and consistent.
pub fn load_cached_upper(dir: &Path, k: usize, m: u64) -> Option<SpUpperBound> {
    let (data, digest) = cache_paths(dir, k, m);
    let bytes = fs::read(data).ok()?;
    let want = fs::read_to_string(digest).ok()?;
    if sha256_hex(&bytes) != want.trim() {
        return None;
    }
    let u: SpUpperBound = serde_json::from_slice(&bytes).ok()?;
    (u.k == k && u.max_element == m && u.exhaustive_up_to_m && upper_problems(&u).is_empty()).then_some(u)
}

pub fn store_cached_upper(dir: &Path, u: &SpUpperBound) -> Result<(), SearchError> {
    let io = |e: std::io::Error| SearchError::Cache(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let (data, digest) = cache_paths(dir, u.k, u.max_element);
    let text = canonical_json(u).map_err(|e| SearchError::Cache(e.to_string()))?;
    fs::write(&data, &text).map_err(io)?;
    fs::write(&digest, format!("{}\n", sha256_hex(text.as_bytes()))).map_err(io)?;
    Ok(())
}

fn cached_upper(k: usize, m: u64, cache: Option<&Path>) -> Result<SpUpperBound, SearchError> {
    if let Some(dir) = cache {
        if let Some(u) = load_cached_upper(dir, k, m) {
            return Ok(u);
        }
    }
    let u = branch_and_bound_sp(k, m, None)?;
    if let Some(dir) = cache {
        if u.exhaustive_up_to_m {
            store_cached_upper(dir, &u)?;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_certificates() {
        for (k, m, want) in [(2, 10, 3), (3, 10, 6), (4, 16, 9), (5, 16, 12)] {
            let c = assemble_certificate(k, m).unwrap();
            assert_eq!(c.claimed_value, Some(want));
            assert!(c.all_pass, "k={k}: {c:?}");
            assert!(c.revalidate().unwrap().is_empty());
        }
    }

    #[test]
    fn tampering_is_detected() {
        let mut c = assemble_certificate(4, 12).unwrap();
        c.upper.value = 8;
        assert!(!c.revalidate().unwrap().is_empty());
        let mut c = assemble_certificate(4, 12).unwrap();
        if let super::super::lower::Component::Chains { min_longest_chain, .. } = &mut c.lower.components[0] {
            *min_longest_chain += 1;
        }
        assert!(!c.revalidate().unwrap().is_empty());
    }

    #[test]
    fn cache_roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let a = assemble_certificate_cached(5, 14, Some(dir.path())).unwrap();
        let (data, _) = cache_paths(dir.path(), 5, 14);
        assert!(data.exists());
        let hit = load_cached_upper(dir.path(), 5, 14).unwrap();
        assert_eq!(hit, a.upper);
        let b = assemble_certificate_cached(5, 14, Some(dir.path())).unwrap();
        assert_eq!(a, b);
        let mut text = fs::read_to_string(&data).unwrap();
        text = text.replacen("12", "11", 1);
        fs::write(&data, text).unwrap();
        assert!(load_cached_upper(dir.path(), 5, 14).is_none());
        let c = assemble_certificate_cached(5, 14, Some(dir.path())).unwrap();
        assert_eq!(c, a);
        assert!(load_cached_upper(dir.path(), 5, 14).is_some());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(assemble_certificate(1, 10).is_err());
        assert!(assemble_certificate(11, 24).is_err());
    }
}
