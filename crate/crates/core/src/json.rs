//! Canonical JSON and content hashes.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Pretty JSON with object keys sorted and a trailing newline, so equal
/// values always produce equal bytes.
pub fn canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn keys_are_sorted() {
        let mut m = HashMap::new();
        for k in ["zeta", "alpha", "mid"] {
            m.insert(k, 1);
        }
        let s = canonical_json(&m).unwrap();
        let a = s.find("alpha").unwrap();
        assert!(a < s.find("mid").unwrap() && s.find("mid").unwrap() < s.find("zeta").unwrap());
        assert!(s.ends_with("}\n"));
    }

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
