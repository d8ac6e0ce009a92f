//! Pair posets and monotone chains.
//!
//! For `A = {x + a*d : a in S}` with `S` a subset of `{0, ..., 2k-4}`, every
//! product is `f(m, n) = x^2 + m*d*x + n*d^2` with `(m, n) = (a+b, ab)`. The
//! map `f` is strictly monotone under coordinatewise dominance for every
//! positive `x, d`, so a chain of `3k-3` dominance-ordered pairs forces
//! `|AA| >= 3k-3`. This module builds the pairs, finds a longest chain and
//! certifies every case for `k = 4..=7`.

use std::fmt::Write as _;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, colex_rank, colex_unrank};
use crate::num::int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("invalid case: {0}")]
    InvalidCase(String),
    #[error("empty poset")]
    EmptyPoset,
    #[error("invalid chain at step {step}: {reason}")]
    InvalidChain { step: usize, reason: String },
}

pub type Pair = (u64, u64);

/// A `k`-subset of `{0, ..., 2k-4}` containing 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseInput {
    pub k: usize,
    pub elements: Vec<u64>,
}

impl CaseInput {
    pub fn new(k: usize, mut elements: Vec<u64>) -> Result<Self, ChainError> {
        elements.sort_unstable();
        elements.dedup();
        if !(4..=7).contains(&k) {
            return Err(ChainError::InvalidCase(format!("k = {k} outside 4..=7")));
        }
        if elements.len() != k {
            return Err(ChainError::InvalidCase(format!(
                "need {k} distinct elements, got {}",
                elements.len()
            )));
        }
        if elements[0] != 0 {
            return Err(ChainError::InvalidCase("0 must belong to the set".into()));
        }
        let top = 2 * k as u64 - 4;
        if elements[k - 1] > top {
            return Err(ChainError::InvalidCase(format!("elements must not exceed {top}")));
        }
        Ok(CaseInput { k, elements })
    }

    /// Position of this case in colex order of the `(k-1)`-subsets of
    /// `{1, ..., 2k-4}`.
    pub fn index(&self) -> u64 {
        let positions: Vec<usize> = self.elements[1..].iter().map(|&e| e as usize - 1).collect();
        colex_rank(&positions)
    }

    pub fn from_index(k: usize, index: u64) -> Result<Self, ChainError> {
        let total = case_count(k);
        if index >= total {
            return Err(ChainError::InvalidCase(format!("index {index} >= {total}")));
        }
        let mut elements = vec![0u64];
        elements.extend(colex_unrank(index, k - 1).iter().map(|&p| p as u64 + 1));
        CaseInput::new(k, elements)
    }

    fn pairs(&self) -> Vec<Pair> {
        let mut out = Vec::with_capacity(self.k * (self.k + 1) / 2);
        for (i, &a) in self.elements.iter().enumerate() {
            for &b in &self.elements[i..] {
                out.push((a + b, a * b));
            }
        }
        out
    }
}

pub fn case_count(k: usize) -> u64 {
    binomial(2 * k as u64 - 4, k as u64 - 1)
}

/// Distinct pairs `(a+b, ab)`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPoset {
    pub nodes: Vec<Pair>,
}

impl PairPoset {
    pub fn contains(&self, p: Pair) -> bool {
        self.nodes.binary_search(&p).is_ok()
    }
}

/// Strict step of the dominance order.
pub fn dominates(lo: Pair, hi: Pair) -> bool {
    hi.0 >= lo.0 && hi.1 >= lo.1 && hi != lo
}

pub fn build_pair_poset(c: &CaseInput) -> PairPoset {
    let mut nodes = c.pairs();
    nodes.sort_unstable();
    nodes.dedup();
    PairPoset { nodes }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub path: Vec<Pair>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }
}

/// A maximum-length chain; among those, the lexicographically least node
/// sequence.
pub fn longest_chain(p: &PairPoset) -> Result<Chain, ChainError> {
    let nodes = &p.nodes;
    let n = nodes.len();
    if n == 0 {
        return Err(ChainError::EmptyPoset);
    }
    // Sorted lexicographically, every dominating node comes later, so the
    // longest chain starting at i only depends on later entries.
    let mut from = vec![1usize; n];
    for i in (0..n).rev() {
        for j in i + 1..n {
            if dominates(nodes[i], nodes[j]) {
                from[i] = from[i].max(from[j] + 1);
            }
        }
    }
    let best = *from.iter().max().expect("nonempty");
    let mut cur = (0..n).find(|&i| from[i] == best).expect("max attained");
    let mut path = vec![nodes[cur]];
    while from[cur] > 1 {
        cur = (cur + 1..n)
            .find(|&j| from[j] == from[cur] - 1 && dominates(nodes[cur], nodes[j]))
            .expect("successor exists");
        path.push(nodes[cur]);
    }
    Ok(Chain { path })
}

/// Checks a chain against the case directly: every node must be a pair
/// `(a+b, ab)` of the case and consecutive nodes must strictly dominate.
/// Independent of the poset construction and of the longest-chain search.
pub fn validate_chain(c: &CaseInput, chain: &Chain) -> Result<(), ChainError> {
    for (step, &(m, n)) in chain.path.iter().enumerate() {
        let found = c
            .elements
            .iter()
            .any(|&a| c.elements.iter().any(|&b| a + b == m && a * b == n));
        if !found {
            return Err(ChainError::InvalidChain {
                step,
                reason: format!("({m},{n}) is not a pair of the case"),
            });
        }
    }
    for (step, w) in chain.path.windows(2).enumerate() {
        let ((m0, n0), (m1, n1)) = (w[0], w[1]);
        if m1 < m0 || n1 < n0 {
            return Err(ChainError::InvalidChain {
                step: step + 1,
                reason: format!("({m1},{n1}) does not dominate ({m0},{n0})"),
            });
        }
        if m1 == m0 && n1 == n0 {
            return Err(ChainError::InvalidChain {
                step: step + 1,
                reason: "repeated node".into(),
            });
        }
    }
    Ok(())
}

/// True iff `x^2 + m*d*x + n*d^2` strictly increases along the chain for
/// every sampled `(x, d)`.
pub fn verify_monotone_embedding(chain: &Chain, samples: &[(BigRational, BigRational)]) -> bool {
    samples.iter().all(|(x, d)| {
        let values: Vec<BigRational> = chain
            .path
            .iter()
            .map(|&(m, n)| x * x + int(m as i64) * d * x + int(n as i64) * d * d)
            .collect();
        values.windows(2).all(|w| w[0] < w[1])
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub index: u64,
    pub input: CaseInput,
    pub chain: Chain,
    pub longest: usize,
    pub pass: bool,
}

pub fn certify_case(input: CaseInput) -> CaseReport {
    let poset = build_pair_poset(&input);
    let chain = longest_chain(&poset).expect("cases have k >= 4 nodes");
    let longest = chain.len();
    let pass = longest >= 3 * input.k - 3 && validate_chain(&input, &chain).is_ok();
    CaseReport {
        index: input.index(),
        input,
        chain,
        longest,
        pass,
    }
}

/// One report per case, in case-index order.
pub fn certify_all(k: usize) -> Result<Vec<CaseReport>, ChainError> {
    if !(4..=7).contains(&k) {
        return Err(ChainError::InvalidCase(format!("k = {k} outside 4..=7")));
    }
    (0..case_count(k))
        .into_par_iter()
        .map(|i| CaseInput::from_index(k, i).map(certify_case))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub k: usize,
    pub cases: usize,
    pub min_longest_chain: usize,
    pub all_pass: bool,
}

pub fn summarize(k: usize, reports: &[CaseReport]) -> ChainSummary {
    ChainSummary {
        k,
        cases: reports.len(),
        min_longest_chain: reports.iter().map(|r| r.longest).min().unwrap_or(0),
        all_pass: reports.iter().all(|r| r.pass),
    }
}

fn label((m, n): Pair) -> String {
    format!("\"({m},{n})\"")
}

/// File name for a case diagram.
pub fn dot_file_name(report: &CaseReport) -> String {
    format!("k{}_case{}.dot", report.input.k, report.index)
}

/// Graphviz digraph with one node per pair, in sorted order, and the chain
/// drawn as red edges.
pub fn emit_dot(report: &CaseReport) -> String {
    let poset = build_pair_poset(&report.input);
    let set: Vec<String> = report.input.elements.iter().map(u64::to_string).collect();
    let mut out = String::new();
    let _ = writeln!(out, "digraph k{}_case{} {{", report.input.k, report.index);
    let _ = writeln!(out, "    label=\"k={} A={{{}}} chain={}\";", report.input.k, set.join(","), report.longest);
    let _ = writeln!(out, "    node [shape=plaintext];");
    for &node in &poset.nodes {
        let _ = writeln!(out, "    {};", label(node));
    }
    for w in report.chain.path.windows(2) {
        let _ = writeln!(out, "    {} -> {} [color=red];", label(w[0]), label(w[1]));
    }
    out.push_str("}\n");
    out
}
