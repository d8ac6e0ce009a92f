//! Witness search for upper bounds on `SP(k)` over subsets of `{1, ..., M}`.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::Combinations;
use crate::sets::IntSet;

use super::{seed_witness, SearchError};

/// Largest `M` the unpruned oracle accepts.
pub const ORACLE_MAX_ELEMENT: u64 = 24;

/// Best value of `max(|A+A|, |AA|)` found over the `k`-subsets of
/// `{1, ..., max_element}`, with every gcd-1 set attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpUpperBound {
    pub k: usize,
    pub value: usize,
    pub witnesses: Vec<IntSet>,
    #[serde(rename = "M")]
    pub max_element: u64,
    pub exhaustive_up_to_m: bool,
}

fn gcd_all(v: &[u64]) -> u64 {
    v.iter().fold(0, |g, &x| g.gcd(&x))
}

fn sizes(v: &[u64]) -> (usize, usize) {
    let mut sums = Vec::with_capacity(v.len() * (v.len() + 1) / 2);
    let mut prods = Vec::with_capacity(sums.capacity());
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[i..] {
            sums.push(a + b);
            prods.push(a * b);
        }
    }
    sums.sort_unstable();
    sums.dedup();
    prods.sort_unstable();
    prods.dedup();
    (sums.len(), prods.len())
}

fn to_sets(mut raw: Vec<Vec<u64>>) -> Vec<IntSet> {
    raw.sort();
    raw.dedup();
    raw.iter()
        .map(|w| IntSet::from_u64s(w).expect("positive"))
        .collect()
}

/// Plain enumeration of every gcd-1 `k`-subset of `{1, ..., m}`, no pruning.
/// Serves as the reference the pruned search is checked against.
pub fn exhaustive_oracle(k: usize, m: u64) -> Result<SpUpperBound, SearchError> {
    if k == 0 || k as u64 > m || m > ORACLE_MAX_ELEMENT {
        return Err(SearchError::OracleBudget { k, m });
    }
    let mut best = usize::MAX;
    let mut witnesses: Vec<Vec<u64>> = Vec::new();
    let mut set = vec![0u64; k];
    for c in Combinations::new(m as usize, k) {
        for (s, i) in set.iter_mut().zip(&c) {
            *s = *i as u64 + 1;
        }
        if gcd_all(&set) != 1 {
            continue;
        }
        let (s, p) = sizes(&set);
        let v = s.max(p);
        if v < best {
            best = v;
            witnesses.clear();
        }
        if v == best {
            witnesses.push(set.clone());
        }
    }
    Ok(SpUpperBound {
        k,
        value: best,
        witnesses: to_sets(witnesses),
        max_element: m,
        exhaustive_up_to_m: true,
    })
}

struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(max: usize) -> Self {
        Bits {
            words: vec![0; max / 64 + 1],
        }
    }

    /// Sets bit `i`, returning true if it was clear.
    #[inline]
    fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i >> 6, 1u64 << (i & 63));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    #[inline]
    fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1u64 << (i & 63));
    }
}

struct Shared {
    best: AtomicUsize,
    nodes: AtomicU64,
    budget: u64,
    exhausted: AtomicBool,
}

// Depth-first search that adds elements in increasing order, maintaining the
// sumset and product set of the partial set incrementally. A new element
// above the current maximum always contributes at least two new sums and two
// new products, so a partial set of size j can only finish at
// max(|P+P|, |PP|) + 2(k - j) or more; such branches are cut once that
// exceeds the incumbent. Ties are kept so every optimal witness is reported.
struct Walker<'a> {
    k: usize,
    m: u64,
    shared: &'a Shared,
    elems: Vec<u64>,
    sums: Bits,
    prods: Bits,
    sum_count: usize,
    prod_count: usize,
    undo: Vec<(bool, usize)>,
    found: Vec<(usize, Vec<u64>)>,
    local_nodes: u64,
}

impl<'a> Walker<'a> {
    fn new(k: usize, m: u64, shared: &'a Shared) -> Self {
        let m_us = m as usize;
        Walker {
            k,
            m,
            shared,
            elems: Vec::with_capacity(k),
            sums: Bits::new(2 * m_us),
            prods: Bits::new(m_us * m_us),
            sum_count: 0,
            prod_count: 0,
            undo: Vec::with_capacity(k * k * 2),
            found: Vec::new(),
            local_nodes: 0,
        }
    }

    fn push(&mut self, e: u64) {
        self.elems.push(e);
        for i in 0..self.elems.len() {
            let a = self.elems[i];
            let s = (a + e) as usize;
            if self.sums.insert(s) {
                self.sum_count += 1;
                self.undo.push((false, s));
            }
            let p = (a * e) as usize;
            if self.prods.insert(p) {
                self.prod_count += 1;
                self.undo.push((true, p));
            }
        }
    }

    fn pop(&mut self, mark: usize) {
        while self.undo.len() > mark {
            let (is_prod, i) = self.undo.pop().expect("above mark");
            if is_prod {
                self.prods.remove(i);
                self.prod_count -= 1;
            } else {
                self.sums.remove(i);
                self.sum_count -= 1;
            }
        }
        self.elems.pop();
    }

    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes & 0xfff == 0 {
            let total = self.shared.nodes.fetch_add(0x1000, Ordering::Relaxed) + 0x1000;
            if total > self.shared.budget {
                self.shared.exhausted.store(true, Ordering::Relaxed);
            }
        }
        !self.shared.exhausted.load(Ordering::Relaxed)
    }

    fn descend(&mut self) {
        let j = self.elems.len();
        let remaining = self.k - j;
        let current = self.sum_count.max(self.prod_count);
        if remaining == 0 {
            if gcd_all(&self.elems) != 1 {
                return;
            }
            let best = self.shared.best.fetch_min(current, Ordering::Relaxed).min(current);
            if current <= best {
                self.found.push((current, self.elems.clone()));
            }
            return;
        }
        let last = *self.elems.last().expect("prefix nonempty");
        let top = self.m - (remaining as u64 - 1);
        for e in last + 1..=top {
            if !self.tick() {
                return;
            }
            let mark = self.undo.len();
            self.push(e);
            let bound = self.sum_count.max(self.prod_count) + 2 * (remaining - 1);
            if bound <= self.shared.best.load(Ordering::Relaxed) {
                self.descend();
            }
            self.pop(mark);
        }
    }
}

/// Pruned search over the `k`-subsets of `{1, ..., m}` returning the same
/// value and witness list as [`exhaustive_oracle`]. The incumbent starts at
/// the value of a known good set when one fits below `m`. `budget` caps the
/// number of search nodes; hitting it yields a result flagged as not
/// exhaustive.
pub fn branch_and_bound_sp(k: usize, m: u64, budget: Option<u64>) -> Result<SpUpperBound, SearchError> {
    if k == 0 || k as u64 > m {
        return Err(SearchError::InvalidParameters(format!("need 1 <= k <= M, got k = {k}, M = {m}")));
    }
    if m > 1 << 15 {
        return Err(SearchError::InvalidParameters(format!("M = {m} too large")));
    }
    let seed = seed_witness(k).filter(|s| s.last().is_some_and(|&x| x <= m));
    let initial = seed.map_or(usize::MAX, |s| {
        let (a, b) = sizes(&s);
        a.max(b)
    });
    let shared = Shared {
        best: AtomicUsize::new(initial),
        nodes: AtomicU64::new(0),
        budget: budget.unwrap_or(u64::MAX),
        exhausted: AtomicBool::new(false),
    };

    let found: Vec<(usize, Vec<u64>)> = if k == 1 {
        vec![(1, vec![1])]
    } else {
        let prefixes: Vec<(u64, u64)> = (1..=m)
            .flat_map(|a| (a + 1..=m).map(move |b| (a, b)))
            .filter(|&(_, b)| b + (k as u64 - 2) <= m)
            .collect();
        prefixes
            .par_iter()
            .map(|&(a, b)| {
                let mut w = Walker::new(k, m, &shared);
                w.push(a);
                w.push(b);
                let bound = w.sum_count.max(w.prod_count) + 2 * (k - 2);
                if bound <= shared.best.load(Ordering::Relaxed) {
                    w.descend();
                }
                w.found
            })
            .flatten()
            .collect()
    };

    let value = found.iter().map(|(v, _)| *v).min().unwrap_or(usize::MAX);
    let witnesses: Vec<Vec<u64>> = found
        .into_iter()
        .filter(|(v, _)| *v == value)
        .map(|(_, w)| w)
        .collect();
    Ok(SpUpperBound {
        k,
        value,
        witnesses: to_sets(witnesses),
        max_element: m,
        exhaustive_up_to_m: !shared.exhausted.load(Ordering::Relaxed),
    })
}
