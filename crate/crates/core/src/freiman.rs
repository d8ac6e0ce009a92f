//! Structure detectors for sets with small sumset or product set: shortest
//! arithmetic and geometric progression covers, two-progression
//! decompositions, and exhaustive small-range checkers for the `3k-4`
//! structure theorems on both the sum and the product side.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, Combinations};
use crate::exponent::{CoprimeBasis, ExponentVector};
use crate::num::{int, rational_gcd, ratio, serde_rational};
use crate::sets::{is_sidon, product_set, sumset, Element, IntSet, PosSet, RatSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreimanError {
    #[error("cover undefined")]
    CoverUndefined,
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("invalid checker parameters: {0}")]
    InvalidParameters(String),
}

/// Shortest arithmetic progression containing a set: the set is
/// `{base + i * step : i in indices}` inside `base, base + step, ...` of
/// `length` terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApCover {
    #[serde(with = "serde_rational")]
    pub base: BigRational,
    #[serde(with = "serde_rational")]
    pub step: BigRational,
    pub length: usize,
    pub indices: Vec<usize>,
}

impl ApCover {
    pub fn term(&self, i: usize) -> BigRational {
        &self.base + &self.step * int(i as i64)
    }

    pub fn terms(&self) -> Vec<BigRational> {
        (0..self.length).map(|i| self.term(i)).collect()
    }
}

/// Shortest geometric progression with rational ratio `> 1` containing a set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpCover {
    #[serde(with = "serde_rational")]
    pub lead: BigRational,
    #[serde(with = "serde_rational")]
    pub ratio: BigRational,
    pub length: usize,
    pub indices: Vec<usize>,
}

impl GpCover {
    pub fn terms(&self) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(self.length);
        let mut t = self.lead.clone();
        for _ in 0..self.length {
            out.push(t.clone());
            t *= &self.ratio;
        }
        out
    }
}

pub fn ap_cover<T: Element>(a: &PosSet<T>) -> Result<ApCover, FreimanError> {
    ap_cover_of_sorted(&a.to_rationals())
}

// Elements must be strictly increasing.
fn ap_cover_of_sorted(elems: &[BigRational]) -> Result<ApCover, FreimanError> {
    if elems.len() < 2 {
        return Err(FreimanError::CoverUndefined);
    }
    let base = elems[0].clone();
    let step = elems[1..]
        .iter()
        .fold(BigRational::zero(), |g, e| rational_gcd(&g, &(e - &base)));
    let indices: Vec<usize> = elems
        .iter()
        .map(|e| ((e - &base) / &step).to_integer().to_usize().expect("index fits"))
        .collect();
    let length = indices[indices.len() - 1] + 1;
    Ok(ApCover {
        base,
        step,
        length,
        indices,
    })
}

/// Shortest geometric progression with rational ratio containing `a`, found
/// by testing whether the exponent vectors are collinear lattice points.
pub fn gp_cover<T: Element>(a: &PosSet<T>) -> Result<Option<GpCover>, FreimanError> {
    let elems = a.to_rationals();
    if elems.len() < 2 {
        return Err(FreimanError::CoverUndefined);
    }
    let basis = CoprimeBasis::for_values(elems.iter());
    let vectors: Vec<ExponentVector> = elems
        .iter()
        .map(|e| basis.exponent_vector(e).expect("basis generates its own values"))
        .collect();
    let diffs: Vec<ExponentVector> = vectors[1..].iter().map(|v| v - &vectors[0]).collect();
    let first = &diffs[0];
    let primitive = first.scale_down(first.content());
    let mut multiples = Vec::with_capacity(diffs.len());
    for d in &diffs {
        match d.multiple_of(&primitive) {
            Some(t) => multiples.push(t),
            None => return Ok(None),
        }
    }
    let g = multiples.iter().fold(0i64, |g, &t| g.gcd(&t));
    let (mut direction, sign) = if basis.value(&primitive) > BigRational::one() {
        (primitive, 1)
    } else {
        (primitive.negate(), -1)
    };
    let steps: Vec<i64> = multiples.iter().map(|t| sign * t / g).collect();
    direction.0.iter_mut().for_each(|x| *x *= g);
    let ratio = basis.value(&direction);
    debug_assert!(ratio > BigRational::one(), "sorted input forces ratio > 1");
    let mut indices = vec![0usize];
    indices.extend(steps.iter().map(|&t| t as usize));
    let length = indices[indices.len() - 1] + 1;
    Ok(Some(GpCover {
        lead: elems[0].clone(),
        ratio,
        length,
        indices,
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoApDecomposition {
    pub first: ApCover,
    pub second: ApCover,
    #[serde(with = "serde_rational")]
    pub step: BigRational,
    pub total_length: usize,
    pub disjoint: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoGpDecomposition {
    pub first: GpCover,
    pub second: GpCover,
    #[serde(with = "serde_rational")]
    pub ratio: BigRational,
    pub total_length: usize,
    pub disjoint: bool,
}

#[derive(Clone, Copy)]
enum Kind {
    Arithmetic,
    Geometric,
}

impl Kind {
    fn step(self, from: &BigRational, to: &BigRational) -> BigRational {
        match self {
            Kind::Arithmetic => to - from,
            Kind::Geometric => to / from,
        }
    }

    fn advance(self, x: &BigRational, step: &BigRational) -> BigRational {
        match self {
            Kind::Arithmetic => x + step,
            Kind::Geometric => x * step,
        }
    }

    fn follows(self, part: &[BigRational], step: &BigRational) -> bool {
        part.windows(2).all(|w| self.advance(&w[0], step) == w[1])
    }
}

struct Split {
    first: Vec<BigRational>,
    second: Vec<BigRational>,
    step: BigRational,
}

// Two same-step progressions whose union is a set can always be taken
// disjoint: overlapping ones sit on one lattice coset and their union is a
// single progression, which splits. So only partitions are searched. The
// part holding the minimum is `first`. Among valid partitions the choice is
// the least key (singleton part present, step, first part), which prefers
// splits where both parts determine the step.
fn best_split(elems: &[BigRational], kind: Kind) -> Option<Split> {
    let k = elems.len();
    let mut best: Option<(bool, Split)> = None;
    let mut offer = |first: Vec<BigRational>, second: Vec<BigRational>, step: BigRational| {
        let singleton = first.len() == 1 || second.len() == 1;
        let better = match &best {
            None => true,
            Some((s, b)) => (singleton, &step, &first) < (*s, &b.step, &b.first),
        };
        if better {
            best = Some((singleton, Split { first, second, step }));
        }
    };

    // First part a lone minimum.
    let rest = &elems[1..];
    if rest.len() == 1 {
        offer(vec![elems[0].clone()], rest.to_vec(), kind.step(&elems[0], &elems[1]));
    } else {
        let step = kind.step(&rest[0], &rest[1]);
        if kind.follows(rest, &step) {
            offer(vec![elems[0].clone()], rest.to_vec(), step);
        }
    }

    // First part a run a_1, a_1 + d, ... with d fixed by its second term.
    for j in 1..k {
        let step = kind.step(&elems[0], &elems[j]);
        let mut run = vec![elems[0].clone()];
        loop {
            let next = kind.advance(&run[run.len() - 1], &step);
            if elems.binary_search(&next).is_err() {
                break;
            }
            run.push(next);
        }
        for p in 2..=run.len() {
            let first = &run[..p];
            let second: Vec<BigRational> = elems
                .iter()
                .filter(|e| first.binary_search(e).is_err())
                .cloned()
                .collect();
            if second.is_empty() {
                continue;
            }
            if second.len() == 1 || kind.follows(&second, &step) {
                offer(first.to_vec(), second, step.clone());
            }
        }
    }
    best.map(|(_, s)| s)
}

fn ap_part(part: &[BigRational], step: &BigRational) -> ApCover {
    ApCover {
        base: part[0].clone(),
        step: step.clone(),
        length: part.len(),
        indices: (0..part.len()).collect(),
    }
}

fn gp_part(part: &[BigRational], ratio: &BigRational) -> GpCover {
    GpCover {
        lead: part[0].clone(),
        ratio: ratio.clone(),
        length: part.len(),
        indices: (0..part.len()).collect(),
    }
}

/// Splits `a` into two arithmetic progressions sharing one step. A set that
/// is itself a progression always splits, so callers wanting two genuinely
/// separate pieces should test the cover length first.
pub fn decompose_two_aps<T: Element>(
    a: &PosSet<T>,
) -> Result<Option<TwoApDecomposition>, FreimanError> {
    let elems = a.to_rationals();
    if elems.len() < 2 {
        return Err(FreimanError::CoverUndefined);
    }
    Ok(best_split(&elems, Kind::Arithmetic).map(|s| TwoApDecomposition {
        first: ap_part(&s.first, &s.step),
        second: ap_part(&s.second, &s.step),
        total_length: s.first.len() + s.second.len(),
        step: s.step,
        disjoint: true,
    }))
}

pub fn decompose_two_gps<T: Element>(
    a: &PosSet<T>,
) -> Result<Option<TwoGpDecomposition>, FreimanError> {
    let elems = a.to_rationals();
    if elems.len() < 2 {
        return Err(FreimanError::CoverUndefined);
    }
    Ok(best_split(&elems, Kind::Geometric).map(|s| TwoGpDecomposition {
        first: gp_part(&s.first, &s.step),
        second: gp_part(&s.second, &s.step),
        total_length: s.first.len() + s.second.len(),
        ratio: s.step,
        disjoint: true,
    }))
}

/// Which alternatives of the `3k-3` structure theorem a set satisfies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification3k3 {
    pub k: usize,
    pub sumset_size: usize,
    pub cover_length: usize,
    /// Cover length at most `2k + 1`.
    pub clause_i: bool,
    /// Union of two same-step progressions.
    pub clause_ii: bool,
    pub decomposition: Option<TwoApDecomposition>,
}

impl Classification3k3 {
    /// Neither alternative holding means the checker or the caller is wrong.
    pub fn is_violation(&self) -> bool {
        !self.clause_i && !self.clause_ii
    }
}

pub fn classify_3k3(a: &IntSet) -> Result<Classification3k3, FreimanError> {
    let k = a.len();
    let s = sumset(a).size;
    if k <= 6 || s > 3 * k - 3 {
        return Err(FreimanError::HypothesisNotMet(format!(
            "need k > 6 and |A+A| <= 3k-3, got k = {k}, |A+A| = {s}"
        )));
    }
    let cover = ap_cover(a)?;
    let clause_i = cover.length <= 2 * k + 1;
    let decomposition = decompose_two_aps(a)?;
    Ok(Classification3k3 {
        k,
        sumset_size: s,
        cover_length: cover.length,
        clause_i,
        clause_ii: decomposition.is_some(),
        decomposition,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Sum,
    Prod,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub set: Vec<u64>,
    pub sumset_size: usize,
    pub product_size: usize,
    pub what: String,
}

/// Outcome of an exhaustive structure check over a small range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreimanReport {
    pub side: Side,
    pub k: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub sets_scanned: u64,
    pub hypothesis_hits: u64,
    pub violations: Vec<Violation>,
    pub complete: bool,
}

impl FreimanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Default)]
struct ShardTally {
    scanned: u64,
    hits: u64,
    violations: Vec<Violation>,
}

fn gcd_all(v: &[u64]) -> u64 {
    v.iter().fold(0, |g, &x| g.gcd(&x))
}

fn sumset_size_u64(v: &[u64]) -> usize {
    let mut sums: Vec<u64> = Vec::with_capacity(v.len() * (v.len() + 1) / 2);
    for (i, a) in v.iter().enumerate() {
        for b in &v[i..] {
            sums.push(a + b);
        }
    }
    sums.sort_unstable();
    sums.dedup();
    sums.len()
}

fn product_size_u64(v: &[u64]) -> usize {
    let mut prods: Vec<u64> = Vec::with_capacity(v.len() * (v.len() + 1) / 2);
    for (i, a) in v.iter().enumerate() {
        for b in &v[i..] {
            prods.push(a * b);
        }
    }
    prods.sort_unstable();
    prods.dedup();
    prods.len()
}

// Shards are the possible maxima, scanned in increasing order; a budget keeps
// only the leading shards that fit so partial reports are deterministic.
fn plan_shards(maxima: Vec<u64>, shard_size: impl Fn(u64) -> u64, budget: Option<u64>) -> (Vec<u64>, bool) {
    let Some(limit) = budget else {
        return (maxima, true);
    };
    let mut used = 0u64;
    let mut kept = Vec::new();
    for m in &maxima {
        let size = shard_size(*m);
        if used.saturating_add(size) > limit {
            return (kept, false);
        }
        used += size;
        kept.push(*m);
    }
    (kept, true)
}

/// Exhaustively checks the sum-side `3k-4` theorem on `{0, ..., n}`.
///
/// Sets are normalized to minimum 0 and difference gcd 1. Every set with
/// `|A+A| = 2k - 1 + b <= 3k - 4` must have a cover of length at most `k + b`.
/// `budget` caps the number of candidate sets enumerated.
pub fn check_freiman_3k4_sum(k: usize, n: u64, budget: Option<u64>) -> Result<FreimanReport, FreimanError> {
    if k < 4 || n < k as u64 - 1 {
        return Err(FreimanError::InvalidParameters(format!(
            "need k >= 4 and N >= k - 1, got k = {k}, N = {n}"
        )));
    }
    let kk = k as u64;
    let (shards, complete) = plan_shards(
        (kk - 1..=n).collect(),
        |m| binomial(m - 1, kk - 2),
        budget,
    );
    let tallies: Vec<ShardTally> = shards
        .par_iter()
        .map(|&m| {
            let mut tally = ShardTally::default();
            let mut set = vec![0u64; k];
            set[k - 1] = m;
            for mid in Combinations::new(m as usize - 1, k - 2) {
                for (slot, i) in set[1..k - 1].iter_mut().zip(&mid) {
                    *slot = *i as u64 + 1;
                }
                if gcd_all(&set) != 1 {
                    continue;
                }
                tally.scanned += 1;
                let s = sumset_size_u64(&set);
                if s > 3 * k - 4 {
                    continue;
                }
                tally.hits += 1;
                let b = s - (2 * k - 1);
                let shifted: Vec<BigInt> = set.iter().map(|&x| BigInt::from(x + 1)).collect();
                let cover = ap_cover(&IntSet::new(shifted).expect("positive"))
                    .expect("k >= 4");
                if cover.length > k + b {
                    tally.violations.push(Violation {
                        set: set.clone(),
                        sumset_size: s,
                        product_size: product_size_u64(&set),
                        what: format!("AP cover length {} exceeds k + b = {}", cover.length, k + b),
                    });
                }
            }
            tally
        })
        .collect();
    Ok(merge(Side::Sum, k, n, tallies, complete))
}

/// Product-side analogue on `{1, ..., n}` with multiplicative gcd 1: every
/// set with `|AA| = 2k - 1 + b <= 3k - 4` must lie in a geometric
/// progression of length at most `k + b`, and must be a Sidon set.
pub fn check_freiman_3k4_prod(k: usize, n: u64, budget: Option<u64>) -> Result<FreimanReport, FreimanError> {
    if k < 4 || n < k as u64 {
        return Err(FreimanError::InvalidParameters(format!(
            "need k >= 4 and N >= k, got k = {k}, N = {n}"
        )));
    }
    let kk = k as u64;
    let (shards, complete) = plan_shards((kk..=n).collect(), |m| binomial(m - 1, kk - 1), budget);
    let tallies: Vec<ShardTally> = shards
        .par_iter()
        .map(|&m| {
            let mut tally = ShardTally::default();
            let mut set = vec![0u64; k];
            set[k - 1] = m;
            for rest in Combinations::new(m as usize - 1, k - 1) {
                for (slot, i) in set[..k - 1].iter_mut().zip(&rest) {
                    *slot = *i as u64 + 1;
                }
                if gcd_all(&set) != 1 {
                    continue;
                }
                tally.scanned += 1;
                let p = product_size_u64(&set);
                if p > 3 * k - 4 {
                    continue;
                }
                tally.hits += 1;
                let a = IntSet::from_u64s(&set).expect("positive");
                if let Some(what) = product_side_failure(&a, p) {
                    tally.violations.push(Violation {
                        set: set.clone(),
                        sumset_size: sumset_size_u64(&set),
                        product_size: p,
                        what,
                    });
                }
            }
            tally
        })
        .collect();
    Ok(merge(Side::Prod, k, n, tallies, complete))
}

fn product_side_failure<T: Element>(a: &PosSet<T>, product_size: usize) -> Option<String> {
    let k = a.len();
    let b = product_size - (2 * k - 1);
    match gp_cover(a).expect("k >= 2") {
        None => return Some("no geometric progression contains the set".into()),
        Some(c) if c.length > k + b => {
            return Some(format!("GP cover length {} exceeds k + b = {}", c.length, k + b))
        }
        Some(_) => {}
    }
    if !is_sidon(a) {
        return Some(format!("|A+A| = {} below (k^2+k)/2", sumset(a).size));
    }
    None
}

fn merge(side: Side, k: usize, n: u64, tallies: Vec<ShardTally>, complete: bool) -> FreimanReport {
    let mut report = FreimanReport {
        side,
        k,
        n,
        sets_scanned: 0,
        hypothesis_hits: 0,
        violations: Vec::new(),
        complete,
    };
    for t in tallies {
        report.sets_scanned += t.scanned;
        report.hypothesis_hits += t.hits;
        report.violations.extend(t.violations);
    }
    report.violations.sort_by(|a, b| a.set.cmp(&b.set));
    report
}

/// Result of running the product-side checks over a list of rational sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub sets: usize,
    pub hypothesis_hits: usize,
    pub failures: Vec<String>,
}

pub fn check_product_catalog(catalog: &[RatSet]) -> CatalogReport {
    let mut report = CatalogReport {
        sets: catalog.len(),
        hypothesis_hits: 0,
        failures: Vec::new(),
    };
    for a in catalog {
        let k = a.len();
        if k < 2 {
            continue;
        }
        let p = product_set(a).size;
        if p + 4 > 3 * k {
            continue;
        }
        report.hypothesis_hits += 1;
        if let Some(what) = product_side_failure(a, p) {
            report.failures.push(format!("{a}: {what}"));
        }
    }
    report
}

/// Sets drawn from geometric progressions with assorted rational ratios and
/// leads: full progressions, progressions with one or two interior terms
/// removed, and a few near-misses with one term perturbed.
pub fn gp_catalog() -> Vec<RatSet> {
    let ratios = [ratio(2, 1), ratio(3, 1), ratio(3, 2), ratio(5, 2), ratio(4, 3), ratio(5, 3), ratio(7, 4)];
    let leads = [ratio(1, 1), ratio(2, 3), ratio(5, 1)];
    let mut out = Vec::new();
    for r in &ratios {
        for lead in &leads {
            for len in 4..=7usize {
                let mut terms = Vec::with_capacity(len);
                let mut t = lead.clone();
                for _ in 0..len {
                    terms.push(t.clone());
                    t *= r;
                }
                out.push(RatSet::new(terms.clone()).expect("positive"));
                for skip in 1..len - 1 {
                    let mut v = terms.clone();
                    v.remove(skip);
                    out.push(RatSet::new(v).expect("positive"));
                }
                if len >= 6 {
                    let mut v = terms.clone();
                    v.remove(len - 2);
                    v.remove(1);
                    out.push(RatSet::new(v).expect("positive"));
                }
                let mut v = terms.clone();
                v[len / 2] = &v[len / 2] * ratio(11, 13);
                out.push(RatSet::new(v).expect("positive"));
            }
        }
    }
    out
}
