//! Unions of two geometric progressions with a common ratio.
//!
//! `A = B ∪ C` with `B = {x r^i : i < m}` and `C = {y r^j : j < n}`. The
//! sumset splits as `(B+B) ∪ (C+C) ∪ (B+C)`, and coincidences between the
//! three pieces are governed by the equations
//!
//! * I:   `r^a + 1 = (r^b + r^c) z`, `a >= 0`, `b >= c`
//! * II:  `r^a + 1 = r^b + r^c z`, `a >= 0`
//! * III: `r^a - 1 = (r^b - r^c) z`, `a > 0`
//!
//! with `z = y/x` or `x/y`. For rational `r != 2` each has at most one
//! solution when `z` is not a power of `r` (III also for `r = 2`). The
//! functions here compute every quantity exactly and check the resulting
//! lower bounds on `|A+A|` instance by instance.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::exponent::is_power_of;
use crate::num::{ceil_div, format_rational, int, rational_pow, serde_rational, serde_rational_vec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GpError {
    #[error("ratio must exceed 1")]
    RatioNotAboveOne,
    #[error("leads must be positive")]
    NonPositiveLead,
    #[error("progression lengths must be positive")]
    EmptyProgression,
    #[error("progressions intersect")]
    ProgressionsIntersect,
    #[error("z in <r>: z is an integer power of r")]
    ZInRatioGroup,
    #[error("window must be at least 1")]
    EmptyWindow,
    #[error("bound requires r≠2")]
    RatioIsTwo,
    #[error("hypothesis r≥2 violated")]
    RatioBelowTwo,
    #[error("single progression: both leads lie on one progression of ratio r")]
    SingleProgression,
    #[error("need k = m + n = 8, got {0}")]
    NotEight(usize),
    #[error("need k >= 2, got {0}")]
    TooSmall(usize),
}

fn two() -> BigRational {
    int(2)
}

/// Two progressions `B`, `C` of common ratio `r`, normalized so `m >= n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpUnion {
    #[serde(with = "serde_rational")]
    pub x: BigRational,
    #[serde(with = "serde_rational")]
    pub y: BigRational,
    #[serde(with = "serde_rational")]
    pub r: BigRational,
    pub m: usize,
    pub n: usize,
}

impl GpUnion {
    pub fn new(x: BigRational, y: BigRational, r: BigRational, m: usize, n: usize) -> Result<Self, GpError> {
        if r <= BigRational::one() {
            return Err(GpError::RatioNotAboveOne);
        }
        if !x.is_positive() || !y.is_positive() {
            return Err(GpError::NonPositiveLead);
        }
        if m == 0 || n == 0 {
            return Err(GpError::EmptyProgression);
        }
        let u = if m >= n {
            GpUnion { x, y, r, m, n }
        } else {
            GpUnion { x: y, y: x, r, m: n, n: m }
        };
        let b: BTreeSet<BigRational> = u.b().into_iter().collect();
        if u.c().iter().any(|c| b.contains(c)) {
            return Err(GpError::ProgressionsIntersect);
        }
        Ok(u)
    }

    fn progression(lead: &BigRational, r: &BigRational, len: usize) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(len);
        let mut t = lead.clone();
        for _ in 0..len {
            out.push(t.clone());
            t *= r;
        }
        out
    }

    pub fn b(&self) -> Vec<BigRational> {
        Self::progression(&self.x, &self.r, self.m)
    }

    pub fn c(&self) -> Vec<BigRational> {
        Self::progression(&self.y, &self.r, self.n)
    }

    pub fn k(&self) -> usize {
        self.m + self.n
    }

    /// All elements, increasing, each tagged true when it comes from `B`.
    pub fn sorted_elements(&self) -> Vec<(BigRational, bool)> {
        let mut all: Vec<(BigRational, bool)> = self.b().into_iter().map(|v| (v, true)).collect();
        all.extend(self.c().into_iter().map(|v| (v, false)));
        all.sort();
        all
    }

    /// True when `y / x` is an integer power of `r`, so both pieces lie on
    /// one bi-infinite progression.
    pub fn single_progression(&self) -> bool {
        is_power_of(&(&self.y / &self.x), &self.r)
    }
}

impl fmt::Display for GpUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x={} y={} r={} m={} n={}",
            format_rational(&self.x),
            format_rational(&self.y),
            format_rational(&self.r),
            self.m,
            self.n
        )
    }
}

fn pair_sums(p: &[BigRational], q: &[BigRational], same: bool) -> BTreeSet<BigRational> {
    let mut out = BTreeSet::new();
    for (i, a) in p.iter().enumerate() {
        let rest = if same { &q[i..] } else { q };
        for b in rest {
            out.insert(a + b);
        }
    }
    out
}

fn intersect(a: &BTreeSet<BigRational>, b: &BTreeSet<BigRational>) -> Vec<BigRational> {
    a.intersection(b).cloned().collect()
}

/// The three pieces of `A+A`, their pairwise overlaps and the true total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakdown {
    pub bb: usize,
    pub cc: usize,
    pub bc: usize,
    #[serde(with = "serde_rational_vec")]
    pub bb_cc: Vec<BigRational>,
    #[serde(with = "serde_rational_vec")]
    pub bb_bc: Vec<BigRational>,
    #[serde(with = "serde_rational_vec")]
    pub cc_bc: Vec<BigRational>,
    pub total: usize,
}

impl Breakdown {
    /// Inclusion-exclusion estimate using only pairwise overlaps.
    pub fn inclusion_exclusion_floor(&self) -> i64 {
        (self.bb + self.cc + self.bc) as i64 - (self.bb_cc.len() + self.bb_bc.len() + self.cc_bc.len()) as i64
    }
}

pub fn sumset_breakdown(u: &GpUnion) -> Breakdown {
    let (b, c) = (u.b(), u.c());
    let bb = pair_sums(&b, &b, true);
    let cc = pair_sums(&c, &c, true);
    let bc = pair_sums(&b, &c, false);
    let total = bb.union(&cc).cloned().collect::<BTreeSet<_>>().union(&bc).count();
    Breakdown {
        bb: bb.len(),
        cc: cc.len(),
        bc: bc.len(),
        bb_cc: intersect(&bb, &cc),
        bb_bc: intersect(&bb, &bc),
        cc_bc: intersect(&cc, &bc),
        total,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EquationKind {
    I,
    II,
    III,
}

impl std::str::FromStr for EquationKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "I" | "i" | "1" => Ok(EquationKind::I),
            "II" | "ii" | "2" => Ok(EquationKind::II),
            "III" | "iii" | "3" => Ok(EquationKind::III),
            other => Err(format!("unknown equation kind {other:?}; use I, II or III")),
        }
    }
}

/// One of the three coincidence equations for a fixed ratio and multiplier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationInstance {
    pub kind: EquationKind,
    #[serde(with = "serde_rational")]
    pub r: BigRational,
    #[serde(with = "serde_rational")]
    pub z: BigRational,
}

impl EquationInstance {
    pub fn new(kind: EquationKind, r: BigRational, z: BigRational) -> Result<Self, GpError> {
        if r <= BigRational::one() {
            return Err(GpError::RatioNotAboveOne);
        }
        if !z.is_positive() {
            return Err(GpError::NonPositiveLead);
        }
        if is_power_of(&z, &r) {
            return Err(GpError::ZInRatioGroup);
        }
        Ok(EquationInstance { kind, r, z })
    }

    /// Exact check of one exponent triple.
    pub fn holds(&self, a: i64, b: i64, c: i64) -> bool {
        let p = |e| rational_pow(&self.r, e);
        let one = BigRational::one();
        match self.kind {
            EquationKind::I => a >= 0 && b >= c && p(a) + one == (p(b) + p(c)) * &self.z,
            EquationKind::II => a >= 0 && p(a) + one == p(b) + p(c) * &self.z,
            EquationKind::III => a > 0 && p(a) - one == (p(b) - p(c)) * &self.z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilySolution {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// All solutions with every exponent in `[-window, window]`.
///
/// One exponent is solved for by looking the remaining quantity up among the
/// powers of `r` in the window, so the scan is quadratic in the window.
pub fn count_family_solutions(e: &EquationInstance, window: i64) -> Result<Vec<FamilySolution>, GpError> {
    if window < 1 {
        return Err(GpError::EmptyWindow);
    }
    let range = -window..=window;
    let powers: Vec<BigRational> = range.clone().map(|t| rational_pow(&e.r, t)).collect();
    let pw = |t: i64| &powers[(t + window) as usize];
    let index: HashMap<&BigRational, i64> = powers.iter().zip(range.clone()).collect();
    let one = BigRational::one();
    let mut out = Vec::new();
    match e.kind {
        EquationKind::I => {
            for b in range.clone() {
                for c in -window..=b {
                    let v = (pw(b) + pw(c)) * &e.z - &one;
                    if let Some(&a) = index.get(&v) {
                        if a >= 0 {
                            out.push(FamilySolution { a, b, c });
                        }
                    }
                }
            }
        }
        EquationKind::II => {
            for a in 0..=window {
                for b in range.clone() {
                    let v = (pw(a) + &one - pw(b)) / &e.z;
                    if let Some(&c) = index.get(&v) {
                        out.push(FamilySolution { a, b, c });
                    }
                }
            }
        }
        EquationKind::III => {
            for a in 1..=window {
                for c in range.clone() {
                    let v = (pw(a) - &one) / &e.z + pw(c);
                    if let Some(&b) = index.get(&v) {
                        out.push(FamilySolution { a, b, c });
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Closed-form floor for `|A+A|` when `r != 2`:
/// `((m+n)^2 + m + n)/2 - min(m-2, n-1) - 2 min(m-1, n) - (n-1)`, with each
/// subtracted term clamped at zero and the result capped at `(k^2+k)/2`.
pub fn gp8_lower_bound(m: usize, n: usize) -> i64 {
    let (m, n) = (m.max(n) as i64, m.min(n) as i64);
    let k = m + n;
    let full = (k * k + k) / 2;
    let loss = (m - 2).min(n - 1).max(0) + 2 * (m - 1).min(n).max(0) + (n - 1).max(0);
    (full - loss).min(full)
}

/// Every inequality behind [`gp8_lower_bound`] checked on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gp8Check {
    pub total: usize,
    pub bound: i64,
    pub single_progression: bool,
    pub pieces_sidon: bool,
    pub bb_cc_ok: bool,
    pub bb_bc_ok: bool,
    pub cc_bc_ok: bool,
    pub bc_floor_ok: bool,
    /// Window-bounded solution counts for kinds I, II, III at `z = y/x`
    /// followed by the same at `z = x/y`.
    pub family_counts: Vec<usize>,
    pub window: i64,
}

impl Gp8Check {
    pub fn intermediates_hold(&self) -> bool {
        self.single_progression || (self.bb_cc_ok && self.bb_bc_ok && self.cc_bc_ok && self.bc_floor_ok)
    }

    pub fn families_ok(&self) -> bool {
        self.family_counts.iter().all(|&c| c <= 1)
    }

    pub fn passes(&self) -> bool {
        self.total as i64 >= self.bound && self.pieces_sidon && self.intermediates_hold() && self.families_ok()
    }
}

pub fn check_gp8_bound(u: &GpUnion) -> Result<Gp8Check, GpError> {
    if u.r == two() {
        return Err(GpError::RatioIsTwo);
    }
    let (m, n) = (u.m as i64, u.n as i64);
    let k = m + n;
    let bd = sumset_breakdown(u);
    let single = u.single_progression();
    let window = 2 * k + 4;
    let mut family_counts = Vec::new();
    if !single {
        for z in [&u.y / &u.x, &u.x / &u.y] {
            for kind in [EquationKind::I, EquationKind::II, EquationKind::III] {
                let inst = EquationInstance::new(kind, u.r.clone(), z.clone())?;
                family_counts.push(count_family_solutions(&inst, window)?.len());
            }
        }
    }
    let pieces_sidon = bd.bb as i64 == (m * m + m) / 2
        && bd.cc as i64 == (n * n + n) / 2
        && (!single || bd.total as i64 == (k * k + k) / 2);
    Ok(Gp8Check {
        total: bd.total,
        bound: gp8_lower_bound(u.m, u.n),
        single_progression: single,
        pieces_sidon,
        bb_cc_ok: bd.bb_cc.len() as i64 <= (m - 1).min(n),
        bb_bc_ok: bd.bb_bc.len() as i64 <= (m - 1).min(n),
        cc_bc_ok: bd.cc_bc.len() as i64 <= n - 1,
        bc_floor_ok: bd.bc as i64 >= m * n - (m - 2).min(n - 1).max(0),
        family_counts,
        window,
    })
}

/// `ceil(((k+1)^2 + 3) / 4)`.
pub fn growth_bound(k: usize) -> i64 {
    let k = k as i64;
    ceil_div((k + 1) * (k + 1) + 3, 4)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCheck {
    pub total: usize,
    pub bound: i64,
    /// `a_t >= 2 a_{t-2}` for every `t >= 3` in increasing order.
    pub doubling_ok: bool,
}

impl GrowthCheck {
    pub fn passes(&self) -> bool {
        self.doubling_ok && self.total as i64 >= self.bound
    }
}

pub fn check_growth_bound(u: &GpUnion) -> Result<GrowthCheck, GpError> {
    if u.r < two() {
        return Err(GpError::RatioBelowTwo);
    }
    let elems: Vec<BigRational> = u.sorted_elements().into_iter().map(|e| e.0).collect();
    let doubling_ok = elems.windows(3).all(|w| w[2] >= &w[0] * two());
    Ok(GrowthCheck {
        total: sumset_breakdown(u).total,
        bound: growth_bound(u.k()),
        doubling_ok,
    })
}

/// The `1 + 2 + ... ` block of guaranteed distinct sums for an even number of
/// increasing elements: `a_i + a_1, ..., 2 a_i` for every even `i`, plus
/// `2 a_1`.
fn guaranteed_sums(a: &[BigRational]) -> BTreeSet<BigRational> {
    let mut s = BTreeSet::new();
    s.insert(&a[0] * two());
    for i in (1..a.len()).step_by(2) {
        for j in 0..=i {
            s.insert(&a[i] + &a[j]);
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct K8Check {
    pub total: usize,
    pub guaranteed: usize,
    /// Sum outside the guaranteed block picked by the interleaving case
    /// analysis, if it indeed lies outside.
    #[serde(with = "opt_rational")]
    pub case_witness: Option<BigRational>,
    /// Least sum outside the guaranteed block.
    #[serde(with = "opt_rational")]
    pub least_extra: Option<BigRational>,
}

impl K8Check {
    pub fn passes(&self) -> bool {
        self.total >= 22 && self.guaranteed == 21 && self.case_witness.is_some()
    }
}

mod opt_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&crate::num::format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| crate::num::parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Picks the sum the interleaving argument points at. With 1-based indices:
/// if some `a_j, a_{j-1}` (`3 <= j <= 8`) come from the same progression,
/// `a_j + a_1` (odd `j`) or `2 a_{j-1}` (even `j`) misses the block;
/// otherwise `a_2, ..., a_8` alternate and the candidates are `a_3 + a_1`,
/// then `a_7 + a_1` or `a_3 + a_2` depending on where `a_1` sits.
fn interleaving_witness(tagged: &[(BigRational, bool)]) -> BigRational {
    let a = |i: usize| &tagged[i - 1].0;
    let same = |i: usize, j: usize| tagged[i - 1].1 == tagged[j - 1].1;
    for j in 3..=8 {
        if same(j, j - 1) {
            return if j % 2 == 1 { a(j) + a(1) } else { a(j - 1) * two() };
        }
    }
    if a(3) + a(1) != a(2) * two() {
        a(3) + a(1)
    } else if same(1, 2) {
        a(7) + a(1)
    } else {
        a(3) + a(2)
    }
}

pub fn check_k8_bound(u: &GpUnion) -> Result<K8Check, GpError> {
    if u.k() != 8 {
        return Err(GpError::NotEight(u.k()));
    }
    if u.r < two() {
        return Err(GpError::RatioBelowTwo);
    }
    let tagged = u.sorted_elements();
    let elems: Vec<BigRational> = tagged.iter().map(|e| e.0.clone()).collect();
    let block = guaranteed_sums(&elems);
    let all = pair_sums(&elems, &elems, true);
    let candidate = interleaving_witness(&tagged);
    Ok(K8Check {
        total: all.len(),
        guaranteed: block.len(),
        case_witness: (!block.contains(&candidate) && all.contains(&candidate)).then_some(candidate),
        least_extra: all.difference(&block).next().cloned(),
    })
}

/// The four case bounds for a union of two progressions; `None` where the
/// case does not apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseBounds {
    pub odd_neq2: Option<i64>,
    pub even_neq2: Option<i64>,
    pub growth: Option<i64>,
    pub k8: Option<i64>,
}

impl CaseBounds {
    pub fn selected(&self) -> i64 {
        [self.odd_neq2, self.even_neq2, self.growth, self.k8]
            .into_iter()
            .flatten()
            .max()
            .expect("growth or r != 2 always applies")
    }
}

/// Best applicable lower bound on `|A+A|` for a `k`-element union of two
/// progressions with rational ratio `r`.
pub fn theorem_gpsum_bound(k: usize, r: &BigRational) -> Result<CaseBounds, GpError> {
    if k < 2 {
        return Err(GpError::TooSmall(k));
    }
    if *r <= BigRational::one() {
        return Err(GpError::RatioNotAboveOne);
    }
    let neq2 = (*r != two()).then(|| gp8_lower_bound(k.div_ceil(2), k / 2));
    let geq2 = *r >= two();
    Ok(CaseBounds {
        odd_neq2: neq2.filter(|_| k % 2 == 1),
        even_neq2: neq2.filter(|_| k % 2 == 0),
        growth: geq2.then(|| growth_bound(k)),
        k8: (geq2 && k == 8).then_some(22),
    })
}

/// Representation counts of `b + c` over `B × C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSpectrum {
    pub counts: BTreeMap<String, usize>,
    pub max_count: usize,
    #[serde(with = "serde_rational_vec")]
    pub doubled: Vec<BigRational>,
}

pub fn rep_spectrum(u: &GpUnion) -> Result<RepSpectrum, GpError> {
    if u.single_progression() {
        return Err(GpError::SingleProgression);
    }
    let mut counts: BTreeMap<BigRational, usize> = BTreeMap::new();
    for b in u.b() {
        for c in u.c() {
            *counts.entry(&b + &c).or_insert(0) += 1;
        }
    }
    let doubled = counts.iter().filter(|(_, &n)| n >= 2).map(|(v, _)| v.clone()).collect();
    Ok(RepSpectrum {
        max_count: counts.values().copied().max().unwrap_or(0),
        counts: counts.into_iter().map(|(v, n)| (format_rational(&v), n)).collect(),
        doubled,
    })
}

/// Report of a bound sweep at one `(k, r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSweepReport {
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub r: BigRational,
    pub case_bounds: CaseBounds,
    pub selected: i64,
    pub witnesses_checked: usize,
    pub failures: Vec<String>,
}

/// Lead pairs used by sweeps when none are given.
pub fn default_leads() -> Vec<(BigRational, BigRational)> {
    [(1, 2), (1, 3), (1, 5), (2, 3), (3, 7), (8, 16), (1, 11)]
        .iter()
        .map(|&(x, y)| (int(x), int(y)))
        .collect()
}

/// Evaluates the case bounds at `(k, r)` and checks every disjoint union with
/// `m + n = k` and the given leads against the selected bound.
pub fn bound_sweep(k: usize, r: &BigRational, leads: &[(BigRational, BigRational)]) -> Result<BoundSweepReport, GpError> {
    let case_bounds = theorem_gpsum_bound(k, r)?;
    let selected = case_bounds.selected();
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=k / 2 {
        let m = k - n;
        for (x, y) in leads {
            let u = match GpUnion::new(x.clone(), y.clone(), r.clone(), m, n) {
                Ok(u) => u,
                Err(GpError::ProgressionsIntersect) => continue,
                Err(e) => return Err(e),
            };
            checked += 1;
            let total = sumset_breakdown(&u).total as i64;
            if total < selected {
                failures.push(format!("{u}: |A+A| = {total} < {selected}"));
            }
        }
    }
    Ok(BoundSweepReport {
        k,
        r: r.clone(),
        case_bounds,
        selected,
        witnesses_checked: checked,
        failures,
    })
}

/// Reduced fractions `p/q` with `2 <= p <= p_max` and `1 <= q < p`, ordered
/// by `p` then `q`.
pub fn ratio_grid(p_max: i64) -> Vec<BigRational> {
    let mut out = Vec::new();
    for p in 2..=p_max {
        for q in 1..p {
            if num_integer::Integer::gcd(&p, &q) == 1 {
                out.push(crate::num::ratio(p, q));
            }
        }
    }
    out
}

/// Deterministic sample of `count` distinct pairs `(r, z)` with `r` from
/// [`ratio_grid`]`(p_max)` minus `r = 2`, and `z = a/b` (`1 <= a, b <= 7`)
/// not a power of `r`. Ratios are visited round robin so every one appears.
pub fn family_sample(p_max: i64, count: usize) -> Vec<(BigRational, BigRational)> {
    let ratios: Vec<BigRational> = ratio_grid(p_max).into_iter().filter(|r| *r != two()).collect();
    let mut zs: Vec<BigRational> = (1..=7)
        .flat_map(|a| (1..=7).map(move |b| crate::num::ratio(a, b)))
        .collect();
    zs.sort();
    zs.dedup();
    let per_ratio: Vec<Vec<BigRational>> = ratios
        .iter()
        .map(|r| zs.iter().filter(|z| !is_power_of(z, r)).cloned().collect())
        .collect();
    let mut out = Vec::with_capacity(count);
    let mut round = 0;
    while out.len() < count && per_ratio.iter().any(|zs| round < zs.len()) {
        for (r, zs) in ratios.iter().zip(&per_ratio) {
            if out.len() == count {
                break;
            }
            if let Some(z) = zs.get(round) {
                out.push((r.clone(), z.clone()));
            }
        }
        round += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ratio;
    use crate::poly::{rational_roots, Polynomial};
    use crate::sets::{sumset, RatSet};

    fn union(x: i64, y: i64, r: BigRational, m: usize, n: usize) -> GpUnion {
        GpUnion::new(int(x), int(y), r, m, n).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn construction_rules() {
        let u = union(2, 1, int(3), 2, 4);
        assert_eq!((u.m, u.n), (4, 2));
        assert_eq!(u.x, int(1));
        assert_eq!(GpUnion::new(int(1), int(4), int(2), 3, 2), Err(GpError::ProgressionsIntersect));
        assert_eq!(GpUnion::new(int(1), int(4), int(1), 3, 2), Err(GpError::RatioNotAboveOne));
        assert_eq!(GpUnion::new(int(1), int(4), int(3), 0, 2), Err(GpError::EmptyProgression));
        assert_eq!(GpError::ProgressionsIntersect.to_string(), "progressions intersect");
    }

    #[test]
    fn doubled_sums_shared_by_both_progressions() {
        let bd = sumset_breakdown(&union(1, 2, int(3), 4, 4));
        assert_eq!(bd.bb_cc, ints(&[4, 12, 36]));
        assert!(bd.total as i64 >= bd.inclusion_exclusion_floor());
    }

    #[test]
    fn doubled_and_cross_sums_overlap() {
        let bd = sumset_breakdown(&union(8, 16, ratio(3, 2), 4, 4));
        assert_eq!(bd.bb_bc, ints(&[24, 36, 54]));
    }

    #[test]
    fn cross_sums_with_two_representations() {
        let u = union(1, 4, int(3), 4, 4);
        assert_eq!(sumset_breakdown(&u).bc, 14);
        let spectrum = rep_spectrum(&u).unwrap();
        assert_eq!(spectrum.doubled, ints(&[13, 39]));
        assert_eq!(spectrum.max_count, 2);
    }

    #[test]
    fn breakdown_total_matches_direct_sumset() {
        for u in [union(1, 2, int(3), 4, 4), union(8, 16, ratio(3, 2), 4, 4), union(1, 3, int(2), 5, 3)] {
            let mut all = u.b();
            all.extend(u.c());
            let direct = sumset(&RatSet::new(all).unwrap()).size;
            assert_eq!(sumset_breakdown(&u).total, direct);
        }
    }

    #[test]
    fn spectrum_examples() {
        let s = rep_spectrum(&union(1, 2, int(3), 4, 4)).unwrap();
        assert!(s.max_count <= 2);
        assert_eq!(s.counts.values().sum::<usize>(), 16);
        let s = rep_spectrum(&union(1, 100, int(3), 3, 3)).unwrap();
        assert_eq!(s.max_count, 1);
        assert!(s.doubled.is_empty());
        assert_eq!(rep_spectrum(&union(1, 9, int(3), 2, 2)), Err(GpError::SingleProgression));
    }

    // Full triple scan over the window, independent of the lookup used by
    // count_family_solutions.
    fn brute_solutions(e: &EquationInstance, w: i64) -> Vec<FamilySolution> {
        let mut out = Vec::new();
        for a in -w..=w {
            for b in -w..=w {
                for c in -w..=w {
                    if e.holds(a, b, c) {
                        out.push(FamilySolution { a, b, c });
                    }
                }
            }
        }
        out
    }

    #[test]
    fn ratio_two_counterexamples() {
        let e = EquationInstance::new(EquationKind::I, int(2), int(3)).unwrap();
        let s = count_family_solutions(&e, 4).unwrap();
        assert!(s.len() >= 2);
        assert!(s.contains(&FamilySolution { a: 3, b: 1, c: 0 }));
        assert!(s.contains(&FamilySolution { a: 1, b: -1, c: -1 }));
        assert_eq!(s, brute_solutions(&e, 4));

        let e = EquationInstance::new(EquationKind::II, int(2), int(3)).unwrap();
        let s = count_family_solutions(&e, 4).unwrap();
        assert!(s.contains(&FamilySolution { a: 2, b: 1, c: 0 }));
        assert!(s.contains(&FamilySolution { a: 0, b: -1, c: -1 }));
        assert_eq!(s, brute_solutions(&e, 4));

        let e = EquationInstance::new(EquationKind::III, int(2), int(3)).unwrap();
        assert!(count_family_solutions(&e, 4).unwrap().len() <= 1);
    }

    #[test]
    fn ratio_three_single_solution() {
        let e = EquationInstance::new(EquationKind::I, int(3), int(2)).unwrap();
        let s = count_family_solutions(&e, 6).unwrap();
        assert_eq!(s, vec![FamilySolution { a: 1, b: 0, c: 0 }]);
        assert_eq!(s, brute_solutions(&e, 6));
    }

    #[test]
    fn lookup_scan_matches_brute_force() {
        for (p, q) in [(3, 2), (5, 2), (4, 1), (7, 3)] {
            for (zn, zd) in [(2, 1), (5, 3), (7, 2), (1, 5)] {
                for kind in [EquationKind::I, EquationKind::II, EquationKind::III] {
                    let Ok(e) = EquationInstance::new(kind, ratio(p, q), ratio(zn, zd)) else { continue };
                    assert_eq!(count_family_solutions(&e, 5).unwrap(), brute_solutions(&e, 5));
                }
            }
        }
    }

    #[test]
    fn equation_validation() {
        assert_eq!(
            EquationInstance::new(EquationKind::I, int(2), int(8)),
            Err(GpError::ZInRatioGroup)
        );
        assert_eq!(
            EquationInstance::new(EquationKind::II, ratio(3, 2), ratio(4, 9)),
            Err(GpError::ZInRatioGroup)
        );
        let e = EquationInstance::new(EquationKind::III, int(3), int(2)).unwrap();
        assert_eq!(count_family_solutions(&e, 0), Err(GpError::EmptyWindow));
    }

    #[test]
    fn gp8_bound_values() {
        assert_eq!(gp8_lower_bound(4, 4), 25);
        assert_eq!(gp8_lower_bound(5, 4), 31);
        assert_eq!(gp8_lower_bound(1, 1), 3);
        assert_eq!(gp8_lower_bound(4, 5), 31);
        for k in 3..=64usize {
            let kk = k as i64;
            let closed = if k % 2 == 1 { (kk * kk - 3 * kk + 8) / 2 } else { (kk * kk - 3 * kk + 10) / 2 };
            assert_eq!(gp8_lower_bound(k.div_ceil(2), k / 2), closed, "k={k}");
        }
    }

    #[test]
    fn gp8_checks() {
        let c = check_gp8_bound(&union(1, 2, int(3), 4, 4)).unwrap();
        assert!(c.passes(), "{c:?}");
        assert!(c.total >= 25);
        let c = check_gp8_bound(&union(8, 16, ratio(3, 2), 4, 4)).unwrap();
        assert!(c.passes(), "{c:?}");
        assert_eq!(check_gp8_bound(&union(1, 3, int(2), 5, 3)), Err(GpError::RatioIsTwo));
        // Both pieces on one progression: the union is Sidon.
        let c = check_gp8_bound(&union(1, 81, int(3), 4, 3)).unwrap();
        assert!(c.single_progression && c.passes());
        assert_eq!(c.total, 28);
    }

    #[test]
    fn ratio_two_breaks_the_r_neq_2_bound() {
        let u = union(1, 3, int(2), 5, 3);
        let bd = sumset_breakdown(&u);
        assert!((bd.total as i64) < gp8_lower_bound(5, 3), "{}", bd.total);
    }

    #[test]
    fn growth_checks() {
        assert_eq!(growth_bound(8), 21);
        assert_eq!(growth_bound(9), 26);
        assert_eq!(growth_bound(6), 13);
        let u = union(1, 2, int(4), 3, 3);
        let g = check_growth_bound(&u).unwrap();
        assert_eq!(g.bound, 13);
        let direct = sumset(&RatSet::new(ints(&[1, 4, 16, 2, 8, 32])).unwrap()).size;
        assert_eq!(g.total, direct);
        assert!(g.passes());
        assert_eq!(check_growth_bound(&union(1, 2, ratio(3, 2), 3, 3)), Err(GpError::RatioBelowTwo));
    }

    #[test]
    fn k8_checks() {
        for u in [
            union(1, 5, int(2), 7, 1),
            union(1, 3, int(2), 4, 4),
            union(1, 7, ratio(5, 2), 4, 4),
        ] {
            let c = check_k8_bound(&u).unwrap();
            assert!(c.passes(), "{u}: {c:?}");
            assert!(c.least_extra.is_some());
        }
        assert_eq!(check_k8_bound(&union(1, 3, int(2), 4, 3)), Err(GpError::NotEight(7)));
    }

    #[test]
    fn k8_alternating_branches() {
        // a_1 in B with a_3 + a_1 = 2 a_2: y = (2r - 1) x.
        let r = int(3);
        let u = GpUnion::new(int(1), int(5), r, 5, 3).unwrap();
        let c = check_k8_bound(&u).unwrap();
        assert!(c.passes(), "{c:?}");
        // a_1 in C with x = (1 + r) y / 2.
        let u = GpUnion::new(int(2), int(1), int(3), 4, 4).unwrap();
        let c = check_k8_bound(&u).unwrap();
        assert!(c.passes(), "{c:?}");
    }

    #[test]
    fn case_bounds() {
        let b = theorem_gpsum_bound(8, &int(3)).unwrap();
        assert_eq!(b.even_neq2, Some(25));
        assert_eq!(b.selected(), 25);
        let b = theorem_gpsum_bound(8, &int(2)).unwrap();
        assert_eq!((b.growth, b.k8, b.selected()), (Some(21), Some(22), 22));
        assert_eq!(theorem_gpsum_bound(9, &int(2)).unwrap().selected(), 26);
        let b = theorem_gpsum_bound(9, &ratio(3, 2)).unwrap();
        assert_eq!((b.odd_neq2, b.growth), (Some(31), None));
        assert_eq!(theorem_gpsum_bound(2, &int(2)).unwrap().selected(), 3);
    }

    #[test]
    fn case_bounds_reach_three_k_minus_two() {
        let ratios: Vec<BigRational> = (2..=12)
            .flat_map(|p| (1..p).map(move |q| ratio(p, q)))
            .collect();
        for k in 8..=64usize {
            for r in &ratios {
                let sel = theorem_gpsum_bound(k, r).unwrap().selected();
                assert!(sel >= 3 * k as i64 - 2, "k={k} r={}", format_rational(r));
            }
        }
    }

    #[test]
    fn samples_are_valid() {
        assert_eq!(ratio_grid(12).len(), 45);
        let s = family_sample(9, 200);
        assert_eq!(s.len(), 200);
        let distinct: BTreeSet<_> = s.iter().cloned().collect();
        assert_eq!(distinct.len(), 200);
        for (r, z) in &s {
            assert!(*r != int(2) && *r > int(1) && !is_power_of(z, r));
        }
        let ratios: BTreeSet<_> = s.iter().map(|p| p.0.clone()).collect();
        assert_eq!(ratios.len(), ratio_grid(9).len() - 1);
    }

    #[test]
    fn sweep_report() {
        let rep = bound_sweep(8, &int(2), &default_leads()).unwrap();
        assert_eq!(rep.selected, 22);
        assert!(rep.witnesses_checked > 0);
        assert!(rep.failures.is_empty(), "{:?}", rep.failures);
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["r"], "2");
        assert!(v["case_bounds"].get("odd_neq2").is_some());
    }

    // Non-solvability facts used in the k = 8 argument and the Sidon argument,
    // checked on the displayed polynomials.
    #[test]
    fn displayed_polynomials_have_no_admissible_roots() {
        // (r - 1)^2 = 0 has only the root 1.
        let p = Polynomial::from_i64(&[1, -2, 1]).unwrap();
        assert_eq!(rational_roots(&p).unwrap(), vec![int(1)]);
        // With y = 1, x = (1 + r)/2 the equality a_3 + a_2 = a_4 + a_1 reads
        // r + (1+r)/2 = r(1+r)/2 + 1, i.e. r^2 - 2r + 1 = 0.
        let p = Polynomial::from_terms(&[(1, 2), (-2, 1), (1, 0)]).unwrap();
        assert!(rational_roots(&p).unwrap().iter().all(|r| *r < int(2)));
        // r^{b-d}(r^{a-b} + 1) - r^{c-d} - 1 with c = d allows only r = 2
        // among r > 1, e.g. a - b = 0, b - d = 1: 2r - 2 = 0 gives r = 1.
        for (ab, bd, cd) in [(0usize, 1usize, 0usize), (1, 1, 0), (2, 1, 0), (1, 2, 1), (0, 2, 1)] {
            let p = Polynomial::from_terms(&[(1, ab + bd), (1, bd), (-1, cd), (-1, 0)]).unwrap();
            for root in rational_roots(&p).unwrap() {
                assert!(root <= int(1) || root == int(2), "{ab} {bd} {cd}: {root}");
            }
        }
    }
}
