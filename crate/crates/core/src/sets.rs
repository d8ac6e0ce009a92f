//! Finite sets of positive exact numbers with their sumsets, product sets
//! and representation counts.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::num::{format_rational, parse_rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetError {
    #[error("empty set")]
    Empty,
    #[error("element {0} is not positive")]
    NonPositive(String),
}

/// Exact positive numbers a set may hold.
pub trait Element: Clone + Ord + Hash + fmt::Debug + Send + Sync {
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn is_positive_value(&self) -> bool;
    fn to_rational(&self) -> BigRational;
    fn render(&self) -> String;
}

impl Element for BigInt {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn is_positive_value(&self) -> bool {
        self.is_positive()
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Element for BigRational {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn is_positive_value(&self) -> bool {
        self.is_positive()
    }
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
    fn render(&self) -> String {
        format_rational(self)
    }
}

/// A nonempty finite set of positive values, stored strictly increasing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosSet<T> {
    elems: Vec<T>,
}

/// Positive integers.
pub type IntSet = PosSet<BigInt>;
/// Positive rationals, each held in lowest terms.
pub type RatSet = PosSet<BigRational>;

impl<T: Element> PosSet<T> {
    /// Builds a set from arbitrary values; order and repeats are irrelevant.
    pub fn new(mut elems: Vec<T>) -> Result<Self, SetError> {
        if elems.is_empty() {
            return Err(SetError::Empty);
        }
        if let Some(bad) = elems.iter().find(|e| !e.is_positive_value()) {
            return Err(SetError::NonPositive(bad.render()));
        }
        elems.sort();
        elems.dedup();
        Ok(Self { elems })
    }

    pub fn elements(&self) -> &[T] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn min(&self) -> &T {
        &self.elems[0]
    }

    pub fn max(&self) -> &T {
        &self.elems[self.elems.len() - 1]
    }

    pub fn contains(&self, x: &T) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.elems.iter().map(Element::to_rational).collect()
    }

    pub fn to_rat_set(&self) -> RatSet {
        PosSet {
            elems: self.to_rationals(),
        }
    }
}

impl IntSet {
    pub fn from_u64s(values: &[u64]) -> Result<Self, SetError> {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// The elements as machine integers, if they all fit.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.elems.iter().map(ToPrimitive::to_u64).collect()
    }
}

impl RatSet {
    pub fn from_ints(values: &[i64]) -> Result<Self, SetError> {
        Self::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }
}

impl<T: Element> fmt::Debug for PosSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: Element> fmt::Display for PosSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(Element::render).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

// Integer sets serialize as JSON numbers when every element fits in u64, which
// covers everything the search produces; larger values fall back to strings.
impl Serialize for IntSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.to_u64s() {
            Some(v) => v.serialize(s),
            None => self
                .elems
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for IntSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Item {
            Num(u64),
            Text(String),
        }
        let items = Vec::<Item>::deserialize(d)?;
        let mut elems = Vec::with_capacity(items.len());
        for item in items {
            elems.push(match item {
                Item::Num(n) => BigInt::from(n),
                Item::Text(t) => t.parse().map_err(serde::de::Error::custom)?,
            });
        }
        IntSet::new(elems).map_err(serde::de::Error::custom)
    }
}

impl Serialize for RatSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.elems
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        let elems = texts
            .iter()
            .map(|t| parse_rational(t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        RatSet::new(elems).map_err(serde::de::Error::custom)
    }
}

/// Size of a sumset or product set together with the representation count of
/// every value, counting unordered pairs `a <= b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetStats<T> {
    pub size: usize,
    pub rep_counts: BTreeMap<T, usize>,
}

impl<T: Element> SetStats<T> {
    fn from_pairs(elems: &[T], op: impl Fn(&T, &T) -> T) -> Self {
        let mut rep_counts = BTreeMap::new();
        for (i, a) in elems.iter().enumerate() {
            for b in &elems[i..] {
                *rep_counts.entry(op(a, b)).or_insert(0) += 1;
            }
        }
        SetStats {
            size: rep_counts.len(),
            rep_counts,
        }
    }

    pub fn total_reps(&self) -> usize {
        self.rep_counts.values().sum()
    }

    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.rep_counts.keys()
    }
}

pub fn sumset<T: Element>(a: &PosSet<T>) -> SetStats<T> {
    SetStats::from_pairs(&a.elems, T::plus)
}

pub fn product_set<T: Element>(a: &PosSet<T>) -> SetStats<T> {
    SetStats::from_pairs(&a.elems, T::times)
}

/// True iff all pairwise sums `a + b` with `a <= b` are distinct.
pub fn is_sidon<T: Element>(a: &PosSet<T>) -> bool {
    let k = a.len();
    sumset(a).size == k * (k + 1) / 2
}

/// Divides out the gcd of the elements. Both sumset and product-set sizes are
/// invariant under this scaling.
pub fn normalize_multiplicative(a: &IntSet) -> IntSet {
    let g = a
        .elems
        .iter()
        .skip(1)
        .fold(a.elems[0].clone(), |g, e| g.gcd(e));
    if g.is_one() {
        return a.clone();
    }
    PosSet {
        elems: a.elems.iter().map(|e| e / &g).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxPair {
    pub sum_size: usize,
    pub product_size: usize,
    pub maximum: usize,
}

pub fn max_pair<T: Element>(a: &PosSet<T>) -> MaxPair {
    let sum_size = sumset(a).size;
    let product_size = product_set(a).size;
    MaxPair {
        sum_size,
        product_size,
        maximum: sum_size.max(product_size),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, ratio};
    use proptest::prelude::*;

    fn ints(v: &[u64]) -> IntSet {
        IntSet::from_u64s(v).unwrap()
    }

    #[test]
    fn table_sets_have_published_sizes() {
        assert_eq!(sumset(&ints(&[1, 2, 3, 4])).size, 7);
        assert_eq!(product_set(&ints(&[1, 2, 3, 4])).size, 9);
        assert_eq!(product_set(&ints(&[1, 2, 3, 4, 6, 8, 12])).size, 18);
        assert_eq!(sumset(&ints(&[1, 2, 3, 4, 6, 8, 9, 12, 16])).size, 25);
    }

    #[test]
    fn singleton_stats() {
        let s = sumset(&ints(&[5]));
        assert_eq!(s.size, 1);
        assert_eq!(s.rep_counts.get(&BigInt::from(10)), Some(&1));
        assert_eq!(product_set(&ints(&[7])).size, 1);
        assert_eq!(
            max_pair(&ints(&[9])),
            MaxPair { sum_size: 1, product_size: 1, maximum: 1 }
        );
    }

    #[test]
    fn empty_and_nonpositive_rejected() {
        let err = IntSet::new(vec![]).unwrap_err();
        assert_eq!(err, SetError::Empty);
        assert_eq!(err.to_string(), "empty set");
        assert!(matches!(IntSet::new(vec![BigInt::from(0)]), Err(SetError::NonPositive(_))));
        assert!(matches!(RatSet::new(vec![ratio(-1, 2)]), Err(SetError::NonPositive(_))));
    }

    #[test]
    fn construction_sorts_and_dedups() {
        let a = ints(&[4, 1, 3, 1]);
        assert_eq!(a.to_u64s().unwrap(), vec![1, 3, 4]);
        let r = RatSet::new(vec![ratio(2, 4), ratio(1, 3), ratio(1, 2)]).unwrap();
        assert_eq!(r.elements(), &[ratio(1, 3), ratio(1, 2)]);
    }

    #[test]
    fn sidon_examples() {
        assert!(is_sidon(&ints(&[1, 2, 4, 8])));
        assert!(!is_sidon(&ints(&[1, 2, 3])));
        // The ten pair sums of {1,2,5,11} are 2,3,6,12,4,7,13,10,16,22.
        assert!(is_sidon(&ints(&[1, 2, 5, 11])));
        let gp = RatSet::new(vec![int(4), int(6), int(9), ratio(27, 2)]).unwrap();
        assert!(is_sidon(&gp));
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_multiplicative(&ints(&[2, 4, 6, 8])), ints(&[1, 2, 3, 4]));
        assert_eq!(normalize_multiplicative(&ints(&[1, 2, 3])), ints(&[1, 2, 3]));
        assert_eq!(normalize_multiplicative(&ints(&[6, 10, 14])), ints(&[3, 5, 7]));
    }

    #[test]
    fn max_pair_examples() {
        let m = max_pair(&ints(&[1, 2, 3, 4, 6, 8]));
        assert_eq!((m.sum_size, m.product_size, m.maximum), (13, 15, 15));
        let m = max_pair(&ints(&[1, 2, 3, 4, 6, 8, 9, 12, 16, 18]));
        assert_eq!((m.sum_size, m.product_size, m.maximum), (30, 29, 30));
    }

    #[test]
    fn rational_sets_work_like_integer_sets() {
        let a = RatSet::new(vec![ratio(1, 2), int(1), ratio(3, 2), int(2)]).unwrap();
        assert_eq!(sumset(&a).size, 7);
        let b = RatSet::from_ints(&[1, 2, 3, 4]).unwrap();
        assert_eq!(product_set(&a).size, product_set(&b).size);
    }

    #[test]
    fn serde_forms() {
        let a = ints(&[3, 1, 2]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[1,2,3]");
        let back: IntSet = serde_json::from_str("[1,\"2\",3]").unwrap();
        assert_eq!(back, a);
        let r = RatSet::new(vec![ratio(3, 2), int(2)]).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"["3/2","2"]"#);
        assert!(serde_json::from_str::<IntSet>("[]").is_err());
    }

    fn small_set() -> impl Strategy<Value = Vec<u64>> {
        prop::collection::btree_set(1u64..60, 1..9).prop_map(|s| s.into_iter().collect())
    }

    proptest! {
        #[test]
        fn sumset_and_product_bounds(v in small_set()) {
            let a = ints(&v);
            let k = a.len();
            let s = sumset(&a);
            let p = product_set(&a);
            prop_assert!(2 * k - 1 <= s.size && s.size <= k * (k + 1) / 2);
            prop_assert!(2 * k - 1 <= p.size && p.size <= k * (k + 1) / 2);
            prop_assert_eq!(s.total_reps(), k * (k + 1) / 2);
            prop_assert_eq!(p.total_reps(), k * (k + 1) / 2);
            prop_assert!(s.rep_counts.values().all(|&c| c >= 1));
            prop_assert_eq!(is_sidon(&a), s.size == k * (k + 1) / 2);
            if k >= 3 {
                prop_assert!(max_pair(&a).maximum >= 2 * k);
            }
        }

        #[test]
        fn scaling_and_translation_invariance(v in small_set(), c in 1u64..20, t in 0u64..30) {
            let a = ints(&v);
            let scaled = ints(&v.iter().map(|x| x * c).collect::<Vec<_>>());
            let shifted = ints(&v.iter().map(|x| x + t).collect::<Vec<_>>());
            prop_assert_eq!(sumset(&a).size, sumset(&scaled).size);
            prop_assert_eq!(product_set(&a).size, product_set(&scaled).size);
            prop_assert_eq!(sumset(&a).size, sumset(&shifted).size);
            let n = normalize_multiplicative(&scaled);
            prop_assert_eq!(max_pair(&n), max_pair(&a));
        }

        #[test]
        fn rational_scaling_preserves_sizes(v in small_set(), p in 1i64..9, q in 1i64..9) {
            let a = ints(&v).to_rat_set();
            let c = ratio(p, q);
            let scaled = RatSet::new(a.elements().iter().map(|e| e * &c).collect()).unwrap();
            prop_assert_eq!(max_pair(&a), max_pair(&scaled));
        }
    }
}
