//! Exponent vectors: positive rationals as integer lattice points.
//!
//! Instead of factoring into primes, the numerators and denominators of the
//! values of interest are refined into a pairwise coprime basis. Every value
//! is a product of basis powers in exactly one way, so the multiplicative
//! group they generate maps injectively into `Z^j` and geometric
//! progressions become arithmetic progressions of lattice points.

use std::ops::Sub;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::num::rational_pow;

/// Pairwise coprime integers greater than one, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeBasis {
    bases: Vec<BigInt>,
}

impl CoprimeBasis {
    pub fn for_values<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> Self {
        let mut list: Vec<BigInt> = Vec::new();
        for q in values {
            for part in [q.numer().abs(), q.denom().clone()] {
                if part > BigInt::one() {
                    list.push(part);
                }
            }
        }
        refine(&mut list);
        CoprimeBasis { bases: list }
    }

    pub fn bases(&self) -> &[BigInt] {
        &self.bases
    }

    pub fn dimension(&self) -> usize {
        self.bases.len()
    }

    /// Exponents of `q` over this basis, or `None` when `q` is not generated
    /// by it (or is not positive).
    pub fn exponent_vector(&self, q: &BigRational) -> Option<ExponentVector> {
        if !q.is_positive() {
            return None;
        }
        let mut num = q.numer().clone();
        let mut den = q.denom().clone();
        let mut coords = vec![0i64; self.bases.len()];
        for (c, b) in coords.iter_mut().zip(&self.bases) {
            while (&num % b).is_zero() {
                num /= b;
                *c += 1;
            }
            while (&den % b).is_zero() {
                den /= b;
                *c -= 1;
            }
        }
        (num.is_one() && den.is_one()).then_some(ExponentVector(coords))
    }

    pub fn value(&self, v: &ExponentVector) -> BigRational {
        self.bases
            .iter()
            .zip(&v.0)
            .fold(BigRational::one(), |acc, (b, &e)| {
                acc * rational_pow(&BigRational::from_integer(b.clone()), e)
            })
    }
}

// Replace any two non-coprime entries a, b (g = gcd) by g, a/g, b/g until the
// list is pairwise coprime. The product strictly drops each round, so this
// terminates, and every original value stays a product of list entries.
fn refine(list: &mut Vec<BigInt>) {
    'outer: loop {
        list.sort();
        list.dedup();
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let g = list[i].gcd(&list[j]);
                if g.is_one() {
                    continue;
                }
                let a = &list[i] / &g;
                let b = &list[j] / &g;
                list.remove(j);
                list.remove(i);
                list.extend([g, a, b].into_iter().filter(|x| *x > BigInt::one()));
                continue 'outer;
            }
        }
        return;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    /// `Some(t)` when `self = t * dir`. `dir` must be nonzero.
    pub fn multiple_of(&self, dir: &ExponentVector) -> Option<i64> {
        let (idx, &d) = dir.0.iter().enumerate().find(|(_, &d)| d != 0)?;
        let c = self.0[idx];
        if c % d != 0 {
            return None;
        }
        let t = c / d;
        self.0
            .iter()
            .zip(&dir.0)
            .all(|(&x, &y)| x == t * y)
            .then_some(t)
    }

    pub fn scale_down(&self, g: i64) -> ExponentVector {
        ExponentVector(self.0.iter().map(|&c| c / g).collect())
    }

    pub fn negate(&self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|&c| -c).collect())
    }
}

impl Sub for &ExponentVector {
    type Output = ExponentVector;
    fn sub(self, rhs: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// `Some(t)` iff `z = r^t` for an integer `t`. Requires `r > 0`, `r != 1`.
pub fn power_exponent(z: &BigRational, r: &BigRational) -> Option<i64> {
    let basis = CoprimeBasis::for_values([z, r]);
    let vz = basis.exponent_vector(z)?;
    let vr = basis.exponent_vector(r)?;
    if vr.is_zero() {
        return None;
    }
    vz.multiple_of(&vr)
}

pub fn is_power_of(z: &BigRational, r: &BigRational) -> bool {
    power_exponent(z, r).is_some()
}
