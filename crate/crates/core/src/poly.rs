//! Integer polynomials and their rational roots.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("zero polynomial")]
    Zero,
    #[error("constant polynomial has no roots to search")]
    Constant,
}

/// Coefficients `a_0, ..., a_d` with `a_d != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigInt>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self, PolyError> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(PolyError::Zero);
        }
        Ok(Polynomial { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, PolyError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Sum of `coef * r^exp` terms; repeated exponents accumulate.
    pub fn from_terms(terms: &[(i64, usize)]) -> Result<Self, PolyError> {
        let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for &(c, e) in terms {
            coeffs[e] += c;
        }
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Every rational root, sorted. A root `p/q` in lowest terms has `p` dividing
/// the lowest nonzero coefficient and `q` dividing the leading one; each
/// candidate is confirmed by exact evaluation.
pub fn rational_roots(p: &Polynomial) -> Result<Vec<BigRational>, PolyError> {
    if p.degree() == 0 {
        return Err(PolyError::Constant);
    }
    let mut roots = BTreeSet::new();
    let low = p.coeffs.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    if low > 0 {
        roots.insert(BigRational::zero());
    }
    let reduced = Polynomial {
        coeffs: p.coeffs[low..].to_vec(),
    };
    if reduced.degree() > 0 {
        let lead = &reduced.coeffs[reduced.degree()];
        let tail = &reduced.coeffs[0];
        let dens = divisors(lead);
        for num in divisors(tail) {
            for den in &dens {
                for sign in [1, -1] {
                    let cand = BigRational::new(&num * sign, den.clone());
                    if reduced.eval(&cand).is_zero() {
                        roots.insert(cand);
                    }
                }
            }
        }
    }
    Ok(roots.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn root_examples() {
        let p = Polynomial::from_i64(&[6, -5, 1]).unwrap();
        assert_eq!(rational_roots(&p).unwrap(), vec![int(2), int(3)]);
        let p = Polynomial::from_i64(&[-2, 0, 1]).unwrap();
        assert!(rational_roots(&p).unwrap().is_empty());
        let p = Polynomial::from_i64(&[-3, 2]).unwrap();
        assert_eq!(rational_roots(&p).unwrap(), vec![ratio(3, 2)]);
    }

    #[test]
    fn zero_and_constant_rejected() {
        assert_eq!(Polynomial::from_i64(&[0, 0]), Err(PolyError::Zero));
        let c = Polynomial::from_i64(&[5]).unwrap();
        assert_eq!(rational_roots(&c), Err(PolyError::Constant));
    }

    #[test]
    fn zero_root_and_multiplicity() {
        // r^2 (r - 1)^2
        let p = Polynomial::from_i64(&[0, 0, 1, -2, 1]).unwrap();
        assert_eq!(rational_roots(&p).unwrap(), vec![int(0), int(1)]);
    }

    #[test]
    fn terms_builder() {
        let p = Polynomial::from_terms(&[(1, 2), (-2, 1), (1, 0), (0, 5)]).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(&int(3)), int(4));
    }

    proptest! {
        #[test]
        fn constructed_roots_are_found(roots in prop::collection::vec((-6i64..7, 1i64..5), 1..4), lead in 1i64..4) {
            // Multiply out lead * prod (q x - p).
            let mut coeffs = vec![BigInt::from(lead)];
            for &(p, q) in &roots {
                let mut next = vec![BigInt::zero(); coeffs.len() + 1];
                for (i, c) in coeffs.iter().enumerate() {
                    next[i] -= c * p;
                    next[i + 1] += c * q;
                }
                coeffs = next;
            }
            let poly = Polynomial::new(coeffs).unwrap();
            let found = rational_roots(&poly).unwrap();
            for &(p, q) in &roots {
                prop_assert!(found.contains(&ratio(p, q)));
            }
            for r in &found {
                prop_assert!(poly.eval(r).is_zero());
            }
        }
    }
}
