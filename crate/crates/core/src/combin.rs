//! Binomials and k-subset enumeration.

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Lexicographic k-subsets of `0..n`.
pub struct Combinations {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            cur: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - k + i {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Rank of a strictly increasing subset of `0..` in colexicographic order.
pub fn colex_rank(subset: &[usize]) -> u64 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c as u64, i as u64 + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for subsets of size `k`.
pub fn colex_unrank(mut rank: u64, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for i in (1..=k).rev() {
        let mut c = i - 1;
        while binomial(c as u64 + 1, i as u64) <= rank {
            c += 1;
        }
        rank -= binomial(c as u64, i as u64);
        out[i - 1] = c;
    }
    out
}
