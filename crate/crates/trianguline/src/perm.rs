//! Single-factor permutations in one-line notation.
//!
//! Everything here is 0-indexed internally; the JSON and display forms are
//! 1-based as is customary for one-line notation.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A permutation of `{0, .., n-1}` stored as its image vector: `p.apply(a) = p[a]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm(Vec<usize>);

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.one_line_string())
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;
    /// Builds from a 1-based image vector (the serialization form).
    fn try_from(v: Vec<usize>) -> Result<Self> {
        if v.iter().any(|&x| x == 0) {
            return Err(Error::NotAPermutation(format!("{v:?} (expected 1-based)")));
        }
        Perm::from_one_line(&v.iter().map(|&x| x - 1).collect::<Vec<_>>())
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Vec<usize> {
        p.0.iter().map(|&x| x + 1).collect()
    }
}

impl Perm {
    /// Identity on `n` letters.
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// The order-reversing permutation `i -> n-1-i`.
    pub fn longest(n: usize) -> Self {
        Perm((0..n).rev().collect())
    }

    /// Builds from a 0-based image vector, validating bijectivity.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n || seen[x] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm(images.to_vec()))
    }

    /// The transposition swapping `i` and `j` (0-based) on `n` letters.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, j);
        Perm(v)
    }

    /// The simple reflection `s_i` swapping `i` and `i+1` (0-based), on `n` letters.
    pub fn simple(n: usize, i: usize) -> Self {
        Perm::transposition(n, i, i + 1)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, a: usize) -> usize {
        self.0[a]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Group product: `(self * other)(a) = self(other(a))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.n(), other.n());
        Perm(other.0.iter().map(|&a| self.0[a]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.n()];
        for (a, &b) in self.0.iter().enumerate() {
            inv[b] = a;
        }
        Perm(inv)
    }

    /// Number of inversions; the Coxeter length in type A.
    pub fn inversions(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.0[i] > self.0[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Rank matrix entry `r(i, j) = #{a <= i : p(a) <= j}` for 1-based `i, j`.
    pub fn rank_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut r = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                r[i][j] = (0..=i).filter(|&a| self.0[a] <= j).count();
            }
        }
        r
    }

    /// Bruhat order via the rank-matrix criterion: `x <= y` iff `r_x >= r_y` entrywise.
    pub fn bruhat_leq(&self, other: &Perm) -> bool {
        debug_assert_eq!(self.n(), other.n());
        let rx = self.rank_matrix();
        let ry = other.rank_matrix();
        for i in 0..self.n() {
            for j in 0..self.n() {
                if rx[i][j] < ry[i][j] {
                    return false;
                }
            }
        }
        true
    }

    /// Right descent test: `l(p s_i) < l(p)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.0[i] > self.0[i + 1]
    }

    /// One reduced word (as 0-based simple-reflection indices), by sorting descents.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.inversions());
        let mut p = self.clone();
        loop {
            let Some(i) = (0..p.n() - 1).find(|&i| p.has_right_descent(i)) else {
                break;
            };
            // multiply on the right by s_i, shortening the element
            p.0.swap(i, i + 1);
            word.push(i);
        }
        word.reverse();
        word
    }

    /// Tests whether the pattern `pat` (a permutation of a smaller set) occurs in `self`.
    pub fn contains_pattern(&self, pat: &Perm) -> bool {
        let n = self.n();
        let k = pat.n();
        if k > n {
            return false;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            // check whether the chosen positions are order-isomorphic to pat
            let vals: Vec<usize> = idx.iter().map(|&i| self.0[i]).collect();
            let mut ok = true;
            'cmp: for a in 0..k {
                for b in a + 1..k {
                    if (vals[a] < vals[b]) != (pat.0[a] < pat.0[b]) {
                        ok = false;
                        break 'cmp;
                    }
                }
            }
            if ok {
                return true;
            }
            // next k-combination of {0..n}
            let mut i = k;
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                if idx[i] != i + n - k {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// All permutations of `{0..n-1}` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Perm> {
        use itertools::Itertools;
        (0..n).permutations(n).map(Perm).collect()
    }

    /// Number of cycles (fixed points count as cycles).
    pub fn cycle_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                a = self.0[a];
            }
        }
        cycles
    }

    /// 1-based one-line form: digits for n <= 9, comma-separated otherwise.
    pub fn one_line_string(&self) -> String {
        if self.n() <= 9 {
            self.0.iter().map(|&x| (x + 1).to_string()).collect()
        } else {
            self.0
                .iter()
                .map(|&x| (x + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Parses the format produced by [`Perm::one_line_string`], given `n`.
    pub fn parse_one_line(s: &str, n: usize) -> Result<Self> {
        let images: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|tok| tok.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::NotAPermutation(s.to_string()))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::NotAPermutation(s.to_string()))?
        };
        if images.len() != n || images.iter().any(|&x| x == 0) {
            return Err(Error::NotAPermutation(format!("{s} (n = {n})")));
        }
        Perm::from_one_line(&images.iter().map(|&x| x - 1).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let p = Perm::from_one_line(&[2, 0, 1]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Perm::identity(3));
        assert_eq!(p.inverse().compose(&p), Perm::identity(3));
        let q = Perm::simple(3, 0);
        // (p q)(a) = p(q(a))
        assert_eq!(p.compose(&q).apply(0), p.apply(1));
    }

    #[test]
    fn inversions_and_reduced_word() {
        let w0 = Perm::longest(4);
        assert_eq!(w0.inversions(), 6);
        let word = w0.reduced_word();
        assert_eq!(word.len(), 6);
        let mut p = Perm::identity(4);
        for &i in &word {
            p = p.compose(&Perm::simple(4, i));
        }
        assert_eq!(p, w0);
    }

    #[test]
    fn rank_matrix_bruhat() {
        let e = Perm::identity(3);
        let w0 = Perm::longest(3);
        assert!(e.bruhat_leq(&w0));
        assert!(!w0.bruhat_leq(&e));
        let s1 = Perm::simple(3, 0);
        let s2 = Perm::simple(3, 1);
        assert!(!s1.bruhat_leq(&s2));
        assert!(!s2.bruhat_leq(&s1));
    }

    #[test]
    fn pattern_containment() {
        let p = Perm::parse_one_line("35142", 5).unwrap();
        let pat = Perm::parse_one_line("3412", 4).unwrap();
        assert!(p.contains_pattern(&pat));
        let smooth = Perm::parse_one_line("1234", 4).unwrap();
        assert!(!smooth.contains_pattern(&pat));
    }

    #[test]
    fn cycle_count_examples() {
        assert_eq!(Perm::identity(3).cycle_count(), 3);
        assert_eq!(Perm::longest(3).cycle_count(), 2);
        assert_eq!(Perm::longest(4).cycle_count(), 2);
    }
}
