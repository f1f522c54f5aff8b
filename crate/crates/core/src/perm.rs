//! Permutations of `{0, .., n-1}`.

use std::fmt;

/// A permutation stored in one-line notation: `self.0[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation from its images; `None` unless `images` is a
    /// bijection onto `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    /// The permutation whose cycles are consecutive blocks of the given
    /// lengths: `(0 1 .. l0-1)(l0 .. l0+l1-1)...`.
    pub fn from_cycle_lengths(lengths: &[usize]) -> Self {
        let n: usize = lengths.iter().sum();
        let mut images = vec![0; n];
        let mut start = 0;
        for &l in lengths {
            for i in 0..l {
                images[start + i] = start + (i + 1) % l;
            }
            start += l;
        }
        Perm(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// Cycle lengths in weakly decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut lengths = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i64 {
        let transpositions: usize = self.cycle_type().iter().map(|l| l - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Advances to the lexicographically next permutation; `false` at the end.
    pub fn next_lex(&mut self) -> bool {
        next_permutation(&mut self.0)
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Perm> {
        let mut cur = Some(Perm::identity(n));
        std::iter::from_fn(move || {
            let out = cur.take()?;
            let mut next = out.clone();
            if next.next_lex() {
                cur = Some(next);
            }
            Some(out)
        })
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

/// In-place lexicographic successor of a sequence.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `n!` as `u128`; panics past `34!`.
pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_and_count() {
        let all: Vec<Perm> = Perm::all(4).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[1].images(), &[0, 1, 3, 2]);
        assert_eq!(Perm::all(0).count(), 1);
    }

    #[test]
    fn signs_and_cycles() {
        let p = Perm::from_cycle_lengths(&[3, 1, 2]);
        assert_eq!(p.images(), &[1, 2, 0, 3, 5, 4]);
        assert_eq!(p.cycle_type(), vec![3, 2, 1]);
        assert_eq!(p.sign(), -1);
        let total: i64 = Perm::all(5).map(|p| p.sign()).sum();
        assert_eq!(total, 0);
    }

    #[test]
    fn compose_and_inverse() {
        let p = Perm::from_images(vec![2, 0, 3, 1]).unwrap();
        let q = Perm::from_images(vec![1, 3, 0, 2]).unwrap();
        assert_eq!(p.compose(&p.inverse()), Perm::identity(4));
        assert_eq!(p.compose(&q).apply(0), p.apply(q.apply(0)));
        assert!(Perm::from_images(vec![0, 0]).is_none());
    }
}
