//! Integer partitions and hook-length degrees.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A partition stored as its positive parts in weakly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Validates weakly decreasing parts; trailing zeros are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition(parts))
    }

    /// Sorts arbitrary parts into a partition.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// The first four parts, zero-padded.
    pub fn padded4(&self) -> Result<[usize; 4]> {
        if self.len() > 4 {
            return Err(Error::InvalidPartition(format!(
                "{self} has more than 4 parts"
            )));
        }
        Ok([self.part(0), self.part(1), self.part(2), self.part(3)])
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0);
        Partition(
            (0..cols)
                .map(|j| self.0.iter().filter(|&&p| p > j).count())
                .collect(),
        )
    }

    /// Hook lengths row by row.
    pub fn hook_lengths(&self) -> Vec<Vec<usize>> {
        let conj = self.conjugate();
        self.0
            .iter()
            .enumerate()
            .map(|(i, &row)| {
                (0..row)
                    .map(|j| (row - j - 1) + (conj.part(j) - i - 1) + 1)
                    .collect()
            })
            .collect()
    }

    /// Degree of the irreducible character: `n!` over the product of hooks.
    pub fn hook_degree(&self) -> BigUint {
        let mut num = BigUint::one();
        for k in 2..=self.n() {
            num *= k;
        }
        let mut den = BigUint::one();
        for h in self.hook_lengths().into_iter().flatten() {
            den *= h;
        }
        num / den
    }

    /// Parses `"3,1,1"` or `"(3,1,1)"`.
    pub fn parse(s: &str) -> Result<Partition> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            return Ok(Partition(Vec::new()));
        }
        let parts = body
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All partitions of `n` in reverse lexicographic order, starting at `(n)`.
pub fn partitions(n: usize) -> Vec<Partition> {
    partitions_max_parts(n, usize::MAX)
}

/// Partitions of `n` with at most `k` parts, in reverse lexicographic order.
pub fn partitions_max_parts(n: usize, k: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(rest: usize, max: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if cur.len() == k {
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, k, cur, out);
            cur.pop();
        }
    }
    go(n, n, k, &mut cur, &mut out);
    out
}

/// Calls `f` on every partition of `n` without collecting them.
pub fn for_each_partition(n: usize, mut f: impl FnMut(&[usize])) {
    let mut cur = Vec::new();
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if rest == 0 {
            f(cur);
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, f);
            cur.pop();
        }
    }
    go(n, n, &mut cur, &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let p: Vec<usize> = (0..10).map(|n| partitions(n).len()).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        assert_eq!(partitions_max_parts(6, 2).len(), 4);
        let mut c = 0;
        for_each_partition(12, |_| c += 1);
        assert_eq!(c, 77);
    }

    #[test]
    fn degrees() {
        let deg = |v: Vec<usize>| Partition::new(v).unwrap().hook_degree();
        assert_eq!(deg(vec![5]), BigUint::from(1u32));
        assert_eq!(deg(vec![1, 1, 1]), BigUint::from(1u32));
        assert_eq!(deg(vec![3, 1, 1, 1]), BigUint::from(10u32));
        assert_eq!(deg(vec![2, 1]), BigUint::from(2u32));
    }

    #[test]
    fn conjugate_and_parse() {
        let p = Partition::parse("(4,2,1)").unwrap();
        assert_eq!(p.conjugate().parts(), &[3, 2, 1, 1]);
        assert_eq!(p.conjugate().conjugate(), p);
        assert!(Partition::parse("1,2").is_err());
        assert_eq!(p.to_string(), "(4,2,1)");
        assert_eq!(Partition::new(vec![2, 0]).unwrap().parts(), &[2]);
    }
}
