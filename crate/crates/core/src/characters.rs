//! Irreducible characters of symmetric groups.
//!
//! Values come from the Murnaghan–Nakayama rule on beta-sets: removing a rim
//! hook of length `r` moves one bead from position `b` to the free position
//! `b - r`, with sign `(-1)` to the number of beads jumped over.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};

/// Memoizing evaluator for `χ_λ(μ)`.
#[derive(Default)]
pub struct CharacterTable {
    memo: HashMap<(Vec<usize>, Vec<usize>), i64>,
}

impl CharacterTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `χ_λ` at the class of cycle type `μ`.
    pub fn value(&mut self, lambda: &Partition, mu: &Partition) -> Result<i64> {
        if lambda.n() != mu.n() {
            return Err(Error::InvalidPartition(format!(
                "{lambda} and {mu} partition different integers"
            )));
        }
        let len = lambda.len();
        let beta: Vec<usize> = (0..len).map(|i| lambda.part(i) + len - 1 - i).collect();
        Ok(self.eval(beta, mu.parts()))
    }

    fn eval(&mut self, beta: Vec<usize>, mu: &[usize]) -> i64 {
        let Some((&r, rest)) = mu.split_first() else {
            return 1;
        };
        let key = (beta, mu.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let beta = &key.0;
        let mut total = 0;
        for (idx, &b) in beta.iter().enumerate() {
            if b < r || beta.contains(&(b - r)) {
                continue;
            }
            let target = b - r;
            let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
            let mut next = beta.clone();
            next[idx] = target;
            // Keep the set decreasing so equal diagrams share memo entries.
            next.sort_unstable_by(|a, b| b.cmp(a));
            let v = self.eval(next, rest);
            total += if jumped % 2 == 0 { v } else { -v };
        }
        self.memo.insert(key, total);
        total
    }
}

/// `χ_λ(μ)` with a throwaway memo.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    CharacterTable::new().value(lambda, mu)
}

/// Order of the centralizer of a permutation of cycle type `μ`.
pub fn centralizer_order(mu: &Partition) -> BigUint {
    let mut z = BigUint::one();
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &p in mu.parts() {
        *counts.entry(p).or_default() += 1;
        z *= p;
    }
    for (_, c) in counts {
        for k in 2..=c {
            z *= k;
        }
    }
    z
}

/// Number of permutations of cycle type `μ`.
pub fn class_size(mu: &Partition) -> BigUint {
    let mut f = BigUint::one();
    for k in 2..=mu.n() {
        f *= k;
    }
    f / centralizer_order(mu)
}

/// The full table: rows indexed by `partitions(n)` as characters, columns by
/// `partitions(n)` as classes.
pub fn character_table(n: usize) -> (Vec<Partition>, Vec<Vec<i64>>) {
    let parts = partitions(n);
    let mut t = CharacterTable::new();
    let rows = parts
        .iter()
        .map(|l| {
            parts
                .iter()
                .map(|m| t.value(l, m).expect("same n"))
                .collect()
        })
        .collect();
    (parts, rows)
}
