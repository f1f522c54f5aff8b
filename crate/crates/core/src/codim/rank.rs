//! Incremental row echelon form over `Z/pZ` for 31-bit primes.
//!
//! Rows are reduced by a single left-to-right scan that stops at the first
//! nonzero entry without a pivot, which then becomes the new pivot. Stored
//! rows keep only the entries from their pivot on.

use rayon::prelude::*;

/// Barrett reduction for a fixed modulus below `2^31`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Modp {
    p: u64,
    m: u128,
}

impl Modp {
    pub fn new(p: u64) -> Self {
        Modp {
            p,
            m: u128::from(u64::MAX) / u128::from(p),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `x mod p` for any `x < 2^64`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((u128::from(x) * self.m) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

/// A growing echelon basis of row vectors of fixed length.
#[derive(Clone, Debug)]
pub(crate) struct ModEchelon {
    md: Modp,
    len: usize,
    /// `(pivot, tail)` with `tail[0] == 1` at the pivot column.
    rows: Vec<(usize, Vec<u64>)>,
    pivot_row: Vec<u32>,
}

impl ModEchelon {
    pub fn new(p: u64, len: usize) -> Self {
        ModEchelon {
            md: Modp::new(p),
            len,
            rows: Vec::new(),
            pivot_row: vec![u32::MAX; len],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    /// Reduces `v` in place until its first entry without a pivot; returns
    /// that column, or `None` if `v` lies in the span.
    pub fn reduce(&self, v: &mut [u64]) -> Option<usize> {
        let p = self.md.p();
        for c in 0..self.len {
            if v[c] == 0 {
                continue;
            }
            let r = self.pivot_row[c];
            if r == u32::MAX {
                return Some(c);
            }
            let coef = p - v[c];
            let tail = &self.rows[r as usize].1;
            for (x, &y) in v[c..].iter_mut().zip(tail) {
                if y != 0 {
                    *x = self.md.reduce(*x + coef * y);
                }
            }
        }
        None
    }

    /// Inserts a vector already reduced by [`reduce`](Self::reduce) with
    /// leading column `c`.
    pub fn insert_reduced(&mut self, v: &[u64], c: usize) {
        debug_assert_eq!(self.pivot_row[c], u32::MAX);
        let inv = self.md.inv(v[c]);
        let tail: Vec<u64> = v[c..].iter().map(|&x| self.md.mul(x, inv)).collect();
        self.pivot_row[c] = self.rows.len() as u32;
        self.rows.push((c, tail));
    }

    /// Reduces and inserts; `true` when the rank grew.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        match self.reduce(&mut v) {
            Some(c) => {
                self.insert_reduced(&v, c);
                true
            }
            None => false,
        }
    }

    /// Reduces a batch against the current basis in parallel, then inserts
    /// the survivors one by one. Returns the number of new rows.
    pub fn insert_batch(&mut self, batch: Vec<Vec<u64>>) -> usize {
        let snapshot = &*self;
        let reduced: Vec<(Vec<u64>, usize)> = batch
            .into_par_iter()
            .filter_map(|mut v| snapshot.reduce(&mut v).map(|c| (v, c)))
            .collect();
        let mut added = 0;
        for (mut v, _) in reduced {
            if let Some(c) = self.reduce(&mut v) {
                self.insert_reduced(&v, c);
                added += 1;
            }
            if self.is_full() {
                break;
            }
        }
        added
    }

    /// Fully reduced basis: pivots in increasing order, each row zero at every
    /// other pivot column. Rows are returned at full length.
    pub fn into_rref(self) -> (Vec<usize>, Vec<Vec<u64>>) {
        let md = self.md;
        let p = md.p();
        let len = self.len;
        let mut rows: Vec<(usize, Vec<u64>)> = self
            .rows
            .into_iter()
            .map(|(c, tail)| {
                let mut full = vec![0u64; len];
                full[c..].copy_from_slice(&tail);
                (c, full)
            })
            .collect();
        rows.sort_by_key(|(c, _)| *c);
        for i in (0..rows.len()).rev() {
            let (pc, pivot_row) = {
                let (c, r) = &rows[i];
                (*c, r.clone())
            };
            rows[..i].par_iter_mut().for_each(|(_, row)| {
                let x = row[pc];
                if x == 0 {
                    return;
                }
                let coef = p - x;
                for (a, &b) in row[pc..].iter_mut().zip(&pivot_row[pc..]) {
                    if b != 0 {
                        *a = md.reduce(*a + coef * b);
                    }
                }
            });
        }
        rows.into_iter().unzip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, PrimeField};
    use crate::linalg::EchelonBasis;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn barrett_matches_remainder() {
        let md = Modp::new(2_147_483_629);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let x: u64 = rng.gen();
            assert_eq!(md.reduce(x), x % md.p());
        }
        assert_eq!(md.reduce(u64::MAX), u64::MAX % md.p());
        assert_eq!(md.mul(md.inv(12345), 12345), 1);
    }

    #[test]
    fn rank_matches_generic_elimination() {
        let p = 2_147_483_647;
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..20 {
            let len = 12;
            let gens: Vec<Vec<u64>> = (0..5)
                .map(|_| (0..len).map(|_| rng.gen_range(0..p)).collect())
                .collect();
            let rows: Vec<Vec<u64>> = (0..15)
                .map(|_| {
                    let mut v = vec![0u64; len];
                    for g in gens.iter().take(1 + trial % 5) {
                        let c = rng.gen_range(0..p);
                        for (x, y) in v.iter_mut().zip(g) {
                            *x = f.add(x, &f.mul(&c, y));
                        }
                    }
                    v
                })
                .collect();
            let mut fast = ModEchelon::new(p, len);
            let mut slow = EchelonBasis::new(f, len);
            for r in &rows {
                slow.insert(r.clone());
            }
            fast.insert_batch(rows.clone());
            assert_eq!(fast.rank(), slow.rank());
            let (piv, rref) = fast.into_rref();
            assert_eq!(piv, {
                let mut s = slow.pivots().to_vec();
                s.sort();
                s
            });
            for r in &rref {
                assert!(slow.contains(r));
            }
        }
    }
}
