//! Evaluation tables and rows of the evaluation matrix.
//!
//! For a bracketing `b` with `m` leaves the table `B_b` holds, for every
//! tuple `ρ` of basis indices, the coordinates of `b` evaluated at `ρ`.
//! Tuples are numbered in base `d` with the first leaf most significant, and
//! entry `(ρ, k)` sits at `ρ·d + k`. The row of monomial `(b, lab)` at column
//! `(τ, k)` is `B_b[ρ][k]` with `ρ_pos = τ_{lab[pos]}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraSpec};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::monomial::{enumerate_bracketings, monomial_count, Bracketing, Monomial};
use crate::perm::Perm;

use super::Budget;

/// Builder of bracketing tables over one prime field.
pub(crate) struct TableMaker {
    alg: Algebra<PrimeField>,
    d: usize,
    memo: BTreeMap<Bracketing, Arc<Vec<u64>>>,
}

impl TableMaker {
    pub fn new(spec: &AlgebraSpec, field: PrimeField) -> Result<Self> {
        Ok(TableMaker {
            alg: spec.over(field)?,
            d: spec.dim(),
            memo: BTreeMap::new(),
        })
    }

    /// The table of `b`; tables of proper subtrees are memoized.
    pub fn table(&mut self, b: &Bracketing) -> Arc<Vec<u64>> {
        if let Some(t) = self.memo.get(b) {
            return t.clone();
        }
        let d = self.d;
        let t = match b {
            Bracketing::Leaf => {
                let mut t = vec![0; d * d];
                for i in 0..d {
                    t[i * d + i] = 1;
                }
                t
            }
            Bracketing::Node(l, r) => {
                let tl = self.table(l);
                let tr = self.table(r);
                let nr = tr.len() / d;
                let nl = tl.len() / d;
                let f = *self.alg.field();
                let mut t = vec![0u64; nl * nr * d];
                for a in 0..nl {
                    let va = &tl[a * d..(a + 1) * d];
                    if va.iter().all(|&x| x == 0) {
                        continue;
                    }
                    for c in 0..nr {
                        let vc = &tr[c * d..(c + 1) * d];
                        let out = &mut t[(a * nr + c) * d..(a * nr + c + 1) * d];
                        for (i, x) in va.iter().enumerate().filter(|(_, x)| **x != 0) {
                            for (j, y) in vc.iter().enumerate().filter(|(_, y)| **y != 0) {
                                let xy = f.mul(x, y);
                                for (k, g) in self.alg.basis_product(i, j) {
                                    out[*k] = f.add(&out[*k], &f.mul(&xy, g));
                                }
                            }
                        }
                    }
                }
                t
            }
        };
        let t = Arc::new(t);
        self.memo.insert(b.clone(), t.clone());
        t
    }

    /// Drops memoized tables with `leaves` leaves or more.
    pub fn forget_from(&mut self, leaves: usize) {
        self.memo.retain(|b, _| b.leaves() < leaves);
    }
}

/// Column layout shared by all primes: which `(τ, k)` can be nonzero.
pub(crate) struct Layout {
    pub n: usize,
    pub d: usize,
    /// Digits of each tuple `τ`, most significant first.
    pub digits: Vec<Vec<u8>>,
    /// Alive columns as `(τ, k)`, in increasing `τ·d + k` order.
    pub alive: Vec<(u32, u8)>,
    /// Position of column `τ·d + k` among alive columns, or `u32::MAX`.
    pub index: Vec<u32>,
}

impl Layout {
    pub fn len(&self) -> usize {
        self.alive.len()
    }

    /// Column index of `(τ∘σ, k)` for alive column `c`, where
    /// `(τ∘σ)_j = τ_{σ(j)}`.
    pub fn act_column(&self, c: usize, sigma: &Perm) -> usize {
        let (tau, k) = self.alive[c];
        let digits = &self.digits[tau as usize];
        let mut idx = 0usize;
        for j in 0..self.n {
            idx = idx * self.d + digits[sigma.apply(j)] as usize;
        }
        self.index[idx * self.d + k as usize] as usize
    }
}

fn tuple_digits(n: usize, d: usize) -> Vec<Vec<u8>> {
    let count = d.pow(n as u32);
    (0..count)
        .map(|mut t| {
            let mut v = vec![0u8; n];
            for pos in (0..n).rev() {
                v[pos] = (t % d) as u8;
                t /= d;
            }
            v
        })
        .collect()
}

/// A sorted content key: counts of each basis index in the tuple.
fn content_key(digits: &[u8], d: usize) -> Vec<u8> {
    let mut c = vec![0u8; d];
    for &x in digits {
        c[x as usize] += 1;
    }
    c
}

/// Finds the alive columns. Column `(τ, k)` is alive when some bracketing
/// evaluated at some rearrangement of `τ` has a nonzero `k` coordinate; dead
/// columns vanish in every row and are dropped.
pub(crate) fn layout(maker: &mut TableMaker, brackets: &[Arc<Bracketing>], n: usize) -> Layout {
    let d = maker.d;
    let digits = tuple_digits(n, d);
    let mut content_ids: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    let ids: Vec<usize> = digits
        .iter()
        .map(|t| {
            let key = content_key(t, d);
            let next = content_ids.len();
            *content_ids.entry(key).or_insert(next)
        })
        .collect();
    let mut live = vec![false; content_ids.len() * d];
    for b in brackets {
        let t = maker.table(b);
        for (rho, id) in ids.iter().enumerate() {
            for k in 0..d {
                if t[rho * d + k] != 0 {
                    live[id * d + k] = true;
                }
            }
        }
    }
    maker.forget_from(n);
    let mut alive = Vec::new();
    let mut index = vec![u32::MAX; digits.len() * d];
    for (tau, id) in ids.iter().enumerate() {
        for k in 0..d {
            if live[id * d + k] {
                index[tau * d + k] = alive.len() as u32;
                alive.push((tau as u32, k as u8));
            }
        }
    }
    Layout {
        n,
        d,
        digits,
        alive,
        index,
    }
}

/// Fills `out` with the row of monomial `(b, lab)` restricted to alive
/// columns, given the table of `b`.
pub(crate) fn fill_row(layout: &Layout, table: &[u64], labeling: &[usize], out: &mut [u64]) {
    let n = layout.n;
    let d = layout.d;
    // Weight of variable j in the index of ρ: d^(n-1-pos(j)).
    let mut weight = vec![0usize; n];
    for (pos, &var) in labeling.iter().enumerate() {
        weight[var] = d.pow((n - 1 - pos) as u32);
    }
    for (slot, &(tau, k)) in out.iter_mut().zip(&layout.alive) {
        let digits = &layout.digits[tau as usize];
        let rho: usize = digits
            .iter()
            .zip(&weight)
            .map(|(&x, w)| x as usize * w)
            .sum();
        *slot = table[rho * d + k as usize];
    }
}

/// The evaluation matrix with full column indexing `τ·d + k`.
#[derive(Clone, Debug)]
pub struct EvalMatrix {
    pub n: usize,
    pub d: usize,
    pub prime: u64,
    pub cols: usize,
    pub monomials: Vec<Monomial>,
    /// Sparse rows `(column, residue)`, one per monomial.
    pub rows: Vec<Vec<(usize, u64)>>,
}

impl EvalMatrix {
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

/// Builds the full evaluation matrix; intended for small degrees.
pub fn build_eval_matrix(
    spec: &AlgebraSpec,
    n: usize,
    p: u64,
    budget: &Budget,
) -> Result<EvalMatrix> {
    budget.check(spec.dim(), n)?;
    let field = PrimeField::new(p)?;
    if p as usize <= n {
        return Err(Error::PrimeTooSmall { prime: p, n });
    }
    let brackets = enumerate_bracketings(n)?;
    let mut maker = TableMaker::new(spec, field)?;
    let d = spec.dim();
    let digits = tuple_digits(n, d);
    let mut monomials = Vec::with_capacity(monomial_count(n) as usize);
    let mut rows = Vec::with_capacity(monomials.capacity());
    for b in &brackets {
        let table = maker.table(b);
        for sigma in Perm::all(n) {
            let lab = sigma.images();
            let mut weight = vec![0usize; n];
            for (pos, &var) in lab.iter().enumerate() {
                weight[var] = d.pow((n - 1 - pos) as u32);
            }
            let mut row = Vec::new();
            for (tau, dg) in digits.iter().enumerate() {
                let rho: usize = dg.iter().zip(&weight).map(|(&x, w)| x as usize * w).sum();
                for k in 0..d {
                    let v = table[rho * d + k];
                    if v != 0 {
                        row.push((tau * d + k, v));
                    }
                }
            }
            rows.push(row);
            monomials.push(Monomial::new(b.clone(), lab.to_vec())?);
        }
    }
    Ok(EvalMatrix {
        n,
        d,
        prime: p,
        cols: digits.len() * d,
        monomials,
        rows,
    })
}
