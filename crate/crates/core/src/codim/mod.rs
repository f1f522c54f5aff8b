//! Codimensions `c_n(A)` as ranks of evaluation matrices.
//!
//! The multilinear component `P_n` maps onto functions `A^n → A` by
//! evaluation; `c_n(A)` is the dimension of the image. Rows of the evaluation
//! matrix are monomials, columns are pairs (basis tuple, output coordinate).
//! The rank is computed modulo several 31-bit primes; each such rank is a
//! lower bound for the rank over the rationals and the maximum is reported.

mod matrix;
pub(crate) mod rank;
mod sketch;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::monomial::{
    catalan, enumerate_bracketings, enumerate_monomials, Monomial, MultilinearPoly,
};
use crate::perm::{factorial, Perm};

pub(crate) use matrix::Layout;
pub use matrix::{build_eval_matrix, EvalMatrix};
use matrix::{fill_row, layout, TableMaker};
use rank::ModEchelon;

/// Size limits for evaluation matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_rows: u128,
    pub max_cols: u128,
}

impl Default for Budget {
    /// Admits degree 7 for four-dimensional algebras and refuses degree 8.
    fn default() -> Self {
        Budget {
            max_rows: 1_000_000,
            max_cols: 1 << 20,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_rows: u128::MAX,
            max_cols: u128::MAX,
        }
    }

    pub fn rows(n: usize) -> u128 {
        factorial(n) * catalan(n.saturating_sub(1))
    }

    pub fn cols(d: usize, n: usize) -> u128 {
        (d as u128)
            .saturating_pow(n as u32)
            .saturating_mul(d as u128)
    }

    pub fn check(&self, d: usize, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Precondition("degree must be positive".into()));
        }
        if n > 30 {
            return Err(Error::BudgetExceeded {
                n,
                rows: u128::MAX,
                cols: Budget::cols(d, n),
                max_rows: self.max_rows,
                max_cols: self.max_cols,
            });
        }
        let rows = Budget::rows(n);
        let cols = Budget::cols(d, n);
        if rows > self.max_rows || cols > self.max_cols {
            return Err(Error::BudgetExceeded {
                n,
                rows,
                cols,
                max_rows: self.max_rows,
                max_cols: self.max_cols,
            });
        }
        Ok(())
    }
}

/// When to compress columns by a random sparse sketch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SketchMode {
    /// Sketch when the full column count exceeds `2^14`.
    Auto,
    Off,
    Force,
}

/// Tuning knobs for [`codim`].
#[derive(Clone, Debug)]
pub struct CodimOptions {
    pub budget: Budget,
    pub sketch: SketchMode,
    pub seed: u64,
    /// Rows reduced in parallel against one snapshot of the basis.
    pub batch: usize,
}

impl Default for CodimOptions {
    fn default() -> Self {
        CodimOptions {
            budget: Budget::default(),
            sketch: SketchMode::Auto,
            seed: 0x5eed_c0d1,
            batch: 1024,
        }
    }
}

/// Rank of the evaluation matrix modulo one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRank {
    pub prime: u64,
    pub rank: usize,
    pub alive_columns: usize,
    /// Sketch width used, if any.
    pub sketch_width: Option<usize>,
    pub note: String,
}

/// Codimension with per-prime ranks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodimResult {
    pub n: usize,
    pub rank_per_prime: BTreeMap<u64, usize>,
    pub c_n: usize,
    pub method_notes: String,
    pub rows: u128,
    pub cols: u128,
    pub seed: u64,
    pub seconds: f64,
}

impl CodimResult {
    pub fn consensus(&self) -> bool {
        let mut it = self.rank_per_prime.values();
        let first = it.next();
        it.all(|r| Some(r) == first)
    }
}

fn validate_primes(primes: &[u64], n: usize) -> Result<()> {
    if primes.len() < 2 {
        return Err(Error::TooFewPrimes(primes.len()));
    }
    for &p in primes {
        PrimeField::new(p)?;
        if p as usize <= n {
            return Err(Error::PrimeTooSmall { prime: p, n });
        }
    }
    Ok(())
}

/// `c_n(A)` by independent ranks modulo each prime.
pub fn codim(
    spec: &AlgebraSpec,
    n: usize,
    primes: &[u64],
    opts: &CodimOptions,
) -> Result<CodimResult> {
    opts.budget.check(spec.dim(), n)?;
    validate_primes(primes, n)?;
    let start = Instant::now();
    let runs: Vec<PrimeRank> = primes
        .par_iter()
        .map(|&p| rank_mod_p(spec, n, p, opts))
        .collect::<Result<_>>()?;
    let rank_per_prime: BTreeMap<u64, usize> = runs.iter().map(|r| (r.prime, r.rank)).collect();
    let c_n = rank_per_prime.values().copied().max().unwrap_or(0);
    let mut notes: Vec<String> = Vec::new();
    let agree = rank_per_prime.values().all(|&r| r == c_n);
    notes.push(if agree {
        format!("{}-prime consensus", primes.len())
    } else {
        format!("rank disagreement across primes {rank_per_prime:?}; reporting the maximum")
    });
    notes.extend(
        runs.iter()
            .filter(|r| !r.note.is_empty())
            .map(|r| format!("p={}: {}", r.prime, r.note)),
    );
    Ok(CodimResult {
        n,
        rank_per_prime,
        c_n,
        method_notes: notes.join("; "),
        rows: Budget::rows(n),
        cols: Budget::cols(spec.dim(), n),
        seed: opts.seed,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Streams the rows of the evaluation matrix through `sink` in monomial
/// order, in batches. `sink` returns `false` to stop early.
fn stream_rows(
    spec: &AlgebraSpec,
    n: usize,
    field: PrimeField,
    layout_out: &mut Option<Layout>,
    batch: usize,
    mut sink: impl FnMut(&Layout, Vec<Vec<u64>>) -> bool,
) -> Result<()> {
    let brackets = enumerate_bracketings(n)?;
    let mut maker = TableMaker::new(spec, field)?;
    let lay = layout(&mut maker, &brackets, n);
    let perms: Vec<Perm> = Perm::all(n).collect();
    let batch = batch.max(1);
    'outer: for b in &brackets {
        let table = maker.table(b);
        maker.forget_from(n);
        for chunk in perms.chunks(batch) {
            let rows: Vec<Vec<u64>> = chunk
                .par_iter()
                .map(|sigma| {
                    let mut row = vec![0u64; lay.len()];
                    fill_row(&lay, &table, sigma.images(), &mut row);
                    row
                })
                .collect();
            if !sink(&lay, rows) {
                break 'outer;
            }
        }
    }
    *layout_out = Some(lay);
    Ok(())
}

fn rank_mod_p(spec: &AlgebraSpec, n: usize, p: u64, opts: &CodimOptions) -> Result<PrimeRank> {
    let field = PrimeField::new(p)?;
    let full_cols = Budget::cols(spec.dim(), n);
    let use_sketch = match opts.sketch {
        SketchMode::Off => false,
        SketchMode::Force => true,
        SketchMode::Auto => full_cols > 1 << 14,
    };
    if use_sketch {
        return sketch::sketched_rank(spec, n, field, opts);
    }
    let mut lay = None;
    let mut ech: Option<ModEchelon> = None;
    stream_rows(spec, n, field, &mut lay, opts.batch, |lay, rows| {
        let e = ech.get_or_insert_with(|| ModEchelon::new(p, lay.len()));
        if e.is_full() {
            return false;
        }
        e.insert_batch(rows);
        !e.is_full()
    })?;
    let alive = lay.map_or(0, |l| l.len());
    Ok(PrimeRank {
        prime: p,
        rank: ech.map_or(0, |e| e.rank()),
        alive_columns: alive,
        sketch_width: None,
        note: String::new(),
    })
}

/// Reduced row basis of the evaluation image modulo `p`.
pub(crate) struct ImageBasis {
    pub layout: Layout,
    pub pivots: Vec<usize>,
    pub rows: Vec<Vec<u64>>,
}

pub(crate) fn image_basis(
    spec: &AlgebraSpec,
    n: usize,
    p: u64,
    budget: &Budget,
) -> Result<ImageBasis> {
    budget.check(spec.dim(), n)?;
    let field = PrimeField::new(p)?;
    if p as usize <= n {
        return Err(Error::PrimeTooSmall { prime: p, n });
    }
    let mut lay = None;
    let mut ech: Option<ModEchelon> = None;
    stream_rows(spec, n, field, &mut lay, 1024, |lay, rows| {
        let e = ech.get_or_insert_with(|| ModEchelon::new(p, lay.len()));
        e.insert_batch(rows);
        !e.is_full()
    })?;
    let layout = lay.expect("layout is built before streaming");
    let (pivots, rows) = ech
        .unwrap_or_else(|| ModEchelon::new(p, layout.len()))
        .into_rref();
    Ok(ImageBasis {
        layout,
        pivots,
        rows,
    })
}

/// Basis of the multilinear identities of degree `n` modulo `p`.
#[derive(Clone, Debug)]
pub struct IdentityBasis {
    pub n: usize,
    pub prime: u64,
    pub monomials: Vec<Monomial>,
    /// Coefficient vectors indexed like `monomials`, leading entry one.
    pub vectors: Vec<Vec<u64>>,
}

impl IdentityBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Polynomials with coefficients lifted to `(-p/2, p/2]`.
    pub fn polys(&self) -> Vec<MultilinearPoly> {
        let f = PrimeField::new(self.prime).expect("validated prime");
        self.vectors
            .iter()
            .map(|v| {
                let mut poly = MultilinearPoly::zero();
                for (m, &c) in self.monomials.iter().zip(v) {
                    if c != 0 {
                        poly.add_term(
                            m.clone(),
                            num_rational::BigRational::from_integer(f.lift(c).into()),
                        );
                    }
                }
                poly
            })
            .collect()
    }
}

/// Left nullspace of the evaluation matrix: all coefficient vectors whose
/// polynomial vanishes on `A`.
pub fn identities_nullspace(
    spec: &AlgebraSpec,
    n: usize,
    p: u64,
    budget: &Budget,
) -> Result<IdentityBasis> {
    budget.check(spec.dim(), n)?;
    let field = PrimeField::new(p)?;
    if p as usize <= n {
        return Err(Error::PrimeTooSmall { prime: p, n });
    }
    let monomials = enumerate_monomials(n)?;
    let r = monomials.len();
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(r);
    let mut lay = None;
    stream_rows(spec, n, field, &mut lay, 1024, |_, batch| {
        rows.extend(batch);
        true
    })?;
    let l = lay.map_or(0, |l| l.len());
    // Echelon form of the transpose: its nullspace is the left nullspace.
    let mut ech = ModEchelon::new(p, r);
    for c in 0..l {
        ech.insert(rows.iter().map(|row| row[c]).collect());
    }
    let (pivots, rref) = ech.into_rref();
    let mut is_pivot = vec![false; r];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let vectors = (0..r)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![0u64; r];
            x[f] = 1;
            for (&c, row) in pivots.iter().zip(&rref) {
                x[c] = field.neg(&row[f]);
            }
            let lead = *x.iter().find(|&&v| v != 0).expect("x[f] = 1");
            let inv = field.inv(&lead);
            x.iter().map(|v| field.mul(v, &inv)).collect()
        })
        .collect();
    Ok(IdentityBasis {
        n,
        prime: p,
        monomials,
        vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_w, E_0, E_1, E_M1};
    use crate::field::DEFAULT_PRIMES;

    fn ground() -> AlgebraSpec {
        AlgebraSpec::ground_field()
    }

    #[test]
    fn small_matrices() {
        let w = build_w();
        let m1 = build_eval_matrix(&w, 1, DEFAULT_PRIMES[0], &Budget::default()).unwrap();
        assert_eq!((m1.rows.len(), m1.cols, m1.nnz()), (1, 16, 4));
        let m2 = build_eval_matrix(&w, 2, DEFAULT_PRIMES[0], &Budget::default()).unwrap();
        assert_eq!((m2.rows.len(), m2.cols), (2, 64));
        assert_eq!(m2.monomials[0].to_string(), "x1x2");
        let tau = E_M1 * 4 + E_1;
        let block: Vec<_> = m2.rows[0].iter().filter(|(c, _)| c / 4 == tau).collect();
        assert_eq!(block, vec![&(tau * 4 + E_0, 1)]);
        let g = build_eval_matrix(&ground(), 3, DEFAULT_PRIMES[0], &Budget::default()).unwrap();
        assert_eq!((g.rows.len(), g.cols), (12, 1));
        assert!(g.rows.iter().all(|r| r == &vec![(0, 1)]));
    }

    #[test]
    fn codim_small_values() {
        let opts = CodimOptions::default();
        let w = build_w();
        assert_eq!(codim(&w, 1, &DEFAULT_PRIMES, &opts).unwrap().c_n, 1);
        assert_eq!(codim(&w, 2, &DEFAULT_PRIMES, &opts).unwrap().c_n, 2);
        for n in 1..6 {
            assert_eq!(codim(&ground(), n, &DEFAULT_PRIMES, &opts).unwrap().c_n, 1);
        }
        assert_eq!(
            codim(&AlgebraSpec::zero_algebra(2), 3, &DEFAULT_PRIMES, &opts)
                .unwrap()
                .c_n,
            0
        );
    }

    #[test]
    fn refusals() {
        let w = build_w();
        let opts = CodimOptions::default();
        let err = codim(&w, 8, &DEFAULT_PRIMES, &opts).unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                rows: 17_297_280,
                cols: 262_144,
                ..
            }
        ));
        assert!(matches!(
            codim(&w, 2, &DEFAULT_PRIMES[..1], &opts),
            Err(Error::TooFewPrimes(1))
        ));
        assert!(codim(&w, 2, &[2_147_483_647, 15], &opts).is_err());
        assert!(codim(&w, 5, &[2_147_483_647, 5], &opts).is_err());
    }

    #[test]
    fn nullspaces() {
        let p = DEFAULT_PRIMES[0];
        let b = Budget::default();
        let g = identities_nullspace(&ground(), 2, p, &b).unwrap();
        assert_eq!(
            g.polys().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            vec!["x1x2 - x2x1"]
        );
        assert_eq!(identities_nullspace(&build_w(), 1, p, &b).unwrap().dim(), 0);
        assert_eq!(
            identities_nullspace(&AlgebraSpec::zero_algebra(2), 2, p, &b)
                .unwrap()
                .dim(),
            2
        );
        let w3 = identities_nullspace(&build_w(), 3, p, &b).unwrap();
        let c3 = codim(&build_w(), 3, &DEFAULT_PRIMES, &CodimOptions::default())
            .unwrap()
            .c_n;
        assert_eq!(w3.dim() + c3, 12);
        let wr = build_w().rational();
        for poly in w3.polys() {
            for a in 0..4 {
                for bb in 0..4 {
                    for c in 0..4 {
                        let vals = [wr.basis(a), wr.basis(bb), wr.basis(c)];
                        assert!(wr.is_zero(&poly.evaluate(&wr, &vals).unwrap()), "{poly}");
                    }
                }
            }
        }
    }

    #[test]
    fn sketch_agrees_with_exact() {
        let w = build_w();
        let exact = codim(&w, 4, &DEFAULT_PRIMES, &CodimOptions::default()).unwrap();
        let forced = CodimOptions {
            sketch: SketchMode::Force,
            ..CodimOptions::default()
        };
        let sk = codim(&w, 4, &DEFAULT_PRIMES, &forced).unwrap();
        assert_eq!(exact.c_n, sk.c_n, "{}", sk.method_notes);
    }
}
