//! Rank through a random sparse column sketch.
//!
//! Each alive column is sent to three random sketch columns with random
//! nonzero coefficients. The sketched rank never exceeds the true rank and
//! equals it with high probability once the width exceeds the rank; the width
//! doubles while the rank comes within 64 of it, and the final width is
//! rerun with a second seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::AlgebraSpec;
use crate::error::Result;
use crate::field::PrimeField;

use super::rank::{ModEchelon, Modp};
use super::{stream_rows, CodimOptions, PrimeRank};

const FAN_OUT: usize = 3;
const START_WIDTH: usize = 256;
const SLACK: usize = 64;

struct Sketch {
    width: usize,
    targets: Vec<[(u32, u64); FAN_OUT]>,
}

impl Sketch {
    fn new(cols: usize, width: usize, p: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let targets = (0..cols)
            .map(|_| std::array::from_fn(|_| (rng.gen_range(0..width) as u32, rng.gen_range(1..p))))
            .collect();
        Sketch { width, targets }
    }

    fn apply(&self, md: &Modp, row: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.width];
        for (&x, t) in row.iter().zip(&self.targets) {
            if x == 0 {
                continue;
            }
            for &(col, coef) in t {
                let o = &mut out[col as usize];
                *o = md.reduce(*o + x * coef);
            }
        }
        out
    }
}

fn run(
    spec: &AlgebraSpec,
    n: usize,
    field: PrimeField,
    width: usize,
    seed: u64,
    batch: usize,
) -> Result<(usize, usize)> {
    let p = field.modulus();
    let md = Modp::new(p);
    let mut lay = None;
    let mut state: Option<(Sketch, ModEchelon)> = None;
    stream_rows(spec, n, field, &mut lay, batch, |lay, rows| {
        let (sk, ech) = state.get_or_insert_with(|| {
            let w = width.min(lay.len()).max(1);
            (Sketch::new(lay.len(), w, p, seed), ModEchelon::new(p, w))
        });
        let sketched: Vec<Vec<u64>> = rows.par_iter().map(|r| sk.apply(&md, r)).collect();
        ech.insert_batch(sketched);
        !ech.is_full()
    })?;
    let alive = lay.map_or(0, |l| l.len());
    Ok((state.map_or(0, |(_, e)| e.rank()), alive))
}

pub(super) fn sketched_rank(
    spec: &AlgebraSpec,
    n: usize,
    field: PrimeField,
    opts: &CodimOptions,
) -> Result<PrimeRank> {
    let mut width = START_WIDTH;
    let seed2 = opts.seed ^ 0x9e37_79b9_7f4a_7c15;
    loop {
        let (rank, alive) = run(spec, n, field, width, opts.seed, opts.batch)?;
        let effective = width.min(alive).max(1);
        if rank + SLACK > effective && effective < alive {
            width *= 2;
            continue;
        }
        let (rank2, _) = run(spec, n, field, width, seed2, opts.batch)?;
        let note = format!(
            "sketch width {effective} of {alive} alive columns; seed {:#x} rank {rank}, seed {seed2:#x} rank {rank2}",
            opts.seed
        );
        return Ok(PrimeRank {
            prime: field.modulus(),
            rank: rank.max(rank2),
            alive_columns: alive,
            sketch_width: Some(effective),
            note,
        });
    }
}
