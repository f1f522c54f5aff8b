//! Codimensions of W by modular rank, with per-prime ranks.
//!
//! Run with `cargo run --release --example codimension -- 5` to go up to
//! degree 5 (the default).

use pi_codim::algebra::build_w;
use pi_codim::codim::{codim, CodimOptions};
use pi_codim::field::DEFAULT_PRIMES;

fn main() -> pi_codim::Result<()> {
    let max: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let w = build_w();
    println!(
        "{:>2} {:>8} {:>10} {:>10} {:>8}",
        "n", "c_n", "rank p1", "rank p2", "seconds"
    );
    for n in 1..=max {
        let r = codim(&w, n, &DEFAULT_PRIMES, &CodimOptions::default())?;
        let ranks: Vec<usize> = r.rank_per_prime.values().copied().collect();
        println!(
            "{:>2} {:>8} {:>10} {:>10} {:>8.3}",
            n, r.c_n, ranks[0], ranks[1], r.seconds
        );
    }
    Ok(())
}
