//! Cocharacter multiplicities of W by the trace of the S_n action on the
//! quotient, with the colength and the degree check.
//!
//! `cargo run --release --example cocharacter -- 5`

use pi_codim::algebra::build_w;
use pi_codim::cocharacter::{cocharacter, colength_bound};
use pi_codim::codim::Budget;
use pi_codim::field::DEFAULT_PRIMES;
use pi_codim::phi::weight;

fn main() -> pi_codim::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let w = build_w();
    for k in 1..=n {
        let c = cocharacter(&w, k, &DEFAULT_PRIMES, &Budget::default())?;
        println!(
            "n = {k}: colength {} (bound {}), dimension {}",
            c.colength(),
            colength_bound(4, k),
            c.dimension()
        );
        for (lambda, m) in &c.multiplicities {
            println!(
                "    m{lambda:<12} = {m:>3}   deg {:>4}   wt {:>2}",
                lambda.hook_degree(),
                weight(lambda)
            );
        }
    }
    Ok(())
}
