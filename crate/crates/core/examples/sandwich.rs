//! The weight-zero lower proxy and the upper proxy closing in on exp(W).
//!
//! `cargo run --release --example sandwich -- 6000`

use pi_codim::exponent::PRINTED_EXPONENT;
use pi_codim::phi::{lemma5_proxy, sandwich_range};

fn main() -> pi_codim::Result<()> {
    let to: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6000);
    let mut ns: Vec<usize> = (6..=12).collect();
    let mut n = 25;
    while n <= to {
        ns.push(n);
        n *= 2;
    }
    ns.push(to);
    println!(
        "{:>6} {:>14} {:>14} {:>12}  argmax_a",
        "n", "b_weight0", "a_upper", "gap"
    );
    for &n in &ns {
        let row = &sandwich_range(n, n, 1)?[0];
        let (b, a) = (row.b_weight0.value(), row.a_upper.value());
        println!(
            "{n:>6} {b:>14.10} {a:>14.10} {:>12.3e}  {}",
            a - b,
            row.argmax_a
        );
    }
    println!("target {PRINTED_EXPONENT}");
    if let Some(p) = lemma5_proxy(to) {
        println!(
            "maximizer of the upper proxy at n = {to} has weight {}",
            p.weight
        );
    }
    Ok(())
}
