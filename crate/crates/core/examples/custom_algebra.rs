//! Codimensions of an algebra read from JSON: here the two-dimensional
//! algebra with `a a = b` and all other products zero, and its sum with W.

use pi_codim::algebra::{build_w, AlgebraSpec};
use pi_codim::codim::{codim, CodimOptions};
use pi_codim::field::DEFAULT_PRIMES;

const NIL: &str = r#"{
  "dim": 2,
  "basis": ["a", "b"],
  "table": [[[[1, "1/2"]], []], [[], []]]
}"#;

fn main() -> pi_codim::Result<()> {
    let nil = AlgebraSpec::from_json(NIL)?;
    let sum = build_w().direct_sum(&nil);
    for (name, spec) in [("nil", &nil), ("W + nil", &sum)] {
        let cs: Vec<usize> = (1..=4)
            .map(|n| codim(spec, n, &DEFAULT_PRIMES, &CodimOptions::default()).map(|r| r.c_n))
            .collect::<pi_codim::Result<_>>()?;
        println!(
            "{name:<8} c_1..c_4 = {cs:?}  hash {}",
            &spec.content_hash()[..12]
        );
    }
    Ok(())
}
