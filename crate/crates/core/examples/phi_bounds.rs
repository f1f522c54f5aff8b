//! Φ on a few partitions, then the exhaustive degree and push-down checks.

use std::time::Instant;

use pi_codim::partition::Partition;
use pi_codim::phi::{
    check_eq0, check_lemma7, check_lemma7a, check_push_down_monotone, phi_partition, push_downs,
    weight,
};

fn main() -> pi_codim::Result<()> {
    for s in ["2,2,1,1", "3,1,1,1", "4,4,2,1", "10,7,4,2"] {
        let l = Partition::parse(s)?;
        let phi = phi_partition(&l)?;
        println!("Phi{l} = {:.12}  weight {}", phi.value(), weight(&l));
        for (i, j, mu) in push_downs(&l) {
            println!(
                "    row {} -> {}: Phi{mu} = {:.12}",
                i + 1,
                j + 1,
                phi_partition(&mu)?.value()
            );
        }
    }

    let t = Instant::now();
    let eq0: usize = (100..=105)
        .map(|n| check_eq0(n, 4).map(|v| v.len()))
        .sum::<pi_codim::Result<usize>>()?;
    println!(
        "degree bounds n = 100..105: {eq0} violations ({:.2} s)",
        t.elapsed().as_secs_f64()
    );

    let t = Instant::now();
    let rep = check_push_down_monotone(40);
    println!(
        "push-downs n <= 40: {} partitions, {} moves, {} violations ({:.2} s)",
        rep.partitions,
        rep.moves,
        rep.violations.len(),
        t.elapsed().as_secs_f64()
    );
    for n in [50, 60, 100] {
        println!(
            "ratio bounds n = {n}: {} + {} violations",
            check_lemma7(n).len(),
            check_lemma7a(n, 4)?.len()
        );
    }
    Ok(())
}
