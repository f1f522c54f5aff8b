//! Every check in one run, printed as a table.

use pi_codim::algebra::build_w;
use pi_codim::verify::{verify_paper, VerifyOptions};

fn main() {
    let rep = verify_paper(&build_w(), &VerifyOptions::default());
    for c in &rep.checks {
        println!(
            "{:<5} [{:>2}] {:<28} {:<60} {:.2} s",
            format!("{:?}", c.status),
            c.criterion,
            c.name,
            c.value,
            c.seconds
        );
    }
    println!("all pass: {} ({:.1} s)", rep.all_pass(), rep.seconds);
}
