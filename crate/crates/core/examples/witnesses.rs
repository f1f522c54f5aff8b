//! The named witnesses f1..f4 and a, and the composite witness for every
//! admissible (k, l, m, t) of small degree.

use pi_codim::algebra::build_w;
use pi_codim::witness::{evaluate_witness, lemma4_witness, Klmt, Witness};

fn main() {
    let labels = build_w().basis_labels().to_vec();
    for w in Witness::ALL {
        let v = evaluate_witness(w);
        println!(
            "{:<3} = {:<6} expected {}",
            w.name(),
            v.format_with(&labels),
            w.expected().format_with(&labels)
        );
    }
    println!();
    println!(
        "{:<10} {:<12} {:<36} {}",
        "(k,l,m,t)", "lambda", "construction", "certified"
    );
    for k in 0..=2 {
        for l in 0..=2 {
            for m in 0..=2 * k {
                for t in 0..=3 {
                    let klmt = Klmt::new(k, l, m, t);
                    if klmt.n() > 12 || klmt.check_hypotheses().is_err() {
                        continue;
                    }
                    let r = lemma4_witness(klmt).expect("hypotheses hold");
                    println!(
                        "{:<10} {:<12} {:<36} {}",
                        format!("{k},{l},{m},{t}"),
                        format!("{:?}", r.lambda),
                        r.construction,
                        r.certified
                    );
                }
            }
        }
    }
}
