//! The four-dimensional algebra W: its multiplication table and structure
//! checks.

use pi_codim::algebra::{build_w, w_grade, Element};

fn main() {
    let spec = build_w();
    let alg = spec.rational();
    let labels = spec.basis_labels();
    print!("{:>6}", "");
    for l in labels {
        print!("{l:>6}");
    }
    println!();
    for i in 0..spec.dim() {
        print!("{:>6}", labels[i]);
        for j in 0..spec.dim() {
            print!(
                "{:>6}",
                alg.mul(&alg.basis(i), &alg.basis(j)).format_with(labels)
            );
        }
        println!();
    }
    let grades: Vec<i64> = (0..4).map(w_grade).collect();
    println!(
        "unit e0:     {}",
        alg.check_unit(&Element::from_ints(&[0, 1, 0, 0]))
    );
    println!("graded:      {}", alg.check_grading(&grades));
    println!("dim M(W):    {}", alg.multiplication_algebra_dim());
    println!("simple:      {}", alg.check_simple());
    println!("hash:        {}", spec.content_hash());
}
