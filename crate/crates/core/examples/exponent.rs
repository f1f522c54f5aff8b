//! exp(W) three ways, the stationary point, and the printed constant.

use pi_codim::exponent::{cubic_residual, exp_estimate, solve_cubic, PRINTED_BETA4};

fn main() -> pi_codim::Result<()> {
    let rep = exp_estimate(1e-10, Some(2000))?;
    for e in &rep.estimates {
        println!(
            "{:<9} {:.15}  x = {:?}",
            e.method.to_string(),
            e.value.to_f64(),
            e.point.x
        );
    }
    println!("spread between methods {:.1e}", rep.max_disagreement);
    let root = solve_cubic();
    println!(
        "root of 16t^3 - 24t^2 + 11t - 1: {:.15} (residual {:.1e})",
        root.to_f64(),
        cubic_residual(root)
    );
    println!(
        "printed beta_4 {PRINTED_BETA4}: 1/exp(W) = {:.12}",
        rep.erratum.inverse_exponent
    );
    println!("facet maxima: {:?}", rep.facets);
    if let Some(s) = rep.sandwich {
        println!("n = {}: {:.9} <= {:.9}", s.n, s.b_weight0, s.a_upper);
    }
    Ok(())
}
