//! One PASS/FAIL line per acceptance criterion. Set `PI_CODIM_DEEP=1` to add
//! the degree-6 codimension to criterion 3.

use std::process::ExitCode;
use std::time::Instant;

use pi_codim::algebra::build_w;
use pi_codim::exponent::{exp_estimate, PRINTED_BETA4, PRINTED_EXPONENT};
use pi_codim::phi::sandwich;
use pi_codim::verify::{verify_paper, RunReport, Status, VerifyOptions};

/// Wall-clock limits in seconds, by criterion.
const LIMITS: [(u8, f64); 7] = [
    (1, 1.0),
    (2, 1.0),
    (3, 120.0),
    (7, 10.0),
    (8, 30.0),
    (9, 1.0),
    (10, 60.0),
];

fn seconds(rep: &RunReport, c: u8) -> f64 {
    rep.checks
        .iter()
        .filter(|v| v.criterion == c)
        .map(|v| v.seconds)
        .sum()
}

fn main() -> ExitCode {
    let deep = std::env::var("PI_CODIM_DEEP").is_ok_and(|v| v == "1");
    let start = Instant::now();
    let rep = verify_paper(
        &build_w(),
        &VerifyOptions {
            deep,
            ..VerifyOptions::default()
        },
    );

    // independent recomputation of the numeric tolerances
    let mut extra: Vec<(u8, bool, String)> = Vec::new();
    match exp_estimate(1e-8, None) {
        Ok(e) => {
            let v = e.canonical.value.to_f64();
            let root = e.erratum.true_root.to_f64();
            let ok = e.max_disagreement <= 1e-8
                && (v - PRINTED_EXPONENT).abs() <= 5e-9
                && (0.1196..=0.1197).contains(&root)
                && (PRINTED_BETA4 - 1.0 / v).abs() < 1e-9;
            extra.push((
                9,
                ok,
                format!(
                    "exp(W) = {v:.12}, spread {:.1e}, root {root:.9}",
                    e.max_disagreement
                ),
            ));
        }
        Err(e) => extra.push((9, false, format!("{e}"))),
    }
    match (sandwich(6), sandwich(6000)) {
        (Ok(s6), Ok(big)) => {
            let (b, a) = (big.b_weight0.value(), big.a_upper.value());
            let ok = (s6.b_weight0.value() - 12f64.sqrt()).abs() < 1e-12
                && (b - PRINTED_EXPONENT).abs() < 1e-3
                && (a - PRINTED_EXPONENT).abs() < 1e-3
                && b <= a;
            extra.push((
                10,
                ok,
                format!(
                    "b(6) = {:.12}, b(6000) = {b:.9}, a(6000) = {a:.9}",
                    s6.b_weight0.value()
                ),
            ));
        }
        (Err(e), _) | (_, Err(e)) => extra.push((10, false, format!("{e}"))),
    }

    let mut failed = 0;
    for c in 1..=11u8 {
        let checks: Vec<_> = rep.checks.iter().filter(|v| v.criterion == c).collect();
        if c == 11 {
            for v in &checks {
                println!("INFO [11] {}", v.value);
            }
            continue;
        }
        let secs = seconds(&rep, c);
        let mut notes: Vec<String> = checks
            .iter()
            .filter(|v| v.status == Status::Fail)
            .map(|v| format!("{}: {}", v.name, v.value))
            .collect();
        let mut ok = !checks.is_empty() && rep.criterion_passes(c);
        if let Some((_, limit)) = LIMITS.iter().find(|(k, _)| *k == c) {
            if secs > *limit {
                ok = false;
                notes.push(format!("{secs:.2} s over the {limit} s limit"));
            }
        }
        for (_, pass, msg) in extra.iter().filter(|(k, _, _)| *k == c) {
            ok &= *pass;
            if !pass {
                notes.push(msg.clone());
            }
        }
        let summary = if notes.is_empty() {
            checks
                .iter()
                .map(|v| v.value.as_str())
                .filter(|s| !s.is_empty())
                .last()
                .unwrap_or("")
                .to_string()
        } else {
            notes.join("; ")
        };
        println!(
            "{} [{c:>2}] {} checks, {secs:.2} s  {summary}",
            if ok { "PASS" } else { "FAIL" },
            checks.len()
        );
        if !ok {
            failed += 1;
        }
    }
    println!(
        "{} of 10 criteria failed ({:.1} s)",
        failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
