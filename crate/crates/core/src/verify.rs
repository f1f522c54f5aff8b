//! One-shot verification of the stated results for an algebra given as W.
//!
//! Every check runs and records a verdict; failures do not stop the run.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::algebra::{build_w, w_grade, AlgebraSpec, Element, E_0};
use crate::cache::{cached_codim, Cache};
use crate::cocharacter::{cocharacter, colength_bound};
use crate::codim::{codim, CodimOptions};
use crate::error::{Error, Result};
use crate::exponent::{exp_estimate, PRINTED_EXPONENT};
use crate::field::DEFAULT_PRIMES;
use crate::partition::partitions;
use crate::phi::{
    check_eq0, check_lemma7, check_lemma7a, check_push_down_monotone, decompose_klmt, sandwich,
    sufficient_ok,
};
use crate::witness::{evaluate_witness_in, lemma4_witness, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub criterion: u8,
    pub name: String,
    pub status: Status,
    pub value: String,
    pub expected: String,
    pub tolerance: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_hash: String,
    pub timestamp: u64,
    pub seed: u64,
    pub checks: Vec<Verdict>,
    pub seconds: f64,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    /// `true` unless some check of `criterion` failed.
    pub fn criterion_passes(&self, criterion: u8) -> bool {
        self.checks
            .iter()
            .filter(|c| c.criterion == criterion)
            .all(|c| c.status != Status::Fail)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Adds `c_6` with two-prime consensus.
    pub deep: bool,
    pub primes: Vec<u64>,
    pub cache: Option<Cache>,
    pub codim: CodimOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            deep: false,
            primes: DEFAULT_PRIMES.to_vec(),
            cache: None,
            codim: CodimOptions::default(),
        }
    }
}

struct Recorder {
    checks: Vec<Verdict>,
}

impl Recorder {
    fn run(
        &mut self,
        criterion: u8,
        name: &str,
        expected: &str,
        tolerance: &str,
        f: impl FnOnce() -> Result<(bool, String)>,
    ) {
        let start = Instant::now();
        let (status, value) = match f() {
            Ok((true, v)) => (Status::Pass, v),
            Ok((false, v)) => (Status::Fail, v),
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        self.checks.push(Verdict {
            criterion,
            name: name.into(),
            status,
            value,
            expected: expected.into(),
            tolerance: tolerance.into(),
            seconds: start.elapsed().as_secs_f64(),
        });
    }

    fn info(&mut self, criterion: u8, name: &str, value: &str) {
        self.checks.push(Verdict {
            criterion,
            name: name.into(),
            status: Status::Info,
            value: value.into(),
            expected: String::new(),
            tolerance: String::new(),
            seconds: 0.0,
        });
    }
}

fn unit_vec(d: usize, k: usize) -> Element<BigRational> {
    let mut v = vec![0i64; d];
    v[k] = 1;
    Element::from_ints(&v)
}

/// Product rules of W written out independently of [`build_w`]: `e_0` is
/// the unit, `e_{-1} e_j = e_{j-1}` for `j ≥ 0`, `e_1 e_1 = e_2`, and all
/// other products vanish.
fn w_rule(i: i64, j: i64) -> Option<i64> {
    match (i, j) {
        (0, j) => Some(j),
        (i, 0) => Some(i),
        (-1, j) if j >= 1 => Some(j - 1),
        (1, 1) => Some(2),
        _ => None,
    }
}

const MAX_N: usize = 5;

pub fn verify_paper(spec: &AlgebraSpec, opts: &VerifyOptions) -> RunReport {
    let start = Instant::now();
    let mut r = Recorder { checks: Vec::new() };
    let d = spec.dim();

    r.run(1, "products", "16 products as in W", "exact", || {
        if d != 4 {
            return Ok((false, format!("dimension {d}")));
        }
        let alg = spec.rational();
        let mut good = 0;
        for a in 0..4 {
            for b in 0..4 {
                let want = match w_rule(w_grade(a), w_grade(b)) {
                    Some(g) => unit_vec(4, (g + 1) as usize),
                    None => alg.zero(),
                };
                if alg.mul(&alg.basis(a), &alg.basis(b)) == want {
                    good += 1;
                }
            }
        }
        Ok((good == 16, format!("{good}/16 match")))
    });
    r.run(1, "unit", "e_0 two-sided unit", "exact", || {
        Ok((
            d > E_0 && spec.rational().check_unit(&unit_vec(d, E_0)),
            String::new(),
        ))
    });
    r.run(1, "grading", "grades (-1,0,1,2) close", "exact", || {
        let grades: Vec<i64> = (0..d).map(w_grade).collect();
        Ok((spec.rational().check_grading(&grades), String::new()))
    });
    r.run(
        1,
        "simple",
        "multiplication algebra is End(A)",
        "exact",
        || {
            let alg = spec.rational();
            Ok((
                alg.check_simple(),
                format!("dim M(A) = {}", alg.multiplication_algebra_dim()),
            ))
        },
    );

    let alg = spec.rational();
    for w in Witness::ALL {
        let expect = w.expected();
        let labels = build_w().basis_labels().to_vec();
        r.run(
            2,
            &format!("witness {w}"),
            &expect.format_with(&labels),
            "exact",
            || {
                let v = evaluate_witness_in(&alg, w)?;
                Ok((v == expect, v.format_with(&labels)))
            },
        );
    }

    let budget = opts.codim.budget;
    let mut cochars = Vec::new();
    for n in 1..=MAX_N {
        match cocharacter(spec, n, &opts.primes, &budget) {
            Ok(c) => cochars.push(c),
            Err(e) => {
                r.run(3, &format!("cocharacter n={n}"), "computable", "", || {
                    Err(e)
                });
            }
        }
    }
    let anchors = [1u64, 2];
    for c in &cochars {
        let n = c.n;
        r.run(
            3,
            &format!("codim n={n}"),
            "rank = sum m_lambda deg chi_lambda",
            "exact, 2-prime consensus",
            || {
                let res = match &opts.cache {
                    Some(cache) => cached_codim(cache, spec, n, &opts.primes, &opts.codim)?.0,
                    None => codim(spec, n, &opts.primes, &opts.codim)?,
                };
                let sum = c.dimension();
                let mut ok = res.consensus() && BigUint::from(res.c_n) == sum;
                if n <= anchors.len() {
                    ok &= res.c_n as u64 == anchors[n - 1];
                }
                Ok((ok, format!("c_{n} = {}, character route {sum}", res.c_n)))
            },
        );
    }
    if opts.deep {
        r.run(3, "codim n=6", "two-prime consensus", "exact", || {
            let res = match &opts.cache {
                Some(cache) => cached_codim(cache, spec, 6, &opts.primes, &opts.codim)?.0,
                None => codim(spec, 6, &opts.primes, &opts.codim)?,
            };
            Ok((
                res.consensus(),
                format!("c_6 = {} ({})", res.c_n, res.method_notes),
            ))
        });
    }

    r.run(
        4,
        "lemma 3",
        "no lambda with m > 0 has 5 rows or weight > 2",
        "0 violations",
        || {
            let bad: Vec<String> = cochars
                .iter()
                .flat_map(|c| c.necessary_violations())
                .map(|l| l.to_string())
                .collect();
            Ok((bad.is_empty(), format!("{} violations {bad:?}", bad.len())))
        },
    );

    r.run(
        5,
        "lemma 4",
        "sufficient lambda have m >= 1 and a certified witness",
        "0 violations",
        || {
            let mut bad = Vec::new();
            let mut checked = 0;
            for c in &cochars {
                bad.extend(
                    c.sufficient_violations()
                        .into_iter()
                        .map(|l| format!("{l}: m = 0")),
                );
                for l in partitions(c.n).into_iter().filter(sufficient_ok) {
                    checked += 1;
                    let rep = lemma4_witness(decompose_klmt(&l)?)?;
                    if !rep.certified {
                        bad.push(format!("{l}: witness {}", rep.e0_coordinate));
                    }
                }
            }
            Ok((
                bad.is_empty(),
                format!("{checked} partitions, {} violations {bad:?}", bad.len()),
            ))
        },
    );

    r.run(6, "colength", "l_n <= d (n+1)^(d^2+d)", "exact", || {
        let over: Vec<usize> = cochars
            .iter()
            .filter(|c| BigUint::from(c.colength()) > colength_bound(d, c.n))
            .map(|c| c.n)
            .collect();
        let ls: Vec<u64> = cochars.iter().map(|c| c.colength()).collect();
        Ok((
            over.is_empty(),
            format!("l_1..l_{} = {ls:?}", cochars.len()),
        ))
    });

    r.run(
        7,
        "degree bounds",
        "no violations for n = 100..105",
        "exact integers",
        || {
            let mut total = 0;
            for n in 100..=105 {
                total += check_eq0(n, 4)?.len();
            }
            Ok((total == 0, format!("{total} violations")))
        },
    );

    r.run(
        8,
        "push-down monotonicity",
        "no violations for n <= 60",
        "exact on near-ties",
        || {
            let rep = check_push_down_monotone(60);
            Ok((
                rep.violations.is_empty(),
                format!(
                    "{} partitions, {} moves, {} violations",
                    rep.partitions,
                    rep.moves,
                    rep.violations.len()
                ),
            ))
        },
    );
    r.run(
        8,
        "lemma 7",
        "no violations at n = 50, 60, 100",
        "exact integers",
        || {
            let total: usize = [50, 60, 100]
                .into_iter()
                .map(|n| check_lemma7(n).len())
                .sum();
            Ok((total == 0, format!("{total} violations")))
        },
    );
    r.run(
        8,
        "lemma 7a",
        "no violations at n = 50, 60, 100",
        "exact on near-ties",
        || {
            let mut total = 0;
            for n in [50, 60, 100] {
                total += check_lemma7a(n, 4)?.len();
            }
            Ok((total == 0, format!("{total} violations")))
        },
    );

    let exponent = exp_estimate(1e-8, Some(6000)).map_err(|e| e.to_string());
    r.run(
        9,
        "exponent",
        "3.610718614, methods agree",
        "5e-9; pairwise 1e-8",
        || {
            let rep = exponent
                .as_ref()
                .map_err(|e| Error::Precondition(e.clone()))?;
            let v = rep.canonical.value.to_f64();
            let ok = (v - PRINTED_EXPONENT).abs() <= 5e-9
                && rep.max_disagreement <= 1e-8
                && rep.distance_to_3 >= 0.38
                && rep.distance_to_4 >= 0.38;
            Ok((
                ok,
                format!("{v:.12}, max disagreement {:.1e}", rep.max_disagreement),
            ))
        },
    );
    r.run(
        9,
        "cubic root",
        "unique real root in [0.1196, 0.1197]",
        "1e-14",
        || {
            let rep = exponent
                .as_ref()
                .map_err(|e| Error::Precondition(e.clone()))?;
            let root = rep.erratum.true_root.to_f64();
            Ok(((0.1196..=0.1197).contains(&root), format!("{root:.12}")))
        },
    );
    r.run(
        9,
        "printed beta_4",
        "equals 1/exp(W), not the root",
        "1e-9",
        || {
            let rep = exponent
                .as_ref()
                .map_err(|e| Error::Precondition(e.clone()))?;
            let e = &rep.erratum;
            Ok((
                e.printed_equals_beta2 && e.printed_cubic_residual > 1e-3,
                format!(
                    "1/exp(W) = {:.12}, cubic residual {:.3e}",
                    e.inverse_exponent, e.printed_cubic_residual
                ),
            ))
        },
    );

    r.run(
        10,
        "sandwich",
        "b(6000), a(6000) within 1e-3; b <= a; b(6) = sqrt 12",
        "1e-3",
        || {
            let six = sandwich(6)?;
            let mut ok = (six.b_weight0.value() - 12f64.sqrt()).abs() < 1e-12;
            let ns = (6..=1000).chain((1050..=6000).step_by(50));
            let mut rows = 0;
            for n in ns {
                let row = sandwich(n)?;
                ok &= row.b_weight0.ln <= row.a_upper.ln;
                rows += 1;
            }
            let top = sandwich(6000)?;
            let (b, a) = (top.b_weight0.value(), top.a_upper.value());
            ok &= (b - PRINTED_EXPONENT).abs() <= 1e-3 && (a - PRINTED_EXPONENT).abs() <= 1e-3;
            Ok((
                ok,
                format!("b(6000) = {b:.9}, a(6000) = {a:.9}, {rows} rows ordered"),
            ))
        },
    );

    r.info(
        11,
        "out of scope",
        "two-sided codimension bounds at n >= 100d and the true a_n for large n are not computed; \
         criteria 3, 7 and 10 stand in for them",
    );

    RunReport {
        command: if opts.deep {
            "verify-paper --deep"
        } else {
            "verify-paper"
        }
        .into(),
        inputs_hash: spec.content_hash(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        seed: opts.codim.seed,
        checks: r.checks,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// W with `e_1 e_1` replaced by zero.
pub fn tampered_w() -> AlgebraSpec {
    let mut w = build_w();
    w.set_product(2, 2, Vec::new());
    w
}
