use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pi_codim::algebra::{build_w, AlgebraSpec, Element};
use pi_codim::cache::{cached_codim, codim_key, Cache};
use pi_codim::cocharacter::{cocharacter, colength_bound};
use pi_codim::codim::{codim, Budget, CodimOptions, SketchMode};
use pi_codim::exponent::{estimate, exp_estimate, Method};
use pi_codim::field::DEFAULT_PRIMES;
use pi_codim::partition::Partition;
use pi_codim::phi::{
    self, check_eq0, check_lemma7, check_lemma7a, check_push_down_monotone, necessary_ok,
    sufficient_ok, weight,
};
use pi_codim::verify::{verify_paper, VerifyOptions};
use pi_codim::witness::{evaluate_witness, lemma4_witness, Klmt, Witness};
use pi_codim::Error;

/// `println!` that stops quietly when the reader has gone away.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout().lock(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "pi-codim",
    version,
    about = "Codimension growth and PI-exponent of W"
)]
struct Cli {
    /// Print JSON instead of a table.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print CSV instead of a table.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inspect or export an algebra.
    Algebra {
        #[command(subcommand)]
        action: AlgebraCmd,
    },
    /// Codimension c_n by ranks modulo several primes.
    Codim {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "auto")]
        sketch: Sketch,
        /// Cache directory (default `$PI_CODIM_CACHE` or `./cache`).
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
        /// Recompute and overwrite any cached entry.
        #[arg(long)]
        force: bool,
    },
    /// Cocharacter multiplicities m_lambda.
    Cochar {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        alg: AlgArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate a named witness on W, or the composite for (k,l,m,t).
    Witness {
        /// f1, f2, f3, f4 or a; all when omitted.
        #[arg(long)]
        name: Option<String>,
        /// Comma-separated k,l,m,t.
        #[arg(long, conflicts_with_all = ["name", "k"])]
        klmt: Option<String>,
        #[arg(long, requires_all = ["l", "m", "t"], conflicts_with = "name")]
        k: Option<usize>,
        #[arg(long, requires = "k")]
        l: Option<usize>,
        #[arg(long, requires = "k")]
        m: Option<usize>,
        #[arg(long, requires = "k")]
        t: Option<usize>,
    },
    /// Phi, weight and admissibility of a partition or a simplex point.
    Phi {
        #[arg(long, conflicts_with = "point")]
        partition: Option<String>,
        /// Comma-separated coordinates summing to 1.
        #[arg(long)]
        point: Option<String>,
    },
    /// Exhaustive checks of the degree and push-down inequalities.
    Bounds {
        #[arg(long)]
        n: usize,
        /// Any of eq0, lemma7, lemma7a, lq.
        #[arg(long, value_delimiter = ',', default_value = "eq0,lemma7,lemma7a")]
        check: Vec<String>,
        #[arg(long, default_value_t = 4)]
        d: usize,
    },
    /// Rows of the b_weight0 / a_upper sandwich.
    Sandwich {
        #[arg(long, default_value_t = 6)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        /// Same as the global format flags.
        #[arg(long, value_enum)]
        out: Option<OutFormat>,
    },
    /// Estimate exp(W) by the cubic, stationary-point and numeric methods.
    Exponent {
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        /// Pairwise agreement required between methods.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run every check and report one verdict per item.
    VerifyPaper {
        /// Also compute c_6 (about a minute per prime and thread).
        #[arg(long)]
        deep: bool,
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Check unit, grading and simplicity.
    Verify {
        #[command(flatten)]
        alg: AlgArgs,
    },
    /// Print the algebra as JSON.
    Export {
        #[command(flatten)]
        alg: AlgArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AlgArgs {
    /// Algebra file; W when omitted.
    #[arg(long, conflicts_with = "spec")]
    file: Option<PathBuf>,
    /// Built-in algebra; only `W` is known.
    #[arg(long)]
    spec: Option<String>,
}

impl AlgArgs {
    fn load(&self) -> Result<AlgebraSpec, Error> {
        if let Some(s) = &self.spec {
            if s != "W" {
                return Err(Error::Parse(format!(
                    "unknown built-in algebra {s:?}; use W or --file"
                )));
            }
        }
        match &self.file {
            Some(p) => AlgebraSpec::from_json(&std::fs::read_to_string(p)?),
            None => Ok(build_w()),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated primes, at least two.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    #[arg(long)]
    max_rows: Option<u128>,
    #[arg(long)]
    max_cols: Option<u128>,
    /// Lift the size budget entirely.
    #[arg(long)]
    unlimited: bool,
}

impl RunArgs {
    fn primes(&self) -> Vec<u64> {
        self.primes
            .clone()
            .unwrap_or_else(|| DEFAULT_PRIMES.to_vec())
    }

    fn budget(&self) -> Budget {
        if self.unlimited {
            return Budget::unlimited();
        }
        let mut b = Budget::default();
        if let Some(r) = self.max_rows {
            b.max_rows = r;
        }
        if let Some(c) = self.max_cols {
            b.max_cols = c;
        }
        b
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Sketch {
    Auto,
    Off,
    Force,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutFormat {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Cubic,
    Lagrange,
    Numeric,
    All,
}

/// A result that knows how to print itself as a table or CSV; JSON comes
/// from `Serialize`.
struct Output<T: Serialize> {
    data: T,
    header: String,
    rows: Vec<String>,
    table: Vec<String>,
    pass: bool,
}

impl<T: Serialize> Output<T> {
    fn emit(self, fmt: OutFormat) -> Result<bool, Error> {
        match fmt {
            OutFormat::Json => out!("{}", serde_json::to_string_pretty(&self.data)?),
            OutFormat::Csv => {
                out!("{}", self.header);
                for r in &self.rows {
                    out!("{r}");
                }
            }
            OutFormat::Table => {
                for l in &self.table {
                    out!("{l}");
                }
            }
        }
        Ok(self.pass)
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
        })
        .collect()
}

fn fmt_element(coeffs: &[num_rational::BigRational], labels: &[String]) -> String {
    Element::new(coeffs.to_vec()).format_with(labels)
}

fn run(cli: Cli) -> Result<bool, Error> {
    let mut fmt = if cli.json {
        OutFormat::Json
    } else if cli.csv {
        OutFormat::Csv
    } else {
        OutFormat::Table
    };
    match cli.cmd {
        Cmd::Algebra {
            action: AlgebraCmd::Export { alg, out },
        } => {
            let spec = alg.load()?;
            let text = spec.to_json_pretty();
            match out {
                Some(p) => std::fs::write(p, text + "\n")?,
                None => out!("{text}"),
            }
            Ok(true)
        }
        Cmd::Algebra {
            action: AlgebraCmd::Verify { alg },
        } => {
            let spec = alg.load()?;
            let a = spec.rational();
            let unit = spec.unit_index().map(|u| {
                let mut v = vec![0i64; spec.dim()];
                v[u] = 1;
                a.check_unit(&Element::from_ints(&v))
            });
            let graded = spec.grades().map(|g| a.check_grading(g));
            let simple = a.check_simple();
            #[derive(Serialize)]
            struct Report {
                dim: usize,
                hash: String,
                unit: Option<bool>,
                graded: Option<bool>,
                simple: bool,
                multiplication_algebra_dim: usize,
            }
            let r = Report {
                dim: spec.dim(),
                hash: spec.content_hash(),
                unit,
                graded,
                simple,
                multiplication_algebra_dim: a.multiplication_algebra_dim(),
            };
            let show = |b: Option<bool>| b.map_or("n/a".to_string(), |b| b.to_string());
            let pass = unit != Some(false) && graded != Some(false);
            Output {
                table: vec![
                    format!("dimension   {}", r.dim),
                    format!("hash        {}", r.hash),
                    format!("unit        {}", show(r.unit)),
                    format!("graded      {}", show(r.graded)),
                    format!(
                        "simple      {} (dim M(A) = {})",
                        r.simple, r.multiplication_algebra_dim
                    ),
                ],
                rows: vec![
                    format!("unit,{}", show(r.unit)),
                    format!("graded,{}", show(r.graded)),
                    format!("simple,{}", r.simple),
                ],
                header: "check,result".into(),
                data: r,
                pass,
            }
            .emit(fmt)
        }
        Cmd::Codim {
            n,
            alg,
            run,
            sketch,
            cache,
            no_cache,
            force,
        } => {
            let spec = alg.load()?;
            let opts = CodimOptions {
                budget: run.budget(),
                sketch: match sketch {
                    Sketch::Auto => SketchMode::Auto,
                    Sketch::Off => SketchMode::Off,
                    Sketch::Force => SketchMode::Force,
                },
                ..CodimOptions::default()
            };
            let primes = run.primes();
            let (res, hit) = if no_cache {
                (codim(&spec, n, &primes, &opts)?, false)
            } else if force {
                let res = codim(&spec, n, &primes, &opts)?;
                Cache::resolve(cache.as_deref()).put(
                    &codim_key(&spec, n, &primes),
                    opts.seed,
                    &res,
                )?;
                (res, false)
            } else {
                cached_codim(&Cache::resolve(cache.as_deref()), &spec, n, &primes, &opts)?
            };
            let mut table = vec![format!("c_{n} = {}", res.c_n)];
            table.extend(
                res.rank_per_prime
                    .iter()
                    .map(|(p, r)| format!("  rank mod {p}: {r}")),
            );
            table.push(format!(
                "  {}{}",
                res.method_notes,
                if hit { " (cached)" } else { "" }
            ));
            table.push(format!("  {:.3} s", res.seconds));
            let ranks: Vec<String> = primes
                .iter()
                .map(|p| res.rank_per_prime[p].to_string())
                .collect();
            let header: Vec<String> = (1..=primes.len())
                .map(|i| format!("prime{i}_rank"))
                .collect();
            let rows = vec![format!(
                "{n},{},{},{:.6}",
                res.c_n,
                ranks.join(","),
                res.seconds
            )];
            let pass = res.consensus();
            let header = format!("n,c_n,{},seconds", header.join(","));
            Output {
                data: res,
                header,
                rows,
                table,
                pass,
            }
            .emit(fmt)
        }
        Cmd::Cochar { n, alg, run } => {
            let spec = alg.load()?;
            let c = cocharacter(&spec, n, &run.primes(), &run.budget())?;
            let mut table = vec![format!("{:<16} {:>6} {:>10}", "lambda", "m", "deg")];
            let mut rows = Vec::new();
            for (l, m) in &c.multiplicities {
                let deg = l.hook_degree();
                table.push(format!("{:<16} {m:>6} {deg:>10}", l.to_string()));
                rows.push(format!("\"{l}\",{m},{deg},{}", &deg * *m));
            }
            table.push(format!(
                "colength {} (bound {})",
                c.colength(),
                colength_bound(spec.dim(), n)
            ));
            table.push(format!("sum m deg = {}", c.dimension()));
            Output {
                data: c,
                header: "lambda,m,deg,contribution".into(),
                rows,
                table,
                pass: true,
            }
            .emit(fmt)
        }
        Cmd::Witness {
            name,
            klmt,
            k,
            l,
            m,
            t,
        } => {
            let klmt = match (klmt, k, l, m, t) {
                (Some(s), ..) => Some(s),
                (None, Some(k), Some(l), Some(m), Some(t)) => Some(format!("{k},{l},{m},{t}")),
                _ => None,
            };
            if let Some(s) = klmt {
                let v: Vec<usize> = parse_list(&s, "k,l,m,t")?;
                let [k, l, m, t] = v[..] else {
                    return Err(Error::Parse(format!("expected four numbers, got {s:?}")));
                };
                let rep = lemma4_witness(Klmt::new(k, l, m, t))?;
                let labels = build_w().basis_labels().to_vec();
                let value = fmt_element(&rep.value, &labels);
                let pass = rep.certified;
                return Output {
                    table: vec![
                        format!("lambda       {:?}", rep.lambda),
                        format!("construction {}", rep.construction),
                        format!("value        {value}"),
                        format!("e_0 coord    {}", rep.e0_coordinate),
                        format!("certified    {pass}"),
                    ],
                    rows: vec![format!(
                        "{k},{l},{m},{t},\"{:?}\",\"{value}\",{},{pass}",
                        rep.lambda, rep.e0_coordinate
                    )],
                    header: "k,l,m,t,lambda,value,e0_coordinate,certified".into(),
                    data: rep,
                    pass,
                }
                .emit(fmt);
            }
            let which = match name {
                Some(n) => vec![Witness::parse(&n)?],
                None => Witness::ALL.to_vec(),
            };
            let labels = build_w().basis_labels().to_vec();
            #[derive(Serialize)]
            struct Row {
                name: String,
                value: String,
                expected: String,
                matches: bool,
            }
            let data: Vec<Row> = which
                .iter()
                .map(|&w| {
                    let v = evaluate_witness(w);
                    let e = w.expected();
                    Row {
                        name: w.name().into(),
                        value: fmt_element(&v.coeffs, &labels),
                        expected: fmt_element(&e.coeffs, &labels),
                        matches: v == e,
                    }
                })
                .collect();
            let pass = data.iter().all(|r| r.matches);
            Output {
                table: data
                    .iter()
                    .map(|r| {
                        format!(
                            "{:<3} = {:<12} ({})",
                            r.name,
                            r.value,
                            if r.matches { "ok" } else { "MISMATCH" }
                        )
                    })
                    .collect(),
                rows: data
                    .iter()
                    .map(|r| format!("{},{},{},{}", r.name, r.value, r.expected, r.matches))
                    .collect(),
                header: "name,value,expected,matches".into(),
                data,
                pass,
            }
            .emit(fmt)
        }
        Cmd::Phi { partition, point } => {
            #[derive(Serialize)]
            struct Report {
                input: String,
                phi: f64,
                ln_phi: f64,
                weight: Option<i64>,
                necessary: Option<bool>,
                sufficient: Option<bool>,
            }
            let r = match (partition, point) {
                (Some(p), None) => {
                    let l = Partition::parse(&p)?;
                    let v = phi::phi_partition(&l)?;
                    Report {
                        input: l.to_string(),
                        phi: v.value(),
                        ln_phi: v.ln_f64(),
                        weight: Some(weight(&l)),
                        necessary: Some(necessary_ok(&l)),
                        sufficient: Some(sufficient_ok(&l)),
                    }
                }
                (None, Some(x)) => {
                    let x: Vec<f64> = parse_list(&x, "point")?;
                    let v = phi::phi_point(&x)?;
                    Report {
                        input: format!("{x:?}"),
                        phi: v.value(),
                        ln_phi: v.ln_f64(),
                        weight: None,
                        necessary: None,
                        sufficient: None,
                    }
                }
                _ => {
                    return Err(Error::Parse(
                        "give exactly one of --partition, --point".into(),
                    ))
                }
            };
            let opt = |v: Option<String>| v.unwrap_or_default();
            Output {
                table: vec![
                    format!("input       {}", r.input),
                    format!("phi         {:.15}", r.phi),
                    format!("ln phi      {:.15}", r.ln_phi),
                    format!("weight      {}", opt(r.weight.map(|w| w.to_string()))),
                    format!("necessary   {}", opt(r.necessary.map(|w| w.to_string()))),
                    format!("sufficient  {}", opt(r.sufficient.map(|w| w.to_string()))),
                ],
                rows: vec![format!(
                    "\"{}\",{},{},{},{},{}",
                    r.input,
                    r.phi,
                    r.ln_phi,
                    opt(r.weight.map(|w| w.to_string())),
                    opt(r.necessary.map(|w| w.to_string())),
                    opt(r.sufficient.map(|w| w.to_string()))
                )],
                header: "input,phi,ln_phi,weight,necessary,sufficient".into(),
                data: r,
                pass: true,
            }
            .emit(fmt)
        }
        Cmd::Bounds { n, check, d } => {
            #[derive(Serialize)]
            struct Row {
                check: String,
                n: usize,
                violations: usize,
                detail: Vec<phi::Violation>,
            }
            let mut data = Vec::new();
            for c in &check {
                let detail = match c.as_str() {
                    "eq0" => check_eq0(n, d)?,
                    "lemma7" => check_lemma7(n),
                    "lemma7a" => check_lemma7a(n, d)?,
                    "lq" if n > 75 => {
                        return Err(Error::Precondition(format!(
                            "lq scans every partition of every m <= n; n = {n} is above 75"
                        )));
                    }
                    "lq" => {
                        let rep = check_push_down_monotone(n);
                        data.push(Row {
                            check: c.clone(),
                            n,
                            violations: rep.violations.len(),
                            detail: Vec::new(),
                        });
                        continue;
                    }
                    other => return Err(Error::Parse(format!("unknown check {other:?}"))),
                };
                data.push(Row {
                    check: c.clone(),
                    n,
                    violations: detail.len(),
                    detail,
                });
            }
            let pass = data.iter().all(|r| r.violations == 0);
            Output {
                table: data
                    .iter()
                    .map(|r| format!("{:<8} n={:<5} {} violations", r.check, r.n, r.violations))
                    .collect(),
                rows: data
                    .iter()
                    .map(|r| format!("{},{},{}", r.check, r.n, r.violations))
                    .collect(),
                header: "check,n,violations".into(),
                data,
                pass,
            }
            .emit(fmt)
        }
        Cmd::Sandwich {
            from,
            to,
            step,
            out,
        } => {
            if let Some(o) = out {
                fmt = o;
            }
            let rows = phi::sandwich_range(from, to, step)?;
            let arg = |p: &Option<Partition>| {
                p.as_ref()
                    .map_or("fallback".to_string(), Partition::to_string)
            };
            let pass = rows.iter().all(|r| r.b_weight0.ln <= r.a_upper.ln);
            Output {
                table: std::iter::once(format!(
                    "{:>6} {:>14} {:>14}  {:<24} {}",
                    "n", "b_weight0", "a_upper", "argmax_b", "argmax_a"
                ))
                .chain(rows.iter().map(|r| {
                    format!(
                        "{:>6} {:>14.10} {:>14.10}  {:<24} {}",
                        r.n,
                        r.b_weight0.value(),
                        r.a_upper.value(),
                        arg(&r.argmax_b),
                        r.argmax_a
                    )
                }))
                .collect(),
                rows: rows
                    .iter()
                    .map(|r| {
                        format!(
                            "{},{},{},\"{}\",\"{}\"",
                            r.n,
                            r.b_weight0.value(),
                            r.a_upper.value(),
                            arg(&r.argmax_b),
                            r.argmax_a
                        )
                    })
                    .collect(),
                header: "n,b_weight0,a_upper,argmax_b,argmax_a".into(),
                data: rows,
                pass,
            }
            .emit(fmt)
        }
        Cmd::Exponent { method, tol } => {
            let single = match method {
                MethodArg::Cubic => Some(Method::Cubic),
                MethodArg::Lagrange => Some(Method::Lagrange),
                MethodArg::Numeric => Some(Method::Numeric),
                MethodArg::All => None,
            };
            let report = exp_estimate(tol, Some(6000))?;
            let estimates = match single {
                Some(m) => vec![estimate(m)?],
                None => report.estimates.clone(),
            };
            #[derive(Serialize)]
            struct Out {
                estimates: Vec<pi_codim::exponent::ExponentEstimate>,
                report: pi_codim::exponent::ExponentReport,
                erratum_note: &'static str,
            }
            let mut table: Vec<String> = estimates
                .iter()
                .map(|e| {
                    format!(
                        "{:<9} {:.12}  x = ({:.9}, {:.9}, {:.9}, {:.9})  residual {:.1e}",
                        e.method.to_string(),
                        e.value.to_f64(),
                        e.point.x[0],
                        e.point.x[1],
                        e.point.x[2],
                        e.point.x[3],
                        e.residuals.max()
                    )
                })
                .collect();
            table.push(format!("max disagreement {:.2e}", report.max_disagreement));
            table.push(format!(
                "cubic root {:.12}",
                report.erratum.true_root.to_f64()
            ));
            if let Some(s) = &report.sandwich {
                table.push(format!(
                    "sandwich n={}: [{:.9}, {:.9}]",
                    s.n, s.b_weight0, s.a_upper
                ));
            }
            table.push(format!("note: {}", report.erratum.note));
            let rows = estimates
                .iter()
                .map(|e| {
                    format!(
                        "{},{},{},{},{},{},{}",
                        e.method,
                        e.value.to_f64(),
                        e.point.x[0],
                        e.point.x[1],
                        e.point.x[2],
                        e.point.x[3],
                        e.residuals.max()
                    )
                })
                .collect();
            Output {
                data: Out {
                    estimates,
                    erratum_note: report.erratum.note,
                    report,
                },
                header: "method,value,x1,x2,x3,x4,max_residual".into(),
                rows,
                table,
                pass: true,
            }
            .emit(fmt)
        }
        Cmd::VerifyPaper { deep, alg, cache } => {
            let spec = alg.load()?;
            let opts = VerifyOptions {
                deep,
                cache: Some(Cache::resolve(cache.as_deref())),
                ..VerifyOptions::default()
            };
            let rep = verify_paper(&spec, &opts);
            let pass = rep.all_pass();
            Output {
                table: rep
                    .checks
                    .iter()
                    .map(|c| {
                        format!(
                            "{:<4} [{:>2}] {:<24} {} ({:.2} s)",
                            format!("{:?}", c.status).to_uppercase(),
                            c.criterion,
                            c.name,
                            c.value,
                            c.seconds
                        )
                    })
                    .collect(),
                rows: rep
                    .checks
                    .iter()
                    .map(|c| {
                        format!(
                            "{},\"{}\",{},\"{}\",\"{}\",\"{}\",{:.3}",
                            c.criterion,
                            c.name,
                            format!("{:?}", c.status).to_uppercase(),
                            c.value.replace('"', "'"),
                            c.expected.replace('"', "'"),
                            c.tolerance,
                            c.seconds
                        )
                    })
                    .collect(),
                header: "criterion,name,status,value,expected,tolerance,seconds".into(),
                data: rep,
                pass,
            }
            .emit(fmt)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::MethodDisagreement(_)
                | Error::PrimeDisagreement(_)
                | Error::BadMultiplicity { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
