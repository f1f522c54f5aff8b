//! The function Φ on partitions and points of the simplex, partition weight,
//! push-down moves, and exhaustive checks of the degree and Φ inequalities.
//!
//! Inequalities between powers are decided exactly. With
//! `P(λ) = ∏ λ_i^{λ_i}` one has `Φ(λ)^n = n^n / P(λ)`, so every bound turns
//! into a comparison of big integers. Where those integers get large, a
//! double-precision logarithmic comparison with a generous margin decides
//! first and only near-ties fall back to exact arithmetic.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::partition::{for_each_partition, partitions_max_parts, Partition};
use crate::witness::Klmt;

/// A value of Φ kept as its natural logarithm in double-double precision.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct PhiValue {
    pub ln: Dd,
}

impl PhiValue {
    pub fn value(&self) -> f64 {
        self.exp().to_f64()
    }

    pub fn exp(&self) -> Dd {
        self.ln.exp()
    }

    pub fn ln_f64(&self) -> f64 {
        self.ln.to_f64()
    }
}

impl Serialize for PhiValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

/// `x ln x` with `0 ln 0 = 0`.
fn xlnx(x: usize) -> Dd {
    if x <= 1 {
        Dd::ZERO
    } else {
        Dd::from(x) * Dd::from(x).ln()
    }
}

fn xlnx_f64(x: usize) -> f64 {
    if x <= 1 {
        0.0
    } else {
        let x = x as f64;
        x * x.ln()
    }
}

/// `Φ(λ) = n / (∏ λ_i^{λ_i})^{1/n}`.
pub fn phi_partition(lambda: &Partition) -> Result<PhiValue> {
    phi_parts(lambda.parts())
}

pub(crate) fn phi_parts(parts: &[usize]) -> Result<PhiValue> {
    let n: usize = parts.iter().sum();
    if n == 0 {
        return Err(Error::InvalidPartition("empty partition".into()));
    }
    let s: Dd = parts.iter().map(|&p| xlnx(p)).sum();
    Ok(PhiValue {
        ln: Dd::from(n).ln() - s / Dd::from(n),
    })
}

/// `Φ(x) = 1 / ∏ x_i^{x_i}` for a point of the simplex, `0^0 = 1`.
pub fn phi_point(x: &[f64]) -> Result<PhiValue> {
    if let Some(bad) = x.iter().find(|v| **v < 0.0 || !v.is_finite()) {
        return Err(Error::Infeasible(format!(
            "negative or non-finite coordinate {bad}"
        )));
    }
    let sum: f64 = x.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::Infeasible(format!(
            "coordinates sum to {sum}, not 1"
        )));
    }
    let s: Dd = x
        .iter()
        .filter(|v| **v > 0.0)
        .map(|&v| Dd::from(v) * Dd::from(v).ln())
        .sum();
    Ok(PhiValue { ln: -s })
}

/// `wt(λ) = Σ (i-2) λ_i`, rows numbered from one.
pub fn weight(lambda: &Partition) -> i64 {
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| (i as i64 - 1) * p as i64)
        .sum()
}

/// At most four rows and weight at most two.
pub fn necessary_ok(lambda: &Partition) -> bool {
    lambda.len() <= 4 && weight(lambda) <= 2
}

/// `(k, l, m, t)` of a partition with at most four rows.
pub fn decompose_klmt(lambda: &Partition) -> Result<Klmt> {
    let [a, b, c, d] = lambda.padded4()?;
    Ok(Klmt::new(d, c - d, b - c, a - b))
}

/// At most four rows with `m + t ≥ 2k` and `m ≤ 2k`.
pub fn sufficient_ok(lambda: &Partition) -> bool {
    match decompose_klmt(lambda) {
        Ok(k) => k.check_hypotheses().is_ok(),
        Err(_) => false,
    }
}

fn legal_move(parts: &[usize], i: usize, j: usize) -> bool {
    let at = |r: usize| parts.get(r).copied().unwrap_or(0);
    if i >= j || i >= parts.len() || j > parts.len() {
        return false;
    }
    let (a, b) = (at(i) - 1, at(j) + 1);
    if j == i + 1 {
        a >= b && at(j + 1) <= b
    } else {
        a >= at(i + 1) && at(j - 1) >= b
    }
}

/// Moves one cell from row `i` to a lower row `j` (0-based; `j` may equal the
/// number of rows to start a new row).
pub fn push_down(lambda: &Partition, i: usize, j: usize) -> Result<Partition> {
    if !legal_move(lambda.parts(), i, j) {
        return Err(Error::Precondition(format!(
            "moving a cell of {lambda} from row {i} to row {j} is not a push-down"
        )));
    }
    let mut v = lambda.parts().to_vec();
    if j == v.len() {
        v.push(0);
    }
    v[i] -= 1;
    v[j] += 1;
    Partition::new(v)
}

/// Every legal push-down `(i, j, μ)`.
pub fn push_downs(lambda: &Partition) -> Vec<(usize, usize, Partition)> {
    let len = lambda.len();
    let mut out = Vec::new();
    for i in 0..len {
        for j in i + 1..=len {
            if legal_move(lambda.parts(), i, j) {
                out.push((i, j, push_down(lambda, i, j).expect("legal")));
            }
        }
    }
    out
}

/// `P(λ) = ∏ λ_i^{λ_i}`.
pub fn power_product(parts: &[usize]) -> BigUint {
    parts.iter().fold(BigUint::one(), |acc, &p| {
        acc * BigUint::from(p).pow(p as u32)
    })
}

fn pow(base: usize, e: usize) -> BigUint {
    BigUint::from(base).pow(e as u32)
}

/// A partition failing an inequality, with both sides' natural logarithms.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub check: String,
    pub lambda: Partition,
    pub mu: Option<Partition>,
    pub lhs_ln: f64,
    pub rhs_ln: f64,
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        let f: f64 = x.to_string().parse().unwrap_or(f64::INFINITY);
        return f.ln();
    }
    let shift = bits - 64;
    let top: f64 = (x >> shift).to_string().parse().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Checks `Φ(λ)^n / n^{d²+d} ≤ deg χ_λ ≤ n Φ(λ)^n` for every `λ ⊢ n` with at
/// most `d` rows. Requires `n ≥ 100`.
pub fn check_eq0(n: usize, d: usize) -> Result<Vec<Violation>> {
    if n < 100 {
        return Err(Error::Precondition(format!(
            "degree bounds are checked for n >= 100, got {n}"
        )));
    }
    let nn = pow(n, n);
    let n_upper = &nn * BigUint::from(n);
    let slack = pow(n, d * d + d);
    let parts = partitions_max_parts(n, d);
    let out = parts
        .par_iter()
        .flat_map_iter(|lambda| {
            let deg = lambda.hook_degree();
            let dp = &deg * power_product(lambda.parts());
            let mut v = Vec::new();
            if dp > n_upper {
                v.push(Violation {
                    check: "upper".into(),
                    lambda: lambda.clone(),
                    mu: None,
                    lhs_ln: ln_big(&dp),
                    rhs_ln: ln_big(&n_upper),
                });
            }
            let low = &dp * &slack;
            if nn > low {
                v.push(Violation {
                    check: "lower".into(),
                    lambda: lambda.clone(),
                    mu: None,
                    lhs_ln: ln_big(&nn),
                    rhs_ln: ln_big(&low),
                });
            }
            v
        })
        .collect();
    Ok(out)
}

/// Checks `Φ(λ) ≥ n^{-(q²+3q+4)/n} Φ(μ)` for one push-down `λ → μ`, with `q`
/// the number of rows of `λ`. Returns the two logarithms on failure.
pub fn lemma7_pair(lambda: &Partition, mu: &Partition) -> Option<(f64, f64)> {
    let n = lambda.n();
    let q = lambda.len();
    let lhs = power_product(lambda.parts());
    let rhs = pow(n, q * q + 3 * q + 4) * power_product(mu.parts());
    (lhs > rhs).then(|| (ln_big(&lhs), ln_big(&rhs)))
}

/// Lemma-7 check over every push-down of every `λ ⊢ n` with at most four
/// rows (the strip containing the cocharacter of a four-dimensional
/// algebra).
pub fn check_lemma7(n: usize) -> Vec<Violation> {
    partitions_max_parts(n, 4)
        .par_iter()
        .flat_map_iter(|lambda| {
            push_downs(lambda)
                .into_iter()
                .filter_map(|(_, _, mu)| {
                    lemma7_pair(lambda, &mu).map(|(l, r)| Violation {
                        check: "lemma7".into(),
                        lambda: lambda.clone(),
                        mu: Some(mu),
                        lhs_ln: l,
                        rhs_ln: r,
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Decides `lhs ≤ rhs` from logarithms, or `None` when too close to call.
fn log_decide(lhs: f64, rhs: f64) -> Option<bool> {
    let margin = 1e-9 * lhs.abs().max(rhs.abs()).max(1.0);
    if lhs + margin < rhs {
        Some(true)
    } else if lhs > rhs + margin {
        Some(false)
    } else {
        None
    }
}

/// Lemma-7a check: for `μ ⊢ n` with at most `d` rows and `λ ⊢ n-1` obtained
/// by deleting a cell, `Φ(λ) ≤ n^{(d²+d+2)/n} Φ(μ)`. Equivalent to
/// `(n-1)^{n(n-1)} P(μ)^{n-1} ≤ n^{(d²+d+2)(n-1) + n(n-1)} P(λ)^n`.
pub fn check_lemma7a(n: usize, d: usize) -> Result<Vec<Violation>> {
    if n < d.max(2) {
        return Err(Error::Precondition(format!(
            "n >= d required, got n = {n}, d = {d}"
        )));
    }
    let c = d * d + d + 2;
    let ln_n = (n as f64).ln();
    let ln_n1 = ((n - 1) as f64).ln();
    let out = partitions_max_parts(n, d)
        .par_iter()
        .flat_map_iter(|mu| {
            let s_mu: f64 = mu.parts().iter().map(|&p| xlnx_f64(p)).sum();
            let mut v = Vec::new();
            for i in 0..mu.len() {
                if mu.part(i) - 1 < mu.part(i + 1) {
                    continue;
                }
                let mut parts = mu.parts().to_vec();
                parts[i] -= 1;
                let lambda = Partition::new(parts).expect("removable cell");
                let s_l: f64 = lambda.parts().iter().map(|&p| xlnx_f64(p)).sum();
                let nf = n as f64;
                let lhs = nf * (nf - 1.0) * ln_n1 + (nf - 1.0) * s_mu;
                let rhs = (c as f64) * (nf - 1.0) * ln_n + nf * (nf - 1.0) * ln_n + nf * s_l;
                let ok = log_decide(lhs, rhs).unwrap_or_else(|| {
                    let l = pow(n - 1, n * (n - 1)) * power_product(mu.parts()).pow((n - 1) as u32);
                    let r = pow(n, c * (n - 1) + n * (n - 1))
                        * power_product(lambda.parts()).pow(n as u32);
                    l <= r
                });
                if !ok {
                    v.push(Violation {
                        check: "lemma7a".into(),
                        lambda,
                        mu: Some(mu.clone()),
                        lhs_ln: lhs,
                        rhs_ln: rhs,
                    });
                }
            }
            v
        })
        .collect();
    Ok(out)
}

/// Result of the exhaustive push-down monotonicity scan.
#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub max_n: usize,
    pub partitions: u64,
    pub moves: u64,
    pub exact_fallbacks: u64,
    pub violations: Vec<(Partition, Partition)>,
}

/// Checks `Φ(μ) ≥ Φ(λ)` for every push-down of every partition of every
/// `n ≤ max_n`. Only the two changed rows matter, so each move compares
/// `(a-1)^{a-1} (b+1)^{b+1}` with `a^a b^b`.
pub fn check_push_down_monotone(max_n: usize) -> MonotonicityReport {
    let per_n: Vec<(u64, u64, u64, Vec<(Partition, Partition)>)> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let (mut parts, mut moves, mut exact) = (0u64, 0u64, 0u64);
            let mut bad = Vec::new();
            for_each_partition(n, |p| {
                parts += 1;
                let len = p.len();
                for i in 0..len {
                    for j in i + 1..=len {
                        if !legal_move(p, i, j) {
                            continue;
                        }
                        moves += 1;
                        let a = p[i];
                        let b = p.get(j).copied().unwrap_or(0);
                        let diff = xlnx_f64(a - 1) + xlnx_f64(b + 1) - xlnx_f64(a) - xlnx_f64(b);
                        let ok = if diff < -1e-9 {
                            true
                        } else if diff > 1e-9 {
                            false
                        } else {
                            exact += 1;
                            power_product(&[a - 1, b + 1]) <= power_product(&[a, b])
                        };
                        if !ok {
                            let lambda = Partition::new(p.to_vec()).expect("partition");
                            let mu = push_down(&lambda, i, j).expect("legal");
                            bad.push((lambda, mu));
                        }
                    }
                }
            });
            (parts, moves, exact, bad)
        })
        .collect();
    let mut report = MonotonicityReport {
        max_n,
        partitions: 0,
        moves: 0,
        exact_fallbacks: 0,
        violations: Vec::new(),
    };
    for (p, m, e, v) in per_n {
        report.partitions += p;
        report.moves += m;
        report.exact_fallbacks += e;
        report.violations.extend(v);
    }
    report
}

/// Best candidate so far in a maximization of Φ at fixed `n`, compared by
/// `Σ λ_i ln λ_i` (smaller is better) with exact tie-breaking.
struct Best {
    s: f64,
    parts: Option<[usize; 4]>,
}

impl Best {
    fn new() -> Self {
        Best {
            s: f64::INFINITY,
            parts: None,
        }
    }

    fn offer(&mut self, parts: [usize; 4]) {
        let s: f64 = parts.iter().map(|&p| xlnx_f64(p)).sum();
        let better = match self.parts {
            None => true,
            Some(cur) => {
                let margin = 1e-12 * s.abs().max(1.0);
                if s + margin < self.s {
                    true
                } else if s > self.s + margin {
                    false
                } else {
                    power_product(&parts).cmp(&power_product(&cur)) == Ordering::Less
                }
            }
        };
        if better {
            self.s = s;
            self.parts = Some(parts);
        }
    }

    fn partition(&self) -> Option<Partition> {
        self.parts
            .map(|p| Partition::new(p.to_vec()).expect("decreasing"))
    }
}

/// Maximum of Φ over partitions with at most four rows and weight at most
/// two (the necessary condition for a nonzero multiplicity on W).
pub fn a_upper(n: usize) -> Option<(PhiValue, Partition)> {
    let mut best = Best::new();
    for l4 in 0..=n / 4 {
        for l3 in l4..=(n - l4) / 3 {
            let s = n - l3 - l4;
            let lo = s.div_ceil(2).max((l3 + 2 * l4).saturating_sub(2));
            if lo > s - l3 {
                continue;
            }
            best.offer([lo, s - lo, l3, l4]);
        }
    }
    let p = best.partition()?;
    Some((phi_partition(&p).expect("nonempty"), p))
}

/// Maximum of Φ over weight-zero partitions satisfying the sufficient
/// condition: `λ_1 = λ_3 + 2λ_4`, `λ_2 = n - 2λ_3 - 3λ_4` and
/// `λ_3 ≤ λ_2 ≤ λ_3 + 2λ_4`.
pub fn b_weight0_direct(n: usize) -> Option<(PhiValue, Partition)> {
    let mut best = Best::new();
    for l4 in 0..=n / 4 {
        for l3 in l4..=n / 3 {
            let used = 2 * l3 + 3 * l4;
            if used > n {
                break;
            }
            let l2 = n - used;
            let l1 = l3 + 2 * l4;
            if l2 < l3 || l2 > l1 || l2 - l3 > 2 * l4 {
                continue;
            }
            best.offer([l1, l2, l3, l4]);
        }
    }
    let p = best.partition()?;
    Some((phi_partition(&p).expect("nonempty"), p))
}

/// One row of the sandwich between the weight-zero lower proxy and the
/// necessary-condition upper proxy.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichRow {
    pub n: usize,
    pub b_weight0: PhiValue,
    pub a_upper: PhiValue,
    pub argmax_b: Option<Partition>,
    pub argmax_a: Partition,
    /// `true` when no weight-zero candidate exists and `min(b_{n-1}, a_n)` was
    /// used.
    pub fallback: bool,
}

fn sandwich_step(n: usize, prev_b: Option<PhiValue>) -> Result<SandwichRow> {
    let (a, arg_a) =
        a_upper(n).ok_or_else(|| Error::Precondition(format!("no candidates at n = {n}")))?;
    let (b, arg_b, fallback) = match b_weight0_direct(n) {
        Some((b, p)) => (b, Some(p), false),
        None => {
            let prev = match prev_b {
                Some(v) => v,
                None => sandwich(n - 1)?.b_weight0,
            };
            (if prev.ln < a.ln { prev } else { a }, None, true)
        }
    };
    Ok(SandwichRow {
        n,
        b_weight0: b,
        a_upper: a,
        argmax_b: arg_b,
        argmax_a: arg_a,
        fallback,
    })
}

/// Sandwich row at `n ≥ 6`.
pub fn sandwich(n: usize) -> Result<SandwichRow> {
    if n < 6 {
        return Err(Error::Precondition(format!(
            "sandwich rows start at n = 6, got {n}"
        )));
    }
    sandwich_step(n, None)
}

/// Rows for `from, from+step, ..` up to `to`.
pub fn sandwich_range(from: usize, to: usize, step: usize) -> Result<Vec<SandwichRow>> {
    if from < 6 || step == 0 {
        return Err(Error::Precondition("need from >= 6 and step >= 1".into()));
    }
    let ns: Vec<usize> = (from..=to).step_by(step).collect();
    ns.par_iter().map(|&n| sandwich(n)).collect()
}

/// Weight of the maximizer of Φ over the necessary set, for the restatement
/// that some maximizer has nonnegative weight.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma5Proxy {
    pub n: usize,
    pub argmax: Partition,
    pub weight: i64,
    pub nonnegative: bool,
}

pub fn lemma5_proxy(n: usize) -> Option<Lemma5Proxy> {
    let (_, p) = a_upper(n)?;
    let w = weight(&p);
    Some(Lemma5Proxy {
        n,
        argmax: p,
        weight: w,
        nonnegative: (0..=2).contains(&w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn phi_examples() {
        let v = phi_partition(&p(&[30, 10, 10, 10])).unwrap().value();
        assert!((v - 12f64.sqrt()).abs() < 1e-12);
        assert!((phi_partition(&p(&[7])).unwrap().value() - 1.0).abs() < 1e-15);
        let r = phi_partition(&p(&[9, 9, 3, 3])).unwrap().value();
        assert!((r - 8.0 / 27f64.powf(0.25)).abs() < 1e-12);
        assert!(phi_partition(&p(&[])).is_err());
    }

    #[test]
    fn point_examples() {
        assert!((phi_point(&[1.0, 0.0, 0.0, 0.0]).unwrap().value() - 1.0).abs() < 1e-15);
        assert!((phi_point(&[0.25; 4]).unwrap().value() - 4.0).abs() < 1e-14);
        assert!(phi_point(&[1.5, -0.5, 0.0, 0.0]).is_err());
        assert!(phi_point(&[0.5, 0.4, 0.0, 0.0]).is_err());
    }

    #[test]
    fn weights_and_predicates() {
        assert_eq!(weight(&p(&[9, 3, 3, 3])), 0);
        assert_eq!(weight(&p(&[1, 1, 1, 1])), 2);
        assert_eq!(weight(&p(&[6])), -6);
        assert!(!necessary_ok(&p(&[1, 1, 1, 1, 1])));
        assert!(!necessary_ok(&p(&[2, 2, 2, 2])));
        assert!(necessary_ok(&p(&[3, 1, 1, 1])));
        assert!(sufficient_ok(&p(&[3, 1, 1, 1])));
        assert!(!sufficient_ok(&p(&[1, 1, 1, 1])));
        assert!(sufficient_ok(&p(&[2, 2, 2])));
        assert_eq!(
            decompose_klmt(&p(&[7, 5, 3, 1])).unwrap(),
            Klmt::new(1, 2, 2, 2)
        );
        assert_eq!(
            decompose_klmt(&p(&[3, 1, 1, 1])).unwrap(),
            Klmt::new(1, 0, 0, 2)
        );
        assert_eq!(
            decompose_klmt(&p(&[2, 2, 2])).unwrap(),
            Klmt::new(0, 2, 0, 0)
        );
        assert!(decompose_klmt(&p(&[1, 1, 1, 1, 1])).is_err());
    }

    #[test]
    fn push_down_moves() {
        assert_eq!(push_down(&p(&[3, 1]), 0, 1).unwrap(), p(&[2, 2]));
        assert_eq!(push_down(&p(&[2, 2]), 1, 2).unwrap(), p(&[2, 1, 1]));
        assert!(push_down(&p(&[2, 2]), 0, 1).is_err());
        assert!(push_down(&p(&[2, 1]), 1, 0).is_err());
        let moves: Vec<Partition> = push_downs(&p(&[3, 1])).into_iter().map(|m| m.2).collect();
        assert_eq!(moves, vec![p(&[2, 2]), p(&[2, 1, 1])]);
        assert!(phi_partition(&p(&[2, 2])).unwrap().ln >= phi_partition(&p(&[3, 1])).unwrap().ln);
        assert!(lemma7_pair(&p(&[3, 1]), &p(&[2, 2])).is_none());
    }

    #[test]
    fn sandwich_at_six() {
        let row = sandwich(6).unwrap();
        assert!((row.b_weight0.value() - 12f64.sqrt()).abs() < 1e-12);
        assert_eq!(row.argmax_b, Some(p(&[3, 1, 1, 1])));
        assert!(row.b_weight0.ln <= row.a_upper.ln);
        assert!(sandwich(5).is_err());
    }
}
