//! Alternated witness expressions on W and the composite products that
//! certify nonzero cocharacter multiplicities.
//!
//! Barred leaves share one alternation class per expression, tilded leaves a
//! second one and double-barred leaves a third. Copies of a witness inside a
//! product get fresh classes.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{build_w, Algebra, Element, E_0, E_1, E_2, E_M1};
use crate::altexpr::AltExpr;
use crate::error::{Error, Result};
use crate::field::{format_rational, Rationals};

type Expr = AltExpr<usize>;

const W_LABELS: [&str; 4] = ["e_-1", "e_0", "e_1", "e_2"];

const BAR: u32 = 0;
const TILDE: u32 = 1;
const DBAR: u32 = 2;

/// The named witnesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    F1,
    F2,
    F3,
    F4,
    A,
}

impl Witness {
    pub const ALL: [Witness; 5] = [
        Witness::F1,
        Witness::F2,
        Witness::F3,
        Witness::F4,
        Witness::A,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Witness::F1 => "f1",
            Witness::F2 => "f2",
            Witness::F3 => "f3",
            Witness::F4 => "f4",
            Witness::A => "a",
        }
    }

    pub fn parse(s: &str) -> Result<Witness> {
        Witness::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown witness {s:?}; expected f1, f2, f3, f4 or a"
                ))
            })
    }

    /// Expression over basis indices of W.
    pub fn expr(self) -> Expr {
        match self {
            Witness::F1 => f1_expr(),
            Witness::F2 => f2_expr(),
            Witness::F3 => f3_expr(),
            Witness::F4 => f4_expr(),
            Witness::A => a_expr(),
        }
    }

    /// The value stated for the witness: `-e_1` for `a`, `-e_0` otherwise.
    pub fn expected(self) -> Element<BigRational> {
        let mut v = vec![0i64; 4];
        match self {
            Witness::A => v[E_1] = -1,
            _ => v[E_0] = -1,
        }
        Element::from_ints(&v)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn m(a: Expr, b: Expr) -> Expr {
    Expr::mul(a, b)
}

/// `ē_{-1}((ē_0 z)(ē_1 ē_2))` with a caller-supplied `z`.
fn core(z: Expr) -> Expr {
    m(
        Expr::alt(E_M1, BAR),
        m(
            m(Expr::alt(E_0, BAR), z),
            m(Expr::alt(E_1, BAR), Expr::alt(E_2, BAR)),
        ),
    )
}

/// `e_{-1}[ē_{-1}((ē_0 e_{-1})(ē_1 ē_2))]`.
pub fn f1_expr() -> Expr {
    m(Expr::leaf(E_M1), core(Expr::leaf(E_M1)))
}

/// `ē_{-1} ē_0 ē_1`, left-normed, with the full alternation over the three
/// leaves.
pub fn f2_expr() -> Expr {
    m(
        m(Expr::alt(E_M1, BAR), Expr::alt(E_0, BAR)),
        Expr::alt(E_1, BAR),
    )
}

/// `e_{-1}[ē_{-1}((ē_0 ẽ_{-1})(ē_1 ē_2))] ẽ_0`.
pub fn f3_expr() -> Expr {
    m(
        m(Expr::leaf(E_M1), core(Expr::alt(E_M1, TILDE))),
        Expr::alt(E_0, TILDE),
    )
}

/// `a = [ē_{-1}((ē_0 ẽ_{-1})(ē_1 ē_2))] ẽ_0`.
pub fn a_expr() -> Expr {
    m(core(Expr::alt(E_M1, TILDE)), Expr::alt(E_0, TILDE))
}

/// `ē̄_{-1}[a ē̄_0]`.
pub fn f4_expr() -> Expr {
    m(Expr::alt(E_M1, DBAR), m(a_expr(), Expr::alt(E_0, DBAR)))
}

fn to_elements(w: &Algebra<Rationals>, e: &Expr) -> AltExpr<Element<BigRational>> {
    e.map_payloads(&mut |&i| w.basis(i))
}

/// Exact value of a witness on W.
pub fn evaluate_witness(which: Witness) -> Element<BigRational> {
    evaluate_witness_in(&build_w().rational(), which).expect("witness expressions are sized for W")
}

/// Value of a witness on a four-dimensional algebra whose basis follows the
/// order of W.
pub fn evaluate_witness_in(
    alg: &Algebra<Rationals>,
    which: Witness,
) -> Result<Element<BigRational>> {
    if alg.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: alg.dim(),
        });
    }
    to_elements(alg, &which.expr()).evaluate(alg)
}

/// Parameters `(k, l, m, t)` of `λ = (k+l+m+t, k+l+m, k+l, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Klmt {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub t: usize,
}

impl Klmt {
    pub fn new(k: usize, l: usize, m: usize, t: usize) -> Self {
        Klmt { k, l, m, t }
    }

    pub fn partition_parts(&self) -> [usize; 4] {
        let Klmt { k, l, m, t } = *self;
        [k + l + m + t, k + l + m, k + l, k]
    }

    pub fn n(&self) -> usize {
        4 * self.k + 3 * self.l + 2 * self.m + self.t
    }

    /// Checks `m + t ≥ 2k`, `m ≤ 2k` and `m = 0` when `k = 0`, naming the
    /// first one that fails.
    pub fn check_hypotheses(&self) -> Result<()> {
        let Klmt { k, m, t, .. } = *self;
        if m + t < 2 * k {
            return Err(Error::Precondition(format!(
                "m + t >= 2k fails: m + t = {}, 2k = {}",
                m + t,
                2 * k
            )));
        }
        if self.n() == 0 {
            return Err(Error::Precondition("empty partition".into()));
        }
        if m > 2 * k {
            return Err(Error::Precondition(format!(
                "m <= 2k fails: m = {m}, 2k = {}",
                2 * k
            )));
        }
        Ok(())
    }
}

/// Outcome of evaluating the composite witness for one decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub klmt: Klmt,
    pub lambda: [usize; 4],
    /// The construction used, e.g. `f1^1 f2^0 f4^0 (e_-1+e_0)^2`.
    pub construction: String,
    /// Number of unalternated `e_{-1}` leaves contributed by the `f1`/`f3`
    /// factors.
    pub t0: usize,
    /// Leaf counts of `e_{-1}, e_0, e_1, e_2` before substitution.
    pub content: [usize; 4],
    #[serde(serialize_with = "ser_coords")]
    pub value: Vec<BigRational>,
    pub e0_coordinate: String,
    /// `true` when the `e_0` coordinate is `±1`.
    pub e0_is_unit: bool,
    /// Split of the value into its `e_0` part and the rest.
    pub note: String,
    pub nonzero: bool,
    /// Nonzero with `e_0` coordinate `±1`.
    pub certified: bool,
}

fn ser_coords<S: serde::Serializer>(
    v: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

fn power(e: Expr, times: usize, next_tag: &mut u32, out: &mut Vec<Expr>) {
    let span = e.max_tag().map_or(0, |t| t + 1);
    for _ in 0..times {
        out.push(e.clone().retag(*next_tag));
        *next_tag += span;
    }
}

/// Builds and evaluates the composite expression for `(k, l, m, t)`.
///
/// Even `m = 2q` uses `f1^{k-q} f2^l f4^q`, odd `m = 2q+1` uses
/// `f1^{k-q-1} f2^l f3 f4^q`, and `k = 0` uses `f2^l`. Every `e_{-1}` leaf is
/// replaced by `e_{-1} + e_0` and the product is extended on the right by
/// `t - t0` further factors `e_{-1} + e_0`.
pub fn lemma4_witness(klmt: Klmt) -> Result<WitnessReport> {
    klmt.check_hypotheses()?;
    let Klmt { k, l, m, t } = klmt;
    let (f1s, f3s, f4s, t0) = if k == 0 {
        (0, 0, 0, 0)
    } else if m % 2 == 0 {
        let q = m / 2;
        (k - q, 0, q, 2 * (k - q))
    } else {
        let q = m / 2;
        (k - q - 1, 1, q, 2 * (k - q) - 1)
    };
    let mut factors = Vec::new();
    let mut tag = 0;
    power(f1_expr(), f1s, &mut tag, &mut factors);
    power(f2_expr(), l, &mut tag, &mut factors);
    power(f3_expr(), f3s, &mut tag, &mut factors);
    power(f4_expr(), f4s, &mut tag, &mut factors);
    let mut content = [0usize; 4];
    for f in &factors {
        for leaf in f.leaves() {
            content[leaf.payload] += 1;
        }
    }
    let extra = t - t0;
    content[E_M1] += extra;

    let w = build_w().rational();
    let shifted = w.add(&w.basis(E_M1), &w.basis(E_0));
    let mut value = match AltExpr::product(factors.iter().map(|f| {
        f.map_payloads(&mut |&i| {
            if i == E_M1 {
                shifted.clone()
            } else {
                w.basis(i)
            }
        })
    })) {
        Some(expr) => Some(expr.evaluate(&w)?),
        None => None,
    };
    for _ in 0..extra {
        value = Some(match value {
            Some(v) => w.mul(&v, &shifted),
            None => shifted.clone(),
        });
    }
    let value = value.expect("nonempty partition gives at least one factor");

    let construction = if k == 0 {
        format!("f2^{l} (e_-1+e_0)^{extra}")
    } else if f3s == 1 {
        format!("f1^{f1s} f2^{l} f3 f4^{f4s} (e_-1+e_0)^{extra}")
    } else {
        format!("f1^{f1s} f2^{l} f4^{f4s} (e_-1+e_0)^{extra}")
    };
    let e0 = value.coeffs[E_0].clone();
    let mut rest = value.clone();
    rest.coeffs[E_0] = BigRational::zero();
    let labels: Vec<String> = W_LABELS.iter().map(|s| s.to_string()).collect();
    let note = format!(
        "e_0 coordinate {}; remainder in W_-1 + W_1 + W_2: {}",
        format_rational(&e0),
        rest.format_with(&labels)
    );
    let nonzero = value.coeffs.iter().any(|c| !c.is_zero());
    let e0_is_unit = e0.abs() == BigRational::one();
    Ok(WitnessReport {
        klmt,
        lambda: klmt.partition_parts(),
        construction,
        t0,
        content,
        nonzero,
        e0_is_unit,
        certified: nonzero && e0_is_unit,
        e0_coordinate: format_rational(&e0),
        note,
        value: value.coeffs,
    })
}

/// Convenience: the exact element `±e_0` carried by `(-e_0)^j`.
pub fn signed_unit(j: usize) -> Element<BigRational> {
    let mut v = vec![BigRational::zero(); 4];
    v[E_0] = BigRational::from_integer(BigInt::from(if j % 2 == 0 { 1 } else { -1 }));
    Element::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_values() {
        for w in Witness::ALL {
            assert_eq!(evaluate_witness(w), w.expected(), "{w}");
        }
    }

    #[test]
    fn alternation_size_of_f2() {
        assert_eq!(f2_expr().expand().len(), 6);
        assert_eq!(f4_expr().expand().len(), 24 * 2 * 2);
    }

    #[test]
    fn lazy_matches_expansion() {
        let w = build_w().rational();
        for which in Witness::ALL {
            let e = to_elements(&w, &which.expr());
            assert_eq!(e.evaluate(&w).unwrap(), e.evaluate_expanded(&w));
        }
    }

    #[test]
    fn composite_examples() {
        let r = lemma4_witness(Klmt::new(1, 0, 2, 0)).unwrap();
        assert_eq!(r.value, Witness::F4.expected().coeffs);
        let r = lemma4_witness(Klmt::new(1, 1, 2, 0)).unwrap();
        assert_eq!(r.value, signed_unit(2).coeffs);
        let r = lemma4_witness(Klmt::new(0, 2, 0, 1)).unwrap();
        assert!(r.certified);
        assert_eq!(r.value, Element::from_ints(&[1, 1, 0, 0]).coeffs);
    }

    #[test]
    fn content_matches_partition() {
        for k in 0..3 {
            for l in 0..3 {
                for m in 0..=2 * k {
                    for t in 0..4 {
                        let d = Klmt::new(k, l, m, t);
                        if d.check_hypotheses().is_err() {
                            continue;
                        }
                        let r = lemma4_witness(d).unwrap();
                        let [a, b, c, e] = d.partition_parts();
                        assert_eq!(r.content, [a, b, c, e], "{d:?}");
                        assert!(r.certified, "{d:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn hypotheses_refused() {
        let err = lemma4_witness(Klmt::new(1, 0, 0, 1)).unwrap_err();
        assert!(err.to_string().contains("m + t >= 2k"));
        let err = lemma4_witness(Klmt::new(1, 0, 3, 0)).unwrap_err();
        assert!(err.to_string().contains("m <= 2k"));
        assert!(lemma4_witness(Klmt::new(0, 1, 1, 0)).is_err());
    }
}
