//! The PI-exponent of W as the maximum of `Φ(x) = 1/∏ x_i^{x_i}` over
//!
//! ```text
//! T = { x_1 ≥ x_2 ≥ x_3 ≥ x_4 ≥ 0,  Σ x_i = 1,  x_1 - x_3 = 2 x_4 },
//! ```
//!
//! computed three ways: from the root of `16t³ - 24t² + 11t - 1` through the
//! β-chain, from the geometric stationary point `x ∝ (t, 1, 1/t, 1/t²)` with
//! `t³ = t + 2`, and by direct maximization over the two free coordinates.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::phi::{phi_point, sandwich};

/// The constant printed for `β_4` next to the cubic.
pub const PRINTED_BETA4: f64 = 0.276_953_179;

/// Reference value of the exponent.
pub const PRINTED_EXPONENT: f64 = 3.610_718_614;

pub const ERRATUM_NOTE: &str = "the printed beta_4 = 0.276953179 is not a root of \
16t^3 - 24t^2 + 11t - 1 (the unique real root is about 0.1196551); it equals \
beta_2 = 1/exp(W). The true root is used.";

impl Serialize for Dd {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

/// Constraint residuals of a point against `T`; all are zero or positive
/// amounts of violation.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Residuals {
    pub sum: f64,
    pub linear: f64,
    pub order: f64,
    pub nonnegative: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.sum
            .max(self.linear)
            .max(self.order)
            .max(self.nonnegative)
    }

    /// The first violated constraint beyond `tol`.
    fn first_violated(&self, tol: f64) -> Option<(&'static str, f64)> {
        [
            ("sum x_i = 1", self.sum),
            ("x_1 - x_3 = 2 x_4", self.linear),
            ("x_1 >= x_2 >= x_3 >= x_4", self.order),
            ("x_4 >= 0", self.nonnegative),
        ]
        .into_iter()
        .find(|c| c.1 > tol)
    }
}

/// A point of `T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FeasiblePoint {
    pub x: [f64; 4],
}

impl FeasiblePoint {
    pub fn residuals_of(x: &[f64; 4]) -> Residuals {
        Residuals {
            sum: (x.iter().sum::<f64>() - 1.0).abs(),
            linear: (x[0] - x[2] - 2.0 * x[3]).abs(),
            order: x
                .windows(2)
                .map(|w| (w[1] - w[0]).max(0.0))
                .fold(0.0, f64::max),
            nonnegative: (-x[3]).max(0.0),
        }
    }

    /// Validates membership with tolerance `tol`, naming the first violated
    /// constraint on failure.
    pub fn new(x: [f64; 4], tol: f64) -> Result<Self> {
        let r = Self::residuals_of(&x);
        if let Some((name, v)) = r.first_violated(tol) {
            return Err(Error::Infeasible(format!(
                "constraint {name} violated by {v:e}"
            )));
        }
        Ok(FeasiblePoint { x })
    }

    pub fn residuals(&self) -> Residuals {
        Self::residuals_of(&self.x)
    }

    /// The point `(u + 2s, 1 - 2u - 3s, u, s)`.
    pub fn from_free(u: f64, s: f64) -> [f64; 4] {
        [u + 2.0 * s, 1.0 - 2.0 * u - 3.0 * s, u, s]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cubic,
    Lagrange,
    Numeric,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Cubic, Method::Lagrange, Method::Numeric];

    pub fn parse(s: &str) -> Result<Method> {
        match s {
            "cubic" => Ok(Method::Cubic),
            "lagrange" => Ok(Method::Lagrange),
            "numeric" => Ok(Method::Numeric),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Cubic => "cubic",
            Method::Lagrange => "lagrange",
            Method::Numeric => "numeric",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentEstimate {
    pub method: Method,
    pub value: Dd,
    pub point: FeasiblePoint,
    pub residuals: Residuals,
}

impl ExponentEstimate {
    fn at(method: Method, value: Dd, x: [f64; 4]) -> Result<Self> {
        let point = FeasiblePoint::new(x, 1e-10)?;
        Ok(ExponentEstimate {
            method,
            value,
            residuals: point.residuals(),
            point,
        })
    }
}

fn cubic(t: Dd) -> Dd {
    ((t * 16.0 - 24.0) * t + 11.0) * t - 1.0
}

fn cubic_f64(t: f64) -> f64 {
    ((16.0 * t - 24.0) * t + 11.0) * t - 1.0
}

/// Number of sign changes of the cubic on a uniform grid of `[a, b]`.
pub fn cubic_sign_changes(a: f64, b: f64, steps: usize) -> usize {
    (0..steps)
        .filter(|&i| {
            let x0 = a + (b - a) * i as f64 / steps as f64;
            let x1 = a + (b - a) * (i + 1) as f64 / steps as f64;
            cubic_f64(x0).signum() != cubic_f64(x1).signum()
        })
        .count()
}

/// Bisection on a sign-change bracket, then Newton steps in double-double.
fn bracket_root(
    f: impl Fn(f64) -> f64,
    fd: impl Fn(Dd) -> Dd,
    dfd: impl Fn(Dd) -> Dd,
    mut a: f64,
    mut b: f64,
) -> Dd {
    let fa = f(a);
    assert!(
        fa.signum() != f(b).signum(),
        "no sign change on the bracket"
    );
    while b - a > 1e-15 * b.abs().max(1.0) {
        let m = 0.5 * (a + b);
        if f(m).signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    let mut t = Dd::from(0.5 * (a + b));
    for _ in 0..3 {
        t = t - fd(t) / dfd(t);
    }
    t
}

/// The unique real root of `16t³ - 24t² + 11t - 1`, bracketed in
/// `[0.11, 0.13]`.
pub fn solve_cubic() -> Dd {
    bracket_root(
        cubic_f64,
        cubic,
        |t| (t * 48.0 - 48.0) * t + 11.0,
        0.11,
        0.13,
    )
}

pub fn cubic_residual(t: Dd) -> f64 {
    cubic(t).to_f64().abs()
}

/// `(β_1, β_2, β_3, β_4)` from `β_3 = 2β_4 - 4β_4²`, `β_2 = β_3²/β_4`,
/// `β_1 = β_3³/β_4²`, sorted decreasing and checked against `T` with
/// tolerance `1e-8`.
pub fn beta_point(beta4: f64) -> Result<FeasiblePoint> {
    if !(beta4 > 0.0 && beta4 < 0.5) {
        return Err(Error::Precondition(format!(
            "beta_4 = {beta4} is outside (0, 1/2)"
        )));
    }
    let b3 = 2.0 * beta4 - 4.0 * beta4 * beta4;
    let b2 = b3 * b3 / beta4;
    let b1 = b3 * b3 * b3 / (beta4 * beta4);
    let mut x = [b1, b2, b3, beta4];
    x.sort_by(|a, b| b.total_cmp(a));
    FeasiblePoint::new(x, 1e-8)
}

/// Cubic route: the β-chain at the root, with Φ evaluated there.
pub fn cubic_estimate() -> Result<ExponentEstimate> {
    let r = solve_cubic();
    let b4 = r;
    let b3 = b4 * 2.0 - b4 * b4 * 4.0;
    let b2 = b3 * b3 / b4;
    let b1 = b3 * b3 * b3 / (b4 * b4);
    let x = [b1.to_f64(), b2.to_f64(), b3.to_f64(), b4.to_f64()];
    beta_point(b4.to_f64())?;
    let value = phi_dd(&[b1, b2, b3, b4]);
    ExponentEstimate::at(Method::Cubic, value, x)
}

fn phi_dd(x: &[Dd]) -> Dd {
    let s: Dd = x.iter().filter(|v| v.hi() > 0.0).map(|&v| v * v.ln()).sum();
    (-s).exp()
}

/// Root `t > 1` of `t³ - t - 2`.
pub fn lagrange_ratio() -> Dd {
    bracket_root(
        |t| t * t * t - t - 2.0,
        |t| t * t * t - t - 2.0,
        |t| t * t * 3.0 - 1.0,
        1.0,
        2.0,
    )
}

/// Geometric stationary point: `M = t + 1 + 1/t + 1/t²` and
/// `x = (t, 1, 1/t, 1/t²)/M`.
pub fn lagrange_estimate() -> Result<ExponentEstimate> {
    let t = lagrange_ratio();
    let inv = Dd::ONE / t;
    let m = t + 1.0 + inv + inv * inv;
    let x = [t / m, Dd::ONE / m, inv / m, inv * inv / m];
    ExponentEstimate::at(Method::Lagrange, m, x.map(Dd::to_f64))
}

fn entropy(x: &[f64; 4]) -> f64 {
    -x.iter()
        .filter(|v| **v > 0.0)
        .map(|v| v * v.ln())
        .sum::<f64>()
}

fn feasible_free(u: f64, s: f64) -> bool {
    s >= 0.0 && u >= s && 3.0 * u + 5.0 * s >= 1.0 && 3.0 * u + 3.0 * s <= 1.0
}

/// Gradient and Hessian of `-Σ x ln x` in the free coordinates `(u, s)`.
fn grad_hess(u: f64, s: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let [x1, x2, x3, x4] = FeasiblePoint::from_free(u, s);
    let (l1, l2, l3, l4) = (x1.ln(), x2.ln(), x3.ln(), x4.ln());
    let g = [-(l1 - 2.0 * l2 + l3), -(2.0 * l1 - 3.0 * l2 + l4)];
    let h = [
        [-(1.0 / x1 + 4.0 / x2 + 1.0 / x3), -(2.0 / x1 + 6.0 / x2)],
        [-(2.0 / x1 + 6.0 / x2), -(4.0 / x1 + 9.0 / x2 + 1.0 / x4)],
    ];
    (g, h)
}

/// Maximum of `-Σ x ln x` along a facet given as a parametrized segment.
fn facet_max(p: impl Fn(f64) -> (f64, f64)) -> f64 {
    let f = |t: f64| {
        let (u, s) = p(t);
        entropy(&FeasiblePoint::from_free(u, s))
    };
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) < f(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    f(0.5 * (a + b)).max(f(0.0)).max(f(1.0))
}

/// Φ maxima on the four facets of the feasible triangle-like region.
#[derive(Clone, Debug, Serialize)]
pub struct FacetSweep {
    pub x1_eq_x2: f64,
    pub x2_eq_x3: f64,
    pub x3_eq_x4: f64,
    pub x4_zero: f64,
}

impl FacetSweep {
    pub fn max(&self) -> f64 {
        self.x1_eq_x2
            .max(self.x2_eq_x3)
            .max(self.x3_eq_x4)
            .max(self.x4_zero)
    }
}

/// Facets of `{3u+5s ≥ 1, 3u+3s ≤ 1, u ≥ s ≥ 0}`. Its vertices are
/// `(1/3, 0)`, `(1/6, 1/6)`, `(1/8, 1/8)`.
pub fn facet_sweep() -> FacetSweep {
    let seg =
        |a: (f64, f64), b: (f64, f64)| move |t: f64| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
    let v1 = (1.0 / 3.0, 0.0);
    let v2 = (1.0 / 6.0, 1.0 / 6.0);
    let v3 = (1.0 / 8.0, 1.0 / 8.0);
    FacetSweep {
        x1_eq_x2: facet_max(seg(v1, v3)).exp(),
        x2_eq_x3: facet_max(seg(v1, v2)).exp(),
        x3_eq_x4: facet_max(seg(v3, v2)).exp(),
        x4_zero: entropy(&FeasiblePoint::from_free(v1.0, v1.1)).exp(),
    }
}

/// Direct maximization: dense grid over `(u, s)`, then damped Newton.
pub fn numeric_maximize() -> Result<ExponentEstimate> {
    const GRID: usize = 600;
    let (u_lo, u_hi, s_hi) = (1.0 / 8.0, 1.0 / 3.0, 1.0 / 6.0);
    let best = (0..=GRID)
        .into_par_iter()
        .flat_map_iter(|i| {
            let u = u_lo + (u_hi - u_lo) * i as f64 / GRID as f64;
            (0..=GRID).filter_map(move |j| {
                let s = s_hi * j as f64 / GRID as f64;
                feasible_free(u, s).then(|| (entropy(&FeasiblePoint::from_free(u, s)), u, s))
            })
        })
        .reduce_with(|a, b| if b.0 > a.0 { b } else { a })
        .ok_or_else(|| Error::Infeasible("empty grid".into()))?;
    let (mut f, mut u, mut s) = best;
    for _ in 0..100 {
        let (g, h) = grad_hess(u, s);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let du = -(h[1][1] * g[0] - h[0][1] * g[1]) / det;
        let ds = -(-h[1][0] * g[0] + h[0][0] * g[1]) / det;
        let mut step = 1.0;
        let mut moved = false;
        while step > 1e-12 {
            let (nu, ns) = (u + step * du, s + step * ds);
            if feasible_free(nu, ns) {
                let nf = entropy(&FeasiblePoint::from_free(nu, ns));
                if nf >= f {
                    (u, s, f) = (nu, ns, nf);
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !moved || (du.abs() + ds.abs()) * step < 1e-16 {
            break;
        }
    }
    let x = FeasiblePoint::from_free(u, s);
    let value = phi_point(&x)?.exp();
    ExponentEstimate::at(Method::Numeric, value, x)
}

/// Projection of `∇(-Σ x ln x)` onto the null space of the two equality
/// constraints, in an orthonormal basis of that space.
pub fn projected_gradient(x: &[f64; 4]) -> [f64; 2] {
    let basis = null_basis();
    let g: Vec<f64> = x.iter().map(|v| -(v.ln() + 1.0)).collect();
    basis.map(|b| b.iter().zip(&g).map(|(p, q)| p * q).sum())
}

/// The same projection by central differences with step `h`.
pub fn projected_gradient_fd(x: &[f64; 4], h: f64) -> [f64; 2] {
    null_basis().map(|b| {
        let shift = |sign: f64| {
            let y: [f64; 4] = std::array::from_fn(|i| x[i] + sign * h * b[i]);
            entropy(&y)
        };
        (shift(1.0) - shift(-1.0)) / (2.0 * h)
    })
}

/// Orthonormal basis of `{v : Σ v_i = 0, v_1 - v_3 - 2 v_4 = 0}`.
fn null_basis() -> [[f64; 4]; 2] {
    let a = [1.0, -2.0, 1.0, 0.0];
    let b = [2.0, -3.0, 0.0, 1.0];
    let dot = |p: &[f64; 4], q: &[f64; 4]| p.iter().zip(q).map(|(x, y)| x * y).sum::<f64>();
    let na = dot(&a, &a).sqrt();
    let e1 = a.map(|v| v / na);
    let proj = dot(&b, &e1);
    let c: [f64; 4] = std::array::from_fn(|i| b[i] - proj * e1[i]);
    let nc = dot(&c, &c).sqrt();
    [e1, c.map(|v| v / nc)]
}

/// Facts about the printed constant.
#[derive(Clone, Debug, Serialize)]
pub struct Erratum {
    pub note: &'static str,
    pub printed_beta4: f64,
    pub printed_cubic_residual: f64,
    pub true_root: Dd,
    pub beta2: f64,
    pub inverse_exponent: f64,
    pub printed_equals_beta2: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichCheck {
    pub n: usize,
    pub b_weight0: f64,
    pub a_upper: f64,
    pub inside_with_slack: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentReport {
    pub canonical: ExponentEstimate,
    pub estimates: Vec<ExponentEstimate>,
    pub max_disagreement: f64,
    pub erratum: Erratum,
    pub facets: FacetSweep,
    pub sandwich: Option<SandwichCheck>,
    pub distance_to_3: f64,
    pub distance_to_4: f64,
}

pub fn estimate(method: Method) -> Result<ExponentEstimate> {
    match method {
        Method::Cubic => cubic_estimate(),
        Method::Lagrange => lagrange_estimate(),
        Method::Numeric => numeric_maximize(),
    }
}

pub fn erratum() -> Erratum {
    let root = solve_cubic();
    let beta = beta_point(root.to_f64()).expect("root lies in T");
    let inv = 1.0
        / lagrange_estimate()
            .expect("stationary point lies in T")
            .value
            .to_f64();
    Erratum {
        note: ERRATUM_NOTE,
        printed_beta4: PRINTED_BETA4,
        printed_cubic_residual: cubic_f64(PRINTED_BETA4).abs(),
        true_root: root,
        beta2: beta.x[1],
        inverse_exponent: inv,
        printed_equals_beta2: (PRINTED_BETA4 - beta.x[1]).abs() < 1e-9
            && (PRINTED_BETA4 - inv).abs() < 1e-9,
    }
}

/// Runs all three methods, requires pairwise agreement within `tol`, and
/// compares with the sandwich row at `sandwich_n` (if any) with `1e-3`
/// slack. The stationary-point value is canonical.
pub fn exp_estimate(tol: f64, sandwich_n: Option<usize>) -> Result<ExponentReport> {
    let estimates: Vec<ExponentEstimate> = Method::ALL
        .iter()
        .map(|&m| estimate(m))
        .collect::<Result<_>>()?;
    let mut max_disagreement: f64 = 0.0;
    for a in &estimates {
        for b in &estimates {
            max_disagreement = max_disagreement.max((a.value - b.value).abs().to_f64());
        }
    }
    if max_disagreement > tol {
        let vals: Vec<String> = estimates
            .iter()
            .map(|e| format!("{} = {:.15}", e.method, e.value.to_f64()))
            .collect();
        return Err(Error::MethodDisagreement(vals.join(", ")));
    }
    let canonical = estimates[1].clone();
    let v = canonical.value.to_f64();
    let sandwich = match sandwich_n {
        Some(n) => {
            let row = sandwich(n)?;
            let (b, a) = (row.b_weight0.value(), row.a_upper.value());
            Some(SandwichCheck {
                n,
                b_weight0: b,
                a_upper: a,
                inside_with_slack: v >= b - 1e-3 && v <= a + 1e-3,
            })
        }
        None => None,
    };
    Ok(ExponentReport {
        canonical,
        estimates,
        max_disagreement,
        erratum: erratum(),
        facets: facet_sweep(),
        sandwich,
        distance_to_3: v - 3.0,
        distance_to_4: 4.0 - v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root() {
        let r = solve_cubic();
        assert!((0.1196..=0.1197).contains(&r.to_f64()));
        assert!((r.to_f64() - 0.119_655_073).abs() < 1e-9);
        assert!(cubic_residual(r) < 1e-25);
        assert_eq!(cubic_sign_changes(0.3, 1.0, 10_000), 0);
        assert_eq!(cubic_sign_changes(0.11, 0.13, 1000), 1);
        assert!(cubic_f64(PRINTED_BETA4).abs() > 1e-3);
    }

    #[test]
    fn beta_chain() {
        let x = beta_point(solve_cubic().to_f64()).unwrap().x;
        let expect = [0.421_351, 0.276_953, 0.182_041, 0.119_655];
        for (a, b) in x.iter().zip(expect) {
            assert!((a - b).abs() < 1e-6, "{x:?}");
        }
        assert!((x[0] - x[2] - 2.0 * x[3]).abs() < 1e-10);
        let err = beta_point(0.3).unwrap_err().to_string();
        assert!(err.contains("sum"), "{err}");
        assert!(beta_point(0.6).is_err());
    }

    #[test]
    fn lagrange_point() {
        let t = lagrange_ratio();
        assert!((t.to_f64() - 1.521_379_707).abs() < 1e-9);
        let e = lagrange_estimate().unwrap();
        assert!((e.value.to_f64() - 3.610_718_6).abs() < 1e-7);
        let x = e.point.x;
        assert!(x[0] > x[1] && x[1] > x[2] && x[2] > x[3]);
        let phi = phi_point(&x).unwrap().exp();
        assert!((phi - e.value).abs().to_f64() < 1e-12);
        assert!((1.0 / x[1] - e.value.to_f64()).abs() < 1e-9);
    }

    #[test]
    fn methods_agree() {
        let r = exp_estimate(1e-8, None).unwrap();
        assert!(r.max_disagreement < 1e-10, "{}", r.max_disagreement);
        assert!((r.canonical.value.to_f64() - PRINTED_EXPONENT).abs() <= 5e-9);
        assert!(r.erratum.printed_equals_beta2);
        assert!(r.facets.max() < r.canonical.value.to_f64());
        assert!(r.distance_to_3 >= 0.38 && r.distance_to_4 >= 0.38);
    }

    #[test]
    fn numeric_point_is_stationary() {
        let n = numeric_maximize().unwrap();
        let l = lagrange_estimate().unwrap();
        for (a, b) in n.point.x.iter().zip(l.point.x) {
            assert!((a - b).abs() < 1e-6);
        }
        let g = projected_gradient(&n.point.x);
        assert!(g[0].hypot(g[1]) < 1e-8);
    }
}
