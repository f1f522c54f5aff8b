//! Multilinear monomials of the free nonassociative algebra.
//!
//! A monomial of degree `n` is a binary bracketing with `n` ordered leaves
//! together with a labeling that assigns the variables `x1..xn` to the leaves
//! bijectively. Monomials are enumerated bracketing-major (bracketings in a
//! fixed recursive order, largest left factor first) and, inside each
//! bracketing, by labeling in lexicographic order. That order fixes the row
//! order of every evaluation matrix.
//!
//! Text form uses explicit parentheses for every non-root product, e.g.
//! `(x1x2)x3` or `x1(x2x3)`. The parser also accepts unparenthesized runs and
//! reads them left-normed, so `x1x2x3` means `(x1x2)x3`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::perm::Perm;

/// A binary tree with ordered leaves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bracketing {
    Leaf,
    Node(Arc<Bracketing>, Arc<Bracketing>),
}

impl Bracketing {
    pub fn leaves(&self) -> usize {
        match self {
            Bracketing::Leaf => 1,
            Bracketing::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// Left-normed bracketing `((..(x x) x) .. x)` with `n` leaves.
    pub fn left_normed(n: usize) -> Bracketing {
        assert!(n >= 1);
        let mut b = Bracketing::Leaf;
        for _ in 1..n {
            b = Bracketing::Node(Arc::new(b), Arc::new(Bracketing::Leaf));
        }
        b
    }

    /// Evaluates the bracketing with `values[i]` at leaf `i`.
    pub fn evaluate<F: Field>(
        &self,
        alg: &Algebra<F>,
        values: &[&Element<F::Elem>],
    ) -> Element<F::Elem> {
        fn go<F: Field>(
            b: &Bracketing,
            alg: &Algebra<F>,
            values: &[&Element<F::Elem>],
            pos: &mut usize,
        ) -> Element<F::Elem> {
            match b {
                Bracketing::Leaf => {
                    *pos += 1;
                    values[*pos - 1].clone()
                }
                Bracketing::Node(l, r) => {
                    let x = go(l, alg, values, pos);
                    let y = go(r, alg, values, pos);
                    alg.mul(&x, &y)
                }
            }
        }
        let mut pos = 0;
        go(self, alg, values, &mut pos)
    }

    fn write_with(
        &self,
        f: &mut fmt::Formatter<'_>,
        leaf: &mut dyn FnMut(&mut fmt::Formatter<'_>) -> fmt::Result,
        root: bool,
    ) -> fmt::Result {
        match self {
            Bracketing::Leaf => leaf(f),
            Bracketing::Node(l, r) => {
                if !root {
                    write!(f, "(")?;
                }
                l.write_with(f, leaf, false)?;
                r.write_with(f, leaf, false)?;
                if !root {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &mut |f| write!(f, "x"), true)
    }
}

/// Catalan number `C_k` as `u128`.
pub fn catalan(k: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// All bracketings with `n` leaves, `Catalan(n-1)` of them.
///
/// Order: the left factor size runs from `n-1` down to `1`, recursively, so
/// the left-normed tree comes first.
pub fn enumerate_bracketings(n: usize) -> Result<Vec<Arc<Bracketing>>> {
    if n == 0 {
        return Err(Error::Precondition(
            "bracketings need at least one leaf".into(),
        ));
    }
    let mut table: Vec<Vec<Arc<Bracketing>>> = vec![Vec::new(), vec![Arc::new(Bracketing::Leaf)]];
    for size in 2..=n {
        let mut out = Vec::new();
        for left in (1..size).rev() {
            for l in &table[left] {
                for r in &table[size - left] {
                    out.push(Arc::new(Bracketing::Node(l.clone(), r.clone())));
                }
            }
        }
        table.push(out);
    }
    Ok(table.swap_remove(n))
}

/// A multilinear monomial: a bracketing plus a variable labeling of its
/// leaves. `labeling[i]` is the (zero-based) variable at leaf `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    bracketing: Arc<Bracketing>,
    labeling: Vec<usize>,
}

impl Monomial {
    pub fn new(bracketing: Arc<Bracketing>, labeling: Vec<usize>) -> Result<Self> {
        let n = bracketing.leaves();
        if labeling.len() != n || Perm::from_images(labeling.clone()).is_none() {
            return Err(Error::Precondition(format!(
                "labeling {labeling:?} is not a bijection onto 0..{n}"
            )));
        }
        Ok(Monomial {
            bracketing,
            labeling,
        })
    }

    /// The left-normed monomial `x1 x2 .. xn`.
    pub fn left_normed(n: usize) -> Self {
        Monomial {
            bracketing: Arc::new(Bracketing::left_normed(n)),
            labeling: (0..n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.labeling.len()
    }

    pub fn bracketing(&self) -> &Arc<Bracketing> {
        &self.bracketing
    }

    pub fn labeling(&self) -> &[usize] {
        &self.labeling
    }

    /// Substitution `x_i -> x_{σ(i)}`: the monomial `σ·m` with
    /// `(σ·m)(a) = m(a_{σ(1)}, .., a_{σ(n)})`.
    pub fn act(&self, sigma: &Perm) -> Monomial {
        Monomial {
            bracketing: self.bracketing.clone(),
            labeling: self.labeling.iter().map(|&v| sigma.apply(v)).collect(),
        }
    }

    /// Evaluates with variable `x_{i+1}` replaced by `assignment[i]`.
    pub fn evaluate<F: Field>(
        &self,
        alg: &Algebra<F>,
        assignment: &[Element<F::Elem>],
    ) -> Result<Element<F::Elem>> {
        if assignment.len() != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                found: assignment.len(),
            });
        }
        if let Some(bad) = assignment.iter().find(|e| e.dim() != alg.dim()) {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: bad.dim(),
            });
        }
        let leaves: Vec<&Element<F::Elem>> =
            self.labeling.iter().map(|&v| &assignment[v]).collect();
        Ok(self.bracketing.evaluate(alg, &leaves))
    }

    /// Parses the text form, e.g. `x2(x1x3)`.
    pub fn parse(text: &str) -> Result<Monomial> {
        let mut p = Parser {
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let (b, labels) = p.sequence()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!(
                "unexpected input at {} in {text:?}",
                p.pos
            )));
        }
        Monomial::new(Arc::new(b), labels)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut labels = self.labeling.iter();
        self.bracketing.write_with(
            f,
            &mut |f| write!(f, "x{}", labels.next().expect("one label per leaf") + 1),
            true,
        )
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn sequence(&mut self) -> Result<(Bracketing, Vec<usize>)> {
        let (mut acc, mut labels) = self.atom()?;
        while self.pos < self.chars.len() && self.chars[self.pos] != ')' {
            let (b, l) = self.atom()?;
            acc = Bracketing::Node(Arc::new(acc), Arc::new(b));
            labels.extend(l);
        }
        Ok((acc, labels))
    }

    fn atom(&mut self) -> Result<(Bracketing, Vec<usize>)> {
        match self.chars.get(self.pos) {
            Some('(') => {
                self.pos += 1;
                let inner = self.sequence()?;
                if self.chars.get(self.pos) != Some(&')') {
                    return Err(Error::Parse("unbalanced parenthesis".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('x') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let v: usize = digits
                    .parse()
                    .map_err(|_| Error::Parse("variable index expected after x".into()))?;
                if v == 0 {
                    return Err(Error::Parse("variables are numbered from x1".into()));
                }
                Ok((Bracketing::Leaf, vec![v - 1]))
            }
            other => Err(Error::Parse(format!(
                "unexpected {other:?} at {}",
                self.pos
            ))),
        }
    }
}

/// All `n!·Catalan(n-1)` multilinear monomials of degree `n`.
pub fn enumerate_monomials(n: usize) -> Result<Vec<Monomial>> {
    let brackets = enumerate_bracketings(n)?;
    let mut out = Vec::new();
    for b in brackets {
        for p in Perm::all(n) {
            out.push(Monomial {
                bracketing: b.clone(),
                labeling: p.images().to_vec(),
            });
        }
    }
    Ok(out)
}

/// `n!·Catalan(n-1)`, the dimension of the multilinear component `P_n`.
pub fn monomial_count(n: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    crate::perm::factorial(n) * catalan(n - 1)
}

/// A multilinear polynomial with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultilinearPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultilinearPoly {
    pub fn zero() -> Self {
        MultilinearPoly::default()
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut p = MultilinearPoly::zero();
        p.add_term(m, BigRational::one());
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn add(&self, other: &MultilinearPoly) -> MultilinearPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MultilinearPoly {
        let mut out = MultilinearPoly::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// The substitution action of `σ` on every monomial.
    pub fn act(&self, sigma: &Perm) -> MultilinearPoly {
        let mut out = MultilinearPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.act(sigma), c.clone());
        }
        out
    }

    /// Evaluates at an assignment over the rationals.
    pub fn evaluate(
        &self,
        alg: &Algebra<crate::field::Rationals>,
        assignment: &[Element<BigRational>],
    ) -> Result<Element<BigRational>> {
        let mut acc = alg.zero();
        for (m, c) in &self.terms {
            let v = m.evaluate(alg, assignment)?;
            alg.add_scaled(&mut acc, c, &v);
        }
        Ok(acc)
    }
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &BigRational::zero();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_w, E_0, E_1, E_2, E_M1};

    /// Catalan numbers by the convolution recurrence.
    fn catalan_oracle(k: usize) -> u128 {
        let mut c = vec![1u128];
        for m in 1..=k {
            c.push((0..m).map(|i| c[i] * c[m - 1 - i]).sum());
        }
        c[k]
    }

    #[test]
    fn bracketing_counts() {
        assert!(enumerate_bracketings(0).is_err());
        assert_eq!(enumerate_bracketings(1).unwrap().len(), 1);
        let three = enumerate_bracketings(3).unwrap();
        let shown: Vec<String> = three.iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, vec!["(xx)x", "x(xx)"]);
        assert_eq!(
            enumerate_bracketings(5).unwrap().len() as u128,
            catalan_oracle(4)
        );
        assert_eq!(catalan_oracle(4), 14);
        for n in 1..=9 {
            let all = enumerate_bracketings(n).unwrap();
            assert_eq!(all.len() as u128, catalan(n - 1));
            assert_eq!(catalan(n - 1), catalan_oracle(n - 1));
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), all.len());
        }
    }

    #[test]
    fn monomial_counts() {
        let two: Vec<String> = enumerate_monomials(2)
            .unwrap()
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(two, vec!["x1x2", "x2x1"]);
        assert_eq!(enumerate_monomials(3).unwrap().len(), 12);
        assert_eq!(enumerate_monomials(6).unwrap().len(), 30240);
        for n in 1..=8 {
            assert_eq!(
                monomial_count(n),
                crate::perm::factorial(n) * catalan_oracle(n - 1)
            );
        }
    }

    #[test]
    fn text_round_trip_and_left_normed_parse() {
        for m in enumerate_monomials(4).unwrap() {
            assert_eq!(Monomial::parse(&m.to_string()).unwrap(), m);
        }
        let ln = Monomial::parse("x1x2x3").unwrap();
        assert_eq!(ln, Monomial::parse("(x1x2)x3").unwrap());
        assert_eq!(ln, Monomial::left_normed(3));
        assert_eq!(
            Monomial::parse("x2(x1 x3)").unwrap().to_string(),
            "x2(x1x3)"
        );
        assert!(Monomial::parse("x1x1").is_err());
        assert!(Monomial::parse("(x1x2").is_err());
        assert!(Monomial::parse("x0").is_err());
    }

    #[test]
    fn evaluate_examples_on_w() {
        let w = build_w().rational();
        let e = |i| w.basis(i);
        let m = Monomial::parse("(x1x2)x3").unwrap();
        assert_eq!(m.evaluate(&w, &[e(E_M1), e(E_1), e(E_1)]).unwrap(), e(E_1));
        let m = Monomial::parse("x1(x2x3)").unwrap();
        assert!(w.is_zero(&m.evaluate(&w, &[e(E_M1), e(E_1), e(E_2)]).unwrap()));
        for m in enumerate_monomials(4).unwrap() {
            assert_eq!(m.evaluate(&w, &vec![e(E_0); 4]).unwrap(), e(E_0));
        }
        assert!(matches!(
            m.evaluate(&w, &[e(E_0)]),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 1
            })
        ));
    }

    #[test]
    fn action_matches_permuted_assignment() {
        let w = build_w().rational();
        let vals = [E_M1, E_0, E_1, E_2].map(|i| w.basis(i));
        for m in enumerate_monomials(4).unwrap().iter().step_by(7) {
            for sigma in Perm::all(4).step_by(5) {
                let lhs = m.act(&sigma).evaluate(&w, &vals).unwrap();
                let permuted: Vec<_> = (0..4).map(|i| vals[sigma.apply(i)].clone()).collect();
                let rhs = m.evaluate(&w, &permuted).unwrap();
                assert_eq!(lhs, rhs, "{m} under {sigma}");
            }
        }
    }

    #[test]
    fn polynomial_arithmetic() {
        let a = MultilinearPoly::monomial(Monomial::parse("x1x2").unwrap());
        let b = MultilinearPoly::monomial(Monomial::parse("x2x1").unwrap());
        let diff = a.add(&b.scale(&-BigRational::one()));
        assert_eq!(diff.to_string(), "x1x2 - x2x1");
        assert!(diff.add(&diff.scale(&-BigRational::one())).is_zero());
        let swap = Perm::from_images(vec![1, 0]).unwrap();
        assert_eq!(diff.act(&swap), diff.scale(&-BigRational::one()));
    }
}
