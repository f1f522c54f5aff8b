//! Young tableaux, their row and column groups, and the symmetrizer
//! `e_T = R(T) C(T)` acting on multilinear polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::monomial::MultilinearPoly;
use crate::partition::Partition;
use crate::perm::Perm;

/// A filling of a Young diagram by `0..n` (variable `x_{i+1}` is index `i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let n = shape.n();
        let mut seen = vec![false; n];
        for &v in rows.iter().flatten() {
            if v >= n || seen[v] {
                return Err(Error::InvalidPartition(format!(
                    "tableau entries must be a bijection onto 0..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Tableau { shape, rows })
    }

    /// Fills the diagram row by row with `0, 1, ..`.
    pub fn canonical(shape: &Partition) -> Self {
        let mut next = 0;
        let rows = shape
            .parts()
            .iter()
            .map(|&len| {
                let r: Vec<usize> = (next..next + len).collect();
                next += len;
                r
            })
            .collect();
        Tableau {
            shape: shape.clone(),
            rows,
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        (0..self.shape.part(0))
            .map(|j| {
                self.rows
                    .iter()
                    .take_while(|r| r.len() > j)
                    .map(|r| r[j])
                    .collect()
            })
            .collect()
    }

    /// Permutations stabilizing every row.
    pub fn row_group(&self) -> Vec<Perm> {
        block_group(self.n(), &self.rows)
    }

    /// Permutations stabilizing every column.
    pub fn column_group(&self) -> Vec<Perm> {
        block_group(self.n(), &self.columns())
    }

    /// `e_T = Σ_{r ∈ R, c ∈ C} sgn(c) r c` in the group algebra.
    pub fn symmetrizer(&self) -> GroupAlgebraElem {
        let r = GroupAlgebraElem::sum(self.row_group().into_iter().map(|p| (p, 1)));
        let c = GroupAlgebraElem::sum(self.column_group().into_iter().map(|p| {
            let s = p.sign();
            (p, s)
        }));
        r.mul(&c)
    }
}

/// Direct product of the symmetric groups on each block.
fn block_group(n: usize, blocks: &[Vec<usize>]) -> Vec<Perm> {
    let mut out = vec![Perm::identity(n)];
    for block in blocks.iter().filter(|b| b.len() > 1) {
        let mut next = Vec::new();
        for base in &out {
            for p in Perm::all(block.len()) {
                let mut img = base.images().to_vec();
                for (k, &v) in block.iter().enumerate() {
                    img[v] = block[p.apply(k)];
                }
                next.push(Perm::from_images(img).expect("block permutation"));
            }
        }
        out = next;
    }
    out
}

/// Applies `e_T` to `f`: column alternation first, then row symmetrization.
pub fn apply_symmetrizer(t: &Tableau, f: &MultilinearPoly) -> Result<MultilinearPoly> {
    if let Some(d) = f.degree() {
        if d != t.n() {
            return Err(Error::DimensionMismatch {
                expected: t.n(),
                found: d,
            });
        }
    }
    let mut alternated = MultilinearPoly::zero();
    for c in t.column_group() {
        let s = BigRational::from_integer(BigInt::from(c.sign()));
        alternated = alternated.add(&f.act(&c).scale(&s));
    }
    let mut out = MultilinearPoly::zero();
    for r in t.row_group() {
        out = out.add(&alternated.act(&r));
    }
    Ok(out)
}

/// An element of the integral group algebra of `S_n`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupAlgebraElem {
    terms: BTreeMap<Perm, i64>,
}

impl GroupAlgebraElem {
    pub fn sum(items: impl IntoIterator<Item = (Perm, i64)>) -> Self {
        let mut e = GroupAlgebraElem::default();
        for (p, c) in items {
            e.add_term(p, c);
        }
        e
    }

    fn add_term(&mut self, p: Perm, c: i64) {
        let v = self.terms.entry(p.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Perm, i64> {
        &self.terms
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = GroupAlgebraElem::default();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p.compose(q), a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        GroupAlgebraElem::sum(self.terms.iter().map(|(p, v)| (p.clone(), v * c)))
    }

    /// `Some(α)` when `self² = α·self`.
    pub fn quasi_idempotent_factor(&self) -> Option<i64> {
        let sq = self.mul(self);
        let (p, c) = self.terms.iter().next()?;
        let sc = *sq.terms.get(p).unwrap_or(&0);
        if sc % c != 0 {
            return None;
        }
        let alpha = sc / c;
        (sq == self.scale(alpha)).then_some(alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.terms.values().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;

    fn poly(s: &str) -> MultilinearPoly {
        MultilinearPoly::monomial(Monomial::parse(s).unwrap())
    }

    #[test]
    fn one_row_and_one_column() {
        let row = Tableau::new(vec![vec![0, 1]]).unwrap();
        assert_eq!(
            apply_symmetrizer(&row, &poly("x1x2")).unwrap().to_string(),
            "x1x2 + x2x1"
        );
        let col = Tableau::new(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(
            apply_symmetrizer(&col, &poly("x1x2")).unwrap().to_string(),
            "x1x2 - x2x1"
        );
        assert!(apply_symmetrizer(&col, &poly("x1x2x3")).is_err());
    }

    #[test]
    fn quasi_idempotent_with_hook_product() {
        for parts in [
            vec![2, 1],
            vec![3, 1],
            vec![2, 2],
            vec![2, 1, 1],
            vec![4],
            vec![1, 1, 1],
        ] {
            let shape = Partition::new(parts).unwrap();
            let t = Tableau::canonical(&shape);
            let alpha = t
                .symmetrizer()
                .quasi_idempotent_factor()
                .expect("quasi-idempotent");
            let hooks: usize = shape.hook_lengths().into_iter().flatten().product();
            assert_eq!(alpha as usize, hooks, "{shape}");
            let deg: BigUint = shape.hook_degree();
            assert_eq!(
                alpha as u64 * deg.to_u64().unwrap(),
                (1..=shape.n() as u64).product::<u64>()
            );
        }
    }

    #[test]
    fn rejects_bad_filling() {
        assert!(Tableau::new(vec![vec![0, 0]]).is_err());
        assert!(Tableau::new(vec![vec![0], vec![1, 2]]).is_err());
    }
}
