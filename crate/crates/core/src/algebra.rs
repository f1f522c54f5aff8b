//! Finite-dimensional algebras given by structure constants.
//!
//! An [`AlgebraSpec`] is the exact, field-independent description of an
//! algebra: a basis, a sparse multiplication table with rational structure
//! constants, an optional integer grading and an optional unit candidate. To
//! compute with it, compile it over a field with [`AlgebraSpec::over`], which
//! yields an [`Algebra`] whose elements are [`Element`] vectors of that field.
//!
//! The concrete four-dimensional algebra `W` with basis
//! `e_{-1}, e_0, e_1, e_2` (indices `0..4`) is produced by [`build_w`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Field, Rationals};
use crate::linalg::EchelonBasis;

/// Index of `e_{-1}` in `W`.
pub const E_M1: usize = 0;
/// Index of `e_0`, the unit of `W`.
pub const E_0: usize = 1;
/// Index of `e_1` in `W`.
pub const E_1: usize = 2;
/// Index of `e_2` in `W`.
pub const E_2: usize = 3;

/// A sparse list of `(basis index, coefficient)` pairs.
pub type SparseVec = Vec<(usize, BigRational)>;

/// An algebra described by exact structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    dim: usize,
    basis_labels: Vec<String>,
    /// `table[i][j]` lists the nonzero coefficients of `e_i e_j`, sorted by
    /// basis index.
    table: Vec<Vec<SparseVec>>,
    grades: Option<Vec<i64>>,
    unit_index: Option<usize>,
}

impl AlgebraSpec {
    /// Builds a spec, validating table shape and index ranges.
    pub fn new(
        basis_labels: Vec<String>,
        table: Vec<Vec<SparseVec>>,
        grades: Option<Vec<i64>>,
        unit_index: Option<usize>,
    ) -> Result<Self> {
        let dim = basis_labels.len();
        if dim == 0 {
            return Err(schema(
                "basis",
                "an algebra needs at least one basis element",
            ));
        }
        if table.len() != dim {
            return Err(schema(
                "table",
                &format!("expected {dim} rows, found {}", table.len()),
            ));
        }
        let mut clean = Vec::with_capacity(dim);
        for (i, row) in table.into_iter().enumerate() {
            if row.len() != dim {
                return Err(schema(
                    &format!("table[{i}]"),
                    &format!("expected {dim} entries, found {}", row.len()),
                ));
            }
            let mut clean_row = Vec::with_capacity(dim);
            for (j, entry) in row.into_iter().enumerate() {
                let mut dense = vec![BigRational::zero(); dim];
                for (k, c) in entry {
                    if k >= dim {
                        return Err(schema(
                            &format!("table[{i}][{j}]"),
                            &format!("basis index {k} out of range 0..{dim}"),
                        ));
                    }
                    dense[k] += c;
                }
                clean_row.push(sparsify(&dense));
            }
            clean.push(clean_row);
        }
        if let Some(g) = &grades {
            if g.len() != dim {
                return Err(schema(
                    "grades",
                    &format!("expected {dim} grades, found {}", g.len()),
                ));
            }
        }
        if let Some(u) = unit_index {
            if u >= dim {
                return Err(schema("unit", &format!("index {u} out of range 0..{dim}")));
            }
        }
        Ok(AlgebraSpec {
            dim,
            basis_labels,
            table: clean,
            grades,
            unit_index,
        })
    }

    /// The algebra with all products zero.
    pub fn zero_algebra(dim: usize) -> Self {
        let labels = (0..dim).map(|i| format!("b{i}")).collect();
        let table = vec![vec![Vec::new(); dim]; dim];
        AlgebraSpec::new(labels, table, None, None).expect("valid shape")
    }

    /// The one-dimensional algebra `F` with `1 * 1 = 1`.
    pub fn ground_field() -> Self {
        let table = vec![vec![vec![(0, BigRational::one())]]];
        AlgebraSpec::new(vec!["1".into()], table, Some(vec![0]), Some(0)).expect("valid shape")
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &AlgebraSpec) -> AlgebraSpec {
        let d = self.dim + other.dim;
        let mut labels: Vec<String> = self.basis_labels.iter().map(|l| format!("{l}'")).collect();
        labels.extend(other.basis_labels.iter().map(|l| format!("{l}''")));
        let mut table = vec![vec![Vec::new(); d]; d];
        for i in 0..self.dim {
            for j in 0..self.dim {
                table[i][j] = self.table[i][j].clone();
            }
        }
        let off = self.dim;
        for i in 0..other.dim {
            for j in 0..other.dim {
                table[off + i][off + j] = other.table[i][j]
                    .iter()
                    .map(|(k, c)| (k + off, c.clone()))
                    .collect();
            }
        }
        let grades = match (&self.grades, &other.grades) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        AlgebraSpec::new(labels, table, grades, None).expect("valid shape")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn grades(&self) -> Option<&[i64]> {
        self.grades.as_deref()
    }

    pub fn unit_index(&self) -> Option<usize> {
        self.unit_index
    }

    /// Nonzero structure constants of `e_i e_j`.
    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    /// Replaces the product `e_i e_j`. Used to build variants of an algebra.
    pub fn set_product(&mut self, i: usize, j: usize, value: SparseVec) {
        let mut dense = vec![BigRational::zero(); self.dim];
        for (k, c) in value {
            dense[k] += c;
        }
        self.table[i][j] = sparsify(&dense);
    }

    /// Compiles the structure constants over `field`.
    pub fn over<F: Field>(&self, field: F) -> Result<Algebra<F>> {
        let d = self.dim;
        let mut table = Vec::with_capacity(d * d);
        for row in &self.table {
            for entry in row {
                let mut out = Vec::with_capacity(entry.len());
                for (k, c) in entry {
                    let v = field.from_rational(c)?;
                    if !field.is_zero(&v) {
                        out.push((*k, v));
                    }
                }
                table.push(out);
            }
        }
        Ok(Algebra {
            field,
            dim: d,
            table,
        })
    }

    /// The algebra over the rationals.
    pub fn rational(&self) -> Algebra<Rationals> {
        self.over(Rationals)
            .expect("rationals accept every structure constant")
    }

    /// `true` when every structure constant is zero.
    pub fn is_zero_product(&self) -> bool {
        self.table.iter().flatten().all(|e| e.is_empty())
    }

    /// Canonical JSON serialization (compact, fixed key order).
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    /// Pretty JSON serialization with the same content as [`Self::to_json`].
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    /// Parses the JSON algebra-spec format.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Schema {
            path: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        file.into_spec()
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            dim: self.dim,
            basis: self.basis_labels.clone(),
            grades: self.grades.clone(),
            unit: self.unit_index,
            table: self
                .table
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| e.iter().map(|(k, c)| (*k, format_rational(c))).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

fn schema(path: &str, message: &str) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.to_string(),
    }
}

fn sparsify(dense: &[BigRational]) -> SparseVec {
    dense
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

/// On-disk representation of an [`AlgebraSpec`].
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    dim: usize,
    basis: Vec<String>,
    grades: Option<Vec<i64>>,
    unit: Option<usize>,
    table: Vec<Vec<Vec<(usize, String)>>>,
}

impl AlgebraFile {
    fn into_spec(self) -> Result<AlgebraSpec> {
        if self.basis.len() != self.dim {
            return Err(schema(
                "basis",
                &format!("dim is {} but {} labels given", self.dim, self.basis.len()),
            ));
        }
        let mut table = Vec::with_capacity(self.table.len());
        for (i, row) in self.table.into_iter().enumerate() {
            let mut out_row = Vec::with_capacity(row.len());
            for (j, entry) in row.into_iter().enumerate() {
                let mut out = Vec::with_capacity(entry.len());
                for (pos, (k, c)) in entry.into_iter().enumerate() {
                    let q = parse_rational(&c)
                        .map_err(|e| schema(&format!("table[{i}][{j}][{pos}]"), &e.to_string()))?;
                    out.push((k, q));
                }
                out_row.push(out);
            }
            table.push(out_row);
        }
        AlgebraSpec::new(self.basis, table, self.grades, self.unit)
    }
}

/// A vector of coordinates with respect to an algebra's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element<E> {
    pub coeffs: Vec<E>,
}

impl<E: Clone> Element<E> {
    pub fn new(coeffs: Vec<E>) -> Self {
        Element { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }
}

impl Element<BigRational> {
    /// Rational element from integer coordinates.
    pub fn from_ints(v: &[i64]) -> Self {
        Element::new(
            v.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    /// Linear combination such as `-e_0 + 1/2 e_1`, or `0`.
    pub fn format_with(&self, labels: &[String]) -> String {
        let mut out = String::new();
        for (c, l) in self.coeffs.iter().zip(labels) {
            if c.is_zero() {
                continue;
            }
            let neg = c < &BigRational::zero();
            let a = if neg { -c } else { c.clone() };
            out.push_str(match (out.is_empty(), neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            });
            if !a.is_one() {
                out.push_str(&if a.is_integer() {
                    a.to_integer().to_string()
                } else {
                    a.to_string()
                });
                out.push(' ');
            }
            out.push_str(l);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// An algebra compiled over a concrete field.
#[derive(Clone, Debug)]
pub struct Algebra<F: Field> {
    field: F,
    dim: usize,
    /// Row-major `d x d` products, each a sparse coefficient list.
    table: Vec<Vec<(usize, F::Elem)>>,
}

impl<F: Field> Algebra<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sparse product of two basis elements.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, F::Elem)] {
        &self.table[i * self.dim + j]
    }

    pub fn zero(&self) -> Element<F::Elem> {
        Element::new(vec![self.field.zero(); self.dim])
    }

    pub fn basis(&self, i: usize) -> Element<F::Elem> {
        let mut e = self.zero();
        e.coeffs[i] = self.field.one();
        e
    }

    pub fn is_zero(&self, x: &Element<F::Elem>) -> bool {
        x.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    pub fn add(&self, x: &Element<F::Elem>, y: &Element<F::Elem>) -> Element<F::Elem> {
        Element::new(
            x.coeffs
                .iter()
                .zip(&y.coeffs)
                .map(|(a, b)| self.field.add(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, c: &F::Elem, x: &Element<F::Elem>) -> Element<F::Elem> {
        Element::new(x.coeffs.iter().map(|a| self.field.mul(c, a)).collect())
    }

    /// `acc += c * x`, in place.
    pub fn add_scaled(&self, acc: &mut Element<F::Elem>, c: &F::Elem, x: &Element<F::Elem>) {
        for (a, b) in acc.coeffs.iter_mut().zip(&x.coeffs) {
            if !self.field.is_zero(b) {
                *a = self.field.add(a, &self.field.mul(c, b));
            }
        }
    }

    /// Bilinear product, checking both operand sizes.
    pub fn multiply(&self, x: &Element<F::Elem>, y: &Element<F::Elem>) -> Result<Element<F::Elem>> {
        for v in [x, y] {
            if v.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.dim(),
                });
            }
        }
        Ok(self.mul(x, y))
    }

    /// Bilinear product; operands must already have the right size.
    pub fn mul(&self, x: &Element<F::Elem>, y: &Element<F::Elem>) -> Element<F::Elem> {
        let f = &self.field;
        let mut out = self.zero();
        for (i, a) in x.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if f.is_zero(b) {
                    continue;
                }
                let ab = f.mul(a, b);
                for (k, c) in &self.table[i * self.dim + j] {
                    out.coeffs[*k] = f.add(&out.coeffs[*k], &f.mul(&ab, c));
                }
            }
        }
        out
    }

    /// `true` iff `u b = b u = b` for every basis element `b`.
    pub fn check_unit(&self, u: &Element<F::Elem>) -> bool {
        if u.dim() != self.dim {
            return false;
        }
        (0..self.dim).all(|i| {
            let b = self.basis(i);
            self.mul(u, &b) == b && self.mul(&b, u) == b
        })
    }

    /// `true` iff each product `e_i e_j` lies in the span of basis elements of
    /// grade `grades[i] + grades[j]`.
    pub fn check_grading(&self, grades: &[i64]) -> bool {
        if grades.len() != self.dim {
            return false;
        }
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                self.basis_product(i, j)
                    .iter()
                    .all(|(k, _)| grades[*k] == grades[i] + grades[j])
            })
        })
    }

    /// Matrix of left multiplication by `e_i`, row-major, column `j` holding
    /// the coordinates of `e_i e_j`.
    fn left_operator(&self, i: usize) -> Vec<F::Elem> {
        let d = self.dim;
        let mut m = vec![self.field.zero(); d * d];
        for j in 0..d {
            for (k, c) in self.basis_product(i, j) {
                m[k * d + j] = c.clone();
            }
        }
        m
    }

    fn right_operator(&self, i: usize) -> Vec<F::Elem> {
        let d = self.dim;
        let mut m = vec![self.field.zero(); d * d];
        for j in 0..d {
            for (k, c) in self.basis_product(j, i) {
                m[k * d + j] = c.clone();
            }
        }
        m
    }

    /// Dimension of the unital multiplication algebra: the span of all words
    /// in left and right multiplication operators (the empty word included).
    pub fn multiplication_algebra_dim(&self) -> usize {
        let d = self.dim;
        let f = &self.field;
        let gens: Vec<Vec<F::Elem>> = (0..d)
            .map(|i| self.left_operator(i))
            .chain((0..d).map(|i| self.right_operator(i)))
            .collect();
        let mut identity = vec![f.zero(); d * d];
        for i in 0..d {
            identity[i * d + i] = f.one();
        }
        let mut span = EchelonBasis::new(f.clone(), d * d);
        span.insert(identity.clone());
        let mut queue = vec![identity];
        while let Some(m) = queue.pop() {
            if span.rank() == d * d {
                break;
            }
            for g in &gens {
                let prod = mat_mul(f, g, &m, d);
                if span.insert(prod.clone()) {
                    queue.push(prod);
                }
            }
        }
        span.rank()
    }
}

impl Algebra<Rationals> {
    /// Certifies simplicity: `A^2 != 0` and the multiplication algebra is all
    /// of `End(A)`, so `A` is an irreducible module over it.
    pub fn check_simple(&self) -> bool {
        let any_product = self.table.iter().any(|e| !e.is_empty());
        any_product && self.multiplication_algebra_dim() == self.dim * self.dim
    }
}

fn mat_mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], d: usize) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); d * d];
    for i in 0..d {
        for k in 0..d {
            let x = &a[i * d + k];
            if f.is_zero(x) {
                continue;
            }
            for j in 0..d {
                let y = &b[k * d + j];
                if !f.is_zero(y) {
                    out[i * d + j] = f.add(&out[i * d + j], &f.mul(x, y));
                }
            }
        }
    }
    out
}

/// Grade of the `W` basis element with index `i`.
pub fn w_grade(i: usize) -> i64 {
    i as i64 - 1
}

/// The four-dimensional simple algebra `W`.
///
/// Basis `e_{-1}, e_0, e_1, e_2` in that order, grading `(-1, 0, 1, 2)` and
/// unit `e_0`. Products: `e_0` acts as the identity on both sides; for
/// nonzero grades `i, j` the product `e_i e_j` is `e_{i+j}` when `i <= j` and
/// `-1 <= i + j <= 2`, and zero otherwise.
pub fn build_w() -> AlgebraSpec {
    let mut table = vec![vec![Vec::new(); 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            let (i, j) = (w_grade(a), w_grade(b));
            let vanishes = i != 0 && j != 0 && (i > j || i + j < -1 || i + j > 2);
            if !vanishes {
                table[a][b] = vec![((i + j + 1) as usize, BigRational::one())];
            }
        }
    }
    let labels = ["e-1", "e0", "e1", "e2"].map(String::from).to_vec();
    AlgebraSpec::new(labels, table, Some(vec![-1, 0, 1, 2]), Some(E_0)).expect("valid shape")
}
