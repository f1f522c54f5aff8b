//! Expressions with alternated and symmetrized leaf classes.
//!
//! Leaves of an [`AltExpr`] carry a payload (an algebra element or a
//! variable) and optionally an alternation class and a symmetrization class.
//! The expression stands for the sum over all ways of permuting the payloads
//! inside every class, weighted by the product of the signs of the
//! alternation permutations. Marking leaves `x̄ ȳ` in one alternation class
//! gives `xy - yx`; two classes interleaved as `ā₁ b̃₁ ā₂ b̃₂` give four signed
//! terms.
//!
//! [`AltExpr::expand`] performs the full expansion. [`AltExpr::evaluate`]
//! computes the value in an algebra without expanding: a class is permuted at
//! the lowest node containing all of its leaves, and subtree values are
//! memoized per assignment of the classes that cross the subtree boundary.
//! Products of independently alternated factors therefore cost the sum, not
//! the product, of their expansions.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Bracketing, Monomial, MultilinearPoly};
use crate::perm::Perm;

/// Name of an alternation or symmetrization class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassTag(pub u32);

/// A leaf with its class memberships.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltLeaf<P> {
    pub payload: P,
    pub alt: Option<ClassTag>,
    pub sym: Option<ClassTag>,
}

/// A product tree whose leaves may belong to alternation/symmetrization
/// classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AltExpr<P> {
    Leaf(AltLeaf<P>),
    Mul(Box<AltExpr<P>>, Box<AltExpr<P>>),
}

/// A plain product tree, one term of an expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree<P> {
    Leaf(P),
    Mul(Box<Tree<P>>, Box<Tree<P>>),
}

impl<P> Tree<P> {
    pub fn leaves(&self) -> Vec<&P> {
        let mut out = Vec::new();
        fn go<'a, P>(t: &'a Tree<P>, out: &mut Vec<&'a P>) {
            match t {
                Tree::Leaf(p) => out.push(p),
                Tree::Mul(l, r) => {
                    go(l, out);
                    go(r, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn shape(&self) -> Bracketing {
        match self {
            Tree::Leaf(_) => Bracketing::Leaf,
            Tree::Mul(l, r) => Bracketing::Node(Arc::new(l.shape()), Arc::new(r.shape())),
        }
    }
}

impl<E: Clone> Tree<Element<E>> {
    /// Recursive product of the leaf elements.
    pub fn evaluate_in<F: Field<Elem = E>>(&self, alg: &Algebra<F>) -> Element<E> {
        match self {
            Tree::Leaf(e) => e.clone(),
            Tree::Mul(l, r) => alg.mul(&l.evaluate_in(alg), &r.evaluate_in(alg)),
        }
    }
}

impl<P: Clone> AltExpr<P> {
    /// A leaf outside every class.
    pub fn leaf(payload: P) -> Self {
        AltExpr::Leaf(AltLeaf {
            payload,
            alt: None,
            sym: None,
        })
    }

    /// A leaf in alternation class `tag`.
    pub fn alt(payload: P, tag: u32) -> Self {
        AltExpr::Leaf(AltLeaf {
            payload,
            alt: Some(ClassTag(tag)),
            sym: None,
        })
    }

    /// A leaf in symmetrization class `tag`.
    pub fn sym(payload: P, tag: u32) -> Self {
        AltExpr::Leaf(AltLeaf {
            payload,
            alt: None,
            sym: Some(ClassTag(tag)),
        })
    }

    pub fn mul(a: AltExpr<P>, b: AltExpr<P>) -> Self {
        AltExpr::Mul(Box::new(a), Box::new(b))
    }

    /// Left-normed product of the factors; `None` for an empty list.
    pub fn product<I: IntoIterator<Item = AltExpr<P>>>(factors: I) -> Option<Self> {
        factors.into_iter().reduce(AltExpr::mul)
    }

    pub fn leaves(&self) -> Vec<&AltLeaf<P>> {
        let mut out = Vec::new();
        fn go<'a, P>(e: &'a AltExpr<P>, out: &mut Vec<&'a AltLeaf<P>>) {
            match e {
                AltExpr::Leaf(l) => out.push(l),
                AltExpr::Mul(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn leaves_mut(&mut self) -> Vec<&mut AltLeaf<P>> {
        let mut out = Vec::new();
        fn go<'a, P>(e: &'a mut AltExpr<P>, out: &mut Vec<&'a mut AltLeaf<P>>) {
            match e {
                AltExpr::Leaf(l) => out.push(l),
                AltExpr::Mul(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// Shifts every class tag by `offset`, so that copies of one expression
    /// can be combined without sharing classes.
    pub fn retag(mut self, offset: u32) -> Self {
        for leaf in self.leaves_mut() {
            if let Some(t) = &mut leaf.alt {
                t.0 += offset;
            }
            if let Some(t) = &mut leaf.sym {
                t.0 += offset;
            }
        }
        self
    }

    /// Largest class tag in use, if any.
    pub fn max_tag(&self) -> Option<u32> {
        self.leaves()
            .iter()
            .flat_map(|l| [l.alt, l.sym])
            .flatten()
            .map(|t| t.0)
            .max()
    }

    pub fn map_payloads<Q: Clone>(&self, f: &mut impl FnMut(&P) -> Q) -> AltExpr<Q> {
        match self {
            AltExpr::Leaf(l) => AltExpr::Leaf(AltLeaf {
                payload: f(&l.payload),
                alt: l.alt,
                sym: l.sym,
            }),
            AltExpr::Mul(a, b) => AltExpr::mul(a.map_payloads(f), b.map_payloads(f)),
        }
    }

    fn rebuild(&self, payloads: &mut impl Iterator<Item = P>) -> Tree<P> {
        match self {
            AltExpr::Leaf(_) => Tree::Leaf(payloads.next().expect("one payload per leaf")),
            AltExpr::Mul(a, b) => {
                let l = a.rebuild(payloads);
                let r = b.rebuild(payloads);
                Tree::Mul(Box::new(l), Box::new(r))
            }
        }
    }

    /// Full expansion into signed plain trees.
    ///
    /// Leaf `i` of a term receives the payload of leaf `S(A(i))`, where `A`
    /// permutes leaves inside alternation classes (contributing its sign) and
    /// `S` permutes leaves inside symmetrization classes.
    pub fn expand(&self) -> Vec<(i64, Tree<P>)> {
        let leaves = self.leaves();
        let payloads: Vec<P> = leaves.iter().map(|l| l.payload.clone()).collect();
        let alt_classes = classes(leaves.iter().map(|l| l.alt));
        let sym_classes = classes(leaves.iter().map(|l| l.sym));
        let n = leaves.len();
        let mut out = Vec::new();
        for (alt_sign, alt_map) in class_maps(n, &alt_classes) {
            for (_, sym_map) in class_maps(n, &sym_classes) {
                let mut it = (0..n).map(|i| payloads[sym_map[alt_map[i]]].clone());
                out.push((alt_sign, self.rebuild(&mut it)));
            }
        }
        out
    }
}

impl AltExpr<usize> {
    /// Expands an expression over distinct variables into a multilinear
    /// polynomial.
    pub fn to_poly(&self) -> Result<MultilinearPoly> {
        let mut poly = MultilinearPoly::zero();
        for (sign, tree) in self.expand() {
            let labels: Vec<usize> = tree.leaves().into_iter().copied().collect();
            let m = Monomial::new(Arc::new(tree.shape()), labels)?;
            poly.add_term(m, BigRational::from_integer(BigInt::from(sign)));
        }
        Ok(poly)
    }
}

/// Groups leaf indices by tag, in order of first appearance of the tag.
fn classes(tags: impl Iterator<Item = Option<ClassTag>>) -> Vec<Vec<usize>> {
    let mut by_tag: BTreeMap<ClassTag, Vec<usize>> = BTreeMap::new();
    for (i, t) in tags.enumerate() {
        if let Some(t) = t {
            by_tag.entry(t).or_default().push(i);
        }
    }
    by_tag.into_values().collect()
}

/// Every leaf map obtained by permuting inside each class, with its sign.
fn class_maps(n: usize, classes: &[Vec<usize>]) -> Vec<(i64, Vec<usize>)> {
    let mut out = vec![(1i64, (0..n).collect::<Vec<usize>>())];
    for class in classes {
        if class.len() < 2 {
            continue;
        }
        let mut next = Vec::new();
        for (sign, map) in &out {
            for p in Perm::all(class.len()) {
                let mut m = map.clone();
                for (k, &leaf) in class.iter().enumerate() {
                    m[leaf] = class[p.apply(k)];
                }
                next.push((sign * p.sign(), m));
            }
        }
        out = next;
    }
    out
}

const FREE: u8 = u8::MAX;

struct Node {
    children: Option<(usize, usize)>,
    first_leaf: usize,
    leaf_count: usize,
}

/// Group of leaves permuted together: member leaves in order, and whether
/// permutations carry their sign.
struct Group {
    leaves: Vec<usize>,
    signed: bool,
}

struct LazyEval<'a, F: Field> {
    alg: &'a Algebra<F>,
    nodes: Vec<Node>,
    payloads: Vec<Element<F::Elem>>,
    groups: Vec<Group>,
    leaf_group: Vec<Option<usize>>,
    /// Groups to permute at each node (those whose leaves first meet there).
    spanning: Vec<Vec<usize>>,
    memo: HashMap<(usize, Vec<u8>), Element<F::Elem>>,
}

impl<'a, F: Field> LazyEval<'a, F> {
    fn new(alg: &'a Algebra<F>, expr: &AltExpr<Element<F::Elem>>) -> Option<Self> {
        let leaves = expr.leaves();
        if leaves.iter().any(|l| l.alt.is_some() && l.sym.is_some()) {
            return None;
        }
        let payloads = leaves.iter().map(|l| l.payload.clone()).collect();
        let mut groups = Vec::new();
        let mut leaf_group = vec![None; leaves.len()];
        for (signed, cls) in [
            (true, classes(leaves.iter().map(|l| l.alt))),
            (false, classes(leaves.iter().map(|l| l.sym))),
        ] {
            for c in cls {
                if c.len() > usize::from(FREE) {
                    return None;
                }
                if c.len() > 1 {
                    for &leaf in &c {
                        leaf_group[leaf] = Some(groups.len());
                    }
                    groups.push(Group { leaves: c, signed });
                }
            }
        }
        let mut nodes = Vec::new();
        fn build<P>(e: &AltExpr<P>, nodes: &mut Vec<Node>, next_leaf: &mut usize) -> usize {
            let first_leaf = *next_leaf;
            let children = match e {
                AltExpr::Leaf(_) => {
                    *next_leaf += 1;
                    None
                }
                AltExpr::Mul(a, b) => {
                    let l = build(a, nodes, next_leaf);
                    let r = build(b, nodes, next_leaf);
                    Some((l, r))
                }
            };
            nodes.push(Node {
                children,
                first_leaf,
                leaf_count: *next_leaf - first_leaf,
            });
            nodes.len() - 1
        }
        let mut next_leaf = 0;
        build(expr, &mut nodes, &mut next_leaf);
        // Post-order numbering: a group is assigned to the first node, in
        // post-order, whose range covers it; that is the deepest such node.
        let mut spanning = vec![Vec::new(); nodes.len()];
        for (g, group) in groups.iter().enumerate() {
            let lo = group.leaves[0];
            let hi = *group.leaves.last().expect("nonempty");
            let at = nodes
                .iter()
                .position(|n| n.first_leaf <= lo && hi < n.first_leaf + n.leaf_count)
                .expect("root covers every leaf");
            spanning[at].push(g);
        }
        Some(LazyEval {
            alg,
            nodes,
            payloads,
            groups,
            leaf_group,
            spanning,
            memo: HashMap::new(),
        })
    }

    fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// `ctx[i]` fixes the payload of the node's `i`-th leaf to the
    /// `ctx[i]`-th member payload of that leaf's group, or is `FREE`.
    fn value(&mut self, node: usize, ctx: Vec<u8>) -> Element<F::Elem> {
        if let Some(v) = self.memo.get(&(node, ctx.clone())) {
            return v.clone();
        }
        let info = &self.nodes[node];
        let first = info.first_leaf;
        let result = match info.children {
            None => {
                let leaf = first;
                match (ctx[0], self.leaf_group[leaf]) {
                    (FREE, _) | (_, None) => self.payloads[leaf].clone(),
                    (k, Some(g)) => self.payloads[self.groups[g].leaves[usize::from(k)]].clone(),
                }
            }
            Some((l, r)) => {
                let split = self.nodes[l].leaf_count;
                let span = self.spanning[node].clone();
                let mut acc = self.alg.zero();
                let field = self.alg.field().clone();
                let mut assignments: Vec<(i64, Vec<u8>)> = vec![(1, ctx.clone())];
                for g in span {
                    let members = self.groups[g].leaves.clone();
                    let signed = self.groups[g].signed;
                    let mut next = Vec::new();
                    for (sign, c) in &assignments {
                        for p in Perm::all(members.len()) {
                            let mut c2 = c.clone();
                            for (k, &leaf) in members.iter().enumerate() {
                                c2[leaf - first] = p.apply(k) as u8;
                            }
                            let s = if signed { sign * p.sign() } else { *sign };
                            next.push((s, c2));
                        }
                    }
                    assignments = next;
                }
                for (sign, c) in assignments {
                    let left = self.value(l, c[..split].to_vec());
                    if self.alg.is_zero(&left) {
                        continue;
                    }
                    let right = self.value(r, c[split..].to_vec());
                    let prod = self.alg.mul(&left, &right);
                    let coef = field.from_i64(sign);
                    self.alg.add_scaled(&mut acc, &coef, &prod);
                }
                acc
            }
        };
        self.memo.insert((node, ctx), result.clone());
        result
    }
}

impl<E: Clone> AltExpr<Element<E>> {
    /// Value of the alternated/symmetrized expression in `alg`.
    pub fn evaluate<F: Field<Elem = E>>(&self, alg: &Algebra<F>) -> Result<Element<E>> {
        if let Some(bad) = self.leaves().iter().find(|l| l.payload.dim() != alg.dim()) {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: bad.payload.dim(),
            });
        }
        match LazyEval::new(alg, self) {
            Some(mut lazy) => {
                let root = lazy.root();
                let ctx = vec![FREE; lazy.payloads.len()];
                Ok(lazy.value(root, ctx))
            }
            None => Ok(self.evaluate_expanded(alg)),
        }
    }

    /// Value computed from the full expansion; exponential in class sizes.
    pub fn evaluate_expanded<F: Field<Elem = E>>(&self, alg: &Algebra<F>) -> Element<E> {
        let mut acc = alg.zero();
        for (sign, tree) in self.expand() {
            let v = tree.evaluate_in(alg);
            alg.add_scaled(&mut acc, &alg.field().from_i64(sign), &v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_w, E_0, E_1, E_2, E_M1};
    use crate::field::Rationals;

    type Expr = AltExpr<usize>;

    fn render(e: &Expr) -> String {
        e.to_poly().unwrap().to_string()
    }

    #[test]
    fn two_variable_alternation() {
        let e = Expr::mul(Expr::alt(0, 1), Expr::alt(1, 1));
        assert_eq!(render(&e), "x1x2 - x2x1");
        let single = Expr::alt(0, 7);
        assert_eq!(render(&single), "x1");
    }

    #[test]
    fn interleaved_classes() {
        // ā1 b̃1 ā2 b̃2 with a1 = x1, a2 = x3, b1 = x2, b2 = x4.
        let e = Expr::product([
            Expr::alt(0, 1),
            Expr::alt(1, 2),
            Expr::alt(2, 1),
            Expr::alt(3, 2),
        ])
        .unwrap();
        let terms: Vec<(i64, Vec<usize>)> = e
            .expand()
            .into_iter()
            .map(|(s, t)| (s, t.leaves().into_iter().copied().collect()))
            .collect();
        assert_eq!(terms.len(), 4);
        let expect = [
            (1, vec![0, 1, 2, 3]),
            (-1, vec![0, 3, 2, 1]),
            (-1, vec![2, 1, 0, 3]),
            (1, vec![2, 3, 0, 1]),
        ];
        for t in expect {
            assert!(terms.contains(&t), "{t:?} missing from {terms:?}");
        }
    }

    #[test]
    fn repeated_payload_classes() {
        // (x̄ x̄̄)(ȳ ȳ̄) = (xx)(yy) - (yx)(xy) - (xy)(yx) + (yy)(xx).
        let e = Expr::mul(
            Expr::mul(Expr::alt(0, 1), Expr::alt(0, 2)),
            Expr::mul(Expr::alt(1, 1), Expr::alt(1, 2)),
        );
        let mut terms: Vec<(i64, Vec<usize>)> = e
            .expand()
            .into_iter()
            .map(|(s, t)| (s, t.leaves().into_iter().copied().collect()))
            .collect();
        terms.sort();
        assert_eq!(
            terms,
            vec![
                (-1, vec![0, 1, 1, 0]),
                (-1, vec![1, 0, 0, 1]),
                (1, vec![0, 0, 1, 1]),
                (1, vec![1, 1, 0, 0]),
            ]
        );
    }

    #[test]
    fn symmetrization_is_unsigned() {
        let e = Expr::mul(Expr::sym(0, 1), Expr::sym(1, 1));
        assert_eq!(render(&e), "x1x2 + x2x1");
    }

    #[test]
    fn alternation_on_w() {
        let w = build_w().rational();
        let e = |i| w.basis(i);
        // x̄ ȳ at (e_{-1}, e_1) = e_{-1}e_1 - e_1 e_{-1} = e_0.
        let xy = AltExpr::mul(AltExpr::alt(e(E_M1), 1), AltExpr::alt(e(E_1), 1));
        assert_eq!(xy.evaluate(&w).unwrap(), e(E_0));
        // ē_{-1}(ē_1 ē_2) = 0.
        let z = AltExpr::mul(
            AltExpr::alt(e(E_M1), 1),
            AltExpr::mul(AltExpr::alt(e(E_1), 1), AltExpr::alt(e(E_2), 1)),
        );
        assert!(w.is_zero(&z.evaluate(&w).unwrap()));
        assert!(w.is_zero(&z.evaluate_expanded(&w)));
        let lone = AltExpr::alt(e(E_2), 3);
        assert_eq!(lone.evaluate(&w).unwrap(), e(E_2));
    }

    #[test]
    fn lazy_matches_expansion_on_mixed_classes() {
        let w = build_w().rational();
        let e = |i| w.basis(i);
        let sum = w.add(&e(E_M1), &e(E_0));
        let expr = AltExpr::product([
            AltExpr::mul(AltExpr::alt(e(E_M1), 1), AltExpr::sym(sum.clone(), 2)),
            AltExpr::mul(AltExpr::alt(e(E_1), 1), AltExpr::sym(e(E_0), 2)),
            AltExpr::alt(e(E_0), 1),
            AltExpr::leaf(sum),
        ])
        .unwrap();
        assert_eq!(expr.evaluate(&w).unwrap(), expr.evaluate_expanded(&w));
        let mut both = expr.clone();
        both.leaves_mut()[0].sym = Some(ClassTag(9));
        both.leaves_mut()[2].sym = Some(ClassTag(9));
        assert_eq!(both.evaluate(&w).unwrap(), both.evaluate_expanded(&w));
    }

    #[test]
    fn dimension_checked() {
        let w = build_w().rational();
        let bad = AltExpr::leaf(Element::from_ints(&[1, 0]));
        assert!(bad.evaluate(&w).is_err());
        let _ = Rationals;
    }
}
