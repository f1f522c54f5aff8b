//! Codimensions of W against an independent dense rational rank and against
//! the character route.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use pi_codim::algebra::{build_w, AlgebraSpec};
use pi_codim::cocharacter::{cocharacter, colength_bound};
use pi_codim::codim::{codim, Budget, CodimOptions, SketchMode};
use pi_codim::field::DEFAULT_PRIMES;
use pi_codim::partition::Partition;

/// Product trees on the leaves `vars`, in every order and bracketing.
#[derive(Clone)]
enum T {
    Var(usize),
    Mul(Box<T>, Box<T>),
}

fn trees(vars: &[usize]) -> Vec<T> {
    if vars.len() == 1 {
        return vec![T::Var(vars[0])];
    }
    let mut out = Vec::new();
    // every ordered split into two nonempty subsets
    let k = vars.len();
    for mask in 1..(1u32 << k) - 1 {
        let left: Vec<usize> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| vars[i])
            .collect();
        let right: Vec<usize> = (0..k)
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| vars[i])
            .collect();
        for a in trees(&left) {
            for b in trees(&right) {
                out.push(T::Mul(Box::new(a.clone()), Box::new(b)));
            }
        }
    }
    out
}

fn eval(spec: &AlgebraSpec, t: &T, basis_of: &[usize]) -> Vec<BigRational> {
    let d = spec.dim();
    match t {
        T::Var(i) => {
            let mut v = vec![BigRational::zero(); d];
            v[basis_of[*i]] = BigRational::one();
            v
        }
        T::Mul(a, b) => {
            let (x, y) = (eval(spec, a, basis_of), eval(spec, b, basis_of));
            let mut out = vec![BigRational::zero(); d];
            for i in 0..d {
                if x[i].is_zero() {
                    continue;
                }
                for j in 0..d {
                    if y[j].is_zero() {
                        continue;
                    }
                    for (k, c) in spec.product(i, j) {
                        out[*k] += &x[i] * &y[j] * c;
                    }
                }
            }
            out
        }
    }
}

fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let f = &rows[r][c] / &pivot[c];
            for (x, y) in rows[r].iter_mut().zip(&pivot).skip(c) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the monomial-by-(tuple, coordinate) evaluation matrix over Q.
fn brute_codim(spec: &AlgebraSpec, n: usize) -> usize {
    let d = spec.dim();
    let vars: Vec<usize> = (0..n).collect();
    let tuples: Vec<Vec<usize>> = (0..d.pow(n as u32))
        .map(|mut t| {
            (0..n)
                .map(|_| {
                    let b = t % d;
                    t /= d;
                    b
                })
                .collect()
        })
        .collect();
    let rows = trees(&vars)
        .iter()
        .map(|t| tuples.iter().flat_map(|tup| eval(spec, t, tup)).collect())
        .collect();
    rational_rank(rows)
}

#[test]
fn tree_count_is_factorial_times_catalan() {
    assert_eq!(trees(&[0, 1, 2, 3]).len(), 24 * 5);
}

#[test]
fn modular_rank_matches_rational_rank() {
    let w = build_w();
    for n in 1..=4 {
        let r = codim(&w, n, &DEFAULT_PRIMES, &CodimOptions::default()).unwrap();
        assert!(r.consensus());
        assert_eq!(r.c_n, brute_codim(&w, n), "n = {n}");
    }
}

#[test]
fn known_values_of_w() {
    let w = build_w();
    let got: Vec<usize> = (1..=5)
        .map(|n| {
            codim(&w, n, &DEFAULT_PRIMES, &CodimOptions::default())
                .unwrap()
                .c_n
        })
        .collect();
    assert_eq!(got, [1, 2, 11, 65, 311]);
}

#[test]
fn sketched_rank_agrees() {
    let w = build_w();
    let opts = CodimOptions {
        sketch: SketchMode::Force,
        ..CodimOptions::default()
    };
    assert_eq!(codim(&w, 4, &DEFAULT_PRIMES, &opts).unwrap().c_n, 65);
}

#[test]
fn character_route_matches_rank() {
    let w = build_w();
    for n in 1..=5 {
        let c = cocharacter(&w, n, &DEFAULT_PRIMES, &Budget::default()).unwrap();
        let total: BigUint = c
            .multiplicities
            .iter()
            .map(|(l, m)| l.hook_degree() * BigUint::from(*m))
            .sum();
        let rank = codim(&w, n, &DEFAULT_PRIMES, &CodimOptions::default())
            .unwrap()
            .c_n;
        assert_eq!(total, BigUint::from(rank), "n = {n}");
        assert_eq!(c.dimension(), total);
        assert!(BigUint::from(c.colength()) <= colength_bound(4, n));
        assert!(c.necessary_violations().is_empty());
        assert!(c.sufficient_violations().is_empty());
        for l in c.multiplicities.keys() {
            assert!(l.len() <= 4);
        }
    }
}

#[test]
fn cocharacter_at_four() {
    let c = cocharacter(&build_w(), 4, &DEFAULT_PRIMES, &Budget::default()).unwrap();
    let m = |s: &str| c.multiplicity(&Partition::parse(s).unwrap());
    assert_eq!(
        [m("4"), m("3,1"), m("2,2"), m("2,1,1"), m("1,1,1,1")],
        [5, 11, 6, 5, 0]
    );
    assert_eq!(c.colength(), 27);
}

#[test]
fn small_algebras() {
    let k = AlgebraSpec::ground_field();
    for n in 1..=4 {
        assert_eq!(
            codim(&k, n, &DEFAULT_PRIMES, &CodimOptions::default())
                .unwrap()
                .c_n,
            1
        );
    }
    let z = AlgebraSpec::zero_algebra(3);
    assert_eq!(
        codim(&z, 1, &DEFAULT_PRIMES, &CodimOptions::default())
            .unwrap()
            .c_n,
        1
    );
    assert_eq!(
        codim(&z, 3, &DEFAULT_PRIMES, &CodimOptions::default())
            .unwrap()
            .c_n,
        0
    );
    let sum = build_w().direct_sum(&k);
    for n in 2..=3 {
        let r = codim(&sum, n, &DEFAULT_PRIMES, &CodimOptions::default())
            .unwrap()
            .c_n;
        assert_eq!(r, brute_codim(&sum, n));
    }
}
