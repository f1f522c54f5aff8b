//! Cocharacter of the multilinear quotient `P_n / (P_n ∩ Id(A))`.
//!
//! The quotient is isomorphic, as an `S_n`-module, to the row space of the
//! evaluation matrix, where `σ` permutes columns by `(τ, k) ↦ (τ∘σ, k)`. The
//! character at `σ` is the trace of that action on a reduced row basis,
//! computed modulo several primes and lifted to the symmetric range.
//! Multiplicities then follow from the orthogonality relations over `Q`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::AlgebraSpec;
use crate::characters::{class_size, CharacterTable};
use crate::codim::{image_basis, Budget};
use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};
use crate::perm::{factorial, Perm};
use crate::phi::{necessary_ok, sufficient_ok};

/// Values of a class function, one per cycle type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassFunction {
    pub n: usize,
    pub values: BTreeMap<Partition, i64>,
}

fn character_mod_p(spec: &AlgebraSpec, n: usize, p: u64, budget: &Budget) -> Result<ClassFunction> {
    let basis = image_basis(spec, n, p, budget)?;
    let half = p / 2;
    let values = partitions(n)
        .into_par_iter()
        .map(|mu| {
            let sigma = Perm::from_cycle_lengths(mu.parts());
            let trace = basis
                .pivots
                .iter()
                .zip(&basis.rows)
                .fold(0u64, |acc, (&piv, row)| {
                    (acc + row[basis.layout.act_column(piv, &sigma)]) % p
                });
            let lifted = if trace > half {
                trace as i64 - p as i64
            } else {
                trace as i64
            };
            (mu, lifted)
        })
        .collect();
    Ok(ClassFunction { n, values })
}

/// Character of the multilinear quotient of degree `n`, required to agree
/// across all `primes` (at least two, each above `n`).
pub fn quotient_character(
    spec: &AlgebraSpec,
    n: usize,
    primes: &[u64],
    budget: &Budget,
) -> Result<ClassFunction> {
    if n == 0 {
        return Err(Error::Precondition("degree must be positive".into()));
    }
    if primes.len() < 2 {
        return Err(Error::TooFewPrimes(primes.len()));
    }
    let runs: Vec<ClassFunction> = primes
        .iter()
        .map(|&p| character_mod_p(spec, n, p, budget))
        .collect::<Result<_>>()?;
    for (p, r) in primes.iter().zip(&runs).skip(1) {
        if r != &runs[0] {
            return Err(Error::PrimeDisagreement(format!(
                "character modulo {} differs from modulo {p}",
                primes[0]
            )));
        }
    }
    Ok(runs.into_iter().next().expect("at least two runs"))
}

/// Decomposition `χ_n(A) = Σ m_λ χ_λ`.
#[derive(Clone, Debug, Serialize)]
pub struct Cocharacter {
    pub n: usize,
    pub character: ClassFunction,
    /// Nonzero multiplicities only.
    pub multiplicities: BTreeMap<Partition, u64>,
}

impl Cocharacter {
    pub fn multiplicity(&self, lambda: &Partition) -> u64 {
        self.multiplicities.get(lambda).copied().unwrap_or(0)
    }

    /// `Σ m_λ`.
    pub fn colength(&self) -> u64 {
        self.multiplicities.values().sum()
    }

    /// `Σ m_λ deg χ_λ`, which equals `c_n(A)`.
    pub fn dimension(&self) -> BigUint {
        self.multiplicities
            .iter()
            .map(|(l, &m)| l.hook_degree() * m)
            .sum()
    }

    /// Partitions with `m_λ > 0` that break the necessary condition.
    pub fn necessary_violations(&self) -> Vec<Partition> {
        self.multiplicities
            .keys()
            .filter(|l| !necessary_ok(l))
            .cloned()
            .collect()
    }

    /// Partitions satisfying the sufficient condition with `m_λ = 0`.
    pub fn sufficient_violations(&self) -> Vec<Partition> {
        partitions(self.n)
            .into_iter()
            .filter(|l| sufficient_ok(l) && self.multiplicity(l) == 0)
            .collect()
    }
}

/// Multiplicities `m_λ = (1/n!) Σ_μ |C_μ| χ(μ) χ_λ(μ)` computed exactly.
pub fn decompose(character: &ClassFunction) -> Result<Cocharacter> {
    let n = character.n;
    let mut table = CharacterTable::new();
    let order = BigInt::from(factorial(n));
    let mut multiplicities = BTreeMap::new();
    for lambda in partitions(n) {
        let mut sum = BigInt::zero();
        for (mu, &chi) in &character.values {
            let irr = table.value(&lambda, mu)?;
            sum += BigInt::from(class_size(mu)) * chi * irr;
        }
        let (q, r) = sum.div_rem(&order);
        if !r.is_zero() || q.is_negative() {
            return Err(Error::BadMultiplicity {
                lambda: lambda.to_string(),
                value: format!("{sum}/{order}"),
            });
        }
        let m = q.to_u64().ok_or_else(|| Error::BadMultiplicity {
            lambda: lambda.to_string(),
            value: q.to_string(),
        })?;
        if m > 0 {
            multiplicities.insert(lambda, m);
        }
    }
    Ok(Cocharacter {
        n,
        character: character.clone(),
        multiplicities,
    })
}

/// Quotient character and its decomposition.
pub fn cocharacter(
    spec: &AlgebraSpec,
    n: usize,
    primes: &[u64],
    budget: &Budget,
) -> Result<Cocharacter> {
    decompose(&quotient_character(spec, n, primes, budget)?)
}

/// Upper bound `d (n+1)^{d²+d}` on the colength of a `d`-dimensional algebra.
pub fn colength_bound(d: usize, n: usize) -> BigUint {
    BigUint::from(d) * BigUint::from(n + 1).pow((d * d + d) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_w;
    use crate::field::DEFAULT_PRIMES;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn degree_two_of_w() {
        let c = cocharacter(&build_w(), 2, &DEFAULT_PRIMES, &Budget::default()).unwrap();
        let expect: BTreeMap<Partition, u64> =
            [(p(&[2]), 1), (p(&[1, 1]), 1)].into_iter().collect();
        assert_eq!(c.multiplicities, expect);
        assert_eq!(c.colength(), 2);
    }

    #[test]
    fn ground_field_is_trivial() {
        let k = AlgebraSpec::ground_field();
        for n in 1..=4 {
            let c = cocharacter(&k, n, &DEFAULT_PRIMES, &Budget::default()).unwrap();
            assert_eq!(c.multiplicities.len(), 1);
            assert_eq!(c.multiplicity(&p(&[n])), 1);
        }
    }

    #[test]
    fn multiplicities_must_be_integral() {
        let mut values = BTreeMap::new();
        values.insert(p(&[1, 1]), 1);
        values.insert(p(&[2]), 0);
        let err = decompose(&ClassFunction { n: 2, values }).unwrap_err();
        assert!(matches!(err, Error::BadMultiplicity { .. }));
    }

    #[test]
    fn colength_bound_values() {
        assert_eq!(colength_bound(4, 1), BigUint::from(4u32) << 20);
        assert_eq!(colength_bound(1, 2), BigUint::from(9u32));
    }
}
