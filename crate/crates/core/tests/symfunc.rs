//! Characters of S_n against the hook length formula and orthogonality.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use pi_codim::characters::{centralizer_order, character_table, class_size, mn_character};
use pi_codim::partition::{partitions, Partition};
use pi_codim::perm::{factorial, Perm};

fn identity_class(n: usize) -> Partition {
    Partition::new(vec![1; n]).unwrap()
}

#[test]
fn squared_degrees_sum_to_factorial() {
    for n in 1..=12 {
        let total: BigUint = partitions(n).iter().map(|l| l.hook_degree().pow(2)).sum();
        assert_eq!(total, BigUint::from(factorial(n)), "n = {n}");
    }
}

#[test]
fn class_sizes_sum_to_factorial() {
    for n in 1..=12 {
        let total: BigUint = partitions(n).iter().map(class_size).sum();
        assert_eq!(total, BigUint::from(factorial(n)));
    }
}

#[test]
fn orthogonality_up_to_seven() {
    for n in 1..=7 {
        let (parts, table) = character_table(n);
        let z: Vec<i64> = parts
            .iter()
            .map(|m| centralizer_order(m).to_i64().unwrap())
            .collect();
        let fact = factorial(n) as i64;
        for a in 0..parts.len() {
            for b in 0..parts.len() {
                // rows: Σ_μ χ_a(μ) χ_b(μ) n!/z_μ = n! δ
                let row: i64 = (0..parts.len())
                    .map(|k| table[a][k] * table[b][k] * (fact / z[k]))
                    .sum();
                assert_eq!(
                    row,
                    if a == b { fact } else { 0 },
                    "rows {} {}",
                    parts[a],
                    parts[b]
                );
                // columns: Σ_λ χ_λ(a) χ_λ(b) = z δ
                let col: i64 = (0..parts.len()).map(|k| table[k][a] * table[k][b]).sum();
                assert_eq!(col, if a == b { z[a] } else { 0 });
            }
        }
    }
}

#[test]
fn class_sizes_count_permutations() {
    for n in 1..=7 {
        let mut counts = std::collections::BTreeMap::new();
        for p in Perm::all(n) {
            *counts
                .entry(Partition::from_unsorted(p.cycle_type()))
                .or_insert(BigUint::zero()) += 1u32;
        }
        for (mu, c) in counts {
            assert_eq!(c, class_size(&mu));
        }
    }
}

fn partition_strategy() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..8, 1..6).prop_map(Partition::from_unsorted)
}

proptest! {
    #[test]
    fn degree_is_value_at_identity(l in partition_strategy()) {
        let n = l.n();
        let v = mn_character(&l, &identity_class(n)).unwrap();
        prop_assert_eq!(BigUint::from(v as u64), l.hook_degree());
        prop_assert_eq!(l.conjugate().hook_degree(), l.hook_degree());
    }

    #[test]
    fn conjugate_twists_by_sign(l in partition_strategy(), seed in 0usize..1000) {
        let parts = partitions(l.n());
        let mu = &parts[seed % parts.len()];
        let sign = if (mu.n() - mu.len()) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(mn_character(&l.conjugate(), mu).unwrap(), sign * mn_character(&l, mu).unwrap());
    }
}
