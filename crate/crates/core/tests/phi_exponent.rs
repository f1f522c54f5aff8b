//! Φ on partitions and on the simplex, the maximizer over the feasible
//! region, and the b ≤ a sandwich.

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pi_codim::exponent::{
    estimate, exp_estimate, projected_gradient, projected_gradient_fd, FeasiblePoint, Method,
};
use pi_codim::partition::Partition;
use pi_codim::phi::{a_upper, phi_partition, phi_point, push_downs, sandwich, weight};

fn partition_strategy() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..60, 1..5).prop_map(Partition::from_unsorted)
}

fn feasible(rng: &mut impl Rng) -> [f64; 4] {
    loop {
        let x =
            FeasiblePoint::from_free(rng.gen_range(0.0..1.0 / 3.0), rng.gen_range(0.0..1.0 / 6.0));
        if FeasiblePoint::new(x, 1e-12).is_ok() && x[3] > 0.0 {
            return x;
        }
    }
}

proptest! {
    #[test]
    fn point_and_partition_agree(l in partition_strategy()) {
        let n = l.n() as f64;
        let x: Vec<f64> = l.parts().iter().map(|&p| p as f64 / n).collect();
        let a = phi_partition(&l).unwrap().ln_f64();
        let b = phi_point(&x).unwrap().ln_f64();
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn push_down_never_lowers_phi(l in partition_strategy()) {
        let base = phi_partition(&l).unwrap().ln;
        for (_, _, mu) in push_downs(&l) {
            prop_assert!(phi_partition(&mu).unwrap().ln >= base - 1e-25);
        }
    }

    #[test]
    fn weight_formula(l in partition_strategy()) {
        let p = l.parts();
        let get = |i: usize| p.get(i).copied().unwrap_or(0) as i64;
        prop_assert_eq!(weight(&l), -get(0) + get(2) + 2 * get(3));
    }

    #[test]
    fn hook_degree_sits_between_phi_powers(l in prop::collection::vec(25usize..60, 4).prop_map(Partition::from_unsorted)) {
        let n = l.n();
        // Φ^n / n^20 ≤ deg ≤ n Φ^n compared in logs with a wide margin
        let lp = phi_partition(&l).unwrap().ln_f64() * n as f64;
        let deg = l.hook_degree();
        let ld = deg.bits() as f64 * std::f64::consts::LN_2 - 1.0;
        prop_assert!(ld <= lp + (n as f64).ln() + 1.0);
        prop_assert!(ld + 2.0 >= lp - 20.0 * (n as f64).ln());
        prop_assert!(deg > BigUint::from(0u32));
    }
}

#[test]
fn random_feasible_points_stay_below_the_maximum() {
    let top = estimate(Method::Lagrange).unwrap().value.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100_000 {
        let x = feasible(&mut rng);
        assert!(phi_point(&x).unwrap().value() <= top + 1e-12, "{x:?}");
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let x = feasible(&mut rng);
        if x.iter().any(|&v| v < 1e-3) {
            continue;
        }
        let g = projected_gradient(&x);
        let f = projected_gradient_fd(&x, 1e-6);
        for k in 0..2 {
            assert!((g[k] - f[k]).abs() < 1e-5, "{x:?}: {g:?} vs {f:?}");
        }
    }
    let best = estimate(Method::Lagrange).unwrap().point.x;
    let g = projected_gradient(&best);
    assert!(g[0].hypot(g[1]) <= 1e-8, "{g:?}");
}

#[test]
fn methods_agree_and_match_the_printed_value() {
    let rep = exp_estimate(1e-8, None).unwrap();
    assert!(rep.max_disagreement < 1e-8);
    assert!((rep.canonical.value.to_f64() - 3.610718614).abs() <= 5e-9);
    assert!(rep.erratum.printed_equals_beta2);
    let root = rep.erratum.true_root.to_f64();
    assert!((0.1196..=0.1197).contains(&root));
    assert!(rep.facets.max() < rep.canonical.value.to_f64());
}

#[test]
fn sandwich_is_ordered_on_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ns: Vec<usize> = (6..60).collect();
    ns.extend((0..40).map(|_| rng.gen_range(60..=10_000)));
    ns.push(10_000);
    for n in ns {
        let row = sandwich(n).unwrap();
        assert!(row.b_weight0.ln <= row.a_upper.ln, "n = {n}");
        assert!(!row.fallback);
        assert_eq!(a_upper(n).unwrap().1, row.argmax_a);
    }
    let six = sandwich(6).unwrap();
    assert!((six.b_weight0.value() - 12f64.sqrt()).abs() < 1e-12);
}
