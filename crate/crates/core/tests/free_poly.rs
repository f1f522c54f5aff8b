//! Properties of products, multilinear monomials and alternating sums on W.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use pi_codim::algebra::{build_w, Algebra, Element};
use pi_codim::altexpr::AltExpr;
use pi_codim::field::Rationals;
use pi_codim::monomial::{enumerate_monomials, MultilinearPoly};
use pi_codim::perm::Perm;

fn w() -> Algebra<Rationals> {
    build_w().rational()
}

fn elem() -> impl Strategy<Value = Element<BigRational>> {
    prop::collection::vec(-5i64..=5, 4).prop_map(|v| Element::from_ints(&v))
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_bilinear(x in elem(), y in elem(), z in elem(), a in -4i64..=4, b in -4i64..=4) {
        let alg = w();
        let mut ay_bz = alg.scale(&rat(a), &y);
        alg.add_scaled(&mut ay_bz, &rat(b), &z);
        let mut rhs = alg.scale(&rat(a), &alg.mul(&x, &y));
        alg.add_scaled(&mut rhs, &rat(b), &alg.mul(&x, &z));
        prop_assert_eq!(alg.mul(&x, &ay_bz), rhs);

        let mut ax_bz = alg.scale(&rat(a), &x);
        alg.add_scaled(&mut ax_bz, &rat(b), &z);
        let mut rhs = alg.scale(&rat(a), &alg.mul(&x, &y));
        alg.add_scaled(&mut rhs, &rat(b), &alg.mul(&z, &y));
        prop_assert_eq!(alg.mul(&ax_bz, &y), rhs);
    }

    #[test]
    fn monomials_are_multilinear(
        idx in 0usize..120,
        slot in 0usize..4,
        xs in prop::collection::vec(elem(), 4),
        y in elem(),
        c in -3i64..=3,
    ) {
        let alg = w();
        let m = &enumerate_monomials(4).unwrap()[idx];
        let base = m.evaluate(&alg, &xs).unwrap();
        let mut ys = xs.clone();
        ys[slot] = y.clone();
        let other = m.evaluate(&alg, &ys).unwrap();
        let mut zs = xs.clone();
        zs[slot] = alg.add(&xs[slot], &alg.scale(&rat(c), &y));
        let mut want = base;
        alg.add_scaled(&mut want, &rat(c), &other);
        prop_assert_eq!(m.evaluate(&alg, &zs).unwrap(), want);
    }

    #[test]
    fn action_permutes_arguments(
        idx in 0usize..120,
        images in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
        xs in prop::collection::vec(elem(), 4),
    ) {
        let alg = w();
        let m = &enumerate_monomials(4).unwrap()[idx];
        let sigma = Perm::from_images(images).unwrap();
        let permuted: Vec<_> = (0..4).map(|i| xs[sigma.apply(i)].clone()).collect();
        prop_assert_eq!(m.act(&sigma).evaluate(&alg, &xs).unwrap(), m.evaluate(&alg, &permuted).unwrap());

        let mut poly = MultilinearPoly::monomial(m.clone());
        poly.add_term(enumerate_monomials(4).unwrap()[(idx + 37) % 120].clone(), rat(-2));
        let tau = sigma.inverse();
        prop_assert_eq!(poly.act(&sigma).act(&tau), poly);
    }

    #[test]
    fn alternation_is_antisymmetric(xs in prop::collection::vec(elem(), 4), swap in 0usize..3) {
        let alg = w();
        let build = |v: &[Element<BigRational>]| {
            AltExpr::mul(
                AltExpr::mul(AltExpr::alt(v[0].clone(), 0), AltExpr::leaf(v[3].clone())),
                AltExpr::mul(AltExpr::alt(v[1].clone(), 0), AltExpr::alt(v[2].clone(), 0)),
            )
        };
        let e = build(&xs);
        let value = e.evaluate(&alg).unwrap();
        prop_assert_eq!(&value, &e.evaluate_expanded(&alg));
        let mut ys = xs.clone();
        ys.swap(swap, (swap + 1) % 3);
        let swapped = build(&ys).evaluate(&alg).unwrap();
        prop_assert_eq!(swapped, alg.scale(&rat(-1), &value));
    }
}
