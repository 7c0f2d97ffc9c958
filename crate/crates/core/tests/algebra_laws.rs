use num_bigint::BigUint;
use proptest::prelude::*;

use mvmodal::algebra::{BinOp, ChainAlgebra, Element, GenPower, Rational};

fn chains() -> Vec<ChainAlgebra> {
    vec![
        ChainAlgebra::mv(1).unwrap(),
        ChainAlgebra::mv(4).unwrap(),
        ChainAlgebra::mv(9).unwrap(),
        ChainAlgebra::Lukasiewicz,
        ChainAlgebra::Godel,
        ChainAlgebra::Product,
        ChainAlgebra::product_one_gen(Rational::new(2.into(), 3.into())).unwrap(),
    ]
}

fn element(alg: &ChainAlgebra, seed: (u32, u32, bool)) -> Element {
    let (num, den, bottom) = seed;
    match alg {
        ChainAlgebra::Mv(n) => Element::Index(u64::from(num) % (n + 1)),
        ChainAlgebra::ProductOneGen(_) if bottom => Element::Gen(GenPower::Bottom),
        ChainAlgebra::ProductOneGen(_) => Element::Gen(GenPower::Exp(BigUint::from(num % 50))),
        _ => {
            let den = den % 500 + 1;
            Element::Value(Rational::new((num % (den + 1)).into(), den.into()))
        }
    }
}

fn seed() -> impl Strategy<Value = (u32, u32, bool)> {
    (any::<u32>(), any::<u32>(), prop::bool::weighted(0.1))
}

fn op(alg: &ChainAlgebra, o: BinOp, a: &Element, b: &Element) -> Element {
    alg.apply_binop(o, a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn residuation_monoid_and_linearity(i in 0usize..7, a in seed(), b in seed(), c in seed()) {
        let alg = &chains()[i];
        let (a, b, c) = (element(alg, a), element(alg, b), element(alg, c));
        let ab = op(alg, BinOp::Fuse, &a, &b);
        let residual = op(alg, BinOp::Impl, &b, &c);
        prop_assert_eq!(alg.compare(&ab, &c).is_le(), alg.compare(&a, &residual).is_le());
        prop_assert_eq!(&ab, &op(alg, BinOp::Fuse, &b, &a));
        prop_assert_eq!(
            op(alg, BinOp::Fuse, &ab, &c),
            op(alg, BinOp::Fuse, &a, &op(alg, BinOp::Fuse, &b, &c))
        );
        prop_assert_eq!(op(alg, BinOp::Fuse, &a, &alg.one()), a.clone());
        prop_assert_eq!(op(alg, BinOp::Fuse, &a, &alg.zero()), alg.zero());
        let meet = op(alg, BinOp::Meet, &a, &b);
        prop_assert!(meet == a || meet == b);
        let join = op(alg, BinOp::Join, &a, &b);
        prop_assert!(join == a || join == b);
        prop_assert!(alg.contains(&ab) && alg.contains(&residual));
    }

    #[test]
    fn powers_decrease(i in 0usize..7, a in seed(), m in 0u32..40) {
        let alg = &chains()[i];
        let a = element(alg, a);
        let lo = alg.power(&a, &BigUint::from(m + 1));
        let hi = alg.power(&a, &BigUint::from(m));
        prop_assert!(alg.compare(&lo, &hi).is_le());
    }
}

#[test]
fn mv_n_is_exactly_n_contractive() {
    for n in 1..=8u64 {
        let alg = ChainAlgebra::mv(n).unwrap();
        assert!(alg.is_n_contractive(&BigUint::from(n)), "MV_{n}");
        if n >= 2 {
            assert!(!alg.is_n_contractive(&BigUint::from(n - 1)), "MV_{n}");
            let a = Element::Index(n - 1);
            assert_ne!(alg.power(&a, &BigUint::from(n - 1)), alg.power(&a, &BigUint::from(n)));
        }
    }
}
