use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;

use mvmodal::algebra::Rational;
use mvmodal::lukdecide::{encode_milp, eval_prop, unfold, EncodingMode, MilpEncoding, PropSequent};
use mvmodal::syntax::{Formula, Sequent};

const VARS: [&str; 3] = ["x", "y", "z"];

fn arb_formula(modal: bool) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Zero),
        1 => Just(Formula::One),
        8 => prop::sample::select(&VARS[..]).prop_map(Formula::var),
    ];
    leaf.prop_recursive(4, 16, 2, move |inner| {
        let mut ops = vec![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::meet(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::join(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::fuse(a, b))
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::implies(a, b))
                .boxed(),
            inner.clone().prop_map(Formula::neg).boxed(),
            (inner.clone(), 0u32..4).prop_map(|(a, m)| Formula::power(a, m)).boxed(),
        ];
        if modal {
            ops.push(inner.clone().prop_map(Formula::boxed).boxed());
            ops.push(inner.clone().prop_map(Formula::diamond).boxed());
        }
        prop::strategy::Union::new(ops)
    })
    .boxed()
}

fn valuation(den: u32) -> impl Strategy<Value = BTreeMap<String, Rational>> {
    prop::collection::vec(0..=den, 3).prop_map(move |ks| {
        VARS.iter()
            .zip(ks)
            .map(|(x, k)| (x.to_string(), Rational::new(k.into(), den.into())))
            .collect()
    })
}

/// The child values at which the node's two linear pieces meet.
fn at_breakpoint(f: &Formula, v: &BTreeMap<String, Rational>) -> bool {
    let e = |g: &Formula| eval_prop(g, v);
    match f {
        Formula::Meet(a, b) | Formula::Join(a, b) | Formula::Impl(a, b) => e(a) == e(b),
        Formula::Fuse(a, b) => (e(a) + e(b)).is_one(),
        Formula::Power(a, m) => {
            let m = Rational::from_integer(m.clone().into());
            (&m * e(a) - (m - Rational::one())).is_zero()
        }
        _ => false,
    }
}

fn check_faithful(enc: &MilpEncoding, f: &Formula, v: &BTreeMap<String, Rational>) -> Result<(), TestCaseError> {
    let choices = enc.binary_choices(v);
    prop_assert!(choices.is_some(), "binary-free clause fails for {}", f);
    let choices = choices.unwrap();
    let by_column: BTreeMap<usize, &Vec<bool>> = choices.iter().map(|(d, ok)| (*d, ok)).collect();
    let mut x = vec![Rational::zero(); enc.columns.len()];
    for (name, &j) in &enc.variables {
        x[j] = v[name].clone();
    }
    for node in &enc.nodes {
        if let Some(j) = node.column {
            x[j] = eval_prop(&node.formula, v);
        }
        if let Some(d) = node.binary {
            let ok = by_column[&d];
            if at_breakpoint(&node.formula, v) {
                prop_assert!(!ok.is_empty(), "{} admits no branch", node.formula);
            } else {
                prop_assert_eq!(ok.len(), 1, "{} off its breakpoint", &node.formula);
            }
            x[d] = if ok[0] { Rational::one() } else { Rational::zero() };
        }
    }
    for c in &enc.constraints {
        prop_assert!(c.holds(&x), "constraint {:?} fails", c);
    }
    prop_assert_eq!(enc.nodes[enc.conclusion].value.eval(&x), eval_prop(f, v));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn one_branch_per_binary_off_breakpoints(f in arb_formula(false), v in valuation(997)) {
        let ps = PropSequent::from_plain(&Sequent::new([], f.clone())).unwrap();
        check_faithful(&encode_milp(&ps, EncodingMode::Full), &f, &v)?;
    }

    #[test]
    fn some_branch_per_binary_on_coarse_grids(f in arb_formula(false), v in valuation(2)) {
        let ps = PropSequent::from_plain(&Sequent::new([], f.clone())).unwrap();
        check_faithful(&encode_milp(&ps, EncodingMode::Full), &f, &v)?;
    }

    #[test]
    fn witness_tree_has_product_shape(f in arb_formula(true), g in arb_formula(true)) {
        let s = Sequent::new([g], f);
        let u = unfold(&s).unwrap();
        let sigma = &u.tree.sigma;
        let depth = s.modal_depth();
        prop_assert!(sigma.len() <= depth);
        prop_assert!(sigma.iter().all(|level| !level.is_empty()));
        let mut expected = 1usize;
        let mut width = 1usize;
        for level in sigma {
            width *= level.len();
            expected += width;
        }
        prop_assert_eq!(u.tree.worlds.len(), expected);
        for (i, w) in u.tree.worlds.iter().enumerate() {
            let want = sigma.get(w.level).map_or(0, Vec::len);
            prop_assert_eq!(w.children.len(), want, "world {}", i);
        }
    }
}
