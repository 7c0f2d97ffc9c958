use mvmodal::algebra::{ChainAlgebra, Rational};
use mvmodal::kripke::{search_countermodel, Depth, SearchOptions, Verdict};
use mvmodal::pcp::{self, IndexSequence, PcpInstance, SolveOutcome};
use mvmodal::syntax::Formula;

fn solved() -> Vec<(PcpInstance, IndexSequence)> {
    let raw: [(&[(u64, u64)], &[usize]); 4] = [
        (&[(12, 1), (2, 22)], &[1, 2]),
        (&[(1, 11), (21, 2)], &[2, 1]),
        (&[(13, 1), (1, 3), (3, 13), (3, 132)], &[1, 2, 3]),
        (&[(11, 1), (1, 2111), (23121, 231)], &[3, 2, 1]),
    ];
    raw.iter()
        .map(|(pairs, sol)| {
            let p = PcpInstance::from_u64(10, pairs).unwrap();
            let sol = IndexSequence::new(sol.to_vec()).unwrap();
            assert_eq!(p.brute_force_solve(4), SolveOutcome::Solution(sol.clone()));
            (p, sol)
        })
        .collect()
}

/// The plain product chain stores `α^k` as an exact rational, which is
/// only affordable for short concatenations.
fn algebras(p: &PcpInstance, sol: &IndexSequence) -> Vec<ChainAlgebra> {
    let mut out = vec![
        ChainAlgebra::Lukasiewicz,
        ChainAlgebra::product_one_gen(Rational::new(1.into(), 2.into())).unwrap(),
    ];
    if p.folds(sol, sol.len()).0 < 1000u32.into() {
        out.push(ChainAlgebra::Product);
    }
    out
}

fn boxed_body(f: &Formula) -> &Formula {
    match f {
        Formula::Box(b) => b,
        other => panic!("{other} is not boxed"),
    }
}

#[test]
fn successor_items_hold_at_every_u_j() {
    for (p, sol) in solved() {
        for alg in algebras(&p, &sol) {
            let cm = pcp::build_countermodel(&p, &sol, &alg).unwrap();
            let gamma = pcp::encode_gamma(&p);
            for j in 1..=sol.len() {
                for item in &gamma[1..] {
                    let v = cm.model.evaluate(j, boxed_body(item));
                    assert!(alg.is_one(&v), "{alg}: {item} body at u{j}");
                }
            }
        }
    }
}

#[test]
fn depths_follow_the_chain() {
    for (p, sol) in solved() {
        let cm = pcp::build_countermodel(&p, &sol, &ChainAlgebra::Lukasiewicz).unwrap();
        let m = &cm.model;
        assert_eq!(m.depth(m.world_index("u").unwrap()), Depth::Finite(sol.len()));
        for j in 1..=sol.len() {
            assert_eq!(m.depth(m.world_index(&format!("u{j}")).unwrap()), Depth::Finite(j - 1));
        }
        assert!(m.is_transitive());
    }
}

#[test]
fn boxes_are_witnessed_by_the_nearest_successor() {
    let (v, w) = (Formula::var("v"), Formula::var("w"));
    for (p, sol) in solved() {
        for alg in algebras(&p, &sol) {
            let cm = pcp::build_countermodel(&p, &sol, &alg).unwrap();
            let m = &cm.model;
            let k = sol.len();
            // u sees every u_j, u_j sees u_1 … u_{j−1}
            for (t, nearest) in std::iter::once((0, k)).chain((2..=k).map(|j| (j, j - 1))) {
                for x in [&v, &w] {
                    assert_eq!(
                        m.evaluate(t, &Formula::boxed(x.clone())),
                        m.evaluate(nearest, x),
                        "{alg}: □{x} at world {t}"
                    );
                }
            }
        }
    }
}

#[test]
fn the_only_global_gap_is_item_one_at_the_leaf() {
    for (p, sol) in solved() {
        for alg in algebras(&p, &sol) {
            let cm = pcp::build_countermodel(&p, &sol, &alg).unwrap();
            assert_eq!(pcp::gamma_failures(&cm.model, &p), vec![(1, "u1".to_string())]);
        }
    }
}

#[test]
fn digit_disjoint_instances_have_no_small_transitive_mv_countermodel() {
    let p = PcpInstance::from_u64(10, &[(1, 3), (21, 4)]).unwrap();
    assert_eq!(p.brute_force_solve(6), SolveOutcome::NotFoundWithinBound(6));
    let s = pcp::reduction_sequent(&p);
    for n in 1..=6 {
        let alg = ChainAlgebra::mv(n).unwrap();
        let v = search_countermodel(&s, &alg, &SearchOptions::new(3).transitive(true)).unwrap();
        assert!(matches!(v, Verdict::NoCounterexampleFound(_)), "MV_{n}: {v}");
    }
}
