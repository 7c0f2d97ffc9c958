//! The modal decision procedure against the bounded MV_n search on a
//! random corpus.

use mvmodal::algebra::ChainAlgebra;
use mvmodal::kripke::{search_countermodel, LocalCheck, SearchOptions, Verdict};
use mvmodal::lukdecide::{check_reconstruction, decide, DecideOptions, PropVerdict};

use crate::{random_modal_sequent, rng};

/// MV_n is a subalgebra of [0, 1], so an MV_n countermodel is one over
/// [0, 1]. Bounds: one world up to n = 12, two worlds up to n = 4.
fn finite_bounds() -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = (1..=12).map(|n| (n, 1)).collect();
    out.extend((1..=4).map(|n| (n, 2)));
    out
}

#[test]
fn holds_is_never_refuted_and_countermodels_re_verify() {
    let mut g = rng(6);
    let (mut holds, mut refuted) = (0, 0);
    for i in 0..200 {
        let s = random_modal_sequent(&mut g, 8, 2);
        let d = decide(&s, &DecideOptions::default()).unwrap_or_else(|e| panic!("#{i}: {e}"));
        match (&d.verdict, &d.prop) {
            (Verdict::Countermodel { model, world }, PropVerdict::Countervaluation { valuation, .. }) => {
                refuted += 1;
                assert!(
                    matches!(
                        model.check_local_consequence_at(*world, &s),
                        LocalCheck::ConclusionFails(_)
                    ),
                    "#{i}"
                );
                check_reconstruction(&d.unfolding, model, valuation).unwrap();
            }
            (Verdict::Holds, PropVerdict::Valid) => {
                holds += 1;
                for (n, k) in finite_bounds() {
                    let alg = ChainAlgebra::mv(n).unwrap();
                    let v = search_countermodel(&s, &alg, &SearchOptions::new(k)).unwrap();
                    assert!(
                        matches!(v, Verdict::NoCounterexampleFound(_)),
                        "#{i} {s:?}: Holds, but MV_{n} with {k} worlds gives {v}"
                    );
                }
            }
            other => panic!("#{i}: inconsistent decision {other:?}"),
        }
    }
    assert!(holds > 20 && refuted > 20, "{holds} holds, {refuted} refuted");
}

#[test]
fn finite_countermodels_are_found_by_decide() {
    let mut g = rng(60);
    for i in 0..100 {
        let s = random_modal_sequent(&mut g, 6, 2);
        let alg = ChainAlgebra::mv(2).unwrap();
        let finite = search_countermodel(&s, &alg, &SearchOptions::new(2)).unwrap();
        if let Verdict::Countermodel { .. } = finite {
            let d = decide(&s, &DecideOptions::default()).unwrap();
            assert!(matches!(d.verdict, Verdict::Countermodel { .. }), "#{i}: {s:?}");
        }
    }
}
