//! Seeded corpora shared by the acceptance harness and the integration
//! tests.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use mvmodal::algebra::Rational;
use mvmodal::pcp::{IndexSequence, PcpInstance, SolveOutcome};
use mvmodal::syntax::{Formula, Sequent};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[0, 1]` with denominator at most `max_den`; the endpoints
/// come up about one time in ten each.
pub fn unit_rational(rng: &mut impl Rng, max_den: i64) -> Rational {
    match rng.gen_range(0..10) {
        0 => Rational::from_integer(0.into()),
        1 => Rational::from_integer(1.into()),
        _ => {
            let d = rng.gen_range(1..=max_den);
            Rational::new(rng.gen_range(0..=d).into(), d.into())
        }
    }
}

/// Random formula over `vars` with exactly `connectives` connectives, each
/// of `∧ ∨ · → ¬`.
pub fn random_formula(rng: &mut impl Rng, vars: &[&str], connectives: usize) -> Formula {
    random_modal_formula(rng, vars, connectives, 0)
}

/// As [`random_formula`], also drawing `□` and `◇` while the modal depth
/// stays at most `depth`.
pub fn random_modal_formula(rng: &mut impl Rng, vars: &[&str], connectives: usize, depth: usize) -> Formula {
    if connectives == 0 {
        return match rng.gen_range(0..12) {
            0 => Formula::Zero,
            1 => Formula::One,
            _ => Formula::var(*vars.choose(rng).expect("at least one variable")),
        };
    }
    let rest = connectives - 1;
    if depth > 0 && rng.gen_range(0..3) == 0 {
        let inner = random_modal_formula(rng, vars, rest, depth - 1);
        return if rng.gen_bool(0.5) {
            Formula::boxed(inner)
        } else {
            Formula::diamond(inner)
        };
    }
    if rng.gen_range(0..5) == 0 {
        return Formula::neg(random_modal_formula(rng, vars, rest, depth));
    }
    let left = rng.gen_range(0..=rest);
    let a = random_modal_formula(rng, vars, left, depth);
    let b = random_modal_formula(rng, vars, rest - left, depth);
    match rng.gen_range(0..4) {
        0 => Formula::meet(a, b),
        1 => Formula::join(a, b),
        2 => Formula::fuse(a, b),
        _ => Formula::implies(a, b),
    }
}

/// Modality-free sequent over at most three variables with at most
/// `max_connectives` connectives in total.
pub fn random_prop_sequent(rng: &mut impl Rng, max_connectives: usize) -> Sequent {
    random_modal_sequent(rng, max_connectives, 0)
}

/// Sequent over at most three variables with at most `max_connectives`
/// connectives in total and modal depth at most `depth`.
pub fn random_modal_sequent(rng: &mut impl Rng, max_connectives: usize, depth: usize) -> Sequent {
    const VARS: [&str; 3] = ["x", "y", "z"];
    let total = rng.gen_range(0..=max_connectives);
    let premises = rng.gen_range(0..=2usize);
    let mut budgets = vec![0; premises + 1];
    for _ in 0..total {
        let slot = rng.gen_range(0..budgets.len());
        budgets[slot] += 1;
    }
    let conclusion = random_modal_formula(rng, &VARS, budgets[premises], depth);
    let gamma: Vec<Formula> = budgets[..premises]
        .iter()
        .map(|&c| random_modal_formula(rng, &VARS, c, depth))
        .collect();
    Sequent::new(gamma, conclusion)
}

fn digits(rng: &mut impl Rng, len: usize, alphabet: &[u64]) -> Vec<u64> {
    (0..len).map(|_| *alphabet.choose(rng).expect("nonempty")).collect()
}

fn number(ds: &[u64]) -> u64 {
    ds.iter().fold(0, |acc, d| acc * 10 + d)
}

/// Cut `s` into `k` nonempty consecutive pieces at random.
fn split(rng: &mut impl Rng, s: &[u64], k: usize) -> Vec<u64> {
    let mut cuts: Vec<usize> = (1..s.len()).collect::<Vec<_>>();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts[..k - 1].to_vec();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(k);
    let mut at = 0;
    for c in cuts.into_iter().chain([s.len()]) {
        out.push(number(&s[at..c]));
        at = c;
    }
    out
}

/// Base-10 instances with a solution of length 2 to `max_len`, together
/// with the shortest solution.
///
/// Each instance is planted: one digit string cut in two different ways
/// gives the pairs along a permutation of the indices, plus an optional
/// distractor pair.
pub fn solvable_pcp_corpus(seed: u64, count: usize, max_len: usize) -> Vec<(PcpInstance, IndexSequence)> {
    let mut rng = rng(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let k = rng.gen_range(2..=max_len);
        let len = rng.gen_range(k + 1..=2 * k + 2);
        let s = digits(&mut rng, len, &[1, 2, 3]);
        let top = split(&mut rng, &s, k);
        let bottom = split(&mut rng, &s, k);
        if top == bottom {
            continue;
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.shuffle(&mut rng);
        let mut pairs = vec![(0, 0); k];
        for (i, &slot) in order.iter().enumerate() {
            pairs[slot] = (top[i], bottom[i]);
        }
        if rng.gen_bool(0.5) {
            let (la, lb) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
            let a = number(&digits(&mut rng, la, &[1, 2, 3]));
            let b = number(&digits(&mut rng, lb, &[1, 2, 3]));
            if a != b {
                pairs.push((a, b));
            }
        }
        if !seen.insert(pairs.clone()) {
            continue;
        }
        let Ok(inst) = PcpInstance::from_u64(10, &pairs) else {
            continue;
        };
        if let SolveOutcome::Solution(sol) = inst.brute_force_solve(max_len) {
            if sol.len() >= 2 {
                out.push((inst, sol));
            }
        }
    }
    out
}

/// Base-10 instances whose top words use only the digits 1, 2 and whose
/// bottom words use only 3, 4, so no two concatenations agree.
pub fn digit_disjoint_pcp_corpus(seed: u64, count: usize) -> Vec<PcpInstance> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let m = rng.gen_range(2..=3);
        let pairs: Vec<(u64, u64)> = (0..m)
            .map(|_| {
                let (la, lb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
                let a = number(&digits(&mut rng, la, &[1, 2]));
                let b = number(&digits(&mut rng, lb, &[3, 4]));
                (a, b)
            })
            .collect();
        if let Ok(inst) = PcpInstance::from_u64(10, &pairs) {
            out.push(inst);
        }
    }
    out
}

#[cfg(test)]
mod decide_soundness;
