//! Decision procedure for local consequence in the minimal modal
//! Łukasiewicz logic over `[0, 1]`.
//!
//! A modal sequent is unfolded over a finite witness tree into a
//! propositional Łukasiewicz sequent, which is decided exactly by
//! branch-and-bound over a mixed-integer linear encoding. Countervaluations
//! become Kripke countermodels on the witness tree and are re-checked by
//! the modal evaluator before being returned.

mod milp;
mod simplex;
mod smt;
mod unfold;

use std::collections::BTreeMap;

use num_traits::One;
use thiserror::Error;

use crate::algebra::{ChainAlgebra, Element, Rational};
use crate::kripke::{KripkeModel, LocalCheck, Verdict};
use crate::syntax::{Formula, Sequent};

pub use milp::{
    encode_milp, solve_milp, Column, ColumnKind, Constraint, EncodingMode, LinExpr, MilpEncoding, Node, SolveOptions,
    SolveStats,
};
pub use simplex::{solve as solve_lp, Lp, LpResult, Row, Sense};
pub use smt::{check_smt, emit_smt, SmtError};
pub use unfold::{unfold, PropAtom, PropSequent, TreeWorld, Unfolding, WitnessTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LukError {
    #[error("Δ is not supported by the Łukasiewicz decision procedure; use the MV_n search instead")]
    DeltaNotSupported,
    #[error("the sequent contains modalities")]
    NotPropositional,
    #[error("branch-and-bound budget of {0} nodes exhausted")]
    ResourceBudgetExceeded(u64),
    #[error("internal error: certificate failed re-verification: {0}")]
    Unverified(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropVerdict {
    Valid,
    /// Premises evaluate to 1 and the conclusion to `1 − gap`, with the
    /// largest possible gap.
    Countervaluation {
        valuation: BTreeMap<String, Rational>,
        gap: Rational,
    },
}

/// Value of a modality-free formula on `[0, 1]`; missing variables are 0.
pub fn eval_prop(f: &Formula, valuation: &BTreeMap<String, Rational>) -> Rational {
    let luk = ChainAlgebra::Lukasiewicz;
    let mut m = KripkeModel::new(luk.clone(), vec!["v".into()], []).expect("one world");
    for x in f.variables() {
        if let Some(val) = valuation.get(&x) {
            m.set_value(0, &x, Element::Value(val.clone()))
                .expect("valuations lie in [0, 1]");
        }
    }
    luk.to_rational(&m.evaluate(0, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    pub mode: EncodingMode,
    pub solve: SolveOptions,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            mode: EncodingMode::Polarity,
            solve: SolveOptions::default(),
        }
    }
}

/// Decides a modality-free sequent, re-checking any countervaluation.
pub fn prop_decide(s: &Sequent, opts: &DecideOptions) -> Result<(PropVerdict, SolveStats), LukError> {
    let ps = PropSequent::from_plain(s)?;
    decide_prop_sequent(&ps, opts)
}

pub fn decide_prop_sequent(ps: &PropSequent, opts: &DecideOptions) -> Result<(PropVerdict, SolveStats), LukError> {
    let enc = encode_milp(ps, opts.mode);
    let (verdict, stats) = solve_milp(&enc, ps, &opts.solve)?;
    if let PropVerdict::Countervaluation { valuation, gap } = &verdict {
        for p in &ps.premises {
            if !eval_prop(p, valuation).is_one() {
                return Err(LukError::Unverified(format!("premise {p} is not 1")));
            }
        }
        if eval_prop(&ps.conclusion, valuation) != Rational::one() - gap {
            return Err(LukError::Unverified("conclusion value disagrees with the gap".into()));
        }
    }
    Ok((verdict, stats))
}

/// Everything `decide` computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub unfolding: Unfolding,
    pub prop: PropVerdict,
    pub stats: SolveStats,
}

pub fn decide(s: &Sequent, opts: &DecideOptions) -> Result<Decision, LukError> {
    let unfolding = unfold(s)?;
    let (prop, stats) = decide_prop_sequent(&unfolding.sequent, opts)?;
    let verdict = match &prop {
        PropVerdict::Valid => Verdict::Holds,
        PropVerdict::Countervaluation { valuation, .. } => {
            let model = reconstruct(&unfolding, valuation);
            match model.check_local_consequence_at(0, s) {
                LocalCheck::ConclusionFails(_) => {}
                other => return Err(LukError::Unverified(format!("{other:?} at the root"))),
            }
            check_reconstruction(&unfolding, &model, valuation).map_err(LukError::Unverified)?;
            Verdict::Countermodel { model, world: 0 }
        }
    };
    Ok(Decision {
        verdict,
        unfolding,
        prop,
        stats,
    })
}

/// The witness tree as a Kripke model over `[0, 1]` with
/// `e(w, x) = h(x_w)`; worlds with `h(s_w) = 0` lose their successors.
pub fn reconstruct(u: &Unfolding, valuation: &BTreeMap<String, Rational>) -> KripkeModel {
    let worlds = u.tree.worlds.iter().map(|w| w.name.clone()).collect();
    let alive: Vec<bool> = (0..u.tree.worlds.len())
        .map(|w| {
            u.sequent.atoms.iter().any(|(name, atom)| {
                *atom == PropAtom::Alive { world: w } && valuation.get(name).is_some_and(|v| v.is_one())
            })
        })
        .collect();
    let edges = u
        .tree
        .worlds
        .iter()
        .enumerate()
        .filter(|&(i, _)| alive[i])
        .flat_map(|(i, w)| w.children.iter().map(move |&c| (i, c)));
    let mut m = KripkeModel::new(ChainAlgebra::Lukasiewicz, worlds, edges).expect("tree is well formed");
    for (name, atom) in &u.sequent.atoms {
        if let PropAtom::Var { var, world } = atom {
            if let Some(val) = valuation.get(name) {
                m.set_value(*world, var, Element::Value(val.clone()))
                    .expect("valuations lie in [0, 1]");
            }
        }
    }
    m
}

/// `e(w, ψ) = h(ψ♯(w))` for every world and every formula of its level's
/// closure.
pub fn check_reconstruction(
    u: &Unfolding,
    model: &KripkeModel,
    valuation: &BTreeMap<String, Rational>,
) -> Result<(), String> {
    let luk = ChainAlgebra::Lukasiewicz;
    let closures: Vec<_> = (0..=u.tree.sigma.len()).map(|i| u.closure(i)).collect();
    for (w, world) in u.tree.worlds.iter().enumerate() {
        for psi in &closures[world.level] {
            let modal = luk.to_rational(&model.evaluate(w, psi));
            let prop = eval_prop(&u.sharp(psi, w), valuation);
            if modal != prop {
                return Err(format!("e({}, {psi}) = {modal} but h({psi}♯) = {prop}", world.name));
            }
        }
    }
    Ok(())
}
