//! Modal formulas over `{0, 1, variables, ∧, ∨, ·, →, □, ◇, Δ}` with
//! symbolic powers, together with the structural measures used by the
//! decision procedures.
//!
//! `¬φ` and `φ ↔ ψ` are abbreviations and never appear as nodes:
//! `¬φ = φ → 0` and `φ ↔ ψ = (φ → ψ) · (ψ → φ)`.

mod parser;
mod printer;

use std::collections::BTreeSet;

use num_bigint::BigUint;

pub use parser::{parse, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Zero,
    One,
    Var(String),
    Meet(Box<Formula>, Box<Formula>),
    Join(Box<Formula>, Box<Formula>),
    Fuse(Box<Formula>, Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
    Delta(Box<Formula>),
    /// `φ^m`, the `m`-fold fusion of `φ`.
    Power(Box<Formula>, BigUint),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    pub fn meet(a: Formula, b: Formula) -> Formula {
        Formula::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Formula, b: Formula) -> Formula {
        Formula::Join(Box::new(a), Box::new(b))
    }

    pub fn fuse(a: Formula, b: Formula) -> Formula {
        Formula::Fuse(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Formula) -> Formula {
        Formula::implies(a, Formula::Zero)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::fuse(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    pub fn diamond(a: Formula) -> Formula {
        Formula::Diamond(Box::new(a))
    }

    pub fn delta(a: Formula) -> Formula {
        Formula::Delta(Box::new(a))
    }

    pub fn power(a: Formula, m: impl Into<BigUint>) -> Formula {
        Formula::Power(Box::new(a), m.into())
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Zero | Formula::One | Formula::Var(_) => vec![],
            Formula::Meet(a, b) | Formula::Join(a, b) | Formula::Fuse(a, b) | Formula::Impl(a, b) => {
                vec![a, b]
            }
            Formula::Box(a) | Formula::Diamond(a) | Formula::Delta(a) | Formula::Power(a, _) => {
                vec![a]
            }
        }
    }

    pub fn is_modal(&self) -> bool {
        matches!(self, Formula::Box(_) | Formula::Diamond(_))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Maximal nesting of `□`/`◇`.
    pub fn modal_depth(&self) -> usize {
        let inner = self.children().into_iter().map(Formula::modal_depth).max().unwrap_or(0);
        if self.is_modal() {
            inner + 1
        } else {
            inner
        }
    }

    pub fn contains_delta(&self) -> bool {
        matches!(self, Formula::Delta(_)) || self.children().into_iter().any(Formula::contains_delta)
    }

    pub fn contains_modality(&self) -> bool {
        self.is_modal() || self.children().into_iter().any(Formula::contains_modality)
    }

    /// Variables in order of first occurrence (depth-first, left to right).
    pub fn variables_in_order(&self, out: &mut Vec<String>) {
        if let Formula::Var(x) = self {
            if !out.contains(x) {
                out.push(x.clone());
            }
        }
        for c in self.children() {
            c.variables_in_order(out);
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut v = Vec::new();
        self.variables_in_order(&mut v);
        v.into_iter().collect()
    }

    /// Propositional subformulas: modal subformulas are treated as atoms.
    pub fn psfm(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_psfm(&mut out);
        out
    }

    fn collect_psfm(&self, out: &mut BTreeSet<Formula>) {
        if !self.is_modal() {
            for c in self.children() {
                c.collect_psfm(out);
            }
        }
        out.insert(self.clone());
    }

    /// Rewrites every `□φ` as `¬◇¬φ`. Only meaning-preserving on chains with
    /// involutive negation.
    pub fn normalize_to_diamond(&self) -> Formula {
        let bin = |a: &Formula, b: &Formula, k: fn(Formula, Formula) -> Formula| {
            k(a.normalize_to_diamond(), b.normalize_to_diamond())
        };
        match self {
            Formula::Zero | Formula::One | Formula::Var(_) => self.clone(),
            Formula::Meet(a, b) => bin(a, b, Formula::meet),
            Formula::Join(a, b) => bin(a, b, Formula::join),
            Formula::Fuse(a, b) => bin(a, b, Formula::fuse),
            Formula::Impl(a, b) => bin(a, b, Formula::implies),
            Formula::Box(a) => Formula::neg(Formula::diamond(Formula::neg(a.normalize_to_diamond()))),
            Formula::Diamond(a) => Formula::diamond(a.normalize_to_diamond()),
            Formula::Delta(a) => Formula::delta(a.normalize_to_diamond()),
            Formula::Power(a, m) => Formula::Power(Box::new(a.normalize_to_diamond()), m.clone()),
        }
    }
}

/// PSFm of a set of formulas.
pub fn psfm_all<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for f in formulas {
        f.collect_psfm(&mut out);
    }
    out
}

/// A finite set of premises and a conclusion. Premises keep their first
/// occurrence order; duplicates are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(premises: impl IntoIterator<Item = Formula>, conclusion: Formula) -> Sequent {
        let mut ps: Vec<Formula> = Vec::new();
        for p in premises {
            if !ps.contains(&p) {
                ps.push(p);
            }
        }
        Sequent {
            premises: ps,
            conclusion,
        }
    }

    pub fn parse(premises: &[&str], conclusion: &str) -> Result<Sequent, ParseError> {
        let ps = premises.iter().map(|p| parse(p)).collect::<Result<Vec<_>, _>>()?;
        Ok(Sequent::new(ps, parse(conclusion)?))
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.premises.iter().chain(std::iter::once(&self.conclusion))
    }

    /// Variables ordered by first occurrence: premises left to right, then
    /// the conclusion.
    pub fn variables_in_order(&self) -> Vec<String> {
        let mut v = Vec::new();
        for f in self.formulas() {
            f.variables_in_order(&mut v);
        }
        v
    }

    pub fn modal_depth(&self) -> usize {
        self.formulas().map(Formula::modal_depth).max().unwrap_or(0)
    }

    pub fn contains_delta(&self) -> bool {
        self.formulas().any(Formula::contains_delta)
    }
}
