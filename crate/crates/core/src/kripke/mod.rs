//! Finite valued Kripke models and their evaluation.
//!
//! A model has a finite set of worlds, a crisp accessibility relation and a
//! valuation of variables into a single chain. Unmentioned variables are 0.
//! Finite models are always safe and witnessed: every `□`/`◇` value is a
//! finite meet/join over successors.

mod io;
mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, BinOp, ChainAlgebra, Element};
use crate::syntax::{Formula, Sequent};

pub use io::ModelFile;
pub use search::{search_countermodel, SearchBound, SearchOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KripkeError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("model search needs a finite MV_n chain, got {0}")]
    NotFinite(String),
    #[error("search budget of {0} models exhausted")]
    BudgetExceeded(u64),
    #[error("invalid model file: {0}")]
    Format(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    algebra: ChainAlgebra,
    worlds: Vec<String>,
    successors: Vec<Vec<usize>>,
    valuation: Vec<BTreeMap<String, Element>>,
}

/// Longest outgoing path length of a world.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

/// Outcome of checking a sequent at one world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalCheck {
    PremisesNotSatisfied,
    ConclusionHolds,
    ConclusionFails(Element),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Countermodel { model: KripkeModel, world: usize },
    NoCounterexampleFound(SearchBound),
}

impl KripkeModel {
    pub fn new(
        algebra: ChainAlgebra,
        worlds: Vec<String>,
        relation: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<KripkeModel, KripkeError> {
        let mut seen = BTreeSet::new();
        for w in &worlds {
            if !seen.insert(w) {
                return Err(KripkeError::DuplicateWorld(w.clone()));
            }
        }
        let n = worlds.len();
        let mut successors = vec![Vec::new(); n];
        for (a, b) in relation {
            if a >= n || b >= n {
                return Err(KripkeError::UnknownWorld(format!("#{}", a.max(b))));
            }
            successors[a].push(b);
        }
        for s in &mut successors {
            s.sort_unstable();
            s.dedup();
        }
        Ok(KripkeModel {
            algebra,
            worlds,
            successors,
            valuation: vec![BTreeMap::new(); n],
        })
    }

    /// Builds a model from world names and named edges.
    pub fn from_names(
        algebra: ChainAlgebra,
        worlds: &[&str],
        relation: &[(&str, &str)],
    ) -> Result<KripkeModel, KripkeError> {
        let names: Vec<String> = worlds.iter().map(|w| w.to_string()).collect();
        let idx = |w: &str| {
            names
                .iter()
                .position(|n| n == w)
                .ok_or_else(|| KripkeError::UnknownWorld(w.to_string()))
        };
        let edges = relation
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>, KripkeError>>()?;
        KripkeModel::new(algebra, names, edges)
    }

    pub fn set_value(&mut self, world: usize, var: &str, value: Element) -> Result<(), KripkeError> {
        self.algebra.check(&value)?;
        if world >= self.worlds.len() {
            return Err(KripkeError::UnknownWorld(format!("#{world}")));
        }
        self.valuation[world].insert(var.to_string(), value);
        Ok(())
    }

    pub fn with_value(mut self, world: &str, var: &str, value: Element) -> Result<Self, KripkeError> {
        let w = self.world_index(world)?;
        self.set_value(w, var, value)?;
        Ok(self)
    }

    pub fn algebra(&self) -> &ChainAlgebra {
        &self.algebra
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn world_index(&self, name: &str) -> Result<usize, KripkeError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| KripkeError::UnknownWorld(name.to_string()))
    }

    pub fn successors(&self, w: usize) -> &[usize] {
        &self.successors[w]
    }

    /// Edges in ascending order.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn valuation(&self, w: usize) -> &BTreeMap<String, Element> {
        &self.valuation[w]
    }

    pub fn value(&self, w: usize, var: &str) -> Element {
        self.valuation[w]
            .get(var)
            .cloned()
            .unwrap_or_else(|| self.algebra.zero())
    }

    /// Value of `f` at world `w`.
    pub fn evaluate(&self, w: usize, f: &Formula) -> Element {
        self.evaluate_everywhere(f).swap_remove(w)
    }

    /// Values of `f` at every world, indexed by world.
    pub fn evaluate_everywhere(&self, f: &Formula) -> Vec<Element> {
        let alg = &self.algebra;
        let n = self.worlds.len();
        let bin = |a: &Formula, b: &Formula, op: BinOp| {
            let va = self.evaluate_everywhere(a);
            let vb = self.evaluate_everywhere(b);
            va.iter().zip(&vb).map(|(x, y)| alg.binop(op, x, y)).collect()
        };
        match f {
            Formula::Zero => vec![alg.zero(); n],
            Formula::One => vec![alg.one(); n],
            Formula::Var(x) => (0..n).map(|w| self.value(w, x)).collect(),
            Formula::Meet(a, b) => bin(a, b, BinOp::Meet),
            Formula::Join(a, b) => bin(a, b, BinOp::Join),
            Formula::Fuse(a, b) => bin(a, b, BinOp::Fuse),
            Formula::Impl(a, b) => bin(a, b, BinOp::Impl),
            Formula::Box(a) => {
                let va = self.evaluate_everywhere(a);
                (0..n)
                    .map(|w| {
                        self.successors[w]
                            .iter()
                            .fold(alg.one(), |acc, &s| alg.meet(&acc, &va[s]))
                    })
                    .collect()
            }
            Formula::Diamond(a) => {
                let va = self.evaluate_everywhere(a);
                (0..n)
                    .map(|w| {
                        self.successors[w]
                            .iter()
                            .fold(alg.zero(), |acc, &s| alg.join(&acc, &va[s]))
                    })
                    .collect()
            }
            Formula::Delta(a) => self.evaluate_everywhere(a).iter().map(|x| alg.delta(x)).collect(),
            Formula::Power(a, m) => self.evaluate_everywhere(a).iter().map(|x| alg.power(x, m)).collect(),
        }
    }

    /// Premises true at `v` force the conclusion true at `v`?
    pub fn check_local_consequence_at(&self, v: usize, s: &Sequent) -> LocalCheck {
        let alg = &self.algebra;
        if s.premises.iter().any(|p| !alg.is_one(&self.evaluate(v, p))) {
            return LocalCheck::PremisesNotSatisfied;
        }
        let c = self.evaluate(v, &s.conclusion);
        if alg.is_one(&c) {
            LocalCheck::ConclusionHolds
        } else {
            LocalCheck::ConclusionFails(c)
        }
    }

    pub fn is_transitive(&self) -> bool {
        self.successors.iter().all(|succ| {
            succ.iter()
                .all(|&b| self.successors[b].iter().all(|c| succ.binary_search(c).is_ok()))
        })
    }

    /// Least transitive relation containing the current one.
    pub fn transitive_closure(&self) -> KripkeModel {
        let n = self.worlds.len();
        let mut reach = vec![vec![false; n]; n];
        for (a, b) in self.relation() {
            reach[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut out = self.clone();
        out.successors = reach.iter().map(|row| (0..n).filter(|&j| row[j]).collect()).collect();
        out
    }

    /// Length of the longest path leaving `w`; infinite iff a cycle is reachable.
    pub fn depth(&self, w: usize) -> Depth {
        // 0 = unvisited, 1 = on stack, 2 = done
        fn visit(m: &KripkeModel, w: usize, state: &mut [u8], memo: &mut [Option<usize>]) -> Depth {
            match state[w] {
                1 => return Depth::Infinite,
                2 => {
                    return memo[w].map_or(Depth::Infinite, Depth::Finite);
                }
                _ => {}
            }
            state[w] = 1;
            let mut best = 0;
            let mut infinite = false;
            for &s in &m.successors[w] {
                match visit(m, s, state, memo) {
                    Depth::Finite(d) => best = best.max(d + 1),
                    Depth::Infinite => infinite = true,
                }
            }
            state[w] = 2;
            memo[w] = (!infinite).then_some(best);
            memo[w].map_or(Depth::Infinite, Depth::Finite)
        }
        let n = self.worlds.len();
        visit(self, w, &mut vec![0; n], &mut vec![None; n])
    }

    /// A successor of `v` attaining the value of the modal formula `f` at
    /// `v`: the first maximiser of the body for `◇`, the first minimiser for
    /// `□`. `None` when `v` has no successors or `f` is not modal.
    pub fn witness(&self, v: usize, f: &Formula) -> Option<usize> {
        let body = match f {
            Formula::Box(b) | Formula::Diamond(b) => b,
            _ => return None,
        };
        let values = self.evaluate_everywhere(body);
        let target = &self.evaluate_everywhere(f)[v];
        self.successors[v].iter().copied().find(|&s| values[s] == *target)
    }

    /// Every modal subformula of `formulas` is attained at some successor of
    /// every world. Worlds without successors count as witnessed (empty
    /// infimum/supremum are the bounds 1/0).
    pub fn is_witnessed<'a>(&self, formulas: impl IntoIterator<Item = &'a Formula>) -> bool {
        let mut modal = BTreeSet::new();
        fn collect<'b>(f: &'b Formula, out: &mut BTreeSet<&'b Formula>) {
            if f.is_modal() {
                out.insert(f);
            }
            for c in f.children() {
                collect(c, out);
            }
        }
        for f in formulas {
            collect(f, &mut modal);
        }
        modal
            .into_iter()
            .all(|f| (0..self.len()).all(|v| self.successors[v].is_empty() || self.witness(v, f).is_some()))
    }

    /// Same frame and valuation with worlds renamed/reordered by `perm`
    /// (`perm[old] = new`).
    pub fn permuted(&self, perm: &[usize]) -> KripkeModel {
        let n = self.len();
        let mut worlds = vec![String::new(); n];
        let mut valuation = vec![BTreeMap::new(); n];
        for old in 0..n {
            worlds[perm[old]] = self.worlds[old].clone();
            valuation[perm[old]] = self.valuation[old].clone();
        }
        let edges = self.relation().into_iter().map(|(a, b)| (perm[a], perm[b]));
        let mut out = KripkeModel::new(self.algebra.clone(), worlds, edges).expect("permutation");
        out.valuation = valuation;
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("Holds"),
            Verdict::Countermodel { model, world } => {
                write!(f, "Countermodel at world {}", model.worlds()[*world])
            }
            Verdict::NoCounterexampleFound(b) => write!(f, "NoCounterexampleFound ({b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use crate::syntax::parse;

    fn q(n: i64, d: i64) -> Element {
        Element::Value(Rational::new(n.into(), d.into()))
    }

    #[test]
    fn empty_successor_bounds() {
        let m = KripkeModel::from_names(ChainAlgebra::Lukasiewicz, &["w"], &[]).unwrap();
        for f in ["x", "x & y", "0"] {
            let phi = parse(f).unwrap();
            assert_eq!(m.evaluate(0, &Formula::boxed(phi.clone())), q(1, 1));
            assert_eq!(m.evaluate(0, &Formula::diamond(phi)), q(0, 1));
        }
    }

    #[test]
    fn root_with_two_successors() {
        let m = KripkeModel::from_names(ChainAlgebra::Lukasiewicz, &["r", "a", "b"], &[("r", "a"), ("r", "b")])
            .unwrap()
            .with_value("a", "x", q(1, 1))
            .unwrap()
            .with_value("b", "x", q(0, 1))
            .unwrap();
        assert_eq!(m.evaluate(0, &parse("<>x").unwrap()), q(1, 1));
        assert_eq!(m.evaluate(0, &parse("[]x").unwrap()), q(0, 1));
        assert_eq!(m.evaluate(0, &parse("<>x -> []x").unwrap()), q(0, 1));
        assert_eq!(m.witness(0, &parse("<>x").unwrap()), Some(1));
        assert_eq!(m.witness(0, &parse("[]x").unwrap()), Some(2));
        assert!(m.is_witnessed([&parse("<>x").unwrap()]));
    }

    #[test]
    fn mv3_reflexive_world() {
        // e(w,□x) = 2/3 and e(w, x·□x) = max(0, 2/3 + 2/3 − 1) = 1/3
        let m = KripkeModel::from_names(ChainAlgebra::Mv(3), &["w"], &[("w", "w")])
            .unwrap()
            .with_value("w", "x", Element::Index(2))
            .unwrap();
        assert_eq!(m.evaluate(0, &parse("[]x").unwrap()), Element::Index(2));
        assert_eq!(m.evaluate(0, &parse("x & []x").unwrap()), Element::Index(1));
    }

    #[test]
    fn transitivity_and_closure() {
        let m = KripkeModel::new(
            ChainAlgebra::Godel,
            vec!["0".into(), "1".into(), "2".into()],
            [(0, 1), (1, 2)],
        )
        .unwrap();
        assert!(!m.is_transitive());
        let c = m.transitive_closure();
        assert!(c.is_transitive());
        assert_eq!(c.relation(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(c.transitive_closure(), c);

        let empty = KripkeModel::new(ChainAlgebra::Godel, vec!["a".into()], []).unwrap();
        assert!(empty.is_transitive());

        // u → u_i, u_i → u_j for j < i
        let k = 4;
        let mut edges = vec![];
        for i in 1..=k {
            edges.push((0, i));
            for j in 1..i {
                edges.push((i, j));
            }
        }
        let names = (0..=k).map(|i| format!("u{i}")).collect();
        let fig = KripkeModel::new(ChainAlgebra::Lukasiewicz, names, edges).unwrap();
        assert!(fig.is_transitive());
    }

    #[test]
    fn depth_examples() {
        let chain = KripkeModel::new(
            ChainAlgebra::Godel,
            vec!["a".into(), "b".into(), "c".into()],
            [(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(chain.depth(0), Depth::Finite(2));
        assert_eq!(chain.depth(2), Depth::Finite(0));
        let lp = KripkeModel::new(ChainAlgebra::Godel, vec!["a".into(), "b".into()], [(0, 1), (1, 1)]).unwrap();
        assert_eq!(lp.depth(1), Depth::Infinite);
        assert_eq!(lp.depth(0), Depth::Infinite);
    }

    #[test]
    fn local_consequence_examples() {
        let luk = ChainAlgebra::Lukasiewicz;
        let m = KripkeModel::from_names(luk.clone(), &["v"], &[])
            .unwrap()
            .with_value("v", "x", q(1, 1))
            .unwrap();
        let id = Sequent::parse(&["x"], "x").unwrap();
        assert_eq!(m.check_local_consequence_at(0, &id), LocalCheck::ConclusionHolds);

        let m = KripkeModel::from_names(luk.clone(), &["v"], &[])
            .unwrap()
            .with_value("v", "x", q(1, 2))
            .unwrap();
        let em = Sequent::parse(&[], "x \\/ ~x").unwrap();
        assert_eq!(
            m.check_local_consequence_at(0, &em),
            LocalCheck::ConclusionFails(q(1, 2))
        );

        let m = KripkeModel::from_names(luk, &["v"], &[])
            .unwrap()
            .with_value("v", "x", q(3, 4))
            .unwrap();
        let s = Sequent::parse(&["x"], "x & x").unwrap();
        assert_eq!(m.check_local_consequence_at(0, &s), LocalCheck::PremisesNotSatisfied);
    }

    #[test]
    fn rejects_bad_values() {
        let mut m = KripkeModel::from_names(ChainAlgebra::Mv(2), &["w"], &[]).unwrap();
        assert!(m.set_value(0, "x", Element::Index(3)).is_err());
        assert!(m.set_value(0, "x", q(1, 2)).is_err());
        assert!(KripkeModel::from_names(ChainAlgebra::Mv(2), &["w"], &[("w", "z")]).is_err());
        assert!(KripkeModel::from_names(ChainAlgebra::Mv(2), &["w", "w"], &[]).is_err());
    }
}
