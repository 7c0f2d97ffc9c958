//! Witnessed unfolding of a modal Łukasiewicz sequent into a propositional
//! one over per-world copies of the variables.

use std::collections::{BTreeMap, BTreeSet};

use super::LukError;
use crate::syntax::{psfm_all, Formula, Sequent};

/// A world of the witness tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeWorld {
    pub name: String,
    pub level: usize,
    /// Parent and the position in `sigma[level − 1]` of the generating `◇χ`.
    pub parent: Option<(usize, usize)>,
    /// One child per formula of `sigma[level]`, in the same order.
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTree {
    pub worlds: Vec<TreeWorld>,
    /// `sigma[i]` lists the diamond formulas handled at level `i`.
    pub sigma: Vec<Vec<Formula>>,
}

/// What a propositional variable of the unfolding stands for.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PropAtom {
    /// `x_w`
    Var { var: String, world: usize },
    /// `◇ψ‾_w`
    Diamond { formula: Formula, world: usize },
    /// `s_w`, forced into `{0, 1}`: whether `w` keeps its successors.
    Alive { world: usize },
}

/// A modality-free sequent together with the meaning of its variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropSequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub atoms: BTreeMap<String, PropAtom>,
}

impl PropSequent {
    /// Wraps an already modality-free sequent; its variables stand for
    /// themselves at a single world.
    pub fn from_plain(s: &Sequent) -> Result<PropSequent, LukError> {
        if s.formulas().any(Formula::contains_modality) {
            return Err(LukError::NotPropositional);
        }
        if s.contains_delta() {
            return Err(LukError::DeltaNotSupported);
        }
        let atoms = s
            .variables_in_order()
            .into_iter()
            .map(|x| (x.clone(), PropAtom::Var { var: x, world: 0 }))
            .collect();
        Ok(PropSequent {
            premises: s.premises.clone(),
            conclusion: s.conclusion.clone(),
            atoms,
        })
    }

    pub fn as_sequent(&self) -> Sequent {
        Sequent::new(self.premises.clone(), self.conclusion.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unfolding {
    /// The input with every `□` rewritten through `◇`.
    pub normalized: Sequent,
    pub tree: WitnessTree,
    pub sequent: PropSequent,
    names: Names,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Names {
    diamond_prefix: String,
    alive_prefix: String,
    /// position of each diamond formula in the flattened `sigma`
    diamond_ids: BTreeMap<Formula, usize>,
}

impl Names {
    fn new(sigma: &[Vec<Formula>], user_vars: &BTreeSet<String>) -> Names {
        let mut diamond_ids = BTreeMap::new();
        for f in sigma.iter().flatten() {
            let next = diamond_ids.len();
            diamond_ids.entry(f.clone()).or_insert(next);
        }
        let mut diamond_prefix = "d".to_string();
        while (0..diamond_ids.len()).any(|i| user_vars.contains(&format!("{diamond_prefix}{i}"))) {
            diamond_prefix.push('_');
        }
        let mut alive_prefix = "s".to_string();
        while user_vars.contains(&alive_prefix) {
            alive_prefix.push('_');
        }
        Names {
            diamond_prefix,
            alive_prefix,
            diamond_ids,
        }
    }

    fn var(&self, x: &str, world: &str) -> String {
        format!("{x}__{world}")
    }

    fn diamond(&self, f: &Formula, world: &str) -> String {
        format!("{}{}__{world}", self.diamond_prefix, self.diamond_ids[f])
    }

    fn alive(&self, world: &str) -> String {
        format!("{}__{world}", self.alive_prefix)
    }
}

fn diamonds_in(set: &BTreeSet<Formula>) -> Vec<Formula> {
    set.iter()
        .filter(|f| matches!(f, Formula::Diamond(_)))
        .cloned()
        .collect()
}

fn body(diamond: &Formula) -> &Formula {
    match diamond {
        Formula::Diamond(b) => b,
        _ => unreachable!("sigma holds diamonds only"),
    }
}

/// Builds the witness tree and the propositional sequent
/// `Γ♯(w₀), Ψ ⊢ φ♯(w₀)`.
///
/// A world may also have no successors at all, where every `◇ψ` is 0 and
/// no witness exists. Each world with diamonds therefore gets a Boolean
/// `s_w` (premise `s_w ∨ ¬s_w`), with `◇ψ‾_w → s_w`, and its witness
/// clauses `χ` of `Ψ` enter as `s_w → χ`.
pub fn unfold(s: &Sequent) -> Result<Unfolding, LukError> {
    if s.contains_delta() {
        return Err(LukError::DeltaNotSupported);
    }
    let normalized = Sequent::new(
        s.premises.iter().map(Formula::normalize_to_diamond),
        s.conclusion.normalize_to_diamond(),
    );

    let mut sigma = Vec::new();
    let mut level = diamonds_in(&psfm_all(normalized.formulas()));
    while !level.is_empty() {
        let next = diamonds_in(&psfm_all(level.iter().map(body)));
        sigma.push(level);
        level = next;
    }

    let mut worlds = vec![TreeWorld {
        name: "w0".into(),
        level: 0,
        parent: None,
        children: Vec::new(),
    }];
    let mut frontier = vec![0];
    for (i, diamonds) in sigma.iter().enumerate() {
        let mut next = Vec::new();
        for &w in &frontier {
            for k in 0..diamonds.len() {
                let id = worlds.len();
                worlds.push(TreeWorld {
                    name: format!("{}_{}", worlds[w].name, k + 1),
                    level: i + 1,
                    parent: Some((w, k)),
                    children: Vec::new(),
                });
                worlds[w].children.push(id);
                next.push(id);
            }
        }
        frontier = next;
    }

    let user_vars: BTreeSet<String> = normalized.variables_in_order().into_iter().collect();
    let names = Names::new(&sigma, &user_vars);
    let tree = WitnessTree { worlds, sigma };
    let mut atoms = BTreeMap::new();
    let mut sharp = |f: &Formula, w: usize| translate(f, w, &tree, &names, &mut atoms);

    let mut premises: Vec<Formula> = normalized.premises.iter().map(|p| sharp(p, 0)).collect();
    let mut alive_atoms = Vec::new();
    for (w, world) in tree.worlds.iter().enumerate() {
        let Some(diamonds) = tree.sigma.get(world.level) else {
            continue;
        };
        let alive_name = names.alive(&world.name);
        alive_atoms.push((alive_name.clone(), w));
        let alive = Formula::Var(alive_name);
        premises.push(Formula::join(alive.clone(), Formula::neg(alive.clone())));
        let gated = |chi: Formula| Formula::implies(alive.clone(), chi);
        for (k, d) in diamonds.iter().enumerate() {
            let psi = body(d);
            let own = sharp(psi, world.children[k]);
            let dw = sharp(d, w);
            premises.push(Formula::implies(dw.clone(), alive.clone()));
            premises.push(gated(Formula::iff(dw, own.clone())));
            for (j, _) in diamonds.iter().enumerate().filter(|&(j, _)| j != k) {
                premises.push(gated(Formula::implies(sharp(psi, world.children[j]), own.clone())));
            }
        }
    }
    let conclusion = sharp(&normalized.conclusion, 0);
    atoms.extend(
        alive_atoms
            .into_iter()
            .map(|(name, world)| (name, PropAtom::Alive { world })),
    );
    let ps = Sequent::new(premises, conclusion);
    Ok(Unfolding {
        normalized,
        sequent: PropSequent {
            premises: ps.premises,
            conclusion: ps.conclusion,
            atoms,
        },
        tree,
        names,
    })
}

fn translate(
    f: &Formula,
    w: usize,
    tree: &WitnessTree,
    names: &Names,
    atoms: &mut BTreeMap<String, PropAtom>,
) -> Formula {
    let mut go = |g: &Formula| translate(g, w, tree, names, atoms);
    match f {
        Formula::Zero | Formula::One => f.clone(),
        Formula::Var(x) => {
            let name = names.var(x, &tree.worlds[w].name);
            atoms.insert(
                name.clone(),
                PropAtom::Var {
                    var: x.clone(),
                    world: w,
                },
            );
            Formula::Var(name)
        }
        Formula::Diamond(_) => {
            let name = names.diamond(f, &tree.worlds[w].name);
            atoms.insert(
                name.clone(),
                PropAtom::Diamond {
                    formula: f.clone(),
                    world: w,
                },
            );
            Formula::Var(name)
        }
        Formula::Meet(a, b) => Formula::meet(go(a), go(b)),
        Formula::Join(a, b) => Formula::join(go(a), go(b)),
        Formula::Fuse(a, b) => Formula::fuse(go(a), go(b)),
        Formula::Impl(a, b) => Formula::implies(go(a), go(b)),
        Formula::Power(a, m) => Formula::Power(Box::new(go(a)), m.clone()),
        Formula::Box(_) | Formula::Delta(_) => unreachable!("removed before translation"),
    }
}

impl Unfolding {
    /// `f♯(w)`; `f` must be Δ- and □-free with its diamonds in the level of `w`.
    pub fn sharp(&self, f: &Formula, w: usize) -> Formula {
        let mut scratch = BTreeMap::new();
        translate(f, w, &self.tree, &self.names, &mut scratch)
    }

    /// Formulas whose translation at a level-`i` world is meaningful:
    /// propositional subformulas of the sequent at level 0, and of the
    /// bodies of `sigma[i − 1]` below.
    pub fn closure(&self, level: usize) -> BTreeSet<Formula> {
        if level == 0 {
            psfm_all(self.normalized.formulas())
        } else {
            psfm_all(self.tree.sigma[level - 1].iter().map(body))
        }
    }
}
