//! Post correspondence instances over numbers and their reduction to local
//! consequence in transitive modal FL_ew-chain logics.
//!
//! Words are positive naturals written in base `s`: concatenating `x` and `y`
//! gives `x·s^‖y‖ + y` where `‖y‖` is the digit count of `y`. Words with
//! leading zeros are therefore not representable.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{AlgebraError, ChainAlgebra, Element};
use crate::kripke::KripkeModel;
use crate::syntax::{Formula, Sequent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcpError {
    #[error("invalid PCP instance: {0}")]
    InvalidInstance(String),
    #[error("invalid index sequence: {0}")]
    InvalidSequence(String),
    #[error("the index sequence is not a solution")]
    NotASolution,
    #[error("the prefix of length {0} is already a solution")]
    PrefixSolution(usize),
    #[error("{algebra} is {m}-contractive; the reduction needs a non-{m}-contractive chain")]
    AlgebraTooContractive { algebra: String, m: BigUint },
    #[error("constructed model failed verification: {0}")]
    Unverified(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcpInstance {
    base: BigUint,
    pairs: Vec<(BigUint, BigUint)>,
}

/// Indices into the pair list, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct IndexSequence(Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(IndexSequence),
    NotFoundWithinBound(usize),
}

/// `x` followed by the digits of `y`.
pub fn concat(x: &BigUint, y: &BigUint, base: &BigUint) -> BigUint {
    x * base.pow(digit_len(y, base)) + y
}

/// Number of base-`base` digits of `y` (`y ≥ 1`).
pub fn digit_len(y: &BigUint, base: &BigUint) -> u32 {
    let mut len = 1;
    let mut rest = y / base;
    while !rest.is_zero() {
        rest /= base;
        len += 1;
    }
    len
}

impl IndexSequence {
    pub fn new(indices: Vec<usize>) -> Result<IndexSequence, PcpError> {
        if indices.is_empty() {
            return Err(PcpError::InvalidSequence("empty".into()));
        }
        if indices.contains(&0) {
            return Err(PcpError::InvalidSequence("indices start at 1".into()));
        }
        Ok(IndexSequence(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for IndexSequence {
    type Err = PcpError;

    /// Comma-separated 1-based indices, e.g. `1,2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let indices = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| PcpError::InvalidSequence(format!("bad index `{p}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        IndexSequence::new(indices)
    }
}

impl PcpInstance {
    pub fn new(base: BigUint, pairs: Vec<(BigUint, BigUint)>) -> Result<PcpInstance, PcpError> {
        if base < BigUint::from(2u32) {
            return Err(PcpError::InvalidInstance(format!(
                "base must be at least 2, got {base}"
            )));
        }
        if pairs.is_empty() {
            return Err(PcpError::InvalidInstance("no pairs".into()));
        }
        for (i, (v, w)) in pairs.iter().enumerate() {
            if v.is_zero() || w.is_zero() {
                return Err(PcpError::InvalidInstance(format!("pair {} has an empty word", i + 1)));
            }
            if pairs[..i].contains(&(v.clone(), w.clone())) {
                return Err(PcpError::InvalidInstance(format!("pair {} is repeated", i + 1)));
            }
        }
        Ok(PcpInstance { base, pairs })
    }

    pub fn from_u64(base: u64, pairs: &[(u64, u64)]) -> Result<PcpInstance, PcpError> {
        PcpInstance::new(base.into(), pairs.iter().map(|&(v, w)| (v.into(), w.into())).collect())
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    pub fn pairs(&self) -> &[(BigUint, BigUint)] {
        &self.pairs
    }

    fn check(&self, seq: &IndexSequence) -> Result<(), PcpError> {
        match seq.0.iter().find(|&&i| i > self.pairs.len()) {
            Some(i) => Err(PcpError::InvalidSequence(format!(
                "index {i} exceeds the {} pairs",
                self.pairs.len()
            ))),
            None => Ok(()),
        }
    }

    /// Concatenations of the v- and w-words of the first `j` indices.
    pub fn folds(&self, seq: &IndexSequence, j: usize) -> (BigUint, BigUint) {
        let mut v = BigUint::zero();
        let mut w = BigUint::zero();
        for &i in &seq.0[..j] {
            let (vi, wi) = &self.pairs[i - 1];
            v = concat(&v, vi, &self.base);
            w = concat(&w, wi, &self.base);
        }
        (v, w)
    }

    pub fn is_solution(&self, seq: &IndexSequence) -> bool {
        if self.check(seq).is_err() {
            return false;
        }
        let (v, w) = self.folds(seq, seq.len());
        v == w
    }

    /// Shortest solution of length at most `max_len`, lexicographically
    /// least among those.
    pub fn brute_force_solve(&self, max_len: usize) -> SolveOutcome {
        let lens: Vec<(u32, u32)> = self
            .pairs
            .iter()
            .map(|(v, w)| (digit_len(v, &self.base), digit_len(w, &self.base)))
            .collect();
        for len in 1..=max_len {
            let mut stack = Vec::new();
            let root = Partial {
                v: BigUint::zero(),
                vlen: 0,
                w: BigUint::zero(),
                wlen: 0,
            };
            if self.dfs(&lens, &root, len, &mut stack) {
                return SolveOutcome::Solution(IndexSequence(stack));
            }
        }
        SolveOutcome::NotFoundWithinBound(max_len)
    }

    fn dfs(&self, lens: &[(u32, u32)], at: &Partial, left: usize, stack: &mut Vec<usize>) -> bool {
        if left == 0 {
            return at.v == at.w;
        }
        for (i, (vi, wi)) in self.pairs.iter().enumerate() {
            let (lv, lw) = lens[i];
            let next = Partial {
                v: &at.v * self.base.pow(lv) + vi,
                vlen: at.vlen + lv,
                w: &at.w * self.base.pow(lw) + wi,
                wlen: at.wlen + lw,
            };
            if !next.compatible(&self.base) {
                continue;
            }
            stack.push(i + 1);
            if self.dfs(lens, &next, left - 1, stack) {
                return true;
            }
            stack.pop();
        }
        false
    }
}

/// Concatenated words with their digit counts.
struct Partial {
    v: BigUint,
    vlen: u32,
    w: BigUint,
    wlen: u32,
}

impl Partial {
    /// One digit string is a prefix of the other.
    fn compatible(&self, base: &BigUint) -> bool {
        if self.vlen >= self.wlen {
            &self.v / base.pow(self.vlen - self.wlen) == self.w
        } else {
            &self.w / base.pow(self.wlen - self.vlen) == self.v
        }
    }
}

fn y() -> Formula {
    Formula::var("y")
}

fn v() -> Formula {
    Formula::var("v")
}

fn w() -> Formula {
    Formula::var("w")
}

/// `x ↔ (□x)^{s^‖word‖} · y^{word}`
fn step(x: Formula, word: &BigUint, base: &BigUint) -> Formula {
    let shift = base.pow(digit_len(word, base));
    Formula::iff(
        x.clone(),
        Formula::fuse(
            Formula::power(Formula::boxed(x), shift),
            Formula::power(y(), word.clone()),
        ),
    )
}

/// The three premises over `y`, `v`, `w`.
pub fn encode_gamma(p: &PcpInstance) -> Vec<Formula> {
    let first = Formula::iff(Formula::boxed(y()), Formula::diamond(y()));
    let disjuncts = p
        .pairs
        .iter()
        .map(|(vi, wi)| Formula::meet(step(v(), vi, &p.base), step(w(), wi, &p.base)));
    let big_or = disjuncts.reduce(Formula::join).expect("instances have pairs");
    let second = Formula::boxed(big_or);
    let third = Formula::boxed(Formula::implies(
        Formula::boxed(Formula::fuse(v(), w())),
        Formula::fuse(Formula::boxed(v()), Formula::boxed(w())),
    ));
    vec![first, second, third]
}

/// `(v ↔ w) → (y ∨ (v·w → v·w·y))`
pub fn encode_phi(_p: &PcpInstance) -> Formula {
    let vw = Formula::fuse(v(), w());
    Formula::implies(
        Formula::iff(v(), w()),
        Formula::join(y(), Formula::implies(vw.clone(), Formula::fuse(vw, y()))),
    )
}

/// `Γ_P ⊢ □φ_P`; a countermodel exists iff `P` has a solution.
pub fn reduction_sequent(p: &PcpInstance) -> Sequent {
    Sequent::new(encode_gamma(p), Formula::boxed(encode_phi(p)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcpCountermodel {
    pub model: KripkeModel,
    pub root: usize,
    pub alpha: Element,
}

/// The chain frame on `u, u_1, …, u_k` with `u → u_i` and `u_i → u_j` for
/// `j < i`, valued so that `v`, `w` at `u_j` are `α` raised to the prefix
/// concatenations of the solution.
pub fn build_countermodel(
    p: &PcpInstance,
    sol: &IndexSequence,
    alg: &ChainAlgebra,
) -> Result<PcpCountermodel, PcpError> {
    p.check(sol)?;
    if !p.is_solution(sol) {
        return Err(PcpError::NotASolution);
    }
    for j in 1..sol.len() {
        let (a, b) = p.folds(sol, j);
        if a == b {
            return Err(PcpError::PrefixSolution(j));
        }
    }
    let k = sol.len();
    let (n, _) = p.folds(sol, k);
    let m = BigUint::from(2u32) * &n;
    let alpha = alg.pick_noncontractive_element(&m).map_err(|e| match e {
        AlgebraError::NoSuchElement { .. } => PcpError::AlgebraTooContractive {
            algebra: alg.to_string(),
            m: m.clone(),
        },
        other => PcpError::Unverified(other.to_string()),
    })?;

    let mut worlds = vec!["u".to_string()];
    worlds.extend((1..=k).map(|j| format!("u{j}")));
    let mut edges = Vec::new();
    for i in 1..=k {
        edges.push((0, i));
        edges.extend((1..i).map(|j| (i, j)));
    }
    let mut model = KripkeModel::new(alg.clone(), worlds, edges).expect("frame is well formed");
    let set = |model: &mut KripkeModel, world, var, value| {
        model
            .set_value(world, var, value)
            .expect("powers of α lie in the chain")
    };
    for x in ["y", "v", "w"] {
        set(&mut model, 0, x, alpha.clone());
    }
    for j in 1..=k {
        let (vj, wj) = p.folds(sol, j);
        set(&mut model, j, "y", alpha.clone());
        set(&mut model, j, "v", alg.power(&alpha, &vj));
        set(&mut model, j, "w", alg.power(&alpha, &wj));
    }

    let out = PcpCountermodel { model, root: 0, alpha };
    if let Some(problem) = construction_defect(p, sol, &out) {
        return Err(PcpError::Unverified(problem));
    }
    Ok(out)
}

/// Checks what the construction guarantees. Item (1) is not required at
/// `u_1`: it has no successors, so `□y = 1` and `◇y = 0` there.
fn construction_defect(p: &PcpInstance, sol: &IndexSequence, cm: &PcpCountermodel) -> Option<String> {
    let m = &cm.model;
    let alg = m.algebra();
    let gamma = encode_gamma(p);
    for (i, g) in gamma.iter().enumerate() {
        let values = m.evaluate_everywhere(g);
        for (world, val) in values.iter().enumerate() {
            let required = world == cm.root || i > 0 || !m.successors(world).is_empty();
            if required && !alg.is_one(val) {
                return Some(format!(
                    "premise {} is {} at {}",
                    i + 1,
                    alg.format_element(val),
                    m.worlds()[world]
                ));
            }
        }
    }
    let target = m.evaluate(cm.root, &Formula::boxed(encode_phi(p)));
    if alg.is_one(&target) {
        return Some("□φ_P is 1 at u".into());
    }
    if !verify_characterization(m, p, sol) {
        return Some("values of v, w do not follow the prefix concatenations".into());
    }
    None
}

/// Premise items (1-based) and worlds where a premise of `Γ_P` is not 1.
pub fn gamma_failures(model: &KripkeModel, p: &PcpInstance) -> Vec<(usize, String)> {
    let alg = model.algebra();
    let mut out = Vec::new();
    for (i, g) in encode_gamma(p).iter().enumerate() {
        for (world, val) in model.evaluate_everywhere(g).iter().enumerate() {
            if !alg.is_one(val) {
                out.push((i + 1, model.worlds()[world].clone()));
            }
        }
    }
    out
}

/// At each `u_j`: `v`, `w` equal `α` to the prefix concatenations, with
/// `α = e(u_1, y)`, and `e(u_j, v) = e(u_j, w)` exactly when the prefixes
/// are equal numbers.
pub fn verify_characterization(model: &KripkeModel, p: &PcpInstance, sol: &IndexSequence) -> bool {
    if p.check(sol).is_err() {
        return false;
    }
    let alg = model.algebra();
    let Ok(first) = model.world_index("u1") else {
        return false;
    };
    let alpha = model.value(first, "y");
    (1..=sol.len()).all(|j| {
        let Ok(uj) = model.world_index(&format!("u{j}")) else {
            return false;
        };
        let (vj, wj) = p.folds(sol, j);
        let ev = model.value(uj, "v");
        let ew = model.value(uj, "w");
        ev == alg.power(&alpha, &vj) && ew == alg.power(&alpha, &wj) && ((ev == ew) == (vj == wj))
    })
}

/// `{"base": 10, "pairs": [[12, 1], [2, 22]]}`; numbers may also be
/// decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    base: Value,
    pairs: Vec<(Value, Value)>,
}

fn natural(v: &Value) -> Result<BigUint, PcpError> {
    let bad = || PcpError::InvalidInstance(format!("`{v}` is not a natural number"));
    match v {
        Value::Number(n) => n.as_u64().map(BigUint::from).ok_or_else(bad),
        Value::String(s) => BigUint::from_str(s).map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn to_value(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(x) => Value::from(x),
        Err(_) => Value::String(n.to_string()),
    }
}

impl PcpInstance {
    pub fn from_json(text: &str) -> Result<PcpInstance, PcpError> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| PcpError::InvalidInstance(e.to_string()))?;
        let pairs = file
            .pairs
            .iter()
            .map(|(a, b)| Ok((natural(a)?, natural(b)?)))
            .collect::<Result<Vec<_>, PcpError>>()?;
        PcpInstance::new(natural(&file.base)?, pairs)
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            base: to_value(&self.base),
            pairs: self.pairs.iter().map(|(a, b)| (to_value(a), to_value(b))).collect(),
        };
        serde_json::to_string(&file).expect("instance serialises")
    }
}

impl fmt::Display for PcpInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "base {} pairs", self.base)?;
        for (v, w) in &self.pairs {
            write!(f, " ({v},{w})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use crate::kripke::Depth;

    fn fixture() -> PcpInstance {
        PcpInstance::from_u64(10, &[(12, 1), (2, 22)]).unwrap()
    }

    fn seq(ix: &[usize]) -> IndexSequence {
        IndexSequence::new(ix.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> Element {
        Element::Value(Rational::new(n.into(), d.into()))
    }

    #[test]
    fn concat_examples() {
        let c = |x: u32, y: u32, b: u32| concat(&x.into(), &y.into(), &b.into());
        assert_eq!(c(12, 2, 10), BigUint::from(122u32));
        assert_eq!(c(1, 22, 10), BigUint::from(122u32));
        assert_eq!(c(1, 1, 2), BigUint::from(3u32));
        assert_eq!(c(0, 7, 10), BigUint::from(7u32));
    }

    #[test]
    fn solutions() {
        let p = fixture();
        assert!(p.is_solution(&seq(&[1, 2])));
        assert!(!p.is_solution(&seq(&[1])));
        assert!(!p.is_solution(&seq(&[3])));
        let ones = PcpInstance::from_u64(10, &[(1, 2)]).unwrap();
        for k in 1..6 {
            assert!(!ones.is_solution(&seq(&vec![1; k])));
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(fixture().brute_force_solve(3), SolveOutcome::Solution(seq(&[1, 2])));
        let ones = PcpInstance::from_u64(10, &[(1, 2)]).unwrap();
        assert_eq!(ones.brute_force_solve(6), SolveOutcome::NotFoundWithinBound(6));
        let same = PcpInstance::from_u64(10, &[(1, 1)]).unwrap();
        assert_eq!(same.brute_force_solve(1), SolveOutcome::Solution(seq(&[1])));
    }

    #[test]
    fn brute_force_agrees_with_exhaustive_enumeration() {
        let instances = [
            PcpInstance::from_u64(2, &[(1, 3), (2, 1), (3, 2)]).unwrap(),
            PcpInstance::from_u64(3, &[(1, 4), (4, 1), (5, 2)]).unwrap(),
            PcpInstance::from_u64(10, &[(1, 11), (12, 2), (21, 1)]).unwrap(),
        ];
        for p in instances {
            let m = p.pairs().len();
            let mut expected = None;
            'outer: for len in 1..=5u32 {
                for code in 0..m.pow(len) {
                    let mut c = code;
                    let mut ix = vec![0; len as usize];
                    for d in ix.iter_mut().rev() {
                        *d = c % m + 1;
                        c /= m;
                    }
                    if p.is_solution(&seq(&ix)) {
                        expected = Some(seq(&ix));
                        break 'outer;
                    }
                }
            }
            let got = match p.brute_force_solve(5) {
                SolveOutcome::Solution(s) => Some(s),
                SolveOutcome::NotFoundWithinBound(_) => None,
            };
            assert_eq!(got, expected, "{p}");
        }
    }

    #[test]
    fn instance_validation() {
        assert!(PcpInstance::from_u64(1, &[(1, 1)]).is_err());
        assert!(PcpInstance::from_u64(10, &[]).is_err());
        assert!(PcpInstance::from_u64(10, &[(0, 1)]).is_err());
        assert!(PcpInstance::from_u64(10, &[(1, 2), (1, 2)]).is_err());
        assert!(PcpInstance::from_u64(10, &[(1, 2), (2, 1)]).is_ok());
    }

    #[test]
    fn gamma_shape() {
        let g = encode_gamma(&fixture());
        assert_eq!(g[0], Formula::iff(Formula::boxed(y()), Formula::diamond(y())));
        let Formula::Box(body) = &g[1] else { panic!() };
        let Formula::Join(first, _) = body.as_ref() else {
            panic!()
        };
        let expected = Formula::meet(
            Formula::iff(
                v(),
                Formula::fuse(Formula::power(Formula::boxed(v()), 100u32), Formula::power(y(), 12u32)),
            ),
            Formula::iff(
                w(),
                Formula::fuse(Formula::power(Formula::boxed(w()), 10u32), Formula::power(y(), 1u32)),
            ),
        );
        assert_eq!(**first, expected);
        assert_eq!(g[2].to_string(), "[]([](v & w) -> []v & []w)");
        let phi = encode_phi(&fixture());
        assert_eq!(phi.to_string(), "(v <-> w) -> y \\/ (v & w -> v & w & y)");
        assert!(!phi.contains_modality());
        let s = reduction_sequent(&fixture());
        assert_eq!(s.conclusion, Formula::boxed(phi));
        assert_eq!(s.premises, g);
    }

    #[test]
    fn countermodel_over_lukasiewicz() {
        let p = fixture();
        let cm = build_countermodel(&p, &seq(&[1, 2]), &ChainAlgebra::Lukasiewicz).unwrap();
        let m = &cm.model;
        assert_eq!(cm.alpha, q(245, 246));
        assert_eq!(m.value(1, "v"), q(39, 41));
        assert_eq!(m.value(1, "w"), q(245, 246));
        assert_eq!(m.value(2, "v"), q(62, 123));
        assert_eq!(m.value(2, "w"), q(62, 123));
        assert_eq!(m.evaluate(2, &encode_phi(&p)), q(245, 246));
        assert!(verify_characterization(m, &p, &seq(&[1, 2])));
        assert_eq!(m.depth(0), Depth::Finite(2));
        assert_eq!(m.depth(1), Depth::Finite(0));
        assert_eq!(m.depth(2), Depth::Finite(1));
        assert!(m.is_transitive());
        assert_eq!(gamma_failures(m, &p), vec![(1, "u1".to_string())]);
    }

    #[test]
    fn countermodel_over_products() {
        let p = fixture();
        let half = Rational::new(1.into(), 2.into());
        for alg in [ChainAlgebra::Product, ChainAlgebra::product_one_gen(half).unwrap()] {
            let cm = build_countermodel(&p, &seq(&[1, 2]), &alg).unwrap();
            let phi = cm.model.evaluate(2, &encode_phi(&p));
            assert_eq!(alg.to_rational(&phi), Rational::new(1.into(), 2.into()), "{alg}");
        }
    }

    #[test]
    fn countermodel_errors() {
        let p = fixture();
        assert_eq!(
            build_countermodel(&p, &seq(&[1]), &ChainAlgebra::Lukasiewicz),
            Err(PcpError::NotASolution)
        );
        assert!(matches!(
            build_countermodel(&p, &seq(&[1, 2]), &ChainAlgebra::Mv(3)),
            Err(PcpError::AlgebraTooContractive { .. })
        ));
        assert!(matches!(
            build_countermodel(&p, &seq(&[1, 2]), &ChainAlgebra::Godel),
            Err(PcpError::AlgebraTooContractive { .. })
        ));
        assert_eq!(
            build_countermodel(&p, &seq(&[1, 2, 1, 2]), &ChainAlgebra::Lukasiewicz),
            Err(PcpError::PrefixSolution(2))
        );
        assert!(matches!(
            build_countermodel(&p, &seq(&[1, 5]), &ChainAlgebra::Lukasiewicz),
            Err(PcpError::InvalidSequence(_))
        ));
    }

    #[test]
    fn tampering_breaks_characterization() {
        let p = fixture();
        let sol = seq(&[1, 2]);
        let cm = build_countermodel(&p, &sol, &ChainAlgebra::Lukasiewicz).unwrap();
        let alg = ChainAlgebra::Lukasiewicz;
        let bad = cm
            .model
            .clone()
            .with_value("u1", "v", alg.power(&cm.alpha, &13u32.into()))
            .unwrap();
        assert!(!verify_characterization(&bad, &p, &sol));
    }

    #[test]
    fn json_round_trip() {
        let p = PcpInstance::from_json(r#"{"base": 10, "pairs": [[12,1],[2,22]]}"#).unwrap();
        assert_eq!(p, fixture());
        assert_eq!(PcpInstance::from_json(&p.to_json()).unwrap(), p);
        let big =
            PcpInstance::from_json(r#"{"base": "10", "pairs": [["123456789012345678901234567890", 3]]}"#).unwrap();
        assert_eq!(PcpInstance::from_json(&big.to_json()).unwrap(), big);
        assert!(PcpInstance::from_json(r#"{"base": 10, "pairs": [[-1, 2]]}"#).is_err());
        assert!(PcpInstance::from_json(r#"{"base": 10, "pairs": [[1, 2]], "x": 1}"#).is_err());
    }

    #[test]
    fn sequence_parsing() {
        assert_eq!("1,2".parse::<IndexSequence>().unwrap(), seq(&[1, 2]));
        assert_eq!(" 3 , 1".parse::<IndexSequence>().unwrap(), seq(&[3, 1]));
        assert!("".parse::<IndexSequence>().is_err());
        assert!("0".parse::<IndexSequence>().is_err());
        assert_eq!(seq(&[2, 1]).to_string(), "2,1");
    }
}
