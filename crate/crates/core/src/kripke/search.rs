//! Exhaustive countermodel search over small `MV_n` models.
//!
//! Enumeration order, which fixes the countermodel that is reported:
//!
//! 1. world count `k = 1, 2, …, max_worlds`;
//! 2. relation bitmask ascending, bit `i·k + j` standing for the edge `(i, j)`;
//! 3. valuation in lexicographic order of the digit vector
//!    `(x₀@w₀, …, x₀@w_{k−1}, x₁@w₀, …)`, variables ordered by first
//!    occurrence in the sequent, digits being `MV_n` indices;
//! 4. world ascending.
//!
//! Two order-preserving prunings are applied. A pair (relation, world) is
//! skipped unless every world is reachable from that world: any countermodel
//! with unreachable worlds has a generated submodel that is a countermodel
//! with fewer worlds, so the first countermodel in the full order is never
//! skipped. And when every candidate world is blocked by some formula (a
//! failing premise or a true conclusion), valuations that agree on the
//! variables of those formulas are skipped in one step.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{KripkeError, KripkeModel, LocalCheck, Verdict};
use crate::algebra::{BinOp, ChainAlgebra, Element};
use crate::syntax::{Formula, Sequent};

/// Largest world count accepted: 2^(6·6) relations are out of reach.
pub const MAX_SEARCH_WORLDS: usize = 5;

const CHUNK: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_worlds: usize,
    pub transitive_only: bool,
    /// Upper bound on the number of (relation, valuation) pairs examined.
    pub node_budget: Option<u64>,
}

impl SearchOptions {
    pub fn new(max_worlds: usize) -> SearchOptions {
        SearchOptions {
            max_worlds,
            transitive_only: false,
            node_budget: None,
        }
    }

    pub fn transitive(mut self, yes: bool) -> SearchOptions {
        self.transitive_only = yes;
        self
    }

    pub fn budget(mut self, budget: Option<u64>) -> SearchOptions {
        self.node_budget = budget;
        self
    }
}

/// What an unsuccessful search covered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBound {
    pub algebra: String,
    pub max_worlds: usize,
    pub transitive_only: bool,
    pub models_checked: u64,
}

impl fmt::Display for SearchBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, up to {} worlds{}, {} models examined",
            self.algebra,
            self.max_worlds,
            if self.transitive_only { ", transitive" } else { "" },
            self.models_checked
        )
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Zero,
    One,
    Var(usize),
    Bin(BinOp, usize, usize),
    Box(usize),
    Dia(usize),
    Delta(usize),
    /// exponent clamped to `n + 1`
    Pow(usize, u64),
}

/// A sequent compiled to a shared DAG over `MV_n` indices.
struct Program {
    n: u64,
    ops: Vec<Op>,
    /// premises, then the conclusion
    roots: Vec<usize>,
    /// ops needed to evaluate roots `0..=j` form the prefix `0..ends[j]`
    ends: Vec<usize>,
    root_max_var: Vec<Option<usize>>,
    vars: Vec<String>,
}

impl Program {
    fn compile(s: &Sequent, n: u64) -> Program {
        let vars = s.variables_in_order();
        let mut p = Program {
            n,
            ops: Vec::new(),
            roots: Vec::new(),
            ends: Vec::new(),
            root_max_var: Vec::new(),
            vars,
        };
        let mut memo = HashMap::new();
        for f in s.formulas() {
            let r = p.node(f, &mut memo);
            p.roots.push(r);
            p.ends.push(p.ops.len());
            let mut vs = Vec::new();
            f.variables_in_order(&mut vs);
            p.root_max_var
                .push(vs.iter().map(|v| p.vars.iter().position(|x| x == v).unwrap()).max());
        }
        p
    }

    fn node(&mut self, f: &Formula, memo: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = memo.get(f) {
            return i;
        }
        let mut bin = |op, a: &Formula, b: &Formula, this: &mut Program| {
            let a = this.node(a, memo);
            let b = this.node(b, memo);
            Op::Bin(op, a, b)
        };
        let op = match f {
            Formula::Zero => Op::Zero,
            Formula::One => Op::One,
            Formula::Var(x) => Op::Var(self.vars.iter().position(|v| v == x).unwrap()),
            Formula::Meet(a, b) => bin(BinOp::Meet, a, b, self),
            Formula::Join(a, b) => bin(BinOp::Join, a, b, self),
            Formula::Fuse(a, b) => bin(BinOp::Fuse, a, b, self),
            Formula::Impl(a, b) => bin(BinOp::Impl, a, b, self),
            Formula::Box(a) => Op::Box(self.node(a, memo)),
            Formula::Diamond(a) => Op::Dia(self.node(a, memo)),
            Formula::Delta(a) => Op::Delta(self.node(a, memo)),
            Formula::Power(a, m) => {
                let clamp = m.to_u64().map_or(self.n + 1, |m| m.min(self.n + 1));
                Op::Pow(self.node(a, memo), clamp)
            }
        };
        self.ops.push(op);
        let i = self.ops.len() - 1;
        memo.insert(f.clone(), i);
        i
    }
}

fn mv_binop(n: u64, op: BinOp, a: u64, b: u64) -> u64 {
    match op {
        BinOp::Meet => a.min(b),
        BinOp::Join => a.max(b),
        BinOp::Fuse => (a + b).saturating_sub(n),
        BinOp::Impl => {
            if a <= b {
                n
            } else {
                n - a + b
            }
        }
    }
}

fn mv_pow(n: u64, a: u64, m: u64) -> u64 {
    if m == 0 || a == n {
        return n;
    }
    let drop = (n - a).saturating_mul(m);
    n.saturating_sub(drop)
}

/// One relation on `k` worlds: successor lists and candidate root worlds.
struct Frame {
    mask: u64,
    succ: Vec<Vec<usize>>,
    roots: u64,
}

impl Frame {
    fn new(k: usize, mask: u64, transitive_only: bool) -> Option<Frame> {
        let edge = |i: usize, j: usize| mask >> (i * k + j) & 1 == 1;
        if transitive_only {
            for i in 0..k {
                for j in 0..k {
                    if edge(i, j) && (0..k).any(|l| edge(j, l) && !edge(i, l)) {
                        return None;
                    }
                }
            }
        }
        let succ: Vec<Vec<usize>> = (0..k).map(|i| (0..k).filter(|&j| edge(i, j)).collect()).collect();
        let all = (1u64 << k) - 1;
        let mut roots = 0u64;
        for v in 0..k {
            let mut seen = 1u64 << v;
            let mut stack = vec![v];
            while let Some(w) = stack.pop() {
                for &s in &succ[w] {
                    if seen >> s & 1 == 0 {
                        seen |= 1 << s;
                        stack.push(s);
                    }
                }
            }
            if seen == all {
                roots |= 1 << v;
            }
        }
        (roots != 0).then_some(Frame { mask, succ, roots })
    }
}

enum FrameResult {
    Found {
        digits: Vec<u64>,
        world: usize,
        visited: u64,
    },
    Exhausted {
        visited: u64,
    },
    LimitHit,
}

fn search_frame(p: &Program, k: usize, frame: &Frame, limit: u64) -> FrameResult {
    let n = p.n;
    let len = p.vars.len() * k;
    let mut digits = vec![0u64; len];
    let mut vals = vec![0u64; p.ops.len() * k];
    let premises = p.roots.len() - 1;
    let mut visited = 0u64;
    loop {
        visited += 1;
        if visited > limit {
            return FrameResult::LimitHit;
        }
        let mut alive = frame.roots;
        let mut computed = 0;
        let mut block: Option<Option<usize>> = None;
        for (j, &root) in p.roots.iter().enumerate() {
            for (i, op) in p.ops.iter().enumerate().take(p.ends[j]).skip(computed) {
                for w in 0..k {
                    vals[i * k + w] = match *op {
                        Op::Zero => 0,
                        Op::One => n,
                        Op::Var(x) => digits[x * k + w],
                        Op::Bin(o, a, b) => mv_binop(n, o, vals[a * k + w], vals[b * k + w]),
                        Op::Box(a) => frame.succ[w].iter().map(|&s| vals[a * k + s]).min().unwrap_or(n),
                        Op::Dia(a) => frame.succ[w].iter().map(|&s| vals[a * k + s]).max().unwrap_or(0),
                        Op::Delta(a) => {
                            if vals[a * k + w] == n {
                                n
                            } else {
                                0
                            }
                        }
                        Op::Pow(a, m) => mv_pow(n, vals[a * k + w], m),
                    };
                }
            }
            computed = computed.max(p.ends[j]);
            let before = alive;
            for w in 0..k {
                if alive >> w & 1 == 1 {
                    let v = vals[root * k + w];
                    let blocked = if j < premises { v != n } else { v == n };
                    if blocked {
                        alive &= !(1 << w);
                    }
                }
            }
            if alive != before {
                let mv = p.root_max_var[j];
                block = Some(match block {
                    None => mv,
                    Some(prev) => prev.max(mv),
                });
            }
            if alive == 0 {
                break;
            }
        }
        if alive != 0 {
            return FrameResult::Found {
                digits,
                world: alive.trailing_zeros() as usize,
                visited,
            };
        }
        // advance past every valuation that agrees on the blocking variables
        let Some(Some(max_var)) = block else {
            return FrameResult::Exhausted { visited };
        };
        let mut pos = max_var * k + (k - 1);
        for d in digits.iter_mut().skip(pos + 1) {
            *d = 0;
        }
        loop {
            if digits[pos] < n {
                digits[pos] += 1;
                break;
            }
            digits[pos] = 0;
            if pos == 0 {
                return FrameResult::Exhausted { visited };
            }
            pos -= 1;
        }
    }
}

fn build_model(p: &Program, alg: &ChainAlgebra, k: usize, frame: &Frame, digits: &[u64]) -> KripkeModel {
    let worlds = (0..k).map(|w| format!("w{w}")).collect();
    let edges = (0..k).flat_map(|i| frame.succ[i].iter().map(move |&j| (i, j)));
    let mut m = KripkeModel::new(alg.clone(), worlds, edges).expect("frame is well formed");
    for (x, name) in p.vars.iter().enumerate() {
        for w in 0..k {
            m.set_value(w, name, Element::Index(digits[x * k + w]))
                .expect("digits lie in MV_n");
        }
    }
    debug_assert_eq!(m.relation().len(), frame.mask.count_ones() as usize);
    m
}

/// Searches all `MV_n` models up to `opts.max_worlds` worlds for a world
/// where every premise is 1 and the conclusion is not. Never reports
/// `Holds`: an exhausted search yields `NoCounterexampleFound`.
pub fn search_countermodel(s: &Sequent, alg: &ChainAlgebra, opts: &SearchOptions) -> Result<Verdict, KripkeError> {
    let ChainAlgebra::Mv(n) = *alg else {
        return Err(KripkeError::NotFinite(alg.to_string()));
    };
    if opts.max_worlds == 0 || opts.max_worlds > MAX_SEARCH_WORLDS {
        return Err(KripkeError::Format(format!(
            "max_worlds must lie in 1..={MAX_SEARCH_WORLDS}, got {}",
            opts.max_worlds
        )));
    }
    let program = Program::compile(s, n);
    let budget = opts.node_budget.unwrap_or(u64::MAX);
    let mut remaining = budget;
    let mut checked = 0u64;

    for k in 1..=opts.max_worlds {
        let total: u64 = 1 << (k * k);
        let mut mask = 0u64;
        while mask < total {
            let mut frames = Vec::with_capacity(CHUNK);
            while mask < total && frames.len() < CHUNK {
                if let Some(f) = Frame::new(k, mask, opts.transitive_only) {
                    frames.push(f);
                }
                mask += 1;
            }
            let limit = remaining;
            let results: Vec<FrameResult> = frames.par_iter().map(|f| search_frame(&program, k, f, limit)).collect();
            for (frame, result) in frames.iter().zip(results) {
                match result {
                    FrameResult::LimitHit => return Err(KripkeError::BudgetExceeded(budget)),
                    FrameResult::Exhausted { visited } => {
                        if visited > remaining {
                            return Err(KripkeError::BudgetExceeded(budget));
                        }
                        remaining -= visited;
                        checked += visited;
                    }
                    FrameResult::Found { digits, world, visited } => {
                        if visited > remaining {
                            return Err(KripkeError::BudgetExceeded(budget));
                        }
                        let model = build_model(&program, alg, k, frame, &digits);
                        match model.check_local_consequence_at(world, s) {
                            LocalCheck::ConclusionFails(_) => {}
                            other => panic!("search produced an unverified countermodel: {other:?}"),
                        }
                        return Ok(Verdict::Countermodel { model, world });
                    }
                }
            }
        }
    }
    Ok(Verdict::NoCounterexampleFound(SearchBound {
        algebra: alg.to_string(),
        max_worlds: opts.max_worlds,
        transitive_only: opts.transitive_only,
        models_checked: checked,
    }))
}
