//! Mixed-integer linear encoding of propositional Łukasiewicz sequents and
//! its exact branch-and-bound solver.
//!
//! Subformulas are shared: each distinct subformula is one node. Constants,
//! variables and `¬a = 1 − a` are affine expressions of their children and
//! get no column. Every other node gets a continuous column `z ∈ [0, 1]`
//! and, where its graph is not convex, one binary column `d` choosing the
//! linear piece.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use super::simplex::{self, Lp, LpResult, Row, Sense};
use super::unfold::PropSequent;
use super::{eval_prop, LukError, PropVerdict};
use crate::algebra::Rational;
use crate::syntax::Formula;

/// How much of each piecewise-linear graph is encoded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EncodingMode {
    /// Both sides of every node's graph: `z` equals the node value.
    Full,
    /// Only the side the optimisation can push against: nodes that are
    /// pushed down (the conclusion and what increases it) get lower bounds
    /// `z ≥ value`, nodes pushed up (premises) get upper bounds. Convex
    /// sides need no binary. The optimum is unchanged.
    Polarity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Continuous,
    Binary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

/// `constant + Σ coeff·column`
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinExpr {
    pub terms: Vec<(usize, Rational)>,
    pub constant: Rational,
}

impl LinExpr {
    pub fn constant(c: Rational) -> LinExpr {
        LinExpr {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn column(j: usize) -> LinExpr {
        LinExpr {
            terms: vec![(j, Rational::one())],
            constant: Rational::zero(),
        }
    }

    fn one() -> LinExpr {
        LinExpr::constant(Rational::one())
    }

    /// `self + k·other`
    fn plus(&self, k: &Rational, other: &LinExpr) -> LinExpr {
        let mut acc: BTreeMap<usize, Rational> = self.terms.iter().cloned().collect();
        for (j, c) in &other.terms {
            *acc.entry(*j).or_insert_with(Rational::zero) += k * c;
        }
        LinExpr {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            constant: &self.constant + k * &other.constant,
        }
    }

    fn add(&self, other: &LinExpr) -> LinExpr {
        self.plus(&Rational::one(), other)
    }

    fn sub(&self, other: &LinExpr) -> LinExpr {
        self.plus(&-Rational::one(), other)
    }

    fn scale(&self, k: &Rational) -> LinExpr {
        LinExpr::default().plus(k, self)
    }

    fn shift(&self, c: Rational) -> LinExpr {
        let mut out = self.clone();
        out.constant += c;
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (j, c)| acc + c * &x[*j])
    }
}

/// `expr ⋈ 0`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub expr: LinExpr,
    pub sense: Sense,
}

impl Constraint {
    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.expr.eval(x);
        match self.sense {
            Sense::Le => !v.is_positive(),
            Sense::Ge => !v.is_negative(),
            Sense::Eq => v.is_zero(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Polarity {
    Up,
    Down,
    Both,
}

impl Polarity {
    fn flip(self) -> Polarity {
        match self {
            Polarity::Up => Polarity::Down,
            Polarity::Down => Polarity::Up,
            Polarity::Both => Polarity::Both,
        }
    }

    fn merge(self, other: Polarity) -> Polarity {
        if self == other {
            self
        } else {
            Polarity::Both
        }
    }

    fn needs_upper(self) -> bool {
        self != Polarity::Down
    }

    fn needs_lower(self) -> bool {
        self != Polarity::Up
    }
}

/// One shared subformula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub formula: Formula,
    pub children: Vec<usize>,
    pub value: LinExpr,
    /// the node's own continuous column, if it has one
    pub column: Option<usize>,
    pub binary: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilpEncoding {
    pub mode: EncodingMode,
    pub columns: Vec<Column>,
    pub constraints: Vec<Constraint>,
    pub nodes: Vec<Node>,
    pub premises: Vec<usize>,
    pub conclusion: usize,
    /// propositional variable name → column
    pub variables: BTreeMap<String, usize>,
    /// maximised: `1 − value(conclusion)`
    pub objective: LinExpr,
}

struct Builder {
    nodes: Vec<Node>,
    memo: HashMap<Formula, usize>,
    columns: Vec<Column>,
    variables: BTreeMap<String, usize>,
}

impl Builder {
    fn node(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.memo.get(f) {
            return i;
        }
        let children: Vec<usize> = match f {
            Formula::Impl(a, b) if **b == Formula::Zero => vec![self.node(a)],
            _ => f.children().into_iter().map(|c| self.node(c)).collect(),
        };
        let mut column = None;
        let value = match f {
            Formula::Zero => LinExpr::constant(Rational::zero()),
            Formula::One => LinExpr::one(),
            Formula::Var(x) => {
                let j = *self.variables.entry(x.clone()).or_insert_with(|| {
                    self.columns.push(Column {
                        name: format!("p_{x}"),
                        kind: ColumnKind::Continuous,
                    });
                    self.columns.len() - 1
                });
                LinExpr::column(j)
            }
            Formula::Impl(_, b) if **b == Formula::Zero => LinExpr::one().sub(&self.nodes[children[0]].value),
            Formula::Power(_, m) if m.is_zero() => LinExpr::one(),
            Formula::Power(_, m) if m.is_one() => self.nodes[children[0]].value.clone(),
            _ => {
                self.columns.push(Column {
                    name: format!("z{}", self.nodes.len()),
                    kind: ColumnKind::Continuous,
                });
                column = Some(self.columns.len() - 1);
                LinExpr::column(self.columns.len() - 1)
            }
        };
        self.nodes.push(Node {
            formula: f.clone(),
            children,
            value,
            column,
            binary: None,
        });
        let i = self.nodes.len() - 1;
        self.memo.insert(f.clone(), i);
        i
    }
}

fn rat(n: &BigUint) -> Rational {
    Rational::from_integer(n.clone().into())
}

/// Encodes `ps`; premises are pinned to 1.
pub fn encode_milp(ps: &PropSequent, mode: EncodingMode) -> MilpEncoding {
    let mut b = Builder {
        nodes: Vec::new(),
        memo: HashMap::new(),
        columns: Vec::new(),
        variables: BTreeMap::new(),
    };
    let premises: Vec<usize> = ps.premises.iter().map(|p| b.node(p)).collect();
    let conclusion = b.node(&ps.conclusion);

    // children precede parents, so a reverse sweep settles polarities
    let mut polarity: Vec<Option<Polarity>> = vec![None; b.nodes.len()];
    let mark = |pol: &mut Vec<Option<Polarity>>, i: usize, p: Polarity| {
        pol[i] = Some(pol[i].map_or(p, |q| q.merge(p)));
    };
    for &p in &premises {
        mark(&mut polarity, p, Polarity::Up);
    }
    mark(&mut polarity, conclusion, Polarity::Down);
    for i in (0..b.nodes.len()).rev() {
        let Some(p) = polarity[i] else { continue };
        let node = &b.nodes[i];
        let flips: Vec<bool> = match &node.formula {
            Formula::Impl(_, c) if **c == Formula::Zero => vec![true],
            Formula::Impl(..) => vec![true, false],
            _ => vec![false; node.children.len()],
        };
        for (&c, flip) in node.children.clone().iter().zip(flips) {
            mark(&mut polarity, c, if flip { p.flip() } else { p });
        }
    }

    let mut constraints = Vec::new();
    let one = Rational::one();
    let ge = |e: LinExpr| Constraint {
        expr: e,
        sense: Sense::Ge,
    };
    let le = |e: LinExpr| Constraint {
        expr: e,
        sense: Sense::Le,
    };
    for &j in b.variables.values() {
        constraints.push(ge(LinExpr::column(j)));
        constraints.push(le(LinExpr::column(j).shift(-one.clone())));
    }
    for i in 0..b.nodes.len() {
        let node = &b.nodes[i];
        if node.column.is_none() {
            continue;
        }
        let z = node.value.clone();
        let pol = match mode {
            EncodingMode::Full => Polarity::Both,
            EncodingMode::Polarity => polarity[i].unwrap_or(Polarity::Both),
        };
        let kid = |k: usize| b.nodes[node.children[k]].value.clone();
        let formula = node.formula.clone();
        let mut lower: Vec<Constraint> = vec![ge(z.clone())];
        let mut upper: Vec<Constraint> = vec![le(z.shift(-one.clone()))];
        let mut needs_binary = false;
        let mut d_expr = LinExpr::default();
        let new_binary = |cols: &mut Vec<Column>| {
            cols.push(Column {
                name: format!("d{i}"),
                kind: ColumnKind::Binary,
            });
            LinExpr::column(cols.len() - 1)
        };
        match &formula {
            Formula::Fuse(..) | Formula::Power(..) => {
                // z = max(0, e): convex, lower side is linear
                let (e, big_m) = match &formula {
                    Formula::Fuse(..) => (kid(0).add(&kid(1)).shift(-one.clone()), one.clone()),
                    Formula::Power(_, m) => {
                        let m = rat(m);
                        let e = kid(0).scale(&m).shift(-(&m - &one));
                        (e, &m - &one)
                    }
                    _ => unreachable!(),
                };
                if pol.needs_upper() {
                    d_expr = new_binary(&mut b.columns);
                    needs_binary = true;
                }
                if pol.needs_lower() {
                    lower.push(ge(z.sub(&e)));
                }
                if pol.needs_upper() {
                    // z ≤ e + M·d, z ≤ 1 − d
                    upper.push(le(z.sub(&e).plus(&-big_m.clone(), &d_expr)));
                    upper.push(le(z.add(&d_expr).shift(-one.clone())));
                }
            }
            Formula::Join(..) => {
                let (a, c) = (kid(0), kid(1));
                if pol.needs_upper() {
                    d_expr = new_binary(&mut b.columns);
                    needs_binary = true;
                }
                if pol.needs_lower() {
                    lower.push(ge(z.sub(&a)));
                    lower.push(ge(z.sub(&c)));
                }
                if pol.needs_upper() {
                    // z ≤ a + d, z ≤ c + 1 − d
                    upper.push(le(z.sub(&a).sub(&d_expr)));
                    upper.push(le(z.sub(&c).add(&d_expr).shift(-one.clone())));
                }
            }
            Formula::Meet(..) => {
                let (a, c) = (kid(0), kid(1));
                if pol.needs_lower() {
                    d_expr = new_binary(&mut b.columns);
                    needs_binary = true;
                }
                if pol.needs_upper() {
                    upper.push(le(z.sub(&a)));
                    upper.push(le(z.sub(&c)));
                }
                if pol.needs_lower() {
                    // z ≥ a − d, z ≥ c − (1 − d)
                    lower.push(ge(z.sub(&a).add(&d_expr)));
                    lower.push(ge(z.sub(&c).sub(&d_expr).shift(one.clone())));
                }
            }
            Formula::Impl(..) => {
                let (a, c) = (kid(0), kid(1));
                let e = LinExpr::one().sub(&a).add(&c);
                if pol.needs_lower() {
                    d_expr = new_binary(&mut b.columns);
                    needs_binary = true;
                }
                if pol.needs_upper() {
                    upper.push(le(z.sub(&e)));
                }
                if pol.needs_lower() {
                    // z ≥ 1 − d, z ≥ e − 1 + d
                    lower.push(ge(z.add(&d_expr).shift(-one.clone())));
                    lower.push(ge(z.sub(&e).sub(&d_expr).shift(one.clone())));
                }
            }
            other => unreachable!("no column for {other:?}"),
        }
        if needs_binary {
            let d = d_expr.terms[0].0;
            b.nodes[i].binary = Some(d);
            constraints.push(ge(LinExpr::column(d)));
            constraints.push(le(LinExpr::column(d).shift(-one.clone())));
        }
        constraints.extend(lower);
        constraints.extend(upper);
    }
    for &p in &premises {
        constraints.push(Constraint {
            expr: b.nodes[p].value.shift(-one.clone()),
            sense: Sense::Eq,
        });
    }
    let objective = LinExpr::one().sub(&b.nodes[conclusion].value);
    MilpEncoding {
        mode,
        columns: b.columns,
        constraints,
        nodes: b.nodes,
        premises,
        conclusion,
        variables: b.variables,
        objective,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Maximum number of branch-and-bound nodes (LP relaxations solved).
    pub node_budget: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            node_budget: Some(200_000),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
}

impl MilpEncoding {
    pub fn binaries(&self) -> Vec<usize> {
        (0..self.columns.len())
            .filter(|&j| self.columns[j].kind == ColumnKind::Binary)
            .collect()
    }

    /// The relaxation with some binaries fixed; fixed columns are
    /// substituted away.
    fn relaxation(&self, fixed: &BTreeMap<usize, bool>) -> Lp {
        let map = |e: &LinExpr| -> (Vec<(usize, Rational)>, Rational) {
            let mut constant = e.constant.clone();
            let mut coeffs = Vec::new();
            for (j, c) in &e.terms {
                match fixed.get(j) {
                    Some(true) => constant += c,
                    Some(false) => {}
                    None => coeffs.push((*j, c.clone())),
                }
            }
            (coeffs, constant)
        };
        let mut rows = Vec::new();
        for c in &self.constraints {
            let (coeffs, constant) = map(&c.expr);
            if coeffs.is_empty() {
                let ok = match c.sense {
                    Sense::Le => !constant.is_positive(),
                    Sense::Ge => !constant.is_negative(),
                    Sense::Eq => constant.is_zero(),
                };
                if !ok {
                    // an unsatisfiable constant row
                    rows.push(Row {
                        coeffs: vec![],
                        sense: Sense::Eq,
                        rhs: Rational::one(),
                    });
                }
                continue;
            }
            rows.push(Row {
                coeffs,
                sense: c.sense,
                rhs: -constant,
            });
        }
        let (objective, _) = map(&self.objective);
        Lp {
            num_vars: self.columns.len(),
            rows,
            objective,
        }
    }

    /// Exact value of every propositional variable at a relaxation point.
    fn valuation_of(&self, x: &[Rational]) -> BTreeMap<String, Rational> {
        self.variables
            .iter()
            .map(|(name, &j)| (name.clone(), x[j].clone()))
            .collect()
    }

    /// Column values induced by a valuation together with, for each
    /// binary, the choices `d ∈ {0, 1}` under which all of its node's
    /// clauses hold. `None` if some binary-free clause fails.
    pub fn binary_choices(&self, valuation: &BTreeMap<String, Rational>) -> Option<Vec<(usize, Vec<bool>)>> {
        let mut x = vec![Rational::zero(); self.columns.len()];
        for (name, &j) in &self.variables {
            x[j] = valuation.get(name).cloned().unwrap_or_else(Rational::zero);
        }
        for node in &self.nodes {
            if let Some(j) = node.column {
                x[j] = eval_prop(&node.formula, valuation);
            }
        }
        let binaries = self.binaries();
        for c in &self.constraints {
            if c.expr.terms.iter().all(|(j, _)| !binaries.contains(j)) && !c.holds(&x) {
                return None;
            }
        }
        let mut out = Vec::new();
        for &d in &binaries {
            let mut ok = Vec::new();
            for choice in [false, true] {
                x[d] = if choice { Rational::one() } else { Rational::zero() };
                let fine = self
                    .constraints
                    .iter()
                    .filter(|c| c.expr.terms.iter().any(|(j, _)| *j == d))
                    .all(|c| c.holds(&x));
                if fine {
                    ok.push(choice);
                }
            }
            out.push((d, ok));
        }
        Some(out)
    }
}

/// Maximises `1 − conclusion` by depth-first branch and bound (0-branch
/// first, branching on the first fractional binary in column order).
/// Among optimal valuations the first one found is kept.
pub fn solve_milp(
    enc: &MilpEncoding,
    ps: &PropSequent,
    opts: &SolveOptions,
) -> Result<(PropVerdict, SolveStats), LukError> {
    let budget = opts.node_budget.unwrap_or(u64::MAX);
    let binaries = enc.binaries();
    let mut stack: Vec<BTreeMap<usize, bool>> = vec![BTreeMap::new()];
    let mut best: Option<(Rational, BTreeMap<String, Rational>)> = None;
    let mut nodes = 0u64;
    while let Some(fixed) = stack.pop() {
        nodes += 1;
        if nodes > budget {
            return Err(LukError::ResourceBudgetExceeded(budget));
        }
        let lp = enc.relaxation(&fixed);
        let (bound, x) = match simplex::solve(&lp) {
            LpResult::Infeasible => continue,
            LpResult::Unbounded => unreachable!("every column lies in [0, 1]"),
            LpResult::Optimal { value, x } => (value + &enc.objective.constant, x),
        };
        let incumbent = best.as_ref().map_or(Rational::zero(), |(g, _)| g.clone());
        if bound <= incumbent {
            continue;
        }
        let fractional = binaries
            .iter()
            .copied()
            .find(|j| !fixed.contains_key(j) && !x[*j].is_integer());
        match fractional {
            Some(j) => {
                let mut one = fixed.clone();
                one.insert(j, true);
                let mut zero = fixed;
                zero.insert(j, false);
                stack.push(one);
                stack.push(zero);
            }
            None => {
                let valuation = enc.valuation_of(&x);
                let gap = Rational::one() - eval_prop(&ps.conclusion, &valuation);
                debug_assert!(gap >= bound);
                if gap > incumbent {
                    let full = gap.is_one();
                    best = Some((gap, valuation));
                    if full {
                        break;
                    }
                }
            }
        }
    }
    let verdict = match best {
        None => PropVerdict::Valid,
        Some((gap, valuation)) => PropVerdict::Countervaluation { valuation, gap },
    };
    Ok((verdict, SolveStats { nodes }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Sequent;

    fn ps(premises: &[&str], conclusion: &str) -> PropSequent {
        PropSequent::from_plain(&Sequent::parse(premises, conclusion).unwrap()).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn solve(p: &PropSequent, mode: EncodingMode) -> PropVerdict {
        solve_milp(&encode_milp(p, mode), p, &SolveOptions::default())
            .unwrap()
            .0
    }

    #[test]
    fn excluded_middle_gap_half() {
        let p = ps(&[], "x \\/ ~x");
        let enc = encode_milp(&p, EncodingMode::Full);
        assert_eq!(enc.variables.len(), 1);
        assert_eq!(enc.binaries().len(), 1);
        for mode in [EncodingMode::Full, EncodingMode::Polarity] {
            let PropVerdict::Countervaluation { valuation, gap } = solve(&p, mode) else {
                panic!()
            };
            assert_eq!(gap, r(1, 2));
            assert_eq!(valuation["x"], r(1, 2));
        }
    }

    #[test]
    fn simple_valid_sequents() {
        for mode in [EncodingMode::Full, EncodingMode::Polarity] {
            assert_eq!(solve(&ps(&["x"], "x"), mode), PropVerdict::Valid);
            assert_eq!(solve(&ps(&["x"], "x & x"), mode), PropVerdict::Valid);
            assert_eq!(solve(&ps(&[], "(x -> y) \\/ (y -> x)"), mode), PropVerdict::Valid);
            assert_eq!(solve(&ps(&["0"], "x"), mode), PropVerdict::Valid);
        }
    }

    #[test]
    fn power_matches_closed_form() {
        let p = ps(&[], "x^3");
        let enc = encode_milp(&p, EncodingMode::Full);
        let val: BTreeMap<String, Rational> = [("x".to_string(), r(2, 3))].into();
        let choices = enc.binary_choices(&val).unwrap();
        assert_eq!(eval_prop(&p.conclusion, &val), r(0, 1));
        // 3·(2/3) − 2 = 0 is a breakpoint: both pieces fit
        assert_eq!(choices, vec![(enc.binaries()[0], vec![false, true])]);
        let val: BTreeMap<String, Rational> = [("x".to_string(), r(5, 6))].into();
        assert_eq!(eval_prop(&p.conclusion, &val), r(1, 2));
        assert_eq!(enc.binary_choices(&val).unwrap()[0].1, vec![false]);
    }

    #[test]
    fn budget_exhaustion() {
        let p = ps(&[], "(x -> y) \\/ (y -> x) \\/ (x & y)");
        let err = solve_milp(
            &encode_milp(&p, EncodingMode::Full),
            &p,
            &SolveOptions { node_budget: Some(1) },
        )
        .unwrap_err();
        assert_eq!(err, LukError::ResourceBudgetExceeded(1));
    }

    #[test]
    fn polarity_drops_convex_binaries() {
        let p = ps(&["x -> y", "y /\\ z"], "x & z");
        let full = encode_milp(&p, EncodingMode::Full);
        let pol = encode_milp(&p, EncodingMode::Polarity);
        assert_eq!(full.binaries().len(), 3);
        assert_eq!(pol.binaries().len(), 0);
    }
}
