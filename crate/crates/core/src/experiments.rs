//! Executable checks around two results: the transitive modal Łukasiewicz
//! logic over `[0, 1]` is strictly weaker than the one of all `MV_n`
//! (witnessed by an ω-chain model), and the Δ deduction theorem with its
//! SAT/validity bridge.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{ChainAlgebra, Element, Rational};
use crate::kripke::{search_countermodel, KripkeError, KripkeModel, SearchOptions, Verdict};
use crate::syntax::{parse, Formula, Sequent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExperimentError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

/// `x ↔ (□x)², □(x ↔ (□x)²), ¬◇□0 ⊢ ¬x ∨ x`: valid over every transitive
/// `MV_n` model but refuted on a transitive ω-chain over `[0, 1]`.
pub fn separating_sequent() -> Sequent {
    let fix = parse("x <-> ([]x)^2").expect("fixed text");
    Sequent::new(
        [fix.clone(), Formula::boxed(fix), parse("~<>[]0").expect("fixed text")],
        parse("~x \\/ x").expect("fixed text"),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaRecord {
    pub n: usize,
    /// `e(n, x)`
    pub x: Rational,
    /// `e(n, (□x)²)`, with `e(n, □x) = e(n+1, x)`
    pub box_x_squared: Rational,
    /// `e(n, x) < e(n+1, x) < 1`
    pub strictly_increasing: bool,
    /// `e(n, (□x)²) = e(n, x)`
    pub fixpoint: bool,
    /// `e(n, x) = 1 − (1 − α₀)/2ⁿ`
    pub closed_form: bool,
}

/// The frame `⟨ω, <⟩` with `e(0, x) = α₀` and `e(n+1, x) = (e(n, x) + 1)/2`,
/// checked on worlds `0..=K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaChainReport {
    pub alpha0: Rational,
    pub depth: usize,
    pub records: Vec<OmegaRecord>,
    /// `□0 = 0` everywhere: every world has a successor.
    pub box_bottom_zero: bool,
    /// values of the three premises at world 0
    pub premises_at_root: Vec<Rational>,
    /// `e(0, ¬x ∨ x)`
    pub conclusion_at_root: Rational,
}

impl OmegaChainReport {
    pub fn valid(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.strictly_increasing && r.fixpoint && r.closed_form)
            && self.box_bottom_zero
            && self.premises_at_root.iter().all(One::is_one)
            && self.conclusion_at_root < Rational::one()
    }
}

pub fn omega_chain_check(alpha0: &Rational, depth: usize) -> Result<OmegaChainReport, ExperimentError> {
    if *alpha0 <= Rational::zero() || *alpha0 >= Rational::one() {
        return Err(ExperimentError::DomainError(format!("α₀ = {alpha0} is not in (0, 1)")));
    }
    if depth == 0 {
        return Err(ExperimentError::DomainError("depth must be at least 1".into()));
    }
    let luk = ChainAlgebra::Lukasiewicz;
    let el = |q: &Rational| Element::Value(q.clone());
    let half = Rational::new(1.into(), 2.into());
    let mut xs = vec![alpha0.clone()];
    for n in 0..=depth {
        xs.push((&xs[n] + Rational::one()) * &half);
    }
    let two = BigUint::from(2u32);
    let mut records = Vec::new();
    let mut scale = Rational::one();
    for n in 0..=depth {
        let boxed = luk.power(&el(&xs[n + 1]), &two);
        let box_x_squared = luk.to_rational(&boxed);
        let closed = Rational::one() - (Rational::one() - alpha0) * &scale;
        scale *= &half;
        records.push(OmegaRecord {
            n,
            x: xs[n].clone(),
            strictly_increasing: xs[n] < xs[n + 1] && xs[n + 1] < Rational::one(),
            fixpoint: box_x_squared == xs[n],
            closed_form: closed == xs[n],
            box_x_squared,
        });
    }

    // □0 at n: the meet, starting from 1, of 0 over the successors m > n,
    // of which n + 1 is one
    let box_bottom = luk.meet(&luk.one(), &luk.zero());
    let box_bottom_zero = box_bottom == luk.zero();
    let not_dia_box_bottom = luk.negate(&box_bottom);
    let iff = |a: &Element, b: &Element| luk.fuse(&luk.implies(a, b), &luk.implies(b, a));
    let fix_at = |r: &OmegaRecord| iff(&el(&r.x), &el(&r.box_x_squared));
    let premise1 = fix_at(&records[0]);
    // inf over m > 0 of the fixpoint biconditional, on the checked worlds
    let premise2 = records[1..].iter().fold(luk.one(), |acc, r| luk.meet(&acc, &fix_at(r)));
    let x0 = el(alpha0);
    let conclusion = luk.join(&luk.negate(&x0), &x0);
    Ok(OmegaChainReport {
        alpha0: alpha0.clone(),
        depth,
        records,
        box_bottom_zero,
        premises_at_root: [premise1, premise2, not_dia_box_bottom]
            .iter()
            .map(|e| luk.to_rational(e))
            .collect(),
        conclusion_at_root: luk.to_rational(&conclusion),
    })
}

/// Bounded transitive `MV_n` search for a countermodel to the separating
/// sequent. Not finding one is consistency evidence, not a proof.
pub fn mvn_separating_search(n: u64, max_worlds: usize) -> Result<Verdict, ExperimentError> {
    let alg = ChainAlgebra::mv(n).map_err(|e| ExperimentError::DomainError(e.to_string()))?;
    let opts = SearchOptions::new(max_worlds).transitive(true);
    Ok(search_countermodel(&separating_sequent(), &alg, &opts)?)
}

/// `Δγ → φ`
pub fn delta_deduction_transform(gamma: &Formula, phi: &Formula) -> Formula {
    Formula::implies(Formula::delta(gamma.clone()), phi.clone())
}

/// `¬Δφ`: `φ` is valid iff this is not locally satisfiable.
pub fn sat_validity_bridge(phi: &Formula) -> Formula {
    Formula::neg(Formula::delta(phi.clone()))
}

/// First model and world, in the bounded search order, where `φ` is 1.
pub fn local_sat_search(
    phi: &Formula,
    alg: &ChainAlgebra,
    max_worlds: usize,
    transitive_only: bool,
) -> Result<Option<(KripkeModel, usize)>, ExperimentError> {
    let s = Sequent::new([phi.clone()], Formula::Zero);
    let opts = SearchOptions::new(max_worlds).transitive(transitive_only);
    match search_countermodel(&s, alg, &opts)? {
        Verdict::Countermodel { model, world } => Ok(Some((model, world))),
        _ => Ok(None),
    }
}

/// Every `MV_n` model on `1..=max_worlds` worlds named `w0, w1, …` with
/// every relation and every valuation of `vars`.
pub fn enumerate_models(n: u64, max_worlds: usize, vars: &[&str]) -> Vec<KripkeModel> {
    let mut out = Vec::new();
    for k in 1..=max_worlds {
        let names: Vec<String> = (0..k).map(|w| format!("w{w}")).collect();
        let cells = vars.len() * k;
        for mask in 0..(1u64 << (k * k)) {
            let edges: Vec<(usize, usize)> = (0..k * k)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| (b / k, b % k))
                .collect();
            let frame = KripkeModel::new(ChainAlgebra::Mv(n), names.clone(), edges).expect("valid frame");
            let mut digits = vec![0u64; cells];
            loop {
                let mut m = frame.clone();
                for (x, var) in vars.iter().enumerate() {
                    for w in 0..k {
                        m.set_value(w, var, Element::Index(digits[x * k + w]))
                            .expect("in range");
                    }
                }
                out.push(m);
                let Some(pos) = digits.iter().rposition(|&d| d < n) else {
                    break;
                };
                digits[pos] += 1;
                for d in &mut digits[pos + 1..] {
                    *d = 0;
                }
            }
        }
    }
    out
}

/// Pairs `(γ, φ)` over the single variable `x` used by the Δ checks.
pub fn delta_fixture_pairs() -> Vec<(Formula, Formula)> {
    [
        ("x", "[]x"),
        ("[]x", "x"),
        ("x", "x & x"),
        ("x \\/ ~x", "x"),
        ("<>x", "[]<>x"),
        ("x -> []x", "<>x -> x"),
        ("1", "x"),
        ("x^2", "D x"),
    ]
    .iter()
    .map(|(g, p)| (parse(g).expect("fixed text"), parse(p).expect("fixed text")))
    .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaReport {
    /// (model, world, pair) triples examined
    pub checked: u64,
    /// deduction-theorem mismatches: (pair index, model, world)
    pub deduction_failures: Vec<(usize, KripkeModel, usize)>,
    /// bridge mismatches: (formula index, model, world)
    pub bridge_failures: Vec<(usize, KripkeModel, usize)>,
}

/// Pointwise, on every enumerated model and world: `e(γ) = 1 ⇒ e(φ) = 1`
/// iff `e(Δγ → φ) = 1`; and `e(φ) = 1` iff `e(¬Δφ) = 0`.
pub fn delta_check(n: u64, max_worlds: usize, pairs: &[(Formula, Formula)]) -> DeltaReport {
    let mut report = DeltaReport {
        checked: 0,
        deduction_failures: Vec::new(),
        bridge_failures: Vec::new(),
    };
    let formulas: Vec<&Formula> = pairs.iter().flat_map(|(g, p)| [g, p]).collect();
    for m in enumerate_models(n, max_worlds, &["x"]) {
        let alg = m.algebra().clone();
        for w in 0..m.len() {
            for (i, (g, p)) in pairs.iter().enumerate() {
                report.checked += 1;
                let local = !alg.is_one(&m.evaluate(w, g)) || alg.is_one(&m.evaluate(w, p));
                let dt = alg.is_one(&m.evaluate(w, &delta_deduction_transform(g, p)));
                if local != dt {
                    report.deduction_failures.push((i, m.clone(), w));
                }
            }
            for (i, f) in formulas.iter().enumerate() {
                let sat = alg.is_one(&m.evaluate(w, f));
                let bridged = m.evaluate(w, &sat_validity_bridge(f)) == alg.zero();
                if sat != bridged {
                    report.bridge_failures.push((i, m.clone(), w));
                }
            }
        }
    }
    report
}
