//! Exact linearly ordered FL_ew chains.
//!
//! Five chain families are supported: the finite Łukasiewicz chains `MV_n`,
//! the rational Łukasiewicz, Gödel and product chains, and the one-generated
//! product chain `{0} ∪ {a^i : i ∈ ℕ}`. All arithmetic is exact. Elements of
//! the one-generated chain are kept as exponents so that `a^i` and `a^(i+1)`
//! stay distinguishable for astronomically large `i`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("element {element} does not belong to the carrier of {algebra}")]
    CarrierMismatch { algebra: String, element: String },
    #[error("{algebra} is {m}-contractive: no element with a^(m+1) < a^m")]
    NoSuchElement { algebra: String, m: BigUint },
    #[error("invalid algebra descriptor `{0}`")]
    InvalidDescriptor(String),
    #[error("cannot read `{text}` as an element of {algebra}")]
    InvalidElement { algebra: String, text: String },
}

/// One of the four binary lattice/monoid operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Meet,
    Join,
    Fuse,
    Impl,
}

/// Exponent of the generator in a one-generated product chain.
///
/// `Exp(0)` is the top element, `Bottom` is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GenPower {
    Exp(BigUint),
    Bottom,
}

impl GenPower {
    fn cmp_chain(&self, other: &GenPower) -> Ordering {
        match (self, other) {
            (GenPower::Bottom, GenPower::Bottom) => Ordering::Equal,
            (GenPower::Bottom, _) => Ordering::Less,
            (_, GenPower::Bottom) => Ordering::Greater,
            // larger exponent means smaller value
            (GenPower::Exp(i), GenPower::Exp(j)) => j.cmp(i),
        }
    }
}

/// A value in one of the chains. The representation is canonical, so
/// structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    /// A rational in `[0,1]`, for the rational-carrier chains.
    Value(Rational),
    /// `k` standing for `k/n` in `MV_n`.
    Index(u64),
    /// `a^i` (or 0) in the one-generated product chain.
    Gen(GenPower),
}

/// Descriptor of a linearly ordered FL_ew chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChainAlgebra {
    /// `MV_n = {0, 1/n, ..., 1}`, `n ≥ 1`.
    Mv(u64),
    /// Łukasiewicz t-norm on `[0,1] ∩ ℚ`.
    Lukasiewicz,
    /// Gödel (minimum) t-norm on `[0,1] ∩ ℚ`.
    Godel,
    /// Product t-norm on `[0,1] ∩ ℚ`.
    Product,
    /// Subalgebra of the product chain generated by `a`, `0 < a < 1`.
    ProductOneGen(Rational),
}

fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

fn in_unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// `base^exp` by repeated squaring.
fn rational_pow(base: &Rational, exp: &BigUint) -> Rational {
    if exp.is_zero() || base.is_one() {
        return Rational::one();
    }
    if base.is_zero() {
        return Rational::zero();
    }
    let mut result = Rational::one();
    let mut square = base.clone();
    let bits = exp.bits();
    for i in 0..bits {
        if exp.bit(i) {
            result *= &square;
        }
        if i + 1 < bits {
            square = &square * &square;
        }
    }
    result
}

impl ChainAlgebra {
    pub fn mv(n: u64) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::InvalidDescriptor("mv:0".into()));
        }
        Ok(ChainAlgebra::Mv(n))
    }

    pub fn product_one_gen(a: Rational) -> Result<Self, AlgebraError> {
        if a.is_positive() && a < Rational::one() {
            Ok(ChainAlgebra::ProductOneGen(a))
        } else {
            Err(AlgebraError::InvalidDescriptor(format!("product1:{a}")))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ChainAlgebra::Mv(_))
    }

    /// Whether negation `a → 0` is involutive on this chain.
    pub fn is_involutive(&self) -> bool {
        matches!(self, ChainAlgebra::Mv(_) | ChainAlgebra::Lukasiewicz)
    }

    pub fn zero(&self) -> Element {
        match self {
            ChainAlgebra::Mv(_) => Element::Index(0),
            ChainAlgebra::ProductOneGen(_) => Element::Gen(GenPower::Bottom),
            _ => Element::Value(Rational::zero()),
        }
    }

    pub fn one(&self) -> Element {
        match self {
            ChainAlgebra::Mv(n) => Element::Index(*n),
            ChainAlgebra::ProductOneGen(_) => Element::Gen(GenPower::Exp(BigUint::zero())),
            _ => Element::Value(Rational::one()),
        }
    }

    pub fn contains(&self, a: &Element) -> bool {
        match (self, a) {
            (ChainAlgebra::Mv(n), Element::Index(k)) => k <= n,
            (ChainAlgebra::ProductOneGen(_), Element::Gen(_)) => true,
            (ChainAlgebra::Lukasiewicz | ChainAlgebra::Godel | ChainAlgebra::Product, Element::Value(r)) => {
                in_unit_interval(r)
            }
            _ => false,
        }
    }

    pub fn check(&self, a: &Element) -> Result<(), AlgebraError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(AlgebraError::CarrierMismatch {
                algebra: self.to_string(),
                element: format!("{a:?}"),
            })
        }
    }

    /// All elements in ascending order, for finite chains.
    pub fn elements(&self) -> Option<Vec<Element>> {
        match self {
            ChainAlgebra::Mv(n) => Some((0..=*n).map(Element::Index).collect()),
            _ => None,
        }
    }

    pub fn is_one(&self, a: &Element) -> bool {
        *a == self.one()
    }

    /// Chain order. Both arguments must lie in the carrier.
    pub fn compare(&self, a: &Element, b: &Element) -> Ordering {
        match (a, b) {
            (Element::Index(x), Element::Index(y)) => x.cmp(y),
            (Element::Value(x), Element::Value(y)) => x.cmp(y),
            (Element::Gen(x), Element::Gen(y)) => x.cmp_chain(y),
            _ => panic!("compare: mixed element kinds {a:?} / {b:?} in {self}"),
        }
    }

    pub fn apply_binop(&self, op: BinOp, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.binop(op, a, b))
    }

    /// Unchecked operation; callers guarantee carrier membership.
    pub(crate) fn binop(&self, op: BinOp, a: &Element, b: &Element) -> Element {
        match op {
            BinOp::Meet => self.meet(a, b),
            BinOp::Join => self.join(a, b),
            BinOp::Fuse => self.fuse(a, b),
            BinOp::Impl => self.implies(a, b),
        }
    }

    pub(crate) fn meet(&self, a: &Element, b: &Element) -> Element {
        if self.compare(a, b) == Ordering::Greater {
            b.clone()
        } else {
            a.clone()
        }
    }

    pub(crate) fn join(&self, a: &Element, b: &Element) -> Element {
        if self.compare(a, b) == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        }
    }

    pub(crate) fn fuse(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (ChainAlgebra::Mv(n), Element::Index(x), Element::Index(y)) => Element::Index((x + y).saturating_sub(*n)),
            (ChainAlgebra::Lukasiewicz, Element::Value(x), Element::Value(y)) => {
                let s = x + y - Rational::one();
                Element::Value(if s.is_negative() { Rational::zero() } else { s })
            }
            (ChainAlgebra::Godel, _, _) => self.meet(a, b),
            (ChainAlgebra::Product, Element::Value(x), Element::Value(y)) => Element::Value(x * y),
            (ChainAlgebra::ProductOneGen(_), Element::Gen(x), Element::Gen(y)) => match (x, y) {
                (GenPower::Exp(i), GenPower::Exp(j)) => Element::Gen(GenPower::Exp(i + j)),
                _ => Element::Gen(GenPower::Bottom),
            },
            _ => panic!("fuse: {a:?}, {b:?} not in {self}"),
        }
    }

    pub(crate) fn implies(&self, a: &Element, b: &Element) -> Element {
        if self.compare(a, b) != Ordering::Greater {
            return self.one();
        }
        match (self, a, b) {
            (ChainAlgebra::Mv(n), Element::Index(x), Element::Index(y)) => Element::Index(n - x + y),
            (ChainAlgebra::Lukasiewicz, Element::Value(x), Element::Value(y)) => {
                Element::Value(Rational::one() - x + y)
            }
            (ChainAlgebra::Godel, _, _) => b.clone(),
            (ChainAlgebra::Product, Element::Value(x), Element::Value(y)) => Element::Value(y / x),
            (ChainAlgebra::ProductOneGen(_), Element::Gen(x), Element::Gen(y)) => match (x, y) {
                (GenPower::Exp(i), GenPower::Exp(j)) => Element::Gen(GenPower::Exp(j - i)),
                // a > b here, so b is Bottom and a is not
                _ => Element::Gen(GenPower::Bottom),
            },
            _ => panic!("implies: {a:?}, {b:?} not in {self}"),
        }
    }

    pub(crate) fn negate(&self, a: &Element) -> Element {
        self.implies(a, &self.zero())
    }

    /// Monteiro–Baaz projection: 1 at 1, 0 elsewhere.
    pub fn delta(&self, a: &Element) -> Element {
        if self.is_one(a) {
            self.one()
        } else {
            self.zero()
        }
    }

    /// `m`-fold fusion of `a` in closed form; `a^0 = 1` for every `a`.
    pub fn power(&self, a: &Element, m: &BigUint) -> Element {
        if m.is_zero() {
            return self.one();
        }
        match (self, a) {
            (ChainAlgebra::Mv(n), Element::Index(k)) => {
                let gap = BigUint::from(n - k);
                let drop = gap * m;
                if drop >= BigUint::from(*n) {
                    Element::Index(0)
                } else {
                    Element::Index(n - drop.to_u64().expect("drop < n fits in u64"))
                }
            }
            (ChainAlgebra::Lukasiewicz, Element::Value(x)) => {
                let m = Rational::from_integer(BigInt::from(m.clone()));
                let v = Rational::one() - m * (Rational::one() - x);
                Element::Value(if v.is_negative() { Rational::zero() } else { v })
            }
            (ChainAlgebra::Godel, _) => a.clone(),
            (ChainAlgebra::Product, Element::Value(x)) => Element::Value(rational_pow(x, m)),
            (ChainAlgebra::ProductOneGen(_), Element::Gen(g)) => match g {
                GenPower::Exp(i) => Element::Gen(GenPower::Exp(i * m)),
                GenPower::Bottom => Element::Gen(GenPower::Bottom),
            },
            _ => panic!("power: {a:?} not in {self}"),
        }
    }

    /// `a^(n+1) = a^n` for every element of the carrier.
    ///
    /// Exhaustive for `MV_k`; the infinite chains are settled analytically:
    /// Gödel is idempotent, the other three are not `n`-contractive for any `n`.
    pub fn is_n_contractive(&self, n: &BigUint) -> bool {
        match self {
            ChainAlgebra::Mv(k) => {
                let next = n + 1u32;
                (0..=*k).all(|i| {
                    let a = Element::Index(i);
                    self.power(&a, &next) == self.power(&a, n)
                })
            }
            ChainAlgebra::Godel => !n.is_zero(),
            ChainAlgebra::Lukasiewicz | ChainAlgebra::Product | ChainAlgebra::ProductOneGen(_) => false,
        }
    }

    /// `a ≤ b^n` for all `n` implies `a·b = a`.
    ///
    /// For `MV_k` powers stabilise at exponent `k`, so the hypothesis reduces
    /// to `a ≤ b^k` and every such pair is checked.
    pub fn is_weakly_archimedean(&self) -> bool {
        match self {
            ChainAlgebra::Mv(k) => {
                let stable = BigUint::from(*k);
                (0..=*k).all(|b| {
                    let b = Element::Index(b);
                    let limit = match self.power(&b, &stable) {
                        Element::Index(p) => p,
                        _ => unreachable!(),
                    };
                    (0..=limit).all(|a| {
                        let a = Element::Index(a);
                        self.fuse(&a, &b) == a
                    })
                })
            }
            _ => true,
        }
    }

    /// A fixed element `α` with `α^(m+1) < α^m`.
    pub fn pick_noncontractive_element(&self, m: &BigUint) -> Result<Element, AlgebraError> {
        let found = match self {
            ChainAlgebra::Lukasiewicz => {
                let denom = BigInt::from(m.clone()) + 2;
                Some(Element::Value(Rational::one() - Rational::new(BigInt::one(), denom)))
            }
            ChainAlgebra::Mv(n) => {
                if BigUint::from(*n) > *m {
                    Some(Element::Index(n - 1))
                } else {
                    None
                }
            }
            ChainAlgebra::Product => Some(Element::Value(half())),
            ChainAlgebra::ProductOneGen(_) => Some(Element::Gen(GenPower::Exp(BigUint::one()))),
            ChainAlgebra::Godel => m.is_zero().then(|| Element::Value(half())),
        };
        let alpha = found.ok_or_else(|| AlgebraError::NoSuchElement {
            algebra: self.to_string(),
            m: m.clone(),
        })?;
        debug_assert_eq!(
            self.compare(&self.power(&alpha, &(m + 1u32)), &self.power(&alpha, m)),
            Ordering::Less
        );
        Ok(alpha)
    }

    /// Exact rational value of an element. For the one-generated chain this
    /// materialises `a^i`, which is only sensible for small exponents.
    pub fn to_rational(&self, a: &Element) -> Rational {
        match (self, a) {
            (ChainAlgebra::Mv(n), Element::Index(k)) => Rational::new(BigInt::from(*k), BigInt::from(*n)),
            (ChainAlgebra::ProductOneGen(g), Element::Gen(p)) => match p {
                GenPower::Exp(i) => rational_pow(g, i),
                GenPower::Bottom => Rational::zero(),
            },
            (_, Element::Value(r)) => r.clone(),
            _ => panic!("to_rational: {a:?} not in {self}"),
        }
    }

    /// Element with the given rational value, if the carrier has one.
    pub fn from_rational(&self, r: &Rational) -> Option<Element> {
        if !in_unit_interval(r) {
            return None;
        }
        match self {
            ChainAlgebra::Mv(n) => {
                let scaled = r * Rational::from_integer(BigInt::from(*n));
                scaled
                    .is_integer()
                    .then(|| Element::Index(scaled.to_integer().to_u64().unwrap()))
            }
            ChainAlgebra::ProductOneGen(g) => {
                if r.is_zero() {
                    return Some(Element::Gen(GenPower::Bottom));
                }
                // r = g^i: divide until we reach 1 or pass it
                let mut cur = r.clone();
                let mut exp = BigUint::zero();
                while cur < Rational::one() {
                    cur /= g;
                    exp += 1u32;
                }
                cur.is_one().then_some(Element::Gen(GenPower::Exp(exp)))
            }
            _ => Some(Element::Value(r.clone())),
        }
    }

    /// Text form used in model files: `p/q` rationals, `a^i` for generator powers.
    pub fn format_element(&self, a: &Element) -> String {
        match a {
            Element::Gen(GenPower::Bottom) => "0".into(),
            Element::Gen(GenPower::Exp(i)) if i.is_zero() => "1".into(),
            Element::Gen(GenPower::Exp(i)) => format!("a^{i}"),
            _ => self.to_rational(a).to_string(),
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<Element, AlgebraError> {
        let bad = || AlgebraError::InvalidElement {
            algebra: self.to_string(),
            text: text.to_string(),
        };
        let t = text.trim();
        if let (ChainAlgebra::ProductOneGen(_), Some(exp)) = (self, t.strip_prefix("a^")) {
            let exp = BigUint::from_str(exp).map_err(|_| bad())?;
            return Ok(Element::Gen(GenPower::Exp(exp)));
        }
        let r = Rational::from_str(t).map_err(|_| bad())?;
        self.from_rational(&r).ok_or_else(bad)
    }
}

impl fmt::Display for ChainAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainAlgebra::Mv(n) => write!(f, "mv:{n}"),
            ChainAlgebra::Lukasiewicz => f.write_str("luk"),
            ChainAlgebra::Godel => f.write_str("godel"),
            ChainAlgebra::Product => f.write_str("product"),
            ChainAlgebra::ProductOneGen(a) => {
                write!(f, "product1:{}/{}", a.numer(), a.denom())
            }
        }
    }
}

impl FromStr for ChainAlgebra {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::InvalidDescriptor(s.to_string());
        match s.trim() {
            "luk" => Ok(ChainAlgebra::Lukasiewicz),
            "godel" => Ok(ChainAlgebra::Godel),
            "product" => Ok(ChainAlgebra::Product),
            other => {
                if let Some(n) = other.strip_prefix("mv:") {
                    ChainAlgebra::mv(n.parse().map_err(|_| bad())?)
                } else if let Some(a) = other.strip_prefix("product1:") {
                    ChainAlgebra::product_one_gen(Rational::from_str(a).map_err(|_| bad())?)
                } else {
                    Err(bad())
                }
            }
        }
    }
}
