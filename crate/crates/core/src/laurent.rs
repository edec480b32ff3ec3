//! Exact arithmetic in the ring `A = Z[Γ]` of Laurent "polynomials" whose
//! exponents live in a totally ordered abelian group `Γ ≅ Z^k` (lexicographic
//! order).
//!
//! Elements are written `Σ a_γ q^γ`. The rank `k` is fixed per computation:
//! `k = 1` is the single-parameter case, `k = 2` covers generic two-parameter
//! weight systems. Coefficients are arbitrary-precision integers, so equality
//! of canonical forms is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficient ring for `A`.
pub type Coeff = BigInt;

/// An exponent γ ∈ Γ ≅ Z^k. Comparison is lexicographic (first coordinate
/// dominant), which is a total order compatible with addition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GammaExp(Vec<i64>);

impl GammaExp {
    pub fn new(coords: Vec<i64>) -> Self {
        GammaExp(coords)
    }

    /// The zero exponent of the given rank.
    pub fn zero(rank: usize) -> Self {
        GammaExp(vec![0; rank])
    }

    /// Rank-1 convenience constructor.
    pub fn int(n: i64) -> Self {
        GammaExp(vec![n])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sign of γ against 0 under the lexicographic order.
    pub fn cmp_zero(&self) -> std::cmp::Ordering {
        for &c in &self.0 {
            match c.cmp(&0) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    }

    pub fn is_positive(&self) -> bool {
        self.cmp_zero() == std::cmp::Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.cmp_zero() == std::cmp::Ordering::Less
    }

    pub fn checked_add(&self, other: &GammaExp) -> GammaExp {
        debug_assert_eq!(self.rank(), other.rank(), "mixed exponent ranks");
        GammaExp(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn negated(&self) -> GammaExp {
        GammaExp(self.0.iter().map(|c| -c).collect())
    }

    pub fn scaled(&self, n: i64) -> GammaExp {
        GammaExp(self.0.iter().map(|c| c * n).collect())
    }
}

impl Add for &GammaExp {
    type Output = GammaExp;
    fn add(self, rhs: &GammaExp) -> GammaExp {
        self.checked_add(rhs)
    }
}

impl Sub for &GammaExp {
    type Output = GammaExp;
    fn sub(self, rhs: &GammaExp) -> GammaExp {
        self.checked_add(&rhs.negated())
    }
}

impl Neg for &GammaExp {
    type Output = GammaExp;
    fn neg(self) -> GammaExp {
        self.negated()
    }
}

impl fmt::Display for GammaExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The degree of an element of `A`: `None` is the distinguished −∞ assigned
/// to 0, and `Option`'s ordering places it below every finite exponent.
pub type Degree = Option<GammaExp>;

/// A sparse element of `A = Z[Γ]` in canonical form: no stored coefficient is
/// zero, terms ordered by exponent. Structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<GammaExp, Coeff>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The multiplicative unit `q^0` at the given rank.
    pub fn one(rank: usize) -> Self {
        Self::monomial(GammaExp::zero(rank), Coeff::one())
    }

    pub fn monomial(exp: GammaExp, coeff: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { terms }
    }

    /// `q^γ`.
    pub fn q_power(exp: GammaExp) -> Self {
        Self::monomial(exp, Coeff::one())
    }

    pub fn constant(rank: usize, c: i64) -> Self {
        Self::monomial(GammaExp::zero(rank), Coeff::from(c))
    }

    pub fn from_terms<I: IntoIterator<Item = (GammaExp, Coeff)>>(iter: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: GammaExp, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GammaExp, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &GammaExp) -> Coeff {
        self.terms.get(exp).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Coefficient of `q^0`.
    pub fn constant_term(&self) -> Coeff {
        match self.terms.keys().next() {
            None => Coeff::zero(),
            Some(e) => self.coeff(&GammaExp::zero(e.rank())),
        }
    }

    /// `deg p = max{γ : a_γ ≠ 0}`, with `deg 0 = −∞` (`None`).
    pub fn deg(&self) -> Degree {
        self.terms.keys().next_back().cloned()
    }

    pub fn min_exp(&self) -> Degree {
        self.terms.keys().next().cloned()
    }

    /// The bar involution `q^γ ↦ q^{−γ}`.
    pub fn bar(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.negated(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiply by the monomial `c·q^δ`.
    pub fn mul_monomial(&self, exp: &GammaExp, c: &Coeff) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.checked_add(exp), a * c))
                .collect(),
        }
    }

    /// The part of the element supported on strictly positive exponents.
    pub fn strictly_positive_part(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.is_positive())
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn strictly_negative_part(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.is_negative())
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn in_cone(&self, cone: &Cone) -> bool {
        self.terms.keys().all(|e| cone.contains_exp(e))
    }

    /// Exact division: `Some(t)` with `self = den·t` if such `t` exists in `A`.
    pub fn divide_exact(&self, den: &LaurentPoly) -> Option<LaurentPoly> {
        if den.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        // Any quotient t has min(t) = min(self) − min(den); once the working
        // remainder's leading exponent drops below that plus max(den), no
        // exact quotient exists.
        let lower = &self.min_exp().unwrap() - &den.min_exp().unwrap();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        let (dexp, dcoeff) = den.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        while !rem.is_zero() {
            let (rexp, rcoeff) = {
                let (e, c) = rem.terms.iter().next_back().unwrap();
                (e.clone(), c.clone())
            };
            let qexp = &rexp - &dexp;
            if qexp < lower {
                return None;
            }
            let (q, r) = num_integer_div_rem(&rcoeff, &dcoeff);
            if !r.is_zero() {
                return None;
            }
            let t = LaurentPoly::monomial(qexp, q);
            rem = &rem - &(den * &t);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// JSON form: array of `[exponent-vector, coefficient-string]` pairs
    /// sorted by exponent.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| {
                    serde_json::json!([
                        e.coords().iter().copied().collect::<Vec<i64>>(),
                        c.to_string()
                    ])
                })
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LaurentPoly, String> {
        let arr = v.as_array().ok_or("expected array of terms")?;
        let mut p = LaurentPoly::zero();
        for t in arr {
            let pair = t.as_array().ok_or("expected [exponent, coeff] pair")?;
            if pair.len() != 2 {
                return Err("expected [exponent, coeff] pair".into());
            }
            let coords: Vec<i64> = pair[0]
                .as_array()
                .ok_or("expected exponent vector")?
                .iter()
                .map(|x| x.as_i64().ok_or("expected integer coordinate"))
                .collect::<Result<_, _>>()?;
            let coeff: Coeff = pair[1]
                .as_str()
                .ok_or("expected coefficient string")?
                .parse()
                .map_err(|e| format!("bad coefficient: {e}"))?;
            p.add_term(GammaExp::new(coords), coeff);
        }
        Ok(p)
    }
}

fn num_integer_div_rem(a: &Coeff, b: &Coeff) -> (Coeff, Coeff) {
    let q = a / b;
    let r = a - &(&q * b);
    (q, r)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in rhs.terms.iter() {
                out.add_term(e1.checked_add(e2), c1 * c2);
            }
        }
        out
    }
}

/// Term order for display and CSV export: descending exponent, every term as
/// `±c·q^(γ)`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let sign = if c.sign() == num_bigint::Sign::Minus {
                "-"
            } else {
                "+"
            };
            let mag = c.magnitude().to_string();
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{sign}{mag}·q^{e}")?;
            first = false;
        }
        Ok(())
    }
}

/// One of the exponent cones `A_{≥γ₀}`, `A_{>γ₀}`, `A_{≤γ₀}`, `A_{<γ₀}`.
/// A shifted cone `q^δ·C` is the same kind with threshold moved by δ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cone {
    pub kind: ConeKind,
    pub threshold: GammaExp,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConeKind {
    Ge,
    Gt,
    Le,
    Lt,
}

impl Cone {
    pub fn ge(threshold: GammaExp) -> Self {
        Cone { kind: ConeKind::Ge, threshold }
    }
    pub fn gt(threshold: GammaExp) -> Self {
        Cone { kind: ConeKind::Gt, threshold }
    }
    pub fn le(threshold: GammaExp) -> Self {
        Cone { kind: ConeKind::Le, threshold }
    }
    pub fn lt(threshold: GammaExp) -> Self {
        Cone { kind: ConeKind::Lt, threshold }
    }

    /// `A_{>0}` at the given rank.
    pub fn positive(rank: usize) -> Self {
        Cone::gt(GammaExp::zero(rank))
    }

    /// `A_{<0}` at the given rank.
    pub fn negative(rank: usize) -> Self {
        Cone::lt(GammaExp::zero(rank))
    }

    /// The shifted cone `q^δ·C`.
    pub fn shifted(&self, delta: &GammaExp) -> Cone {
        Cone {
            kind: self.kind,
            threshold: self.threshold.checked_add(delta),
        }
    }

    pub fn contains_exp(&self, e: &GammaExp) -> bool {
        match self.kind {
            ConeKind::Ge => *e >= self.threshold,
            ConeKind::Gt => *e > self.threshold,
            ConeKind::Le => *e <= self.threshold,
            ConeKind::Lt => *e < self.threshold,
        }
    }
}

/// Membership of `p` in a cone; the zero element belongs to every cone.
pub fn cone_member(p: &LaurentPoly, cone: &Cone) -> bool {
    p.in_cone(cone)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> LaurentPoly {
        LaurentPoly::q_power(GammaExp::int(n))
    }

    #[test]
    fn add_cancels_inverse() {
        let p = &q(3) + &(-&q(3));
        assert!(p.is_zero());
    }

    #[test]
    fn add_merges_terms() {
        // (q^1 + 2) + q^1 = 2q^1 + 2
        let p = &(&q(1) + &LaurentPoly::constant(1, 2)) + &q(1);
        assert_eq!(p.coeff(&GammaExp::int(1)), Coeff::from(2));
        assert_eq!(p.constant_term(), Coeff::from(2));
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn add_rank_two_keeps_distinct_terms() {
        let a = LaurentPoly::q_power(GammaExp::new(vec![1, 0]));
        let b = LaurentPoly::q_power(GammaExp::new(vec![0, 1]));
        let p = &a + &b;
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.deg(), Some(GammaExp::new(vec![1, 0])));
    }

    #[test]
    fn mul_adds_exponents() {
        assert_eq!(&q(2) * &q(3), q(5));
    }

    #[test]
    fn mul_difference_of_squares() {
        for c in [1i64, 2, 5] {
            let lhs = &(&q(c) - &q(-c)) * &(&q(c) + &q(-c));
            let rhs = &q(2 * c) - &q(-2 * c);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn mul_by_zero() {
        let p = &q(1) + &LaurentPoly::constant(1, 7);
        assert!((&LaurentPoly::zero() * &p).is_zero());
    }

    #[test]
    fn bar_negates_exponents() {
        let p = &q(2) + &LaurentPoly::constant(1, 2);
        let b = p.bar();
        assert_eq!(b, &q(-2) + &LaurentPoly::constant(1, 2));
    }

    #[test]
    fn bar_antisymmetric_element() {
        let p = &q(-3) - &q(3);
        assert_eq!(p.bar(), -&p);
    }

    #[test]
    fn deg_conventions() {
        assert_eq!((&q(-2) - &q(2)).deg(), Some(GammaExp::int(2)));
        assert_eq!(LaurentPoly::zero().deg(), None);
        // deg 0 = −∞ sits below every finite exponent
        assert!(LaurentPoly::zero().deg() < q(-100).deg());
    }

    #[test]
    fn deg_lex_rank_two() {
        let p = &LaurentPoly::q_power(GammaExp::new(vec![0, 1]))
            + &LaurentPoly::q_power(GammaExp::new(vec![1, -5]));
        assert_eq!(p.deg(), Some(GammaExp::new(vec![1, -5])));
    }

    #[test]
    fn cone_membership() {
        let p = &q(2) + &q(5);
        assert!(p.in_cone(&Cone::positive(1)));
        let r = &q(-2) - &q(2);
        assert!(!r.in_cone(&Cone::positive(1)));
        // shifted cone: q^{c+1} ∈ q^c·A_{>0}
        let shifted = Cone::positive(1).shifted(&GammaExp::int(2));
        assert!(q(3).in_cone(&shifted));
        assert!(!q(2).in_cone(&shifted));
        // zero belongs to every cone
        assert!(LaurentPoly::zero().in_cone(&Cone::negative(1)));
    }

    #[test]
    fn divide_exact_roundtrip() {
        let a = &(&q(1) - &q(-1)) * &(&q(2) + &LaurentPoly::constant(1, 3));
        let d = a.divide_exact(&(&q(1) - &q(-1))).unwrap();
        assert_eq!(d, &q(2) + &LaurentPoly::constant(1, 3));
        assert!(q(1).divide_exact(&(&q(1) + &q(-1))).is_none());
    }

    #[test]
    fn json_roundtrip_with_big_coefficients() {
        let big: Coeff = "123456789012345678901234567890".parse().unwrap();
        let p = &LaurentPoly::monomial(GammaExp::new(vec![1, -2]), big)
            + &LaurentPoly::monomial(GammaExp::new(vec![0, 0]), Coeff::from(-7));
        let back = LaurentPoly::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn display_fixed_term_order() {
        let p = &(&q(2) - &q(-2)) + &LaurentPoly::constant(1, 3);
        assert_eq!(p.to_string(), "+1·q^(2) +3·q^(0) -1·q^(-2)");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(rank: usize) -> impl Strategy<Value = LaurentPoly> {
            proptest::collection::vec(
                (
                    proptest::collection::vec(-6i64..=6, rank),
                    -9i64..=9,
                ),
                0..6,
            )
            .prop_map(|terms| {
                LaurentPoly::from_terms(
                    terms
                        .into_iter()
                        .map(|(e, c)| (GammaExp::new(e), Coeff::from(c))),
                )
            })
        }

        fn arb_exp(rank: usize) -> impl Strategy<Value = GammaExp> {
            proptest::collection::vec(-20i64..=20, rank).prop_map(GammaExp::new)
        }

        proptest! {
            #[test]
            fn bar_is_ring_involution(p in arb_poly(2), r in arb_poly(2)) {
                prop_assert_eq!((&p * &r).bar(), &p.bar() * &r.bar());
                prop_assert_eq!((&p + &r).bar(), &p.bar() + &r.bar());
                prop_assert_eq!(p.bar().bar(), p);
            }

            #[test]
            fn deg_additive_for_nonzero(p in arb_poly(2), r in arb_poly(2)) {
                prop_assume!(!p.is_zero() && !r.is_zero());
                let prod = &p * &r;
                prop_assert!(!prod.is_zero(), "integral domain");
                prop_assert_eq!(
                    prod.deg().unwrap(),
                    p.deg().unwrap().checked_add(&r.deg().unwrap())
                );
            }

            #[test]
            fn lex_total_order_sanity(a in arb_exp(3), b in arb_exp(3), c in arb_exp(3)) {
                let lt = a < b;
                let eq = a == b;
                let gt = a > b;
                prop_assert_eq!(1, [lt, eq, gt].iter().filter(|&&x| x).count());
                if a < b {
                    prop_assert!(a.checked_add(&c) < b.checked_add(&c));
                    prop_assert!(b.negated() < a.negated());
                }
            }

            #[test]
            fn positive_iff_bar_negative(p in arb_poly(2)) {
                let pos = p.in_cone(&Cone::positive(2));
                let barneg = p.bar().in_cone(&Cone::negative(2));
                prop_assert_eq!(pos, barneg);
            }
        }
    }
}
