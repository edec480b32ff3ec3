//! The Hecke algebra `H(W, S, L)` in the T-basis.
//!
//! Multiplication follows
//! `T_s T_w = T_{sw}` if `ℓ(sw) > ℓ(w)`, else `T_{sw} + (q^{L(s)} − q^{−L(s)}) T_w`,
//! extended A-linearly. The bar involution sends `Σ a_w T_w` to
//! `Σ ā_w (T_{w⁻¹})⁻¹`, computed along a reduced word via
//! `T̄_s = T_s + (q^{−L(s)} − q^{L(s)})`; the result is word-independent.
//! `Φ` is the sign-twist automorphism `T_w ↦ ε_w T̄_w`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coxeter::{Elt, Group, Weights};
use crate::laurent::{Coeff, LaurentPoly};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("parabolic basis elements need L(s{}) > 0", gen + 1)]
    InvalidWeights { gen: usize },
}

/// An element `Σ a_w T_w` of `H`; no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HeckeElt {
    terms: BTreeMap<Elt, LaurentPoly>,
}

impl HeckeElt {
    pub fn zero() -> Self {
        HeckeElt::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Elt, &LaurentPoly)> {
        self.terms.iter().map(|(&w, p)| (w, p))
    }

    pub fn support(&self) -> impl Iterator<Item = Elt> + '_ {
        self.terms.keys().copied()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: Elt) -> LaurentPoly {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Elt, p: LaurentPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        for (w, p) in other.terms() {
            out.add_term(w, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        for (w, p) in other.terms() {
            out.add_term(w, -p);
        }
        out
    }

    pub fn scale(&self, a: &LaurentPoly) -> HeckeElt {
        let mut out = HeckeElt::zero();
        if a.is_zero() {
            return out;
        }
        for (w, p) in self.terms() {
            out.add_term(w, a * p);
        }
        out
    }
}

/// Context tying a group to a weight function; all `H`-operations live here.
pub struct Hecke {
    group: Arc<Group>,
    weights: Weights,
}

impl Hecke {
    pub fn new(group: Arc<Group>, weights: Weights) -> Result<Self, crate::coxeter::CoxError> {
        weights.validate(&group)?;
        Ok(Hecke { group, weights })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    /// Rank of the exponent group Γ.
    pub fn gamma_rank(&self) -> usize {
        self.weights.gamma_rank()
    }

    pub fn one_poly(&self) -> LaurentPoly {
        LaurentPoly::one(self.gamma_rank())
    }

    /// `q^{L(s)}`.
    pub fn q_l(&self, s: usize) -> LaurentPoly {
        LaurentPoly::q_power(self.weights.of_gen(s).clone())
    }

    /// `q^{−L(s)}`.
    pub fn q_l_inv(&self, s: usize) -> LaurentPoly {
        LaurentPoly::q_power(self.weights.of_gen(s).negated())
    }

    /// `q^{L(s)} − q^{−L(s)}` (zero when `L(s) = 0`).
    pub fn xi(&self, s: usize) -> LaurentPoly {
        &self.q_l(s) - &self.q_l_inv(s)
    }

    /// `q^{L(w)}`.
    pub fn q_weight(&self, w: Elt) -> LaurentPoly {
        LaurentPoly::q_power(self.weights.of(&self.group, w))
    }

    pub fn eps_poly(&self, w: Elt) -> LaurentPoly {
        LaurentPoly::constant(self.gamma_rank(), self.group.eps(w))
    }

    /// `T_w`.
    pub fn t(&self, w: Elt) -> HeckeElt {
        let mut h = HeckeElt::zero();
        h.add_term(w, self.one_poly());
        h
    }

    pub fn one(&self) -> HeckeElt {
        self.t(self.group.identity())
    }

    /// `T_s · h` by linear extension of the multiplication rule.
    pub fn ts_mul_left(&self, s: usize, h: &HeckeElt) -> HeckeElt {
        let xi = self.xi(s);
        let mut out = HeckeElt::zero();
        for (w, a) in h.terms() {
            let sw = self.group.left_mul(s, w);
            if self.group.length(sw) > self.group.length(w) {
                out.add_term(sw, a.clone());
            } else {
                out.add_term(sw, a.clone());
                out.add_term(w, &xi * a);
            }
        }
        out
    }

    /// `T̄_s · h = (T_s + (q^{−L(s)} − q^{L(s)})) · h`.
    pub fn bar_ts_mul_left(&self, s: usize, h: &HeckeElt) -> HeckeElt {
        let neg_xi = -&self.xi(s);
        self.ts_mul_left(s, h).add(&h.scale(&neg_xi))
    }

    /// `T_x · h` along the canonical reduced word of `x`.
    pub fn t_mul_left(&self, x: Elt, h: &HeckeElt) -> HeckeElt {
        let mut acc = h.clone();
        for &s in self.group.word(x).iter().rev() {
            acc = self.ts_mul_left(s as usize, &acc);
        }
        acc
    }

    pub fn mul(&self, h1: &HeckeElt, h2: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (x, a) in h1.terms() {
            out = out.add(&self.t_mul_left(x, h2).scale(a));
        }
        out
    }

    /// `T̄_w = (T_{w⁻¹})⁻¹ = T̄_{s_1} ⋯ T̄_{s_k}` for a reduced word
    /// `w = s_1 ⋯ s_k`.
    pub fn bar_t(&self, w: Elt) -> HeckeElt {
        let mut acc = self.one();
        for &s in self.group.word(w).iter().rev() {
            acc = self.bar_ts_mul_left(s as usize, &acc);
        }
        acc
    }

    /// The bar involution on `H`.
    pub fn bar(&self, h: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (w, a) in h.terms() {
            out = out.add(&self.bar_t(w).scale(&a.bar()));
        }
        out
    }

    /// `Φ(Σ a_w T_w) = Σ a_w ε_w T̄_w`; an A-algebra automorphism with
    /// `Φ² = id`, commuting with bar.
    pub fn phi(&self, h: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (w, a) in h.terms() {
            let signed = if self.group.eps(w) < 0 { -a } else { a.clone() };
            out = out.add(&self.bar_t(w).scale(&signed));
        }
        out
    }

    /// The bar-invariant parabolic elements attached to `W_K = ⟨K⟩`:
    /// `C_{w_K} = ε_{w_K} q^{L(w_K)} Σ_{w∈W_K} ε_w q^{−L(w)} T_w` and
    /// `C′_{w_K} = q^{−L(w_K)} Σ_{w∈W_K} q^{L(w)} T_w`.
    pub fn parabolic_kl_elements(&self, k: &[usize]) -> Result<(HeckeElt, HeckeElt), HeckeError> {
        for &s in k {
            if !self.weights.of_gen(s).is_positive() {
                return Err(HeckeError::InvalidWeights { gen: s });
            }
        }
        let subgroup = self.group.subgroup(k);
        let w_k = self.group.parabolic_longest(k);
        let l_wk = self.weights.of(&self.group, w_k);
        let eps_wk = self.group.eps(w_k);
        let mut c = HeckeElt::zero();
        let mut c_prime = HeckeElt::zero();
        for &w in &subgroup {
            let l_w = self.weights.of(&self.group, w);
            let sign = Coeff::from(eps_wk * self.group.eps(w));
            c.add_term(w, LaurentPoly::monomial(&l_wk - &l_w, sign));
            c_prime.add_term(w, LaurentPoly::q_power(&l_w - &l_wk));
        }
        Ok((c, c_prime))
    }

    /// Render as text for reports, e.g. `(+1·q^(1))·T[s1.s2] + ...`.
    pub fn format_elt(&self, h: &HeckeElt) -> String {
        if h.is_zero() {
            return "0".into();
        }
        h.terms()
            .map(|(w, p)| format!("({})·T[{}]", p, self.group.word_name(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// JSON form: map from canonical reduced word (`"e"` for the identity)
    /// to the coefficient polynomial.
    pub fn elt_to_json(&self, h: &HeckeElt) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (w, p) in h.terms() {
            map.insert(self.group.word_name(w), p.to_json());
        }
        serde_json::Value::Object(map)
    }

    pub fn elt_from_json(&self, v: &serde_json::Value) -> Result<HeckeElt, String> {
        let obj = v.as_object().ok_or("expected object")?;
        let mut h = HeckeElt::zero();
        for (word, poly) in obj {
            let w = self.group.parse_word(word).map_err(|e| e.to_string())?;
            h.add_term(w, LaurentPoly::from_json(poly)?);
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::DEFAULT_CAP;
    use crate::laurent::GammaExp;

    fn hecke(name: &str, weights: &[i64]) -> Hecke {
        let group = Arc::new(Group::named(name, DEFAULT_CAP).unwrap());
        let w = Weights::from_ints(weights).unwrap();
        Hecke::new(group, w).unwrap()
    }

    fn q(h: &Hecke, n: i64) -> LaurentPoly {
        let mut e = vec![0i64; h.gamma_rank()];
        e[0] = n;
        LaurentPoly::q_power(GammaExp::new(e))
    }

    #[test]
    fn eq1_multiplication_cases() {
        let h = hecke("A1", &[2]);
        let s = h.group().generator(0);
        // ascent
        assert_eq!(h.ts_mul_left(0, &h.one()), h.t(s));
        // descent: T_s T_s = T_1 + (q^{L} − q^{−L}) T_s
        let tss = h.ts_mul_left(0, &h.t(s));
        let mut expect = h.one();
        expect.add_term(s, &q(&h, 2) - &q(&h, -2));
        assert_eq!(tss, expect);
    }

    #[test]
    fn zero_weight_degenerates_quadratic() {
        let group = Arc::new(Group::named("A1", DEFAULT_CAP).unwrap());
        let h = Hecke::new(group, Weights::from_ints(&[0]).unwrap()).unwrap();
        let s = h.group().generator(0);
        assert_eq!(h.ts_mul_left(0, &h.t(s)), h.one());
    }

    #[test]
    fn t_mul_additive_lengths() {
        let h = hecke("A2", &[1, 1]);
        let g = h.group().clone();
        let s1 = g.generator(0);
        let s2 = g.generator(1);
        assert_eq!(h.mul(&h.t(s1), &h.t(s2)), h.t(g.mul(s1, s2)));
    }

    #[test]
    fn quadratic_relation_factorization() {
        for (name, ws) in [("A2", vec![1, 1]), ("B2", vec![1, 2])] {
            let h = hecke(name, &ws);
            for s in 0..h.group().rank() {
                let ts = h.t(h.group().generator(s));
                let lhs = ts.sub(&h.one().scale(&h.q_l(s)));
                let rhs = ts.add(&h.one().scale(&h.q_l_inv(s)));
                assert!(h.mul(&lhs, &rhs).is_zero());
            }
        }
    }

    #[test]
    fn a1_longest_squares() {
        let h = hecke("A1", &[3]);
        let w0 = h.group().longest_element();
        let sq = h.mul(&h.t(w0), &h.t(w0));
        let mut expect = h.one();
        expect.add_term(w0, h.xi(0));
        assert_eq!(sq, expect);
    }

    #[test]
    fn braid_relations() {
        for (name, ws) in [
            ("A2", vec![1, 1]),
            ("B2", vec![1, 2]),
            ("A3", vec![1, 1, 1]),
            ("I2(5)", vec![1, 1]),
            ("B3", vec![2, 1, 1]),
        ] {
            let h = hecke(name, &ws);
            let g = h.group().clone();
            for s in 0..g.rank() {
                for t in s + 1..g.rank() {
                    let m = g.matrix().entry(s, t) as usize;
                    let mut lhs = h.one();
                    let mut rhs = h.one();
                    for i in 0..m {
                        let (a, b) = if i % 2 == 0 { (s, t) } else { (t, s) };
                        lhs = h.ts_mul_left(a, &lhs);
                        rhs = h.ts_mul_left(b, &rhs);
                    }
                    assert_eq!(lhs, rhs, "braid failure in {name} for ({s},{t})");
                }
            }
        }
    }

    #[test]
    fn bar_of_generator() {
        let h = hecke("A1", &[2]);
        let s = h.group().generator(0);
        let b = h.bar(&h.t(s));
        let mut expect = h.t(s);
        expect.add_term(h.group().identity(), &q(&h, -2) - &q(&h, 2));
        assert_eq!(b, expect);
        assert_eq!(h.bar(&h.one()), h.one());
    }

    #[test]
    fn bar_is_involution_on_b2() {
        let h = hecke("B2", &[1, 2]);
        for w in h.group().elements() {
            let tw = h.t(w);
            assert_eq!(h.bar(&h.bar(&tw)), tw);
            // T̄_w T_{w⁻¹}... bar(T_w) is the inverse of T_{w⁻¹}
            let inv = h.group().inverse(w);
            assert_eq!(h.mul(&h.bar_t(w), &h.t(inv)), h.one());
        }
    }

    #[test]
    fn bar_is_ring_homomorphism() {
        let h = hecke("A2", &[1, 1]);
        let g = h.group().clone();
        for x in g.elements() {
            for y in g.elements() {
                let lhs = h.bar(&h.mul(&h.t(x), &h.t(y)));
                let rhs = h.mul(&h.bar(&h.t(x)), &h.bar(&h.t(y)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn bar_word_independent() {
        use crate::coxeter::CoxeterMatrix;
        let h = hecke("B2", &[1, 2]);
        let g = h.group().clone();
        let matrix = CoxeterMatrix::named("B2").unwrap();
        for w in g.elements() {
            let reference = h.bar_t(w);
            for word in crate::coxeter::reduced_words_of(&matrix, g.word(w)) {
                let mut acc = h.one();
                for &s in word.iter().rev() {
                    acc = h.bar_ts_mul_left(s as usize, &acc);
                }
                assert_eq!(acc, reference, "bar differs along another reduced word");
            }
        }
    }

    #[test]
    fn phi_examples_and_involution() {
        let h = hecke("A2", &[1, 1]);
        let g = h.group().clone();
        assert_eq!(h.phi(&h.one()), h.one());
        let s = g.generator(0);
        let mut expect = h.t(s).scale(&LaurentPoly::constant(1, -1));
        expect.add_term(g.identity(), h.xi(0));
        assert_eq!(h.phi(&h.t(s)), expect);
        for w in g.elements() {
            assert_eq!(h.phi(&h.phi(&h.t(w))), h.t(w));
            assert_eq!(h.phi(&h.bar(&h.t(w))), h.bar(&h.phi(&h.t(w))));
        }
        // algebra map on a product
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(
                    h.phi(&h.mul(&h.t(x), &h.t(y))),
                    h.mul(&h.phi(&h.t(x)), &h.phi(&h.t(y)))
                );
            }
        }
    }

    #[test]
    fn parabolic_elements_rank_one() {
        let h = hecke("A2", &[1, 1]);
        let g = h.group().clone();
        let (c, cp) = h.parabolic_kl_elements(&[1]).unwrap();
        let s2 = g.generator(1);
        // C′ = q^{−c} T_1 + T_{s2}
        let mut expect_cp = h.t(s2);
        expect_cp.add_term(g.identity(), q(&h, -1));
        assert_eq!(cp, expect_cp);
        // C = T_{s2} − q^{c} T_1
        let mut expect_c = h.t(s2);
        expect_c.add_term(g.identity(), -&q(&h, 1));
        assert_eq!(c, expect_c);
        // K = ∅ gives T_1 twice
        let (c0, cp0) = h.parabolic_kl_elements(&[]).unwrap();
        assert_eq!(c0, h.one());
        assert_eq!(cp0, h.one());
    }

    #[test]
    fn parabolic_elements_bar_invariant_and_eigen() {
        let h = hecke("B2", &[1, 2]);
        for kmask in 0u32..4 {
            let k: Vec<usize> = (0..2).filter(|&s| kmask >> s & 1 == 1).collect();
            let (c, cp) = h.parabolic_kl_elements(&k).unwrap();
            assert_eq!(h.bar(&c), c);
            assert_eq!(h.bar(&cp), cp);
            for &s in &k {
                // T_s C = −q^{−L(s)} C and T_s C′ = q^{L(s)} C′
                assert_eq!(h.ts_mul_left(s, &c), c.scale(&-&h.q_l_inv(s)));
                assert_eq!(h.ts_mul_left(s, &cp), cp.scale(&h.q_l(s)));
            }
        }
    }

    #[test]
    fn invalid_weights_rejected() {
        let group = Arc::new(Group::named("B2", DEFAULT_CAP).unwrap());
        let h = Hecke::new(group, Weights::from_ints(&[0, 1]).unwrap()).unwrap();
        assert_eq!(
            h.parabolic_kl_elements(&[0]),
            Err(HeckeError::InvalidWeights { gen: 0 })
        );
        assert!(h.parabolic_kl_elements(&[1]).is_ok());
    }

    #[test]
    fn hecke_elt_json_roundtrip() {
        let h = hecke("A2", &[1, 1]);
        let (c, _) = h.parabolic_kl_elements(&[0]).unwrap();
        let json = h.elt_to_json(&c);
        assert_eq!(h.elt_from_json(&json).unwrap(), c);
    }
}
