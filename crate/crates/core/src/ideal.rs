//! W-graph ideals and their realized modules.
//!
//! An ideal is a suffix-closed `E ⊆ D_J` together with the four-way
//! classification of pairs (s, w): strong descent `E⁻` (sw < w), strong
//! ascent `E⁺` (sw > w, sw ∈ E), weak descent `E^{0,−}` (sw ∉ D_J) and weak
//! ascent `E^{0,+}` (sw ∈ D_J ∖ E).
//!
//! A realization builds `Γ_w = T_w · seed` inside `H` from a bar-invariant
//! seed, checks A-freeness, expands every `T_s Γ_w` back in the basis and
//! verifies it fits one of the two dual action patterns:
//!
//! ```text
//!            side M                                side M̃
//! E⁻         Γ_{sw} + (q^{L} − q^{−L})Γ_w          (same)
//! E⁺         Γ_{sw}                                (same)
//! E^{0,−}    −q^{−L} Γ_w                           q^{L} Γ̃_w
//! E^{0,+}    q^{L} Γ_w − Σ_{z<w} r Γ_z             −q^{−L} Γ̃_w + Σ_{z<w} r̃ Γ̃_z
//! ```
//!
//! The r-polynomials are extracted, never supplied; their declared cone
//! containments (`r ∈ q^{L(s)}A_{>0}`, `r̃ ∈ q^{−L(s)}A_{<0}`) are recorded
//! as observations rather than enforced.

use std::collections::HashMap;
use std::sync::Arc;

use crate::coxeter::{Elt, Group};
use crate::hecke::{Hecke, HeckeElt};
use crate::laurent::{Cone, LaurentPoly};
use crate::polymat::{MatrixKind, PolyMatrix};
use crate::solve::{self, VecSolver};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("element set is not suffix-closed: {element} is missing suffix {missing}")]
    NotSuffixClosed { element: String, missing: String },
    #[error("J is not contained in Pos(E): generator s{} descends some element", gen + 1)]
    PosViolation { gen: usize },
    #[error("seed is not bar-invariant")]
    SeedNotBarInvariant,
    #[error("realized vectors are not an A-basis")]
    NotFree,
    #[error("action of T_s{} on {w} fits neither dual pattern: {detail}", s + 1)]
    PatternMismatch { s: usize, w: String, detail: String },
    #[error("weak-case eigenvalues vote for both sides ({detail})")]
    SideConflict { detail: String },
}

/// Classification of a pair (s, w) over an ideal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairClass {
    /// `E⁻`: sw < w (then sw ∈ E by suffix-closure)
    StrongDesc,
    /// `E⁺`: sw > w and sw ∈ E
    StrongAsc,
    /// `E^{0,−}`: sw > w and sw ∉ D_J (then sw = wt, t ∈ J)
    WeakDesc,
    /// `E^{0,+}`: sw > w and sw ∈ D_J ∖ E
    WeakAsc,
}

impl PairClass {
    pub fn is_descent(self) -> bool {
        matches!(self, PairClass::StrongDesc | PairClass::WeakDesc)
    }

    pub fn is_ascent(self) -> bool {
        !self.is_descent()
    }
}

/// A W-graph ideal `E_J`: elements in deterministic (length, word) order,
/// the positivity set J, and the full pair classification.
pub struct Ideal {
    group: Arc<Group>,
    elements: Vec<Elt>,
    index: HashMap<Elt, usize>,
    j: Vec<usize>,
    class: Vec<Vec<PairClass>>,
    conj: Vec<Vec<Option<usize>>>,
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ideal(|E|={}, J={:?})", self.elements.len(), self.j)
    }
}

impl std::fmt::Debug for Realization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Realization(|E|={}, side={:?})", self.ideal.n(), self.side)
    }
}

impl Ideal {
    /// Validate suffix-closure and `J ⊆ Pos(E)`, then classify every pair.
    pub fn build(group: Arc<Group>, elements: &[Elt], j: &[usize]) -> Result<Ideal, IdealError> {
        let mut elements: Vec<Elt> = elements.to_vec();
        elements.sort_by_key(|&w| (group.length(w), w.0));
        elements.dedup();
        let index: HashMap<Elt, usize> =
            elements.iter().enumerate().map(|(i, &w)| (w, i)).collect();

        for &w in &elements {
            for s in group.left_descents(w) {
                let sw = group.left_mul(s, w);
                if !index.contains_key(&sw) {
                    return Err(IdealError::NotSuffixClosed {
                        element: group.word_name(w),
                        missing: group.word_name(sw),
                    });
                }
            }
            for &s in j {
                if group.is_right_descent(w, s) {
                    return Err(IdealError::PosViolation { gen: s });
                }
            }
        }

        let in_d_j = |w: Elt| j.iter().all(|&s| !group.is_right_descent(w, s));
        let mut class = vec![Vec::with_capacity(elements.len()); group.rank()];
        let mut conj = vec![vec![None; elements.len()]; group.rank()];
        for (i, &w) in elements.iter().enumerate() {
            for s in 0..group.rank() {
                let sw = group.left_mul(s, w);
                let c = if group.length(sw) < group.length(w) {
                    PairClass::StrongDesc
                } else if index.contains_key(&sw) {
                    PairClass::StrongAsc
                } else if in_d_j(sw) {
                    PairClass::WeakAsc
                } else {
                    let t = group.mul(group.inverse(w), sw);
                    debug_assert_eq!(group.length(t), 1);
                    conj[s][i] = Some(group.word(t)[0] as usize);
                    PairClass::WeakDesc
                };
                class[s].push(c);
            }
        }

        Ok(Ideal {
            group,
            elements,
            index,
            j: j.to_vec(),
            class,
            conj,
        })
    }

    /// The ideal `{u : u ≤_L w}` generated by a single element.
    pub fn weak_ideal_of(group: Arc<Group>, w: Elt, j: &[usize]) -> Result<Ideal, IdealError> {
        let elements = group.weak_ideal(w);
        Ideal::build(group, &elements, j)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elt] {
        &self.elements
    }

    pub fn elt(&self, local: usize) -> Elt {
        self.elements[local]
    }

    pub fn index_of(&self, w: Elt) -> Option<usize> {
        self.index.get(&w).copied()
    }

    pub fn j_set(&self) -> &[usize] {
        &self.j
    }

    pub fn class(&self, s: usize, local: usize) -> PairClass {
        self.class[s][local]
    }

    /// For a weak descent, the generator `t ∈ J` with `sw = wt`.
    pub fn conjugated_generator(&self, s: usize, local: usize) -> Option<usize> {
        self.conj[s][local]
    }

    /// Local index of `s·w` when it stays inside E.
    pub fn neighbor(&self, s: usize, local: usize) -> Option<usize> {
        self.index_of(self.group.left_mul(s, self.elements[local]))
    }

    pub fn strong_descents(&self, local: usize) -> Vec<usize> {
        self.gens_with(local, PairClass::StrongDesc)
    }

    pub fn strong_ascents(&self, local: usize) -> Vec<usize> {
        self.gens_with(local, PairClass::StrongAsc)
    }

    pub fn weak_descents(&self, local: usize) -> Vec<usize> {
        self.gens_with(local, PairClass::WeakDesc)
    }

    pub fn weak_ascents(&self, local: usize) -> Vec<usize> {
        self.gens_with(local, PairClass::WeakAsc)
    }

    /// `D(w) = SD(w) ∪ WD(w)`.
    pub fn descents(&self, local: usize) -> Vec<usize> {
        (0..self.group.rank())
            .filter(|&s| self.class[s][local].is_descent())
            .collect()
    }

    /// `A(w) = SA(w) ∪ WA(w)`.
    pub fn ascents(&self, local: usize) -> Vec<usize> {
        (0..self.group.rank())
            .filter(|&s| self.class[s][local].is_ascent())
            .collect()
    }

    fn gens_with(&self, local: usize, c: PairClass) -> Vec<usize> {
        (0..self.group.rank())
            .filter(|&s| self.class[s][local] == c)
            .collect()
    }

    pub fn bruhat_leq_local(&self, x: usize, y: usize) -> bool {
        self.group.bruhat_leq(self.elements[x], self.elements[y])
    }

    pub fn bruhat_lt_local(&self, x: usize, y: usize) -> bool {
        x != y && self.bruhat_leq_local(x, y)
    }

    pub fn eps_local(&self, local: usize) -> i64 {
        self.group.eps(self.elements[local])
    }

    pub fn name_local(&self, local: usize) -> String {
        self.group.word_name(self.elements[local])
    }
}

/// Which of the two dual action patterns a realization follows.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    M,
    MTilde,
    /// No weak pairs: both patterns coincide (the regular case).
    Either,
}

impl Side {
    pub fn accepts_m(self) -> bool {
        matches!(self, Side::M | Side::Either)
    }

    pub fn accepts_m_tilde(self) -> bool {
        matches!(self, Side::MTilde | Side::Either)
    }
}

/// An extracted weak-ascent coefficient with its observed cone containment.
#[derive(Clone, Debug)]
pub struct RObservation {
    pub s: usize,
    pub z_local: usize,
    pub w_local: usize,
    pub poly: LaurentPoly,
    /// Whether the entry lies in the cone declared for the detected side.
    pub in_declared_cone: bool,
}

/// A verified realization of a W-graph ideal from a seed element of `H`.
pub struct Realization {
    hecke: Arc<Hecke>,
    ideal: Arc<Ideal>,
    seed: HeckeElt,
    side: Side,
    gammas: Vec<HeckeElt>,
    solver: VecSolver,
    /// `T_s`-action matrices in the Γ-basis: column w holds `T_s Γ_w`.
    actions: Vec<PolyMatrix>,
    /// Extracted weak-ascent coefficients: r (side M) or r̃ (side M̃),
    /// keyed by (s, z_local, w_local).
    r_polys: HashMap<(usize, usize, usize), LaurentPoly>,
    observations: Vec<RObservation>,
    /// bar(Γ_w) in Γ-coordinates, computed by bar in H + re-expression.
    bar_basis: Vec<Vec<LaurentPoly>>,
}

impl Realization {
    pub fn from_seed(
        hecke: Arc<Hecke>,
        ideal: Arc<Ideal>,
        seed: HeckeElt,
    ) -> Result<Realization, IdealError> {
        let group = ideal.group().clone();
        if hecke.bar(&seed) != seed {
            return Err(IdealError::SeedNotBarInvariant);
        }

        let n = ideal.n();
        let dim = group.order();
        let gammas: Vec<HeckeElt> = ideal
            .elements()
            .iter()
            .map(|&w| hecke.t_mul_left(w, &seed))
            .collect();
        let coords: Vec<Vec<LaurentPoly>> =
            gammas.iter().map(|g| hecke_coords(&group, g)).collect();
        let solver = VecSolver::new(dim, coords.clone());
        if !solver.has_distinct_pivots() && solve::rank(dim, &coords) < n {
            return Err(IdealError::NotFree);
        }

        let rank = hecke.gamma_rank();
        let mut votes_m = 0usize;
        let mut votes_mt = 0usize;
        let mut actions = Vec::with_capacity(group.rank());
        let mut r_polys = HashMap::new();
        let mut raw_weak: Vec<(usize, usize, usize, LaurentPoly)> = Vec::new();
        for s in 0..group.rank() {
            let mut mat = PolyMatrix::zero(MatrixKind::Action, n);
            for w in 0..n {
                let image = hecke.ts_mul_left(s, &gammas[w]);
                let coeffs = solver
                    .express(&hecke_coords(&group, &image))
                    .ok_or(IdealError::NotFree)?;
                let mismatch = |detail: String| IdealError::PatternMismatch {
                    s,
                    w: ideal.name_local(w),
                    detail,
                };
                match ideal.class(s, w) {
                    PairClass::StrongDesc => {
                        let sw = ideal.neighbor(s, w).expect("suffix closure");
                        let mut expect = vec![LaurentPoly::zero(); n];
                        expect[sw] = hecke.one_poly();
                        expect[w] = hecke.xi(s);
                        if coeffs != expect {
                            return Err(mismatch("strong descent shape".into()));
                        }
                    }
                    PairClass::StrongAsc => {
                        let sw = ideal.neighbor(s, w).expect("strong ascent in E");
                        let mut expect = vec![LaurentPoly::zero(); n];
                        expect[sw] = hecke.one_poly();
                        if coeffs != expect {
                            return Err(mismatch("strong ascent shape".into()));
                        }
                    }
                    PairClass::WeakDesc => {
                        let mut rest = coeffs.clone();
                        let diag = std::mem::take(&mut rest[w]);
                        if rest.iter().any(|p| !p.is_zero()) {
                            return Err(mismatch("weak descent must be diagonal".into()));
                        }
                        if diag == -&hecke.q_l_inv(s) {
                            votes_m += 1;
                        } else if diag == hecke.q_l(s) {
                            votes_mt += 1;
                        } else {
                            return Err(mismatch(format!(
                                "weak descent eigenvalue is {diag}, expected -q^-L or q^L"
                            )));
                        }
                    }
                    PairClass::WeakAsc => {
                        let mut rest = coeffs.clone();
                        let diag = std::mem::take(&mut rest[w]);
                        if diag == hecke.q_l(s) {
                            votes_m += 1;
                        } else if diag == -&hecke.q_l_inv(s) {
                            votes_mt += 1;
                        } else {
                            return Err(mismatch(format!(
                                "weak ascent diagonal is {diag}, expected q^L or -q^-L"
                            )));
                        }
                        for (z, c) in rest.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            if !ideal.bruhat_lt_local(z, w) {
                                return Err(mismatch(format!(
                                    "weak ascent support at {} is not Bruhat-below",
                                    ideal.name_local(z)
                                )));
                            }
                            raw_weak.push((s, z, w, c.clone()));
                        }
                    }
                }
                for (x, c) in coeffs.into_iter().enumerate() {
                    mat.set(x, w, c);
                }
            }
            actions.push(mat);
        }

        if votes_m > 0 && votes_mt > 0 {
            return Err(IdealError::SideConflict {
                detail: "mixed weak eigenvalues".into(),
            });
        }
        let side = if votes_m > 0 {
            Side::M
        } else if votes_mt > 0 {
            Side::MTilde
        } else {
            Side::Either
        };

        // Extract r with the side's sign convention and record cone facts:
        // side M: T_sΓ_w = q^L Γ_w − Σ r_{z,w} Γ_z,  r declared in q^{L(s)}A_{>0};
        // side M̃: T_sΓ̃_w = −q^{−L} Γ̃_w + Σ r̃ Γ̃_z,  r̃ declared in q^{−L(s)}A_{<0}.
        let mut observations = Vec::new();
        for (s, z, w, c) in raw_weak {
            let (r, cone) = if side.accepts_m() {
                (-&c, Cone::positive(rank).shifted(hecke.weights().of_gen(s)))
            } else {
                (
                    c,
                    Cone::negative(rank).shifted(&hecke.weights().of_gen(s).negated()),
                )
            };
            observations.push(RObservation {
                s,
                z_local: z,
                w_local: w,
                poly: r.clone(),
                in_declared_cone: r.in_cone(&cone),
            });
            r_polys.insert((s, z, w), r);
        }

        let mut rlz = Realization {
            hecke,
            ideal,
            seed,
            side,
            gammas,
            solver,
            actions,
            r_polys,
            observations,
            bar_basis: Vec::new(),
        };
        let bar_basis: Result<Vec<_>, _> = (0..n)
            .map(|i| {
                rlz.express(&rlz.hecke.bar(&rlz.gammas[i]))
                    .ok_or(IdealError::NotFree)
            })
            .collect();
        rlz.bar_basis = bar_basis?;
        debug_assert_eq!(rlz.bar_basis[0], rlz.basis_vec(0), "bar Γ₁ = Γ₁");
        Ok(rlz)
    }

    pub fn hecke(&self) -> &Arc<Hecke> {
        &self.hecke
    }

    pub fn ideal(&self) -> &Arc<Ideal> {
        &self.ideal
    }

    pub fn group(&self) -> &Arc<Group> {
        self.ideal.group()
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn seed(&self) -> &HeckeElt {
        &self.seed
    }

    pub fn n(&self) -> usize {
        self.ideal.n()
    }

    /// `Γ_w` realized in `H`.
    pub fn gamma(&self, local: usize) -> &HeckeElt {
        &self.gammas[local]
    }

    /// The coordinate vector of the basis element `Γ_w`.
    pub fn basis_vec(&self, local: usize) -> Vec<LaurentPoly> {
        let mut v = vec![LaurentPoly::zero(); self.n()];
        v[local] = LaurentPoly::one(self.hecke.gamma_rank());
        v
    }

    /// Re-express an element of `H` in the Γ-basis, if it lies in the span.
    pub fn express(&self, h: &HeckeElt) -> Option<Vec<LaurentPoly>> {
        self.solver.express(&hecke_coords(self.group(), h))
    }

    /// Realize a coordinate vector as an element of `H`.
    pub fn realize(&self, v: &[LaurentPoly]) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (c, g) in v.iter().zip(&self.gammas) {
            if !c.is_zero() {
                out = out.add(&g.scale(c));
            }
        }
        out
    }

    /// `T_s · v` through the verified action table.
    pub fn act_ts(&self, s: usize, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        self.actions[s].mul_vec(v)
    }

    /// `T_x · v` along the canonical reduced word.
    pub fn act_elt(&self, x: Elt, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let mut acc = v.to_vec();
        for &s in self.group().word(x).iter().rev() {
            acc = self.act_ts(s as usize, &acc);
        }
        acc
    }

    /// `h · v` for an arbitrary element of `H`.
    pub fn act_hecke(&self, h: &HeckeElt, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let mut out = vec![LaurentPoly::zero(); self.n()];
        for (x, a) in h.terms() {
            let part = self.act_elt(x, v);
            for (slot, p) in out.iter_mut().zip(part) {
                if !p.is_zero() {
                    *slot = &*slot + &(a * &p);
                }
            }
        }
        out
    }

    /// The action matrix of `T_s` in the Γ-basis.
    pub fn action_matrix(&self, s: usize) -> &PolyMatrix {
        &self.actions[s]
    }

    /// The A-semilinear involution: `bar(Σ a_w Γ_w) = Σ ā_w · bar(Γ_w)`,
    /// with `bar(Γ_w)` computed by the bar of the realized element in `H`.
    pub fn module_bar(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let mut out = vec![LaurentPoly::zero(); self.n()];
        for (x, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cb = c.bar();
            for (slot, b) in out.iter_mut().zip(&self.bar_basis[x]) {
                if !b.is_zero() {
                    *slot = &*slot + &(&cb * b);
                }
            }
        }
        out
    }

    /// `bar(Γ_w)` in Γ-coordinates (the w-th column of the R-matrix).
    pub fn bar_basis_vec(&self, local: usize) -> &[LaurentPoly] {
        &self.bar_basis[local]
    }

    /// Extracted weak-ascent coefficient for (s, z, w); zero if absent.
    pub fn r_poly(&self, s: usize, z_local: usize, w_local: usize) -> LaurentPoly {
        self.r_polys
            .get(&(s, z_local, w_local))
            .cloned()
            .unwrap_or_default()
    }

    pub fn r_observations(&self) -> &[RObservation] {
        &self.observations
    }

    pub fn has_nonzero_r(&self) -> bool {
        !self.r_polys.is_empty()
    }
}

/// Dense coordinates of a Hecke element over the whole group.
fn hecke_coords(group: &Group, h: &HeckeElt) -> Vec<LaurentPoly> {
    let mut v = vec![LaurentPoly::zero(); group.order()];
    for (w, p) in h.terms() {
        v[w.index()] = p.clone();
    }
    v
}

/// Paired realizations of both sides of the same ideal, carrying the duality
/// maps `η` and `θ` of the duality theorem.
pub struct Pair {
    pub m: Realization,
    pub mt: Realization,
}

impl Pair {
    pub fn new(m: Realization, mt: Realization) -> Result<Pair, IdealError> {
        assert!(
            m.ideal().elements() == mt.ideal().elements()
                && m.ideal().j_set() == mt.ideal().j_set(),
            "paired realizations must share the ideal"
        );
        if !m.side().accepts_m() {
            return Err(IdealError::SideConflict {
                detail: "left factor is not side M".into(),
            });
        }
        if !mt.side().accepts_m_tilde() {
            return Err(IdealError::SideConflict {
                detail: "right factor is not side M̃".into(),
            });
        }
        Ok(Pair { m, mt })
    }

    pub fn ideal(&self) -> &Arc<Ideal> {
        self.m.ideal()
    }

    pub fn hecke(&self) -> &Arc<Hecke> {
        self.m.hecke()
    }

    /// `η(Γ_w) = ε_w · bar(Γ̃_w)`, extended A-linearly (η is Φ-semilinear
    /// over H, and Φ fixes A).
    pub fn eta(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        twist(v, &self.mt)
    }

    /// `θ(Γ̃_w) = ε_w · bar(Γ_w)`, the inverse of η.
    pub fn theta(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        twist(v, &self.m)
    }
}

fn twist(v: &[LaurentPoly], target: &Realization) -> Vec<LaurentPoly> {
    let n = target.n();
    let mut out = vec![LaurentPoly::zero(); n];
    for (x, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let signed = if target.ideal().eps_local(x) < 0 {
            -c
        } else {
            c.clone()
        };
        for (slot, b) in out.iter_mut().zip(target.bar_basis_vec(x)) {
            if !b.is_zero() {
                *slot = &*slot + &(&signed * b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Group, Weights, DEFAULT_CAP};
    use crate::laurent::GammaExp;

    fn setup(name: &str, weights: &[i64]) -> Arc<Hecke> {
        let group = Arc::new(Group::named(name, DEFAULT_CAP).unwrap());
        Arc::new(Hecke::new(group, Weights::from_ints(weights).unwrap()).unwrap())
    }

    fn regular(hecke: &Arc<Hecke>) -> Realization {
        let group = hecke.group().clone();
        let all: Vec<Elt> = group.elements().collect();
        let ideal = Arc::new(Ideal::build(group, &all, &[]).unwrap());
        Realization::from_seed(hecke.clone(), ideal, hecke.one()).unwrap()
    }

    fn q(n: i64) -> LaurentPoly {
        LaurentPoly::q_power(GammaExp::int(n))
    }

    #[test]
    fn regular_ideal_has_only_strong_pairs() {
        let hecke = setup("A2", &[1, 1]);
        let rlz = regular(&hecke);
        let ideal = rlz.ideal();
        assert_eq!(ideal.n(), 6);
        for w in 0..ideal.n() {
            assert!(ideal.weak_ascents(w).is_empty());
            assert!(ideal.weak_descents(w).is_empty());
        }
        assert_eq!(rlz.side(), Side::Either);
        assert!(!rlz.has_nonzero_r());
    }

    #[test]
    fn deodhar_classification_a2() {
        let hecke = setup("A2", &[1, 1]);
        let group = hecke.group().clone();
        let p = group.parabolic(&[1]);
        let ideal = Ideal::build(group.clone(), &p.d_j, &[1]).unwrap();
        let s2s1 = ideal.index_of(group.parse_word("s2.s1").unwrap()).unwrap();
        let s1 = ideal.index_of(group.parse_word("s1").unwrap()).unwrap();
        // (s2, s2s1): descending inside E
        assert_eq!(ideal.class(1, s2s1), PairClass::StrongDesc);
        // (s2, s1): ascending inside E
        assert_eq!(ideal.class(1, s1), PairClass::StrongAsc);
        // (s1, s1): descending to the identity
        assert_eq!(ideal.class(0, s1), PairClass::StrongDesc);
        // (s1, s2s1): s1·s2s1 = w₀ ∉ D_J and (s2s1)⁻¹ s1 (s2s1) = s2 ∈ J
        assert_eq!(ideal.class(0, s2s1), PairClass::WeakDesc);
        assert_eq!(ideal.conjugated_generator(0, s2s1), Some(1));
        // J = WD(1)
        assert_eq!(ideal.weak_descents(0), vec![1]);
    }

    #[test]
    fn suffix_closure_rejected() {
        let hecke = setup("A2", &[1, 1]);
        let group = hecke.group().clone();
        let w0 = group.longest_element();
        let err = Ideal::build(group.clone(), &[group.identity(), w0], &[]).unwrap_err();
        assert!(matches!(err, IdealError::NotSuffixClosed { .. }));
    }

    #[test]
    fn pos_violation_rejected() {
        let hecke = setup("A2", &[1, 1]);
        let group = hecke.group().clone();
        let s2 = group.generator(1);
        let err = Ideal::build(group.clone(), &[group.identity(), s2], &[1]).unwrap_err();
        assert_eq!(err, IdealError::PosViolation { gen: 1 });
    }

    #[test]
    fn weak_ideals_are_suffix_closed_everywhere() {
        let hecke = setup("B2", &[1, 1]);
        let group = hecke.group().clone();
        for w in group.elements() {
            assert!(Ideal::weak_ideal_of(group.clone(), w, &[]).is_ok());
        }
    }

    #[test]
    fn regular_realization_action_is_eq1() {
        let hecke = setup("A2", &[1, 1]);
        let rlz = regular(&hecke);
        // Γ_w = T_w and the action is Hecke multiplication itself
        for w in 0..rlz.n() {
            assert_eq!(*rlz.gamma(w), hecke.t(rlz.ideal().elt(w)));
            for s in 0..2 {
                let image = rlz.act_ts(s, &rlz.basis_vec(w));
                let direct = hecke.ts_mul_left(s, rlz.gamma(w));
                assert_eq!(rlz.realize(&image), direct);
            }
        }
    }

    #[test]
    fn deodhar_seeds_realize_with_expected_sides() {
        let hecke = setup("A2", &[1, 1]);
        let group = hecke.group().clone();
        let p = group.parabolic(&[1]);
        let ideal = Arc::new(Ideal::build(group.clone(), &p.d_j, &[1]).unwrap());
        let (c, cp) = hecke.parabolic_kl_elements(&[1]).unwrap();

        // ψ-seed C′: weak descents act by +q^{L(s)} (the M̃ pattern)
        let psi = Realization::from_seed(hecke.clone(), ideal.clone(), cp).unwrap();
        assert_eq!(psi.side(), Side::MTilde);
        assert!(!psi.has_nonzero_r());

        // φ-seed C: weak descents act by −q^{−L(s)} (the M pattern)
        let phi = Realization::from_seed(hecke.clone(), ideal.clone(), c).unwrap();
        assert_eq!(phi.side(), Side::M);
        assert!(!phi.has_nonzero_r());

        let one = ideal.index_of(group.identity()).unwrap();
        let diag_psi = psi.act_ts(1, &psi.basis_vec(one));
        assert_eq!(diag_psi[one], q(1));
        let diag_phi = phi.act_ts(1, &phi.basis_vec(one));
        assert_eq!(diag_phi[one], -&q(-1));
    }

    #[test]
    fn non_bar_invariant_seed_rejected() {
        let hecke = setup("A2", &[1, 1]);
        let group = hecke.group().clone();
        let all: Vec<Elt> = group.elements().collect();
        let ideal = Arc::new(Ideal::build(group.clone(), &all, &[]).unwrap());
        let seed = hecke.t(group.generator(0));
        assert_eq!(
            Realization::from_seed(hecke.clone(), ideal, seed).unwrap_err(),
            IdealError::SeedNotBarInvariant
        );
    }

    #[test]
    fn module_bar_matches_hand_computation_a1() {
        let hecke = setup("A1", &[1]);
        let rlz = regular(&hecke);
        // bar(Γ_s) = Γ_s + (q^{−c} − q^{c}) Γ₁
        let b = rlz.module_bar(&rlz.basis_vec(1));
        assert_eq!(b[1], q(0));
        assert_eq!(b[0], &q(-1) - &q(1));
        // involution on every basis vector of regular A2
        let hecke2 = setup("A2", &[1, 1]);
        let rlz2 = regular(&hecke2);
        for w in 0..rlz2.n() {
            let v = rlz2.basis_vec(w);
            assert_eq!(rlz2.module_bar(&rlz2.module_bar(&v)), v);
        }
    }

    #[test]
    fn module_bar_is_semilinear() {
        let hecke = setup("A2", &[1, 1]);
        let rlz = regular(&hecke);
        let group = hecke.group().clone();
        // bar(h·α) = bar(h)·bar(α) for h = T_x, α basis vectors
        for x in group.elements() {
            for w in 0..rlz.n() {
                let lhs = rlz.module_bar(&rlz.act_elt(x, &rlz.basis_vec(w)));
                let rhs =
                    rlz.act_hecke(&hecke.bar(&hecke.t(x)), &rlz.module_bar(&rlz.basis_vec(w)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn eta_theta_duality_on_a1() {
        let hecke = setup("A1", &[1]);
        let m = regular(&hecke);
        let mt = regular(&hecke);
        let pair = Pair::new(m, mt).unwrap();
        // η(Γ₁) = Γ̃₁
        assert_eq!(pair.eta(&pair.m.basis_vec(0)), pair.m.basis_vec(0));
        // η(Γ_s) = ε_s bar(Γ̃_s) = −(Γ̃_s + (q^{−c} − q^{c})Γ̃₁)
        let img = pair.eta(&pair.m.basis_vec(1));
        assert_eq!(img[1], -&q(0));
        assert_eq!(img[0], -&(&q(-1) - &q(1)));
    }

    #[test]
    fn eta_theta_inverse_and_semilinear_on_a2() {
        let hecke = setup("A2", &[1, 1]);
        let pair = Pair::new(regular(&hecke), regular(&hecke)).unwrap();
        let group = hecke.group().clone();
        for w in 0..pair.m.n() {
            let v = pair.m.basis_vec(w);
            assert_eq!(pair.theta(&pair.eta(&v)), v);
            assert_eq!(pair.eta(&pair.theta(&v)), v);
            // bar ∘ η = η ∘ bar
            assert_eq!(
                pair.mt.module_bar(&pair.eta(&v)),
                pair.eta(&pair.m.module_bar(&v))
            );
            // Φ-semilinearity: η(T_x·Γ) = Φ(T_x)·η(Γ)
            for x in group.elements() {
                let lhs = pair.eta(&pair.m.act_elt(x, &v));
                let rhs = pair.mt.act_hecke(&hecke.phi(&hecke.t(x)), &pair.eta(&v));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn act_branch_examples() {
        // side M, w ∈ E^{0,−}: T_sΓ_w = −q^{−L(s)}Γ_w (φ-seed Deodhar)
        let hecke = setup("A2", &[1, 1]);
        let group = hecke.group().clone();
        let p = group.parabolic(&[1]);
        let ideal = Arc::new(Ideal::build(group.clone(), &p.d_j, &[1]).unwrap());
        let (c, cp) = hecke.parabolic_kl_elements(&[1]).unwrap();
        let phi = Realization::from_seed(hecke.clone(), ideal.clone(), c).unwrap();
        let psi = Realization::from_seed(hecke.clone(), ideal.clone(), cp).unwrap();
        let s2s1 = ideal.index_of(group.parse_word("s2.s1").unwrap()).unwrap();
        // w = s2s1 has s1 as weak descent
        assert_eq!(
            phi.act_ts(0, &phi.basis_vec(s2s1)),
            phi.basis_vec(s2s1)
                .iter()
                .map(|p| p * &-&q(-1))
                .collect::<Vec<_>>()
        );
        assert_eq!(
            psi.act_ts(0, &psi.basis_vec(s2s1)),
            psi.basis_vec(s2s1)
                .iter()
                .map(|p| p * &q(1))
                .collect::<Vec<_>>()
        );
        // w ∈ E⁺ on either side: T_sΓ_w = Γ_{sw}
        let s1 = ideal.index_of(group.parse_word("s1").unwrap()).unwrap();
        assert_eq!(phi.act_ts(1, &phi.basis_vec(s1)), phi.basis_vec(s2s1));
        assert_eq!(psi.act_ts(1, &psi.basis_vec(s1)), psi.basis_vec(s2s1));
    }
}
