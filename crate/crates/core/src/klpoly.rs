//! The polynomial tower over a realized ideal: R-polynomials (expansion of
//! bar(Γ_y) in the Γ-basis), the bar-invariant C-basis with its P-matrix,
//! the inverse Q-matrix, μ-coefficients and W-graph assembly, and the dual
//! space `M̂ = Hom(M, A)` with its D and D′ bases.
//!
//! Every table has at least two computation routes (recursion vs. bar in H,
//! recursive Q vs. chain sums, change of basis vs. pairing) and the checkers
//! here compare them entrywise.

use std::collections::BTreeMap;

use crate::hecke::HeckeElt;
use crate::ideal::{Pair, PairClass, Realization, Side};
use crate::laurent::{Cone, GammaExp, LaurentPoly};
use crate::polymat::{MatrixKind, PolyMatrix};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum KlError {
    #[error("R̃ does not match ε·bar(R) at ({x}, {y})")]
    DualityMismatch { x: String, y: String },
    #[error("defect is not bar-antisymmetric at ({y}, {w}); upstream R is wrong")]
    AntisymmetryViolation { y: String, w: String },
    #[error("matrix identity fails at ({x}, {y})")]
    InversionFailure { x: String, y: String },
    #[error("{name}_{{{w}}} is not bar-invariant")]
    NotBarInvariant { name: &'static str, w: String },
    #[error("T_s{} · C_{v} does not fit the C-basis pattern: {detail}", s + 1)]
    PatternMismatch { s: usize, v: String, detail: String },
    #[error("dual action of T_s{} on {z} disagrees with the stated formula: {detail}", s + 1)]
    ActionMismatch { s: usize, z: String, detail: String },
    #[error("identification of dual and plain module fails at (s{}, {w}): {detail}", s + 1)]
    Mismatch { s: usize, w: String, detail: String },
    #[error("W-graph relation fails: {0}")]
    RelationViolation(String),
    #[error("μ condition fails at (s{}, {x}, {y}): {detail}", s + 1)]
    MuCondition { s: usize, x: String, y: String, detail: String },
}

/// Whether (s, w) is a "pure eigenvalue −q^{−L(s)}" position for the
/// C-basis of the given side. Strong descents are pure on both sides; the
/// two sides differ exactly in which weak class joins them.
pub fn is_pure(side: Side, class: PairClass) -> bool {
    match class {
        PairClass::StrongDesc => true,
        PairClass::StrongAsc => false,
        PairClass::WeakDesc => side.accepts_m(),
        PairClass::WeakAsc => !side.accepts_m(),
    }
}

/// The R-matrix by the descent recursion: for a strong descent s of y, the
/// column at y is obtained from the column at sy through the four-case
/// rules, plus the weak-ascent correction terms carried by the action table
/// (these vanish whenever the extracted r-polynomials vanish).
pub fn compute_r(rlz: &Realization) -> PolyMatrix {
    let ideal = rlz.ideal();
    let hecke = rlz.hecke();
    let n = ideal.n();
    let rank = hecke.gamma_rank();
    let mut r = PolyMatrix::zero(MatrixKind::R, n);
    r.set(0, 0, LaurentPoly::one(rank));
    // Elements are sorted by length, so sy precedes y.
    for y in 1..n {
        let s = ideal.strong_descents(y)[0];
        let sy = ideal.neighbor(s, y).expect("strong descent stays in E");
        let m_side = rlz.side().accepts_m();
        let pos_q = hecke.q_l(s);
        let neg_q = hecke.q_l_inv(s);
        let weak_ascents: Vec<usize> = (0..n)
            .filter(|&u| ideal.class(s, u) == PairClass::WeakAsc)
            .collect();
        for x in 0..n {
            let mut entry = match ideal.class(s, x) {
                PairClass::StrongDesc => {
                    let sx = ideal.neighbor(s, x).unwrap();
                    r.at(sx, sy).clone()
                }
                PairClass::StrongAsc => {
                    let sx = ideal.neighbor(s, x).unwrap();
                    &r.at(sx, sy).clone() + &(&-&hecke.xi(s) * r.at(x, sy))
                }
                PairClass::WeakDesc => {
                    // −q^{L} on side M, q^{−L} on side M̃
                    let factor = if m_side { -&pos_q } else { neg_q.clone() };
                    &factor * r.at(x, sy)
                }
                PairClass::WeakAsc => {
                    // q^{−L} on side M, −q^{L} on side M̃
                    let factor = if m_side { neg_q.clone() } else { -&pos_q };
                    &factor * r.at(x, sy)
                }
            };
            // correction: Σ_{u ∈ E^{0,+}, u ≠ x} (coeff of Γ_x in T_sΓ_u)·R_{u,sy}
            for &u in &weak_ascents {
                if u == x {
                    continue;
                }
                let a = rlz.action_matrix(s).at(x, u);
                if !a.is_zero() && !r.at(u, sy).is_zero() {
                    entry = &entry + &(a * r.at(u, sy));
                }
            }
            r.set(x, y, entry);
        }
    }
    r
}

/// Oracle route for R: bar of each realized basis vector in `H`,
/// re-expressed through the triangular solver.
pub fn r_matrix_via_bar(rlz: &Realization) -> PolyMatrix {
    let n = rlz.n();
    let mut r = PolyMatrix::zero(MatrixKind::R, n);
    for y in 0..n {
        for (x, c) in rlz.bar_basis_vec(y).iter().enumerate() {
            r.set(x, y, c.clone());
        }
    }
    r
}

/// `bar(R)·R = R·bar(R) = I`.
pub fn check_r_bar_inverse(rlz: &Realization, r: &PolyMatrix) -> Result<(), KlError> {
    let id = PolyMatrix::identity(MatrixKind::R, r.n(), rlz.hecke().gamma_rank());
    for prod in [r.bar().mul(r), r.mul(&r.bar())] {
        if let Some((x, y, _, _)) = prod.first_difference(&id) {
            return Err(KlError::InversionFailure {
                x: rlz.ideal().name_local(x),
                y: rlz.ideal().name_local(y),
            });
        }
    }
    Ok(())
}

/// Cor 3.2: `R̃_{x,y} = ε_x ε_y bar(R_{x,y})` entrywise.
pub fn check_cor_3_2(pair: &Pair, r: &PolyMatrix, rt: &PolyMatrix) -> Result<(), KlError> {
    let ideal = pair.ideal();
    let eps: Vec<i64> = (0..ideal.n()).map(|i| ideal.eps_local(i)).collect();
    let expected = r.bar().sign_conjugate(&eps);
    if let Some((x, y, _, _)) = rt.first_difference(&expected) {
        return Err(KlError::DualityMismatch {
            x: ideal.name_local(x),
            y: ideal.name_local(y),
        });
    }
    Ok(())
}

/// Unique P with unitriangularity, strictly positive off-diagonal support,
/// and `bar(P_{y,w}) − P_{y,w} = Σ_{y<x≤w} bar(R_{y,x}) P_{x,w}`.
///
/// `desc_order` lists indices from the top of the order `leq` downwards;
/// columns are independent given R.
pub fn solve_p(
    r: &PolyMatrix,
    rank: usize,
    leq: &dyn Fn(usize, usize) -> bool,
    desc_order: &[usize],
    name: &dyn Fn(usize) -> String,
) -> Result<PolyMatrix, KlError> {
    let n = r.n();
    let mut p = PolyMatrix::zero(MatrixKind::P, n);
    for &w in desc_order {
        p.set(w, w, LaurentPoly::one(rank));
        for &y in desc_order {
            if y == w || !leq(y, w) {
                continue;
            }
            let mut f = LaurentPoly::zero();
            for &x in desc_order {
                if x != y && leq(y, x) && leq(x, w) && !r.at(y, x).is_zero() {
                    let px = p.at(x, w);
                    if !px.is_zero() {
                        f = &f + &(&r.at(y, x).bar() * px);
                    }
                }
            }
            if f.bar() != -&f {
                return Err(KlError::AntisymmetryViolation {
                    y: name(y),
                    w: name(w),
                });
            }
            p.set(y, w, -&f.strictly_positive_part());
        }
    }
    Ok(p)
}

/// Independent oracle for P: solve `P_{x,w} = Σ_{x≤y≤w} R_{x,y} bar(P_{y,w})`
/// directly (taking the strictly positive part of
/// `Σ_{x<y≤w} R_{x,y} bar(P_{y,w})`), no bar(R) and no defect subtraction.
pub fn p_oracle(
    r: &PolyMatrix,
    rank: usize,
    leq: &dyn Fn(usize, usize) -> bool,
    desc_order: &[usize],
    name: &dyn Fn(usize) -> String,
) -> Result<PolyMatrix, KlError> {
    let n = r.n();
    let mut p = PolyMatrix::zero(MatrixKind::P, n);
    for &w in desc_order {
        p.set(w, w, LaurentPoly::one(rank));
        for &x in desc_order {
            if x == w || !leq(x, w) {
                continue;
            }
            let mut g = LaurentPoly::zero();
            for &y in desc_order {
                if y != x && leq(x, y) && leq(y, w) && !r.at(x, y).is_zero() {
                    let py = p.at(y, w);
                    if !py.is_zero() {
                        g = &g + &(r.at(x, y) * &py.bar());
                    }
                }
            }
            if g.bar() != -&g {
                return Err(KlError::AntisymmetryViolation {
                    y: name(x),
                    w: name(w),
                });
            }
            p.set(x, w, g.strictly_positive_part());
        }
    }
    Ok(p)
}

/// `Q_{y,w} = −P_{y,w} − Σ_{y<z<w} Q_{y,z} P_{z,w}`, with `PQ = QP = I`
/// asserted before returning.
pub fn compute_q(
    p: &PolyMatrix,
    rank: usize,
    leq: &dyn Fn(usize, usize) -> bool,
    asc_order: &[usize],
    name: &dyn Fn(usize) -> String,
) -> Result<PolyMatrix, KlError> {
    let n = p.n();
    let mut q = PolyMatrix::zero(MatrixKind::Q, n);
    for &w in asc_order {
        q.set(w, w, LaurentPoly::one(rank));
        for &y in asc_order {
            if y == w || !leq(y, w) {
                continue;
            }
            let mut acc = -p.at(y, w);
            for &z in asc_order {
                if z != y && z != w && leq(y, z) && leq(z, w) {
                    let (qyz, pzw) = (q.at(y, z), p.at(z, w));
                    if !qyz.is_zero() && !pzw.is_zero() {
                        acc = &acc - &(qyz * pzw);
                    }
                }
            }
            q.set(y, w, acc);
        }
    }
    let id = PolyMatrix::identity(MatrixKind::Q, n, rank);
    for prod in [p.mul(&q), q.mul(p)] {
        if let Some((x, y, _, _)) = prod.first_difference(&id) {
            return Err(KlError::InversionFailure {
                x: name(x),
                y: name(y),
            });
        }
    }
    Ok(q)
}

/// Chain-sum oracle: `Q_{y,w} = Σ_{ζ ∈ τ(y,w)} (−1)^{ℓ(ζ)} P_ζ` by explicit
/// enumeration of all strictly increasing chains from y to w.
pub fn q_via_chains(p: &PolyMatrix, rank: usize, leq: &dyn Fn(usize, usize) -> bool) -> PolyMatrix {
    let n = p.n();
    let mut q = PolyMatrix::zero(MatrixKind::Q, n);
    for y in 0..n {
        for w in 0..n {
            if y == w {
                q.set(y, w, LaurentPoly::one(rank));
                continue;
            }
            if !leq(y, w) {
                continue;
            }
            let mut total = LaurentPoly::zero();
            // DFS over chains y = z₀ < z₁ < ... < z_k = w
            let mut stack: Vec<(usize, LaurentPoly, i64)> = vec![(y, LaurentPoly::one(rank), 1)];
            while let Some((z, prod, sign)) = stack.pop() {
                for next in 0..n {
                    if next == z || !leq(z, next) || !leq(next, w) {
                        continue;
                    }
                    let step = p.at(z, next);
                    if step.is_zero() {
                        continue;
                    }
                    let prod2 = &prod * step;
                    let sign2 = -sign;
                    if next == w {
                        total = if sign2 < 0 {
                            &total - &prod2
                        } else {
                            &total + &prod2
                        };
                    } else {
                        stack.push((next, prod2, sign2));
                    }
                }
            }
            q.set(y, w, total);
        }
    }
    q
}

/// `bar(Q) = Q·R` and, with `Q′ = εεQ`, `bar(Q′) = Q′·bar(R̃)`.
pub fn check_q_bar_identities(
    pair: &Pair,
    q: &PolyMatrix,
    r: &PolyMatrix,
    rt: &PolyMatrix,
) -> Result<(), KlError> {
    let ideal = pair.ideal();
    let name = |i: usize| ideal.name_local(i);
    let qbar = q.bar();
    if let Some((x, y, _, _)) = qbar.first_difference(&q.mul(r)) {
        return Err(KlError::InversionFailure {
            x: name(x),
            y: name(y),
        });
    }
    let eps: Vec<i64> = (0..ideal.n()).map(|i| ideal.eps_local(i)).collect();
    let qprime = q.sign_conjugate(&eps);
    if let Some((x, y, _, _)) = qprime.bar().first_difference(&qprime.mul(&rt.bar())) {
        return Err(KlError::InversionFailure {
            x: name(x),
            y: name(y),
        });
    }
    Ok(())
}

/// Extracted μ-coefficients for the C-basis of one realization, plus the
/// signed vertex permutations induced by generators with `L(s) = 0`.
#[derive(Clone, Debug, Default)]
pub struct MuTable {
    /// `(s, z, v) ↦ m^s_{z,v}` with z strictly Bruhat-below v.
    pub entries: BTreeMap<(usize, usize, usize), LaurentPoly>,
    /// For `L(s) = 0`: `s ↦ (σ, sign)` with `T_s C_v = sign_v · C_{σ(v)}`.
    pub zero_gens: BTreeMap<usize, (Vec<usize>, Vec<i64>)>,
    /// Whether the multiplication table fits the stated C-basis shape.
    /// The shape is claimed for side M; a dual side carrying nonzero
    /// r̃-polynomials may deviate, in which case coefficients are recorded
    /// as found and the deviations listed in `notes`.
    pub strict: bool,
    pub notes: Vec<String>,
}

impl MuTable {
    pub fn get(&self, s: usize, z: usize, v: usize) -> LaurentPoly {
        self.entries.get(&(s, z, v)).cloned().unwrap_or_default()
    }
}

/// The action of `T_s` in the C-basis: `Q · A^s · P`.
pub fn c_basis_action(rlz: &Realization, p: &PolyMatrix, q: &PolyMatrix, s: usize) -> PolyMatrix {
    q.mul(rlz.action_matrix(s)).mul(p)
}

/// Expand every `T_s C_v` in the C-basis and extract the μ-coefficients,
/// verifying the multiplication pattern: pure positions get `−q^{−L(s)} C_v`
/// exactly; the others get `q^{L(s)} C_v` (+ `C_{sv}` for strong ascents)
/// plus `Σ m^s_{z,v} C_z` over z strictly below v with s in the pure set.
pub fn compute_mu(rlz: &Realization, p: &PolyMatrix, q: &PolyMatrix) -> Result<MuTable, KlError> {
    let ideal = rlz.ideal();
    let hecke = rlz.hecke();
    let n = ideal.n();
    let mut table = MuTable {
        strict: true,
        ..MuTable::default()
    };
    for s in 0..ideal.group().rank() {
        let cmat = c_basis_action(rlz, p, q, s);
        if !hecke.weights().of_gen(s).is_positive() {
            // L(s) = 0: columns must be signed unit vectors
            let mut perm = vec![0usize; n];
            let mut signs = vec![0i64; n];
            for v in 0..n {
                let mut nonzero = (0..n).filter(|&x| !cmat.at(x, v).is_zero());
                let x = nonzero.next().ok_or_else(|| KlError::PatternMismatch {
                    s,
                    v: ideal.name_local(v),
                    detail: "zero column for L(s) = 0".into(),
                })?;
                let entry = cmat.at(x, v);
                let ok = nonzero.next().is_none()
                    && (*entry == hecke.one_poly() || *entry == -&hecke.one_poly());
                if !ok {
                    return Err(KlError::PatternMismatch {
                        s,
                        v: ideal.name_local(v),
                        detail: "L(s) = 0 column is not a signed unit vector".into(),
                    });
                }
                perm[v] = x;
                signs[v] = if *entry == hecke.one_poly() { 1 } else { -1 };
            }
            table.zero_gens.insert(s, (perm, signs));
            continue;
        }
        for v in 0..n {
            let class = ideal.class(s, v);
            let mismatch = |detail: String| KlError::PatternMismatch {
                s,
                v: ideal.name_local(v),
                detail,
            };
            if is_pure(rlz.side(), class) {
                for x in 0..n {
                    let expect = if x == v {
                        -&hecke.q_l_inv(s)
                    } else {
                        LaurentPoly::zero()
                    };
                    if *cmat.at(x, v) != expect {
                        return Err(mismatch(format!(
                            "pure column deviates at {}",
                            ideal.name_local(x)
                        )));
                    }
                }
                continue;
            }
            // ascent-like column
            if *cmat.at(v, v) != hecke.q_l(s) {
                return Err(mismatch("diagonal must be q^L".into()));
            }
            let structural = if class == PairClass::StrongAsc {
                let sv = ideal.neighbor(s, v).unwrap();
                if *cmat.at(sv, v) != hecke.one_poly() {
                    return Err(mismatch("missing unit coefficient at C_{sv}".into()));
                }
                Some(sv)
            } else {
                None
            };
            for z in 0..n {
                if z == v || Some(z) == structural {
                    continue;
                }
                let m = cmat.at(z, v);
                if m.is_zero() {
                    continue;
                }
                if !ideal.bruhat_lt_local(z, v) || !is_pure(rlz.side(), ideal.class(s, z)) {
                    return Err(mismatch(format!(
                        "unexpected term at {}",
                        ideal.name_local(z)
                    )));
                }
                table.entries.insert((s, z, v), m.clone());
            }
        }
    }
    Ok(table)
}

/// Record every off-diagonal coefficient of the C-basis action without
/// imposing a shape; used for dual sides where the stated multiplication
/// pattern is not claimed (nonzero r̃).
pub fn compute_mu_lenient(rlz: &Realization, p: &PolyMatrix, q: &PolyMatrix) -> MuTable {
    let ideal = rlz.ideal();
    let hecke = rlz.hecke();
    let n = ideal.n();
    let mut table = MuTable::default();
    for s in 0..ideal.group().rank() {
        if !hecke.weights().of_gen(s).is_positive() {
            continue;
        }
        let cmat = c_basis_action(rlz, p, q, s);
        for v in 0..n {
            let structural = if ideal.class(s, v) == PairClass::StrongAsc {
                ideal.neighbor(s, v)
            } else {
                None
            };
            for z in 0..n {
                if z == v || Some(z) == structural {
                    continue;
                }
                let m = cmat.at(z, v);
                if m.is_zero() {
                    continue;
                }
                if !is_pure(rlz.side(), ideal.class(s, z)) || !ideal.bruhat_lt_local(z, v) {
                    table.notes.push(format!(
                        "off-pattern term at (s{}, {}, {}): {}",
                        s + 1,
                        ideal.name_local(z),
                        ideal.name_local(v),
                        m
                    ));
                }
                table.entries.insert((s, z, v), m.clone());
            }
        }
    }
    table
}

/// All tables attached to one realization.
pub struct ModuleTables {
    pub r: PolyMatrix,
    pub p: PolyMatrix,
    pub q: PolyMatrix,
    pub mu: MuTable,
}

impl ModuleTables {
    pub fn compute(rlz: &Realization) -> Result<ModuleTables, KlError> {
        let ideal = rlz.ideal().clone();
        let rank = rlz.hecke().gamma_rank();
        let n = ideal.n();
        let leq = |x: usize, y: usize| ideal.bruhat_leq_local(x, y);
        let desc: Vec<usize> = (0..n).rev().collect();
        let asc: Vec<usize> = (0..n).collect();
        let name = |i: usize| ideal.name_local(i);
        let r = compute_r(rlz);
        let p = solve_p(&r, rank, &leq, &desc, &name)?;
        let q = compute_q(&p, rank, &leq, &asc, &name)?;
        let mu = match compute_mu(rlz, &p, &q) {
            Ok(mu) => mu,
            // the shape is only claimed for side M; a dual side with
            // nonzero r̃ keeps its coefficients as observed
            Err(KlError::PatternMismatch { .. })
                if rlz.side() == Side::MTilde && rlz.has_nonzero_r() =>
            {
                compute_mu_lenient(rlz, &p, &q)
            }
            Err(e) => return Err(e),
        };
        Ok(ModuleTables { r, p, q, mu })
    }

    /// `C_w` in Γ-coordinates (column w of P).
    pub fn c_vec(&self, w: usize) -> Vec<LaurentPoly> {
        (0..self.p.n()).map(|y| self.p.at(y, w).clone()).collect()
    }
}

/// Verify `bar(C_w) = C_w` for every column through the module involution.
pub fn check_c_bar_invariant(rlz: &Realization, p: &PolyMatrix) -> Result<(), KlError> {
    for w in 0..p.n() {
        let v: Vec<LaurentPoly> = (0..p.n()).map(|y| p.at(y, w).clone()).collect();
        if rlz.module_bar(&v) != v {
            return Err(KlError::NotBarInvariant {
                name: "C",
                w: rlz.ideal().name_local(w),
            });
        }
    }
    Ok(())
}

/// `C′_w := θ(C̃_w)` in Γ-coordinates, with bar-invariance verified.
/// Returns columns indexed by w.
pub fn compute_c_prime(pair: &Pair, pt: &PolyMatrix) -> Result<Vec<Vec<LaurentPoly>>, KlError> {
    let n = pair.ideal().n();
    let mut cols = Vec::with_capacity(n);
    for w in 0..n {
        let ct: Vec<LaurentPoly> = (0..n).map(|y| pt.at(y, w).clone()).collect();
        let cp = pair.theta(&ct);
        if pair.m.module_bar(&cp) != cp {
            return Err(KlError::NotBarInvariant {
                name: "C'",
                w: pair.ideal().name_local(w),
            });
        }
        cols.push(cp);
    }
    Ok(cols)
}

/// `C̃′_w := η(C_w)` in Γ̃-coordinates, with bar-invariance verified.
pub fn compute_c_tilde_prime(pair: &Pair, p: &PolyMatrix) -> Result<Vec<Vec<LaurentPoly>>, KlError> {
    let n = pair.ideal().n();
    let mut cols = Vec::with_capacity(n);
    for w in 0..n {
        let c: Vec<LaurentPoly> = (0..n).map(|y| p.at(y, w).clone()).collect();
        let ctp = pair.eta(&c);
        if pair.mt.module_bar(&ctp) != ctp {
            return Err(KlError::NotBarInvariant {
                name: "C~'",
                w: pair.ideal().name_local(w),
            });
        }
        cols.push(ctp);
    }
    Ok(cols)
}

/// A W-graph in the sense of the defining data: vertex I-sets, μ-weights
/// (including the unit weights on strong-ascent edges), and signed vertex
/// bijections for generators of weight zero.
#[derive(Clone, Debug)]
pub struct WGraph {
    pub n: usize,
    pub gamma_rank: usize,
    pub labels: Vec<String>,
    /// `L(s)` per generator.
    pub weights: Vec<GammaExp>,
    /// `I(x) ⊆ S` per vertex.
    pub i_sets: Vec<Vec<usize>>,
    /// `μ^s_{x,y}` for `s ∈ I(x)`, `s ∉ I(y)`.
    pub mu: BTreeMap<(usize, usize, usize), LaurentPoly>,
    /// For `L(s) = 0`: signed bijection data.
    pub zero_gens: BTreeMap<usize, (Vec<usize>, Vec<i64>)>,
}

/// Assemble the W-graph of the C-basis: `I(x)` is the pure set of the
/// realization's side and μ carries both the extracted coefficients and the
/// unit weights `μ^s_{sv,v} = 1` for strong ascents.
pub fn assemble_wgraph(rlz: &Realization, mu: &MuTable) -> WGraph {
    let ideal = rlz.ideal();
    let hecke = rlz.hecke();
    let n = ideal.n();
    let mut i_sets = Vec::with_capacity(n);
    for v in 0..n {
        i_sets.push(
            (0..ideal.group().rank())
                .filter(|&s| is_pure(rlz.side(), ideal.class(s, v)))
                .collect::<Vec<_>>(),
        );
    }
    let mut mu_all = mu.entries.clone();
    for v in 0..n {
        for s in 0..ideal.group().rank() {
            if !hecke.weights().of_gen(s).is_positive() {
                continue;
            }
            if ideal.class(s, v) == PairClass::StrongAsc {
                let sv = ideal.neighbor(s, v).unwrap();
                mu_all.insert((s, sv, v), hecke.one_poly());
            }
        }
    }
    WGraph {
        n,
        gamma_rank: hecke.gamma_rank(),
        labels: (0..n).map(|i| ideal.name_local(i)).collect(),
        weights: (0..ideal.group().rank())
            .map(|s| hecke.weights().of_gen(s).clone())
            .collect(),
        i_sets,
        mu: mu_all,
        zero_gens: mu.zero_gens.clone(),
    }
}

impl WGraph {
    /// The matrix `ρ_s` built from the W-graph data alone:
    /// `ρ_s b_y = −q^{−L(s)} b_y` when `s ∈ I(y)`, else
    /// `q^{L(s)} b_y + Σ_{x : s ∈ I(x)} μ^s_{x,y} b_x`; for `L(s) = 0` the
    /// signed vertex bijection.
    pub fn rho(&self, s: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zero(MatrixKind::Action, self.n);
        if !self.weights[s].is_positive() {
            let (perm, signs) = &self.zero_gens[&s];
            for y in 0..self.n {
                m.set(
                    perm[y],
                    y,
                    LaurentPoly::monomial(GammaExp::zero(self.gamma_rank), signs[y].into()),
                );
            }
            return m;
        }
        let ql = LaurentPoly::q_power(self.weights[s].clone());
        let ql_inv = LaurentPoly::q_power(self.weights[s].negated());
        for y in 0..self.n {
            if self.i_sets[y].contains(&s) {
                m.set(y, y, -&ql_inv);
            } else {
                m.set(y, y, ql.clone());
                for x in 0..self.n {
                    if let Some(muv) = self.mu.get(&(s, x, y)) {
                        debug_assert!(self.i_sets[x].contains(&s));
                        m.set(x, y, muv.clone());
                    }
                }
            }
        }
        m
    }

    /// The defining μ-conditions: `bar(μ) = μ` and `q^{L(s)} μ ∈ R[Γ_{>0}]`.
    pub fn check_mu_conditions(&self) -> Result<(), KlError> {
        for (&(s, x, y), m) in &self.mu {
            if m.bar() != *m {
                return Err(KlError::MuCondition {
                    s,
                    x: self.labels[x].clone(),
                    y: self.labels[y].clone(),
                    detail: "not bar-invariant".into(),
                });
            }
            let shifted = m.mul_monomial(&self.weights[s], &1.into());
            if !shifted.in_cone(&Cone::positive(self.gamma_rank)) {
                return Err(KlError::MuCondition {
                    s,
                    x: self.labels[x].clone(),
                    y: self.labels[y].clone(),
                    detail: "q^{L(s)}·μ has non-positive support".into(),
                });
            }
        }
        Ok(())
    }

    /// Verify that `T_s ↦ ρ_s` satisfies the Hecke relations: the quadratic
    /// relation for every generator and the braid relation for every pair.
    pub fn verify(&self, matrix: &crate::coxeter::CoxeterMatrix) -> Result<(), KlError> {
        self.check_mu_conditions()?;
        let rank = self.gamma_rank;
        let zero = PolyMatrix::zero(MatrixKind::Action, self.n);
        for s in 0..self.weights.len() {
            let rho = self.rho(s);
            let ql = LaurentPoly::q_power(self.weights[s].clone());
            let ql_inv = LaurentPoly::q_power(self.weights[s].negated());
            let mut lhs = rho.clone();
            for i in 0..self.n {
                lhs.set(i, i, &*lhs.at(i, i) - &ql);
            }
            let mut rhs = rho.clone();
            for i in 0..self.n {
                rhs.set(i, i, &*rhs.at(i, i) + &ql_inv);
            }
            if lhs.mul(&rhs).first_difference(&zero).is_some() {
                return Err(KlError::RelationViolation(format!(
                    "quadratic relation fails for s{}",
                    s + 1
                )));
            }
        }
        for s in 0..self.weights.len() {
            for t in s + 1..self.weights.len() {
                let m = matrix.entry(s, t);
                if m == crate::coxeter::INFINITE {
                    continue;
                }
                let (rs, rt) = (self.rho(s), self.rho(t));
                let mut lhs = PolyMatrix::identity(MatrixKind::Action, self.n, rank);
                let mut rhs = PolyMatrix::identity(MatrixKind::Action, self.n, rank);
                for i in 0..m as usize {
                    let (a, b) = if i % 2 == 0 { (&rs, &rt) } else { (&rt, &rs) };
                    lhs = a.mul(&lhs);
                    rhs = b.mul(&rhs);
                }
                if lhs.first_difference(&rhs).is_some() {
                    return Err(KlError::RelationViolation(format!(
                        "braid relation fails for (s{}, s{})",
                        s + 1,
                        t + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The dual space `M̂ = Hom(M, A)` with `(h·f)(m) = f(h·m)` and
/// `bar(f)(m) = bar(f(bar m))`, in Γ̂-coordinates (`f ↦ (f(Γ_y))_y`).
pub struct DualTables {
    /// Row z = the coordinates of `D_z` (so `d[z][y] = Q_{z,y}`).
    pub d: PolyMatrix,
    /// Row z = the coordinates of `D′_z = Σ_y ε_y bar(Q̃_{z,y}) Γ̂_y`.
    pub d_prime: PolyMatrix,
}

/// `(T_s f)` in Γ̂-coordinates: `(T_s f)(Γ_y) = f(T_s Γ_y)`.
pub fn dual_act_ts(rlz: &Realization, s: usize, f: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let n = rlz.n();
    let a = rlz.action_matrix(s);
    (0..n)
        .map(|y| {
            let mut acc = LaurentPoly::zero();
            for (x, fx) in f.iter().enumerate() {
                let axy = a.at(x, y);
                if !fx.is_zero() && !axy.is_zero() {
                    acc = &acc + &(fx * axy);
                }
            }
            acc
        })
        .collect()
}

/// The semantic bar on `M̂`: `bar(f)(Γ_y) = bar(f(bar Γ_y))`, with `bar Γ_y`
/// computed through the module involution (bar in `H`).
pub fn dual_bar(rlz: &Realization, f: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let n = rlz.n();
    (0..n)
        .map(|y| {
            let bar_gamma = rlz.bar_basis_vec(y);
            let mut acc = LaurentPoly::zero();
            for (x, c) in bar_gamma.iter().enumerate() {
                if !c.is_zero() && !f[x].is_zero() {
                    acc = &acc + &(c * &f[x]);
                }
            }
            acc.bar()
        })
        .collect()
}

impl DualTables {
    /// Build D from Q and D′ from `ε·bar(Q̃)`, checking duality against the
    /// C basis, bar-invariance of every row, and the expansion of
    /// `bar(Γ̂_y)` in terms of `bar(R)`.
    pub fn compute(pair: &Pair, m: &ModuleTables, mt: &ModuleTables) -> Result<DualTables, KlError> {
        let ideal = pair.ideal();
        let n = ideal.n();
        let rank = pair.hecke().gamma_rank();
        let d = m.q.clone().with_kind(MatrixKind::Q);
        let mut d_prime = PolyMatrix::zero(MatrixKind::QTilde, n);
        for z in 0..n {
            for y in 0..n {
                let mut v = mt.q.at(z, y).bar();
                if ideal.eps_local(y) < 0 {
                    v = -&v;
                }
                d_prime.set(z, y, v);
            }
        }

        // D_z(C_w) = δ_{z,w} through the pairing.
        for z in 0..n {
            for w in 0..n {
                let mut acc = LaurentPoly::zero();
                for y in 0..n {
                    let (dy, pyw) = (d.at(z, y), m.p.at(y, w));
                    if !dy.is_zero() && !pyw.is_zero() {
                        acc = &acc + &(dy * pyw);
                    }
                }
                let expect = if z == w {
                    LaurentPoly::one(rank)
                } else {
                    LaurentPoly::zero()
                };
                if acc != expect {
                    return Err(KlError::ActionMismatch {
                        s: 0,
                        z: ideal.name_local(z),
                        detail: format!("D_z(C_w) ≠ δ at w = {}", ideal.name_local(w)),
                    });
                }
            }
        }

        // bar-invariance of both bases under the semantic dual bar.
        for z in 0..n {
            let row: Vec<LaurentPoly> = (0..n).map(|y| d.at(z, y).clone()).collect();
            if dual_bar(&pair.m, &row) != row {
                return Err(KlError::NotBarInvariant {
                    name: "D",
                    w: ideal.name_local(z),
                });
            }
            let rowp: Vec<LaurentPoly> = (0..n).map(|y| d_prime.at(z, y).clone()).collect();
            if dual_bar(&pair.m, &rowp) != rowp {
                return Err(KlError::NotBarInvariant {
                    name: "D'",
                    w: ideal.name_local(z),
                });
            }
        }

        // bar(Γ̂_y) = Σ_w bar(R_{y,w}) Γ̂_w.
        for y in 0..n {
            let mut unit = vec![LaurentPoly::zero(); n];
            unit[y] = LaurentPoly::one(rank);
            let lhs = dual_bar(&pair.m, &unit);
            let rhs: Vec<LaurentPoly> = (0..n).map(|w| m.r.at(y, w).bar()).collect();
            if lhs != rhs {
                return Err(KlError::ActionMismatch {
                    s: 0,
                    z: ideal.name_local(y),
                    detail: "expansion of bar(Γ̂_y) through bar(R) fails".into(),
                });
            }
        }

        Ok(DualTables { d, d_prime })
    }

    pub fn d_row(&self, z: usize) -> Vec<LaurentPoly> {
        (0..self.d.n()).map(|y| self.d.at(z, y).clone()).collect()
    }

    pub fn d_prime_row(&self, z: usize) -> Vec<LaurentPoly> {
        (0..self.d_prime.n())
            .map(|y| self.d_prime.at(z, y).clone())
            .collect()
    }
}

/// The D-basis action formula: for `L(s) > 0`,
/// `T_s D_z = −q^{−L} D_z + D_{sz} + Σ m_{z,u} D_u` on strong descents,
/// `q^{L} D_z` on ascents, `−q^{−L} D_z + Σ m_{z,u} D_u` on weak descents,
/// sums over `u > z` with `s ∈ A(u)`; verified against the pairing.
pub fn check_d_action(pair: &Pair, m: &ModuleTables, duals: &DualTables) -> Result<(), KlError> {
    let ideal = pair.ideal();
    let hecke = pair.hecke();
    let n = ideal.n();
    for s in 0..ideal.group().rank() {
        if !hecke.weights().of_gen(s).is_positive() {
            continue;
        }
        for z in 0..n {
            let lhs = dual_act_ts(&pair.m, s, &duals.d_row(z));
            let class = ideal.class(s, z);
            let mut rhs = vec![LaurentPoly::zero(); n];
            let add_row = |rhs: &mut Vec<LaurentPoly>, row: Vec<LaurentPoly>, c: &LaurentPoly| {
                for (slot, v) in rhs.iter_mut().zip(row) {
                    if !v.is_zero() {
                        *slot = &*slot + &(c * &v);
                    }
                }
            };
            let diag = if class.is_descent() {
                -&hecke.q_l_inv(s)
            } else {
                hecke.q_l(s)
            };
            add_row(&mut rhs, duals.d_row(z), &diag);
            if class == PairClass::StrongDesc {
                let sz = ideal.neighbor(s, z).unwrap();
                add_row(&mut rhs, duals.d_row(sz), &hecke.one_poly());
            }
            if class.is_descent() {
                for u in 0..n {
                    if ideal.bruhat_lt_local(z, u) && ideal.class(s, u).is_ascent() {
                        let mu = m.mu.get(s, z, u);
                        if !mu.is_zero() {
                            add_row(&mut rhs, duals.d_row(u), &mu);
                        }
                    }
                }
            }
            if lhs != rhs {
                return Err(KlError::ActionMismatch {
                    s,
                    z: ideal.name_local(z),
                    detail: "D-basis action differs from pairing".into(),
                });
            }
        }
    }
    Ok(())
}

/// For `L(s) = 0`: `T_s D_z = D_{sz}` on strong pairs, `−D_z` on weak
/// descents, `D_z` on weak ascents; verified against the pairing.
pub fn check_d_action_zero_weight(pair: &Pair, duals: &DualTables) -> Result<(), KlError> {
    let ideal = pair.ideal();
    let hecke = pair.hecke();
    let n = ideal.n();
    for s in 0..ideal.group().rank() {
        if hecke.weights().of_gen(s).is_positive() {
            continue;
        }
        for z in 0..n {
            let lhs = dual_act_ts(&pair.m, s, &duals.d_row(z));
            let rhs = match ideal.class(s, z) {
                PairClass::StrongDesc | PairClass::StrongAsc => {
                    duals.d_row(ideal.neighbor(s, z).unwrap())
                }
                PairClass::WeakDesc => duals.d_row(z).iter().map(|p| -p).collect(),
                PairClass::WeakAsc => duals.d_row(z),
            };
            if lhs != rhs {
                return Err(KlError::ActionMismatch {
                    s,
                    z: ideal.name_local(z),
                    detail: "zero-weight D-action differs from the stated rule".into(),
                });
            }
        }
    }
    Ok(())
}

/// The D′-basis action: `T_s` on the D′-basis equals
/// `(q^{L(s)} − q^{−L(s)})·I − (T_s on the C̃-basis)ᵀ`, which expands to
/// `q^{L} D′_z − D′_{sz} − Σ m̃ D′_u` on strong descents, `−q^{−L} D′_z` on
/// strong ascents and weak descents, and `q^{L} D′_z − Σ m̃ D′_u` on weak
/// ascents. Verified against the pairing entrywise, with the diagonal shape
/// asserted separately.
pub fn check_d_prime_action(
    pair: &Pair,
    mt: &ModuleTables,
    duals: &DualTables,
) -> Result<(), KlError> {
    let ideal = pair.ideal();
    let hecke = pair.hecke();
    let n = ideal.n();
    for s in 0..ideal.group().rank() {
        if !hecke.weights().of_gen(s).is_positive() {
            continue;
        }
        let ct_mat = c_basis_action(&pair.mt, &mt.p, &mt.q, s);
        let xi = hecke.xi(s);
        for z in 0..n {
            let lhs = dual_act_ts(&pair.m, s, &duals.d_prime_row(z));
            let mut rhs = vec![LaurentPoly::zero(); n];
            for u in 0..n {
                let mut coeff = -ct_mat.at(z, u);
                if u == z {
                    coeff = &coeff + &xi;
                }
                if coeff.is_zero() {
                    continue;
                }
                for (slot, v) in rhs.iter_mut().zip(duals.d_prime_row(u)) {
                    if !v.is_zero() {
                        *slot = &*slot + &(&coeff * &v);
                    }
                }
            }
            if lhs != rhs {
                return Err(KlError::ActionMismatch {
                    s,
                    z: ideal.name_local(z),
                    detail: "D'-basis action differs from pairing".into(),
                });
            }
            // diagonal shape: q^L on SD and WA, −q^{−L} on SA and WD
            let class = ideal.class(s, z);
            let expected_diag = match class {
                PairClass::StrongDesc | PairClass::WeakAsc => hecke.q_l(s),
                PairClass::StrongAsc | PairClass::WeakDesc => -&hecke.q_l_inv(s),
            };
            let actual_diag = &xi - ct_mat.at(z, z);
            if actual_diag != expected_diag {
                return Err(KlError::ActionMismatch {
                    s,
                    z: ideal.name_local(z),
                    detail: format!("D' diagonal is {actual_diag}, expected {expected_diag}"),
                });
            }
        }
    }
    Ok(())
}

/// `D′_z(C′_w) = δ_{z,w}`: the D′ basis is dual to C′.
pub fn check_d_prime_duality(
    pair: &Pair,
    duals: &DualTables,
    c_prime: &[Vec<LaurentPoly>],
) -> Result<(), KlError> {
    let ideal = pair.ideal();
    let n = ideal.n();
    let rank = pair.hecke().gamma_rank();
    for z in 0..n {
        for w in 0..n {
            let mut acc = LaurentPoly::zero();
            for y in 0..n {
                let (a, b) = (duals.d_prime.at(z, y), &c_prime[w][y]);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            let expect = if z == w {
                LaurentPoly::one(rank)
            } else {
                LaurentPoly::zero()
            };
            if acc != expect {
                return Err(KlError::ActionMismatch {
                    s: 0,
                    z: ideal.name_local(z),
                    detail: format!("D'_z(C'_w) ≠ δ at w = {}", ideal.name_local(w)),
                });
            }
        }
    }
    Ok(())
}

/// For `E = D_J` regarded with respect to `∅`: the pairing action on the
/// `Γ̂`-basis coincides with the module action on the Γ-basis (the action
/// matrices are symmetric), following the displayed three-case table.
pub fn check_lemma_4_7(pair: &Pair) -> Result<(), KlError> {
    let ideal = pair.ideal();
    let hecke = pair.hecke();
    let n = ideal.n();
    assert!(ideal.j_set().is_empty(), "this identification uses J = ∅");
    for s in 0..ideal.group().rank() {
        let a = pair.m.action_matrix(s);
        for w in 0..n {
            // T_s Γ̂_w via the pairing is row w of the action matrix
            let lhs: Vec<LaurentPoly> = (0..n).map(|y| a.at(w, y).clone()).collect();
            let mut rhs = vec![LaurentPoly::zero(); n];
            match ideal.class(s, w) {
                PairClass::StrongAsc => {
                    rhs[ideal.neighbor(s, w).unwrap()] = hecke.one_poly();
                }
                PairClass::StrongDesc => {
                    rhs[ideal.neighbor(s, w).unwrap()] = hecke.one_poly();
                    rhs[w] = hecke.xi(s);
                }
                PairClass::WeakAsc => {
                    rhs[w] = hecke.q_l(s);
                }
                PairClass::WeakDesc => {
                    return Err(KlError::Mismatch {
                        s,
                        w: ideal.name_local(w),
                        detail: "unexpected weak descent with J = ∅".into(),
                    });
                }
            }
            if lhs != rhs {
                return Err(KlError::Mismatch {
                    s,
                    w: ideal.name_local(w),
                    detail: "dual action table differs from the displayed rule".into(),
                });
            }
            // identification with the module action: column w must agree
            let col: Vec<LaurentPoly> = (0..n).map(|x| a.at(x, w).clone()).collect();
            if col != lhs {
                return Err(KlError::Mismatch {
                    s,
                    w: ideal.name_local(w),
                    detail: "dual-module and module actions differ".into(),
                });
            }
        }
    }
    Ok(())
}

/// Realize `Σ v_x Γ_x` for a coordinate vector (helper for reports).
pub fn realize_vec(rlz: &Realization, v: &[LaurentPoly]) -> HeckeElt {
    rlz.realize(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Elt, Group, Weights, DEFAULT_CAP};
    use crate::hecke::Hecke;
    use crate::ideal::Ideal;
    use std::sync::Arc;

    fn hecke(name: &str, weights: &[i64]) -> Arc<Hecke> {
        let group = Arc::new(Group::named(name, DEFAULT_CAP).unwrap());
        Arc::new(Hecke::new(group, Weights::from_ints(weights).unwrap()).unwrap())
    }

    fn regular_pair(h: &Arc<Hecke>) -> Pair {
        let group = h.group().clone();
        let all: Vec<Elt> = group.elements().collect();
        let ideal = Arc::new(Ideal::build(group, &all, &[]).unwrap());
        let m = Realization::from_seed(h.clone(), ideal.clone(), h.one()).unwrap();
        let mt = Realization::from_seed(h.clone(), ideal, h.one()).unwrap();
        Pair::new(m, mt).unwrap()
    }

    fn deodhar_pair(h: &Arc<Hecke>, j: &[usize]) -> Pair {
        let group = h.group().clone();
        let p = group.parabolic(j);
        let ideal = Arc::new(Ideal::build(group, &p.d_j, j).unwrap());
        let (c, cp) = h.parabolic_kl_elements(j).unwrap();
        let m = Realization::from_seed(h.clone(), ideal.clone(), c).unwrap();
        let mt = Realization::from_seed(h.clone(), ideal, cp).unwrap();
        Pair::new(m, mt).unwrap()
    }

    fn q1(n: i64) -> LaurentPoly {
        LaurentPoly::q_power(GammaExp::int(n))
    }

    #[test]
    fn r_examples_a1() {
        let h = hecke("A1", &[1]);
        let pair = regular_pair(&h);
        let r = compute_r(&pair.m);
        assert_eq!(*r.at(1, 1), q1(0));
        assert_eq!(*r.at(0, 0), q1(0));
        // R_{1,s} = q^{−c} − q^{c}
        assert_eq!(*r.at(0, 1), &q1(-1) - &q1(1));
        assert!(r.first_difference(&r_matrix_via_bar(&pair.m)).is_none());
    }

    #[test]
    fn r_recursion_matches_bar_oracle() {
        for (name, ws, j) in [
            ("A2", vec![1, 1], vec![]),
            ("B2", vec![1, 2], vec![]),
            ("A2", vec![1, 1], vec![1usize]),
        ] {
            let h = hecke(name, &ws);
            let pair = if j.is_empty() {
                regular_pair(&h)
            } else {
                deodhar_pair(&h, &j)
            };
            for rlz in [&pair.m, &pair.mt] {
                let rec = compute_r(rlz);
                let oracle = r_matrix_via_bar(rlz);
                assert!(
                    rec.first_difference(&oracle).is_none(),
                    "{name} J={j:?}: recursion vs oracle"
                );
                check_r_bar_inverse(rlz, &rec).unwrap();
            }
        }
    }

    #[test]
    fn cor_3_2_on_deodhar_and_regular() {
        for (name, ws, j) in [
            ("A2", vec![1, 1], vec![]),
            ("B2", vec![1, 2], vec![0usize]),
            ("A2", vec![1, 1], vec![1usize]),
        ] {
            let h = hecke(name, &ws);
            let pair = if j.is_empty() {
                regular_pair(&h)
            } else {
                deodhar_pair(&h, &j)
            };
            let r = compute_r(&pair.m);
            let rt = compute_r(&pair.mt);
            check_cor_3_2(&pair, &r, &rt).unwrap();
        }
    }

    #[test]
    fn p_examples_a1() {
        let h = hecke("A1", &[1]);
        let pair = regular_pair(&h);
        let t = ModuleTables::compute(&pair.m).unwrap();
        // P_{1,s} = −q^{c}, C_s = Γ_s − q^c Γ₁
        assert_eq!(*t.p.at(0, 1), -&q1(1));
        assert_eq!(t.c_vec(1), vec![-&q1(1), q1(0)]);
        // Q_{1,s} = q^{c}
        assert_eq!(*t.q.at(0, 1), q1(1));
        check_c_bar_invariant(&pair.m, &t.p).unwrap();
    }

    #[test]
    fn p_matches_oracle_on_a3_and_deodhar() {
        for (name, ws, j) in [
            ("A3", vec![1, 1, 1], vec![]),
            ("B2", vec![1, 2], vec![]),
            ("A2", vec![1, 1], vec![1usize]),
        ] {
            let h = hecke(name, &ws);
            let pair = if j.is_empty() {
                regular_pair(&h)
            } else {
                deodhar_pair(&h, &j)
            };
            let rank = h.gamma_rank();
            let ideal = pair.ideal().clone();
            let n = ideal.n();
            let leq = |x: usize, y: usize| ideal.bruhat_leq_local(x, y);
            let desc: Vec<usize> = (0..n).rev().collect();
            let name_of = |i: usize| ideal.name_local(i);
            let r = compute_r(&pair.m);
            let p = solve_p(&r, rank, &leq, &desc, &name_of).unwrap();
            let oracle = p_oracle(&r, rank, &leq, &desc, &name_of).unwrap();
            assert!(p.first_difference(&oracle).is_none(), "{name}");
            // unitriangular with strictly positive off-diagonal support
            for y in 0..n {
                for w in 0..n {
                    let e = p.at(y, w);
                    if y == w {
                        assert_eq!(*e, LaurentPoly::one(rank));
                    } else if !e.is_zero() {
                        assert!(leq(y, w));
                        assert!(e.in_cone(&Cone::positive(rank)));
                    }
                }
            }
        }
    }

    #[test]
    fn q_by_chains_matches_recursion_on_b2() {
        let h = hecke("B2", &[1, 1]);
        let pair = regular_pair(&h);
        let t = ModuleTables::compute(&pair.m).unwrap();
        let ideal = pair.ideal().clone();
        let leq = |x: usize, y: usize| ideal.bruhat_leq_local(x, y);
        let chains = q_via_chains(&t.p, 1, &leq);
        assert!(t.q.first_difference(&chains).is_none());
    }

    #[test]
    fn q_bar_identities() {
        for (name, ws) in [("A2", vec![1, 1]), ("B2", vec![1, 2])] {
            let h = hecke(name, &ws);
            let pair = regular_pair(&h);
            let m = ModuleTables::compute(&pair.m).unwrap();
            let mt = ModuleTables::compute(&pair.mt).unwrap();
            check_q_bar_identities(&pair, &m.q, &m.r, &mt.r).unwrap();
        }
    }

    #[test]
    fn mu_examples_a1() {
        let h = hecke("A1", &[1]);
        let pair = regular_pair(&h);
        let t = ModuleTables::compute(&pair.m).unwrap();
        // T_s C_1 = q^c C_1 + C_s: structural edge only, no μ entries
        assert!(t.mu.entries.is_empty());
        let cmat = c_basis_action(&pair.m, &t.p, &t.q, 0);
        assert_eq!(*cmat.at(0, 0), q1(1));
        assert_eq!(*cmat.at(1, 0), q1(0));
        // T_s C_s = −q^{−c} C_s
        assert_eq!(*cmat.at(1, 1), -&q1(-1));
        assert_eq!(*cmat.at(0, 1), LaurentPoly::zero());
    }

    #[test]
    fn mu_def_conditions_on_a3() {
        let h = hecke("A3", &[1, 1, 1]);
        let pair = regular_pair(&h);
        let t = ModuleTables::compute(&pair.m).unwrap();
        let wg = assemble_wgraph(&pair.m, &t.mu);
        wg.check_mu_conditions().unwrap();
    }

    #[test]
    fn wgraph_relations_a1_and_deodhar_a2() {
        let h = hecke("A1", &[1]);
        let pair = regular_pair(&h);
        let t = ModuleTables::compute(&pair.m).unwrap();
        let wg = assemble_wgraph(&pair.m, &t.mu);
        assert_eq!(wg.i_sets, vec![vec![], vec![0]]);
        wg.verify(h.group().matrix()).unwrap();

        let h2 = hecke("A2", &[1, 1]);
        let pair2 = deodhar_pair(&h2, &[1]);
        let t2 = ModuleTables::compute(&pair2.m).unwrap();
        let wg2 = assemble_wgraph(&pair2.m, &t2.mu);
        assert_eq!(wg2.n, 3);
        wg2.verify(h2.group().matrix()).unwrap();
        // the M̃ side assembles and verifies too
        let t2t = ModuleTables::compute(&pair2.mt).unwrap();
        let wg2t = assemble_wgraph(&pair2.mt, &t2t.mu);
        wg2t.verify(h2.group().matrix()).unwrap();
    }

    #[test]
    fn weak_descent_mu_appears_in_deodhar_a2() {
        // T_{s2} C_{s1} = q^c C_{s1} + C_{s2s1} + C_1 on the φ-side:
        // the C_1 coefficient is a weak-descent μ.
        let h = hecke("A2", &[1, 1]);
        let pair = deodhar_pair(&h, &[1]);
        let t = ModuleTables::compute(&pair.m).unwrap();
        assert_eq!(t.mu.get(1, 0, 1), q1(0));
    }

    #[test]
    fn dual_tables_and_actions_regular_a2() {
        let h = hecke("A2", &[1, 1]);
        let pair = regular_pair(&h);
        let m = ModuleTables::compute(&pair.m).unwrap();
        let mt = ModuleTables::compute(&pair.mt).unwrap();
        let duals = DualTables::compute(&pair, &m, &mt).unwrap();
        check_d_action(&pair, &m, &duals).unwrap();
        check_d_prime_action(&pair, &mt, &duals).unwrap();
        let cp = compute_c_prime(&pair, &mt.p).unwrap();
        check_d_prime_duality(&pair, &duals, &cp).unwrap();
        compute_c_tilde_prime(&pair, &m.p).unwrap();
    }

    #[test]
    fn dual_tables_and_actions_deodhar_a2() {
        let h = hecke("A2", &[1, 1]);
        for j in [vec![0usize], vec![1usize]] {
            let pair = deodhar_pair(&h, &j);
            let m = ModuleTables::compute(&pair.m).unwrap();
            let mt = ModuleTables::compute(&pair.mt).unwrap();
            let duals = DualTables::compute(&pair, &m, &mt).unwrap();
            check_d_action(&pair, &m, &duals).unwrap();
            check_d_prime_action(&pair, &mt, &duals).unwrap();
            let cp = compute_c_prime(&pair, &mt.p).unwrap();
            check_d_prime_duality(&pair, &duals, &cp).unwrap();
        }
    }

    #[test]
    fn d_example_a1() {
        let h = hecke("A1", &[1]);
        let pair = regular_pair(&h);
        let m = ModuleTables::compute(&pair.m).unwrap();
        let mt = ModuleTables::compute(&pair.mt).unwrap();
        let duals = DualTables::compute(&pair, &m, &mt).unwrap();
        // D_1 = Γ̂_1 + q^c Γ̂_s, and s ∈ A(1) so T_s D_1 = q^{L(s)} D_1
        assert_eq!(duals.d_row(0), vec![q1(0), q1(1)]);
        let lhs = dual_act_ts(&pair.m, 0, &duals.d_row(0));
        let rhs: Vec<LaurentPoly> = duals.d_row(0).iter().map(|p| p * &q1(1)).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_weight_generator_d_action() {
        // B2 with L = (0, 1): s1 has weight zero; C/P/Q still assemble and
        // the zero-weight D-action follows the signed permutation rule.
        let group = Arc::new(Group::named("B2", DEFAULT_CAP).unwrap());
        let h = Arc::new(Hecke::new(group.clone(), Weights::from_ints(&[0, 1]).unwrap()).unwrap());
        let all: Vec<Elt> = group.elements().collect();
        let ideal = Arc::new(Ideal::build(group.clone(), &all, &[]).unwrap());
        let m = Realization::from_seed(h.clone(), ideal.clone(), h.one()).unwrap();
        let mtr = Realization::from_seed(h.clone(), ideal, h.one()).unwrap();
        let pair = Pair::new(m, mtr).unwrap();
        let m = ModuleTables::compute(&pair.m).unwrap();
        let mt = ModuleTables::compute(&pair.mt).unwrap();
        assert!(m.mu.zero_gens.contains_key(&0));
        let duals = DualTables::compute(&pair, &m, &mt).unwrap();
        check_d_action(&pair, &m, &duals).unwrap();
        check_d_action_zero_weight(&pair, &duals).unwrap();
    }

    #[test]
    fn lemma_4_7_on_deodhar_wrt_empty() {
        let h = hecke("A2", &[1, 1]);
        let group = h.group().clone();
        for j in [vec![0usize], vec![1usize]] {
            let p = group.parabolic(&j);
            let ideal = Arc::new(Ideal::build(group.clone(), &p.d_j, &[]).unwrap());
            let (c, cp) = h.parabolic_kl_elements(&j).unwrap();
            // with respect to ∅ the ψ-seed realizes side M, the φ-seed side M̃
            let m = Realization::from_seed(h.clone(), ideal.clone(), cp).unwrap();
            assert!(m.side().accepts_m());
            let mtr = Realization::from_seed(h.clone(), ideal, c).unwrap();
            assert!(mtr.side().accepts_m_tilde());
            let pair = Pair::new(m, mtr).unwrap();
            check_lemma_4_7(&pair).unwrap();
            // the D-basis action formula holds in this setting too
            let m = ModuleTables::compute(&pair.m).unwrap();
            let mt = ModuleTables::compute(&pair.mt).unwrap();
            let duals = DualTables::compute(&pair, &m, &mt).unwrap();
            check_d_action(&pair, &m, &duals).unwrap();
        }
    }
}
