//! Catalog of concrete W-graph-ideal instances: the regular case, the two
//! parabolic (Deodhar) variants, Solomon modules with a discovered ideal,
//! and weak-order ideals of determining elements.
//!
//! Every instance resolves to a paired realization (sides M and M̃ of the
//! same ideal) that has passed the full action-pattern verification.

use std::sync::Arc;

use crate::coxeter::Elt;
use crate::hecke::{Hecke, HeckeElt};
use crate::ideal::{Ideal, IdealError, Pair, Realization};
use crate::solve;

#[derive(thiserror::Error, Debug)]
pub enum InstanceError {
    #[error("bad instance spec `{0}`: {1}")]
    BadSpec(String, String),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Hecke(#[from] crate::hecke::HeckeError),
    #[error(transparent)]
    Cox(#[from] crate::coxeter::CoxError),
    #[error("seed generates no free module at the root")]
    NotFreeAtRoot,
    #[error("discovered set is not suffix-closed: adding {candidate} needs {missing}")]
    DiscoveryNotClosed { candidate: String, missing: String },
    #[error("no catalogued seed for determining element {w} with J = {j:?}")]
    NoCataloguedSeed { w: String, j: Vec<usize> },
}

/// Parsed instance description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceSpec {
    Regular,
    /// Deodhar pair on `E = D_J` with respect to J; `psi_featured` selects
    /// which variant the instance reports as its featured module.
    Deodhar { j: Vec<usize>, psi_featured: bool },
    /// The same `E = D_J` regarded as an ideal with respect to ∅.
    DeodharWrtEmpty { j: Vec<usize>, psi_featured: bool },
    /// Solomon pair seeded by `C_{w_K}·C′_{w_K̂}`; `swap` exchanges the
    /// roles of K = J and K̂ = S ∖ J in the product.
    Solomon { j: Vec<usize>, swap: bool },
    /// Weak-order ideal of a determining element, seed from the catalog.
    DeterminingElement { word: String, j: Vec<usize> },
}

impl InstanceSpec {
    /// Parse specs like `regular`, `deodhar:psi:J=s2`, `deodhar0:phi:J=s1`,
    /// `solomon:J=s2`, `solomon:J=s2:swap`, `detelt:w=s2.s1:J=s2`.
    pub fn parse(text: &str) -> Result<InstanceSpec, InstanceError> {
        let bad = |msg: &str| InstanceError::BadSpec(text.to_string(), msg.to_string());
        let parts: Vec<&str> = text.split(':').collect();
        let parse_j = |part: &str| -> Result<Vec<usize>, InstanceError> {
            let body = part
                .strip_prefix("J=")
                .ok_or_else(|| bad("expected J=<generators>"))?;
            if body.is_empty() || body == "empty" {
                return Ok(vec![]);
            }
            body.split(',')
                .map(|g| {
                    g.trim()
                        .strip_prefix('s')
                        .and_then(|i| i.parse::<usize>().ok())
                        .filter(|&i| i >= 1)
                        .map(|i| i - 1)
                        .ok_or_else(|| bad("generators look like s1,s2"))
                })
                .collect()
        };
        match parts.as_slice() {
            ["regular"] => Ok(InstanceSpec::Regular),
            ["deodhar", variant, j] => Ok(InstanceSpec::Deodhar {
                j: parse_j(j)?,
                psi_featured: *variant == "psi",
            }),
            ["deodhar0", variant, j] => Ok(InstanceSpec::DeodharWrtEmpty {
                j: parse_j(j)?,
                psi_featured: *variant == "psi",
            }),
            ["solomon", j] => Ok(InstanceSpec::Solomon {
                j: parse_j(j)?,
                swap: false,
            }),
            ["solomon", j, "swap"] => Ok(InstanceSpec::Solomon {
                j: parse_j(j)?,
                swap: true,
            }),
            ["detelt", w, j] => {
                let word = w
                    .strip_prefix("w=")
                    .ok_or_else(|| bad("expected w=<word>"))?;
                Ok(InstanceSpec::DeterminingElement {
                    word: word.to_string(),
                    j: parse_j(j)?,
                })
            }
            _ => Err(bad(
                "expected regular | deodhar:psi|phi:J=… | deodhar0:… | solomon:J=…[:swap] | detelt:w=…:J=…",
            )),
        }
    }

    pub fn canonical_name(&self) -> String {
        match self {
            InstanceSpec::Regular => "regular".into(),
            InstanceSpec::Deodhar { j, psi_featured } => {
                format!(
                    "deodhar:{}:J={}",
                    if *psi_featured { "psi" } else { "phi" },
                    format_j(j)
                )
            }
            InstanceSpec::DeodharWrtEmpty { j, psi_featured } => {
                format!(
                    "deodhar0:{}:J={}",
                    if *psi_featured { "psi" } else { "phi" },
                    format_j(j)
                )
            }
            InstanceSpec::Solomon { j, swap } => {
                if *swap {
                    format!("solomon:J={}:swap", format_j(j))
                } else {
                    format!("solomon:J={}", format_j(j))
                }
            }
            InstanceSpec::DeterminingElement { word, j } => {
                format!("detelt:w={}:J={}", word, format_j(j))
            }
        }
    }
}

fn format_j(j: &[usize]) -> String {
    if j.is_empty() {
        "empty".into()
    } else {
        j.iter()
            .map(|s| format!("s{}", s + 1))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// A built instance: the paired realizations plus human-readable notes
/// (detected sides, discovered ideal, observed r-cones).
pub struct Instance {
    pub name: String,
    pub pair: Pair,
    pub notes: Vec<String>,
    /// Whether the finite-case π-tables and inversion identities are
    /// claimed for this instance (they are stated for full parabolic
    /// quotients; discovered ideals run them as observations only).
    pub pi_claimed: bool,
}

/// Build an instance from its spec.
pub fn build(hecke: &Arc<Hecke>, spec: &InstanceSpec) -> Result<Instance, InstanceError> {
    match spec {
        InstanceSpec::Regular => regular_instance(hecke),
        InstanceSpec::Deodhar { j, psi_featured } => deodhar_instance(hecke, j, *psi_featured, false),
        InstanceSpec::DeodharWrtEmpty { j, psi_featured } => {
            deodhar_instance(hecke, j, *psi_featured, true)
        }
        InstanceSpec::Solomon { j, swap } => solomon_instance(hecke, j, *swap),
        InstanceSpec::DeterminingElement { word, j } => {
            determining_element_instance(hecke, word, j)
        }
    }
}

/// `E = W`, `J = ∅`, seed `T₁`: the regular module, serving as both sides.
pub fn regular_instance(hecke: &Arc<Hecke>) -> Result<Instance, InstanceError> {
    let group = hecke.group().clone();
    let all: Vec<Elt> = group.elements().collect();
    let ideal = Arc::new(Ideal::build(group, &all, &[])?);
    let m = Realization::from_seed(hecke.clone(), ideal.clone(), hecke.one())?;
    let mt = Realization::from_seed(hecke.clone(), ideal, hecke.one())?;
    let pair = Pair::new(m, mt)?;
    Ok(Instance {
        name: "regular".into(),
        pair,
        notes: vec![format!(
            "regular module on {} elements; both sides coincide",
            hecke.group().order()
        )],
        pi_claimed: true,
    })
}

/// `E = D_J` with the φ-seed `C_{w_J}` on side M and the ψ-seed `C′_{w_J}`
/// on side M̃ (with respect to J), or the reverse pairing with respect to ∅.
pub fn deodhar_instance(
    hecke: &Arc<Hecke>,
    j: &[usize],
    psi_featured: bool,
    wrt_empty: bool,
) -> Result<Instance, InstanceError> {
    let group = hecke.group().clone();
    let parabolic = group.parabolic(j);
    let positivity: &[usize] = if wrt_empty { &[] } else { j };
    let ideal = Arc::new(Ideal::build(group, &parabolic.d_j, positivity)?);
    let (c, cp) = hecke.parabolic_kl_elements(j)?;
    // with respect to J the φ-seed realizes side M; with respect to ∅ the
    // roles are exchanged
    let (m_seed, mt_seed) = if wrt_empty { (cp, c) } else { (c, cp) };
    let m = Realization::from_seed(hecke.clone(), ideal.clone(), m_seed)?;
    let mt = Realization::from_seed(hecke.clone(), ideal, mt_seed)?;
    let mut notes = vec![
        format!(
            "E = D_J with |E| = {}, positivity set {}",
            parabolic.d_j.len(),
            format_j(positivity)
        ),
        format!("side M detected as {:?}, side M~ as {:?}", m.side(), mt.side()),
        format!(
            "featured variant: {}",
            if psi_featured { "psi" } else { "phi" }
        ),
    ];
    if !m.has_nonzero_r() && !mt.has_nonzero_r() {
        notes.push("all extracted r-polynomials vanish".into());
    }
    let pair = Pair::new(m, mt)?;
    Ok(Instance {
        name: InstanceSpec::canonical_name(&if wrt_empty {
            InstanceSpec::DeodharWrtEmpty { j: j.to_vec(), psi_featured }
        } else {
            InstanceSpec::Deodhar { j: j.to_vec(), psi_featured }
        }),
        pair,
        notes,
        pi_claimed: true,
    })
}

/// Discover the maximal suffix-closed `E ⊆ D_J` on which the weak BFS from
/// the seed keeps `{T_x·seed}` A-free: a candidate `s·w ∉ E` is forced in
/// exactly when its realized vector is independent of the current span.
fn discover_ideal(
    hecke: &Arc<Hecke>,
    j: &[usize],
    seed: &HeckeElt,
) -> Result<Vec<Elt>, InstanceError> {
    let group = hecke.group().clone();
    let dim = group.order();
    if seed.is_zero() {
        return Err(InstanceError::NotFreeAtRoot);
    }
    let in_d_j = |w: Elt| j.iter().all(|&s| !group.is_right_descent(w, s));
    let mut elements: Vec<Elt> = vec![group.identity()];
    let mut coords: Vec<Vec<crate::laurent::LaurentPoly>> = vec![to_coords(dim, seed)];
    let mut frontier = vec![group.identity()];
    while !frontier.is_empty() {
        // candidates one letter above the current frontier
        let mut candidates: Vec<Elt> = Vec::new();
        for &w in &frontier {
            for s in 0..group.rank() {
                let sw = group.left_mul(s, w);
                if group.length(sw) < group.length(w)
                    || elements.contains(&sw)
                    || !in_d_j(sw)
                    || candidates.contains(&sw)
                {
                    continue;
                }
                candidates.push(sw);
            }
        }
        candidates.sort_by_key(|&w| (group.length(w), w.0));
        let mut accepted = Vec::new();
        for cand in candidates {
            let vec = to_coords(dim, &hecke.t_mul_left(cand, seed));
            if solve::is_independent(dim, &coords, &vec) {
                // a new basis vector is forced; the set must stay an ideal
                for s in group.left_descents(cand) {
                    let cover = group.left_mul(s, cand);
                    if !elements.contains(&cover) {
                        return Err(InstanceError::DiscoveryNotClosed {
                            candidate: group.word_name(cand),
                            missing: group.word_name(cover),
                        });
                    }
                }
                elements.push(cand);
                coords.push(vec);
                accepted.push(cand);
            }
        }
        frontier = accepted;
    }
    Ok(elements)
}

fn to_coords(dim: usize, h: &HeckeElt) -> Vec<crate::laurent::LaurentPoly> {
    let mut v = vec![crate::laurent::LaurentPoly::zero(); dim];
    for (w, p) in h.terms() {
        v[w.index()] = p.clone();
    }
    v
}

/// Solomon pair: side M seeded by `C_{w_K}·C′_{w_K̂}` and side M̃ by
/// `C′_{w_K}·C_{w_K̂}`, with `K = J` and `K̂ = S ∖ J` (exchanged by `swap`);
/// the ideal is discovered by the freeness BFS and then fully re-verified.
pub fn solomon_instance(
    hecke: &Arc<Hecke>,
    j: &[usize],
    swap: bool,
) -> Result<Instance, InstanceError> {
    let group = hecke.group().clone();
    let complement: Vec<usize> = (0..group.rank()).filter(|s| !j.contains(s)).collect();
    let (k, k_hat): (&[usize], &[usize]) = if swap {
        (&complement, j)
    } else {
        (j, &complement)
    };
    let (c_k, cp_k) = hecke.parabolic_kl_elements(k)?;
    let (c_khat, cp_khat) = hecke.parabolic_kl_elements(k_hat)?;
    let m_seed = hecke.mul(&c_k, &cp_khat);
    let mt_seed = hecke.mul(&cp_k, &c_khat);

    let elements = discover_ideal(hecke, j, &m_seed)?;
    let ideal = Arc::new(Ideal::build(group.clone(), &elements, j)?);
    let m = Realization::from_seed(hecke.clone(), ideal.clone(), m_seed)?;
    let mt = Realization::from_seed(hecke.clone(), ideal.clone(), mt_seed)?;

    let mut notes = vec![
        format!(
            "discovered F_J = {{{}}} inside D_J",
            elements
                .iter()
                .map(|&w| group.word_name(w))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        format!("side M detected as {:?}, side M~ as {:?}", m.side(), mt.side()),
    ];
    for obs in m.r_observations() {
        notes.push(format!(
            "r^s{}_({},{}) = {} ({} declared cone)",
            obs.s + 1,
            ideal.name_local(obs.z_local),
            ideal.name_local(obs.w_local),
            obs.poly,
            if obs.in_declared_cone { "inside" } else { "OUTSIDE" }
        ));
    }
    for obs in mt.r_observations() {
        notes.push(format!(
            "r~^s{}_({},{}) = {} ({} declared cone)",
            obs.s + 1,
            ideal.name_local(obs.z_local),
            ideal.name_local(obs.w_local),
            obs.poly,
            if obs.in_declared_cone { "inside" } else { "OUTSIDE" }
        ));
    }
    let pair = Pair::new(m, mt)?;
    Ok(Instance {
        name: InstanceSpec::canonical_name(&InstanceSpec::Solomon { j: j.to_vec(), swap }),
        pair,
        notes,
        pi_claimed: false,
    })
}

/// Weak-order ideal of a determining element with a catalogued seed:
/// `w = w_S` with `J = ∅` (seed `T₁`), `w = d_J` (the Deodhar seeds), and
/// `w = 1` with `J = S` (the parabolic seeds).
pub fn determining_element_instance(
    hecke: &Arc<Hecke>,
    word: &str,
    j: &[usize],
) -> Result<Instance, InstanceError> {
    let group = hecke.group().clone();
    let w = group.parse_word(word)?;
    let elements = group.weak_ideal(w);
    let no_seed = || InstanceError::NoCataloguedSeed {
        w: group.word_name(w),
        j: j.to_vec(),
    };

    let (m_seed, mt_seed) = if w == group.longest_element() && j.is_empty() {
        (hecke.one(), hecke.one())
    } else {
        // d_J, the minimal element of w_S·W_J, generates D_J
        let parabolic = group.parabolic(j);
        let mut sorted_dj = parabolic.d_j.clone();
        sorted_dj.sort_by_key(|&x| (group.length(x), x.0));
        let mut sorted_e = elements.clone();
        sorted_e.sort_by_key(|&x| (group.length(x), x.0));
        if sorted_dj == sorted_e {
            let (c, cp) = hecke.parabolic_kl_elements(j)?;
            (c, cp)
        } else {
            return Err(no_seed());
        }
    };

    let ideal = Arc::new(Ideal::build(group.clone(), &elements, j)?);
    let m = Realization::from_seed(hecke.clone(), ideal.clone(), m_seed)?;
    let mt = Realization::from_seed(hecke.clone(), ideal, mt_seed)?;
    let notes = vec![
        format!(
            "E = weak ideal of {} with {} elements",
            group.word_name(w),
            elements.len()
        ),
        format!("side M detected as {:?}, side M~ as {:?}", m.side(), mt.side()),
    ];
    let pair = Pair::new(m, mt)?;
    Ok(Instance {
        name: InstanceSpec::canonical_name(&InstanceSpec::DeterminingElement {
            word: word.to_string(),
            j: j.to_vec(),
        }),
        pair,
        notes,
        pi_claimed: true,
    })
}

/// Template catalog for discovery from the command line.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("regular", "E = W, J = ∅, seed T₁ (both sides coincide)"),
        (
            "deodhar:psi:J=<gens>",
            "E = D_J with respect to J; ψ-variant featured (side M̃ seed C′_{w_J})",
        ),
        (
            "deodhar:phi:J=<gens>",
            "E = D_J with respect to J; φ-variant featured (side M seed C_{w_J})",
        ),
        (
            "deodhar0:psi:J=<gens>",
            "E = D_J regarded with respect to ∅ (the dual-module identification setting)",
        ),
        (
            "solomon:J=<gens>[:swap]",
            "discovered ideal F_J with seed C_{w_J}·C′_{w_{S∖J}} (swap exchanges the factors)",
        ),
        (
            "detelt:w=<word>:J=<gens>",
            "weak-order ideal of a determining element with a catalogued seed",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Group, Weights, DEFAULT_CAP};
    use crate::ideal::Side;
    use crate::laurent::{GammaExp, LaurentPoly};

    fn hecke(name: &str, weights: &[i64]) -> Arc<Hecke> {
        let group = Arc::new(Group::named(name, DEFAULT_CAP).unwrap());
        Arc::new(Hecke::new(group, Weights::from_ints(weights).unwrap()).unwrap())
    }

    #[test]
    fn spec_parsing_roundtrip() {
        for text in [
            "regular",
            "deodhar:psi:J=s2",
            "deodhar:phi:J=s1,s2",
            "deodhar0:psi:J=s1",
            "solomon:J=s2",
            "solomon:J=s1:swap",
            "detelt:w=s2.s1:J=s2",
            "detelt:w=e:J=s1,s2",
        ] {
            let spec = InstanceSpec::parse(text).unwrap();
            assert_eq!(spec.canonical_name(), text);
        }
        assert!(InstanceSpec::parse("bogus").is_err());
        assert!(InstanceSpec::parse("deodhar:psi:K=s2").is_err());
    }

    #[test]
    fn regular_instances() {
        let h = hecke("A2", &[1, 1]);
        let inst = regular_instance(&h).unwrap();
        assert_eq!(inst.pair.ideal().n(), 6);
        assert_eq!(inst.pair.m.side(), Side::Either);

        let h = hecke("B2", &[1, 2]);
        let inst = regular_instance(&h).unwrap();
        assert_eq!(inst.pair.ideal().n(), 8);
    }

    #[test]
    fn deodhar_reduces_to_regular_for_empty_j() {
        let h = hecke("A2", &[1, 1]);
        let inst = deodhar_instance(&h, &[], true, false).unwrap();
        assert_eq!(inst.pair.ideal().n(), 6);
        assert_eq!(*inst.pair.m.seed(), h.one());
    }

    #[test]
    fn deodhar_a2_sides_and_r() {
        let h = hecke("A2", &[1, 1]);
        let inst = deodhar_instance(&h, &[1], true, false).unwrap();
        assert_eq!(inst.pair.ideal().n(), 3);
        assert_eq!(inst.pair.m.side(), Side::M);
        assert_eq!(inst.pair.mt.side(), Side::MTilde);
        assert!(!inst.pair.m.has_nonzero_r());
        for w in 0..3 {
            assert!(inst.pair.ideal().weak_ascents(w).is_empty());
        }
    }

    #[test]
    fn solomon_a2_discovers_two_elements_with_nonzero_r() {
        let h = hecke("A2", &[1, 1]);
        let inst = solomon_instance(&h, &[1], false).unwrap();
        let ideal = inst.pair.ideal();
        let names: Vec<String> = (0..ideal.n()).map(|i| ideal.name_local(i)).collect();
        assert_eq!(names, vec!["e", "s1"]);
        assert_eq!(inst.pair.m.side(), Side::M);
        assert_eq!(inst.pair.mt.side(), Side::MTilde);
        // r^{s2}_{1,s1} = q^{2c} (hand-computed), inside q^{L(s2)}·A_{>0}
        let s1 = ideal.index_of(h.group().parse_word("s1").unwrap()).unwrap();
        let one = ideal.index_of(h.group().identity()).unwrap();
        assert_eq!(
            inst.pair.m.r_poly(1, one, s1),
            LaurentPoly::q_power(GammaExp::int(2))
        );
        assert!(inst.pair.m.r_observations().iter().all(|o| o.in_declared_cone));
        // the dual side carries r~ = εε·bar(r) = −q^{−2c}
        assert_eq!(
            inst.pair.mt.r_poly(1, one, s1),
            -&LaurentPoly::q_power(GammaExp::int(-2))
        );
        assert!(inst.pair.mt.r_observations().iter().all(|o| o.in_declared_cone));
    }

    #[test]
    fn solomon_degenerate_cases() {
        let h = hecke("A2", &[1, 1]);
        // J = S: seed C_{w_S}, single-vertex module
        let full = solomon_instance(&h, &[0, 1], false).unwrap();
        assert_eq!(full.pair.ideal().n(), 1);
        // J = ∅: seed C′_{w_S}-type product, discovered by BFS
        let empty = solomon_instance(&h, &[], false).unwrap();
        assert_eq!(empty.pair.ideal().n(), 1);
    }

    #[test]
    fn determining_elements() {
        let h = hecke("A2", &[1, 1]);
        let group = h.group().clone();
        // w = w_S with J = ∅ is the regular instance
        let w0_name = group.word_name(group.longest_element());
        let inst = determining_element_instance(&h, &w0_name, &[]).unwrap();
        assert_eq!(inst.pair.ideal().n(), 6);
        // w = d_J = s2.s1 with the Deodhar seed gives E = D_J
        let inst = determining_element_instance(&h, "s2.s1", &[1]).unwrap();
        assert_eq!(inst.pair.ideal().n(), 3);
        assert_eq!(inst.pair.m.side(), Side::M);
        // w = 1 with J = S: single-vertex module, C₁ = Γ₁
        let inst = determining_element_instance(&h, "e", &[0, 1]).unwrap();
        assert_eq!(inst.pair.ideal().n(), 1);
        // no catalogued seed for a generic element
        assert!(matches!(
            determining_element_instance(&h, "s1", &[]),
            Err(InstanceError::NoCataloguedSeed { .. })
        ));
    }

    #[test]
    fn deodhar_psi_phi_exchanged_by_duality() {
        // the extracted r-polynomials of dual Deodhar sides both vanish and
        // the sides are opposite
        let h = hecke("B2", &[1, 2]);
        for j in [vec![0usize], vec![1usize]] {
            let inst = deodhar_instance(&h, &j, false, false).unwrap();
            assert_eq!(inst.pair.m.side(), Side::M);
            assert_eq!(inst.pair.mt.side(), Side::MTilde);
            assert!(!inst.pair.m.has_nonzero_r());
            assert!(!inst.pair.mt.has_nonzero_r());
        }
    }

    #[test]
    fn build_dispatches_specs() {
        let h = hecke("A2", &[1, 1]);
        for text in ["regular", "deodhar:psi:J=s2", "solomon:J=s2", "deodhar0:phi:J=s1"] {
            let spec = InstanceSpec::parse(text).unwrap();
            let inst = build(&h, &spec).unwrap();
            assert!(!inst.notes.is_empty());
            assert_eq!(inst.name, text);
        }
    }
}
