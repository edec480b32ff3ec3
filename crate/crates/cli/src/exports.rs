//! Renderers: table bundle JSON (also the cache format), per-table JSON and
//! CSV, W-graph JSON and DOT, and the verification report JSON.
//!
//! All JSON objects are built with sorted keys and arrays in a fixed order,
//! so identical configurations render byte-identical files.

use serde_json::{json, Value};
use wgk_core::klpoly::{MuTable, WGraph};
use wgk_core::polymat::{MatrixKind, PolyMatrix};
use wgk_core::LaurentPoly;

use crate::config::{AppError, RunConfig, SCHEMA_VERSION};
use crate::pipeline::{Computed, Report, Status};

/// Matrix JSON: `{"kind": ..., "entries": [{"x","y","poly"}]}` with entries
/// in row-major label order and zero entries omitted.
pub fn matrix_to_json(kind: &str, labels: &[String], m: &PolyMatrix) -> Value {
    let mut entries = Vec::new();
    for x in 0..m.n() {
        for y in 0..m.n() {
            let p = m.at(x, y);
            if !p.is_zero() {
                entries.push(json!({
                    "x": labels[x],
                    "y": labels[y],
                    "poly": p.to_json(),
                }));
            }
        }
    }
    json!({"kind": kind, "entries": entries})
}

pub fn matrix_from_json(labels: &[String], v: &Value) -> Result<PolyMatrix, String> {
    let n = labels.len();
    let index = |name: &str| labels.iter().position(|l| l == name);
    let mut m = PolyMatrix::zero(MatrixKind::Other, n);
    let entries = v
        .get("entries")
        .and_then(|e| e.as_array())
        .ok_or("matrix JSON needs entries")?;
    for e in entries {
        let x = e.get("x").and_then(|x| x.as_str()).ok_or("entry needs x")?;
        let y = e.get("y").and_then(|y| y.as_str()).ok_or("entry needs y")?;
        let poly = LaurentPoly::from_json(e.get("poly").ok_or("entry needs poly")?)?;
        let (xi, yi) = (
            index(x).ok_or("unknown x label")?,
            index(y).ok_or("unknown y label")?,
        );
        m.set(xi, yi, poly);
    }
    Ok(m)
}

/// CSV: header `x,y,poly`, rows in row-major label order, polynomials in the
/// fixed descending-exponent term format.
pub fn matrix_to_csv(labels: &[String], m: &PolyMatrix) -> String {
    let mut out = String::from("x,y,poly\n");
    for x in 0..m.n() {
        for y in 0..m.n() {
            let p = m.at(x, y);
            if !p.is_zero() {
                out.push_str(&format!("{},{},{}\n", labels[x], labels[y], p));
            }
        }
    }
    out
}

fn columns_to_json(labels: &[String], cols: &[Vec<LaurentPoly>]) -> Value {
    let out: Vec<Value> = cols
        .iter()
        .enumerate()
        .map(|(w, col)| {
            let mut terms = Vec::new();
            for (y, p) in col.iter().enumerate() {
                if !p.is_zero() {
                    terms.push(json!({"y": labels[y], "poly": p.to_json()}));
                }
            }
            json!({"w": labels[w], "coords": terms})
        })
        .collect();
    Value::Array(out)
}

fn mu_to_json(labels: &[String], mu: &MuTable) -> Value {
    let entries: Vec<Value> = mu
        .entries
        .iter()
        .map(|(&(s, z, v), p)| {
            json!({
                "s": format!("s{}", s + 1),
                "x": labels[z],
                "y": labels[v],
                "poly": p.to_json(),
            })
        })
        .collect();
    let zero: Vec<Value> = mu
        .zero_gens
        .iter()
        .map(|(&s, (perm, signs))| {
            json!({
                "s": format!("s{}", s + 1),
                "bijection": perm.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>(),
                "signs": signs,
            })
        })
        .collect();
    json!({"entries": entries, "strict": mu.strict, "zero_gens": zero, "notes": mu.notes})
}

pub fn wgraph_to_json(wg: &WGraph) -> Value {
    let vertices: Vec<Value> = (0..wg.n)
        .map(|v| {
            json!({
                "label": wg.labels[v],
                "I": wg.i_sets[v].iter().map(|s| format!("s{}", s + 1)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mu: Vec<Value> = wg
        .mu
        .iter()
        .map(|(&(s, x, y), p)| {
            json!({
                "s": format!("s{}", s + 1),
                "x": wg.labels[x],
                "y": wg.labels[y],
                "poly": p.to_json(),
            })
        })
        .collect();
    let zero: Vec<Value> = wg
        .zero_gens
        .iter()
        .map(|(&s, (perm, signs))| {
            json!({
                "s": format!("s{}", s + 1),
                "bijection": perm.iter().map(|&i| wg.labels[i].clone()).collect::<Vec<_>>(),
                "signs": signs,
            })
        })
        .collect();
    json!({"vertices": vertices, "mu": mu, "zero_gens": zero})
}

/// DOT export: vertices labeled with the reduced word and I-set; one edge
/// per unordered pair listing every nonzero μ with its generator and
/// direction.
pub fn wgraph_to_dot(wg: &WGraph) -> String {
    let mut out = String::from("graph wgraph {\n  node [shape=box];\n");
    for v in 0..wg.n {
        let iset: Vec<String> = wg.i_sets[v].iter().map(|s| format!("s{}", s + 1)).collect();
        out.push_str(&format!(
            "  v{} [label=\"{} | I={{{}}}\"];\n",
            v,
            wg.labels[v],
            iset.join(",")
        ));
    }
    let mut pairs: std::collections::BTreeMap<(usize, usize), Vec<String>> =
        std::collections::BTreeMap::new();
    for (&(s, x, y), p) in &wg.mu {
        let key = (x.min(y), x.max(y));
        pairs.entry(key).or_default().push(format!(
            "s{}:{}<-{}: {}",
            s + 1,
            wg.labels[x],
            wg.labels[y],
            p
        ));
    }
    for ((a, b), mut descr) in pairs {
        descr.sort();
        out.push_str(&format!(
            "  v{} -- v{} [label=\"{}\"];\n",
            a,
            b,
            descr.join("\\n")
        ));
    }
    out.push_str("}\n");
    out
}

/// The full bundle: every computed table, keyed for the cache.
pub fn bundle_to_json(cfg: &RunConfig, c: &Computed) -> Value {
    let labels = &c.labels;
    let mut tables = serde_json::Map::new();
    tables.insert("R".into(), matrix_to_json("R", labels, &c.m.r));
    tables.insert("Rt".into(), matrix_to_json("Rt", labels, &c.mt.r));
    tables.insert("P".into(), matrix_to_json("P", labels, &c.m.p));
    tables.insert("Pt".into(), matrix_to_json("Pt", labels, &c.mt.p));
    tables.insert("Q".into(), matrix_to_json("Q", labels, &c.m.q));
    tables.insert("Qt".into(), matrix_to_json("Qt", labels, &c.mt.q));
    tables.insert("D".into(), matrix_to_json("D", labels, &c.duals.d));
    tables.insert(
        "Dprime".into(),
        matrix_to_json("Dprime", labels, &c.duals.d_prime),
    );

    let pi = match &c.pi {
        Ok((m_pi, mt_pi)) => json!({
            "available": true,
            "Rpi": matrix_to_json("Rpi", labels, &m_pi.r_pi),
            "Ppi": matrix_to_json("Ppi", labels, &m_pi.p_pi),
            "Qpi": matrix_to_json("Qpi", labels, &m_pi.q_pi),
            "Rtpi": matrix_to_json("Rtpi", labels, &mt_pi.r_pi),
            "Ptpi": matrix_to_json("Ptpi", labels, &mt_pi.p_pi),
            "mupi": mu_to_json(labels, &m_pi.mu_pi),
            "normalization": m_pi.normalization.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        }),
        Err(reason) => json!({"available": false, "reason": reason}),
    };
    let inversion = match &c.inversion {
        Some(rep) => Value::Array(
            rep.results
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "pass": r.pass,
                        "counterexample": r.counterexample,
                    })
                })
                .collect(),
        ),
        None => Value::Null,
    };

    json!({
        "schema": SCHEMA_VERSION,
        "config": cfg.canonical_json(),
        "key": cfg.content_hash(),
        "labels": labels,
        "notes": c.instance.notes,
        "tables": Value::Object(tables),
        "C": columns_to_json(labels, &p_columns(&c.m.p)),
        "Ct": columns_to_json(labels, &p_columns(&c.mt.p)),
        "Cprime": columns_to_json(labels, &c.c_prime),
        "Ctprime": columns_to_json(labels, &c.ct_prime),
        "mu": mu_to_json(labels, &c.m.mu),
        "mut": mu_to_json(labels, &c.mt.mu),
        "wgraph": c.wgraph.as_ref().map(wgraph_to_json).unwrap_or(Value::Null),
        "pi": pi,
        "inversion": inversion,
    })
}

fn p_columns(p: &PolyMatrix) -> Vec<Vec<LaurentPoly>> {
    (0..p.n())
        .map(|w| (0..p.n()).map(|y| p.at(y, w).clone()).collect())
        .collect()
}

pub fn report_to_json(report: &Report) -> Value {
    Value::Array(
        report
            .entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "status": match e.status {
                        Status::Pass => "pass",
                        Status::Fail => "fail",
                        Status::Info => "info",
                    },
                    "claimed": e.claimed,
                    "detail": e.detail,
                })
            })
            .collect(),
    )
}

/// Extract a named table from a bundle for export.
pub fn select_table<'a>(bundle: &'a Value, out: &str) -> Result<&'a Value, AppError> {
    let missing = || AppError::Config(format!("unknown output `{out}`"));
    match out {
        "R" | "Rt" | "P" | "Pt" | "Q" | "Qt" | "D" | "Dprime" => {
            bundle.get("tables").and_then(|t| t.get(out)).ok_or_else(missing)
        }
        "C" | "Ct" | "Cprime" | "Ctprime" | "mu" | "mut" | "wgraph" | "inversion" => {
            bundle.get(out).ok_or_else(missing)
        }
        "pi_tables" => bundle.get("pi").ok_or_else(missing),
        "inversion_report" => bundle.get("inversion").ok_or_else(missing),
        _ => Err(missing()),
    }
}

/// All exportable output names.
pub const OUTPUTS: &[&str] = &[
    "R", "Rt", "P", "Pt", "Q", "Qt", "C", "Ct", "Cprime", "Ctprime", "D", "Dprime", "mu", "mut",
    "wgraph", "pi_tables", "inversion_report",
];
