//! Run configuration: group, weights and instance selection, with a
//! canonical JSON form whose hash keys the on-disk cache.

use std::sync::Arc;

use sha2::{Digest, Sha256};
use wgk_core::coxeter::{CoxeterMatrix, Group, Weights, DEFAULT_CAP};
use wgk_core::hecke::Hecke;
use wgk_core::instances::{self, Instance, InstanceSpec};
use wgk_core::GammaExp;

/// Schema version for cached artifacts; bump on representation changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum AppError {
    /// Bad configuration or arguments → exit code 2.
    Config(String),
    /// A mathematical verification failed → exit code 1.
    Math(String),
    /// I/O trouble → exit code 1.
    Io(String),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Config(m) => write!(f, "configuration error: {m}"),
            AppError::Math(m) => write!(f, "verification failure: {m}"),
            AppError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Math(_) | AppError::Io(_) => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupConfig {
    Named { name: String, cap: usize },
    Matrix { m: Vec<Vec<u32>>, cap: usize },
}

impl GroupConfig {
    /// `--group` accepts a named type (`A3`, `B2`, `I2(5)`, ...) or
    /// `@file.json` with `{"type": "named"|"matrix", ...}`.
    pub fn parse(arg: &str) -> Result<GroupConfig, AppError> {
        if let Some(path) = arg.strip_prefix('@') {
            let text = std::fs::read_to_string(path)
                .map_err(|e| AppError::Config(format!("cannot read group config {path}: {e}")))?;
            return Self::from_json_text(&text);
        }
        Ok(GroupConfig::Named {
            name: arg.to_string(),
            cap: DEFAULT_CAP,
        })
    }

    pub fn from_json_text(text: &str) -> Result<GroupConfig, AppError> {
        let v: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| AppError::Config(format!("bad group JSON: {e}")))?;
        let cap = v
            .get("cap")
            .and_then(|c| c.as_u64())
            .map(|c| c as usize)
            .unwrap_or(DEFAULT_CAP);
        match v.get("type").and_then(|t| t.as_str()) {
            Some("named") => {
                let name = v
                    .get("name")
                    .and_then(|n| n.as_str())
                    .ok_or_else(|| AppError::Config("named group needs a name".into()))?;
                Ok(GroupConfig::Named {
                    name: name.to_string(),
                    cap,
                })
            }
            Some("matrix") => {
                let rows = v
                    .get("m")
                    .and_then(|m| m.as_array())
                    .ok_or_else(|| AppError::Config("matrix group needs m".into()))?;
                let m: Result<Vec<Vec<u32>>, AppError> = rows
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| AppError::Config("matrix rows must be arrays".into()))?
                            .iter()
                            .map(|e| {
                                e.as_u64()
                                    .map(|x| x as u32)
                                    .ok_or_else(|| AppError::Config("matrix entries are integers".into()))
                            })
                            .collect()
                    })
                    .collect();
                Ok(GroupConfig::Matrix { m: m?, cap })
            }
            _ => Err(AppError::Config("group JSON needs type: named|matrix".into())),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            GroupConfig::Named { name, cap } => {
                serde_json::json!({"type": "named", "name": name, "cap": cap})
            }
            GroupConfig::Matrix { m, cap } => {
                serde_json::json!({"type": "matrix", "m": m, "cap": cap})
            }
        }
    }

    pub fn build(&self) -> Result<Arc<Group>, AppError> {
        let group = match self {
            GroupConfig::Named { name, cap } => Group::named(name, *cap),
            GroupConfig::Matrix { m, cap } => {
                let matrix = CoxeterMatrix::new(m.clone()).map_err(|e| AppError::Config(e.to_string()))?;
                Group::build(matrix, *cap)
            }
        };
        group.map(Arc::new).map_err(|e| AppError::Config(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightsConfig {
    pub gamma_rank: usize,
    /// Exponent vector of `L(s)` per generator.
    pub values: Vec<Vec<i64>>,
}

impl WeightsConfig {
    /// `--weights` accepts `equal`, a comma list like `1,2`, or
    /// `@file.json` with `{"gamma_rank": k, "L": {"s1": [...], ...}}`.
    pub fn parse(arg: &str, n_gens: usize) -> Result<WeightsConfig, AppError> {
        if let Some(path) = arg.strip_prefix('@') {
            let text = std::fs::read_to_string(path)
                .map_err(|e| AppError::Config(format!("cannot read weight config {path}: {e}")))?;
            return Self::from_json_text(&text, n_gens);
        }
        if arg == "equal" {
            return Ok(WeightsConfig {
                gamma_rank: 1,
                values: vec![vec![1]; n_gens],
            });
        }
        let ints: Result<Vec<i64>, _> = arg.split(',').map(|p| p.trim().parse::<i64>()).collect();
        let ints = ints.map_err(|e| AppError::Config(format!("bad weight list `{arg}`: {e}")))?;
        if ints.len() != n_gens {
            return Err(AppError::Config(format!(
                "weight list has {} entries for {} generators",
                ints.len(),
                n_gens
            )));
        }
        Ok(WeightsConfig {
            gamma_rank: 1,
            values: ints.into_iter().map(|v| vec![v]).collect(),
        })
    }

    pub fn from_json_text(text: &str, n_gens: usize) -> Result<WeightsConfig, AppError> {
        let v: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| AppError::Config(format!("bad weight JSON: {e}")))?;
        let rank = v
            .get("gamma_rank")
            .and_then(|r| r.as_u64())
            .ok_or_else(|| AppError::Config("weight JSON needs gamma_rank".into()))?
            as usize;
        let table = v
            .get("L")
            .and_then(|l| l.as_object())
            .ok_or_else(|| AppError::Config("weight JSON needs L".into()))?;
        let mut values = Vec::with_capacity(n_gens);
        for s in 0..n_gens {
            let key = format!("s{}", s + 1);
            let entry = table
                .get(&key)
                .and_then(|e| e.as_array())
                .ok_or_else(|| AppError::Config(format!("weight JSON misses {key}")))?;
            let coords: Result<Vec<i64>, AppError> = entry
                .iter()
                .map(|x| {
                    x.as_i64()
                        .ok_or_else(|| AppError::Config("weight coordinates are integers".into()))
                })
                .collect();
            let coords = coords?;
            if coords.len() != rank {
                return Err(AppError::Config(format!(
                    "{key} has rank {} but gamma_rank is {rank}",
                    coords.len()
                )));
            }
            values.push(coords);
        }
        Ok(WeightsConfig {
            gamma_rank: rank,
            values,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut l = serde_json::Map::new();
        for (s, v) in self.values.iter().enumerate() {
            l.insert(format!("s{}", s + 1), serde_json::json!(v));
        }
        serde_json::json!({"gamma_rank": self.gamma_rank, "L": l})
    }

    pub fn build(&self) -> Result<Weights, AppError> {
        Weights::new(self.values.iter().map(|v| GammaExp::new(v.clone())).collect())
            .map_err(|e| AppError::Config(e.to_string()))
    }
}

/// A fully resolved run: group, weights, instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub group: GroupConfig,
    pub weights: WeightsConfig,
    pub instance: String,
}

impl RunConfig {
    pub fn new(group_arg: &str, weights_arg: &str, instance_arg: &str) -> Result<Self, AppError> {
        let group = GroupConfig::parse(group_arg)?;
        let built = group.build()?;
        let weights = WeightsConfig::parse(weights_arg, built.rank())?;
        let spec = InstanceSpec::parse(instance_arg).map_err(|e| AppError::Config(e.to_string()))?;
        Ok(RunConfig {
            group,
            weights,
            instance: spec.canonical_name(),
        })
    }

    pub fn canonical_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": SCHEMA_VERSION,
            "group": self.group.to_json(),
            "weights": self.weights.to_json(),
            "instance": self.instance,
        })
    }

    /// Content hash keying the cache.
    pub fn content_hash(&self) -> String {
        let text = self.canonical_json().to_string();
        let mut hasher = Sha256::new();
        hasher.update(text.as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Build the Hecke context and the verified instance.
    pub fn build(&self) -> Result<(Arc<Hecke>, Instance), AppError> {
        let group = self.group.build()?;
        let weights = self.weights.build()?;
        if weights.n_gens() != group.rank() {
            return Err(AppError::Config(format!(
                "{} weights for rank-{} group",
                weights.n_gens(),
                group.rank()
            )));
        }
        let hecke =
            Arc::new(Hecke::new(group, weights).map_err(|e| AppError::Config(e.to_string()))?);
        let spec =
            InstanceSpec::parse(&self.instance).map_err(|e| AppError::Config(e.to_string()))?;
        let instance = instances::build(&hecke, &spec).map_err(|e| AppError::Math(e.to_string()))?;
        Ok((hecke, instance))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_named_group_and_weights() {
        let cfg = RunConfig::new("B2", "1,2", "regular").unwrap();
        assert_eq!(cfg.instance, "regular");
        let (hecke, inst) = cfg.build().unwrap();
        assert_eq!(hecke.group().order(), 8);
        assert_eq!(inst.pair.ideal().n(), 8);
    }

    #[test]
    fn matrix_group_json() {
        let cfg =
            GroupConfig::from_json_text(r#"{"type":"matrix","m":[[1,3],[3,1]],"cap":100}"#).unwrap();
        let group = cfg.build().unwrap();
        assert_eq!(group.order(), 6);
    }

    #[test]
    fn weight_json_rank_two() {
        let cfg = WeightsConfig::from_json_text(
            r#"{"gamma_rank":2,"L":{"s1":[1,0],"s2":[1,0]}}"#,
            2,
        )
        .unwrap();
        assert_eq!(cfg.gamma_rank, 2);
        assert!(cfg.build().is_ok());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = RunConfig::new("A2", "equal", "regular").unwrap();
        let b = RunConfig::new("A2", "equal", "regular").unwrap();
        assert_eq!(a.content_hash(), b.content_hash());
        let c = RunConfig::new("A2", "equal", "deodhar:psi:J=s2").unwrap();
        assert_ne!(a.content_hash(), c.content_hash());
    }

    #[test]
    fn bad_configs_are_config_errors() {
        assert!(matches!(
            RunConfig::new("Z9", "equal", "regular"),
            Err(AppError::Config(_))
        ));
        assert!(matches!(
            RunConfig::new("A2", "1,2,3", "regular"),
            Err(AppError::Config(_))
        ));
        assert!(matches!(
            RunConfig::new("A2", "equal", "nonsense"),
            Err(AppError::Config(_))
        ));
        // conjugacy violation: A2 with unequal weights
        let cfg = RunConfig::new("A2", "1,2", "regular").unwrap();
        assert!(matches!(cfg.build(), Err(AppError::Config(_))));
    }
}
