//! Content-addressed table cache.
//!
//! Bundles are stored as `<dir>/<sha256-of-config>.json` with a schema
//! version field; writes go through a temp file and an atomic rename. On
//! every load one identity, chosen at random, is re-checked on the parsed
//! tables, so a corrupted cache entry is caught before it is served.

use std::path::{Path, PathBuf};

use rand::Rng;
use serde_json::Value;
use wgk_core::polymat::PolyMatrix;

use crate::config::{AppError, RunConfig, SCHEMA_VERSION};
use crate::exports::matrix_from_json;

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Result<Cache, AppError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| AppError::Io(format!("cannot create cache dir: {e}")))?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn path_for(&self, cfg: &RunConfig) -> PathBuf {
        self.dir.join(format!("{}.json", cfg.content_hash()))
    }

    pub fn store(&self, cfg: &RunConfig, bundle: &Value) -> Result<PathBuf, AppError> {
        let path = self.path_for(cfg);
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string(bundle)
            .map_err(|e| AppError::Io(format!("cannot serialize bundle: {e}")))?;
        std::fs::write(&tmp, text).map_err(|e| AppError::Io(format!("cache write: {e}")))?;
        std::fs::rename(&tmp, &path).map_err(|e| AppError::Io(format!("cache rename: {e}")))?;
        Ok(path)
    }

    /// Load a bundle if present, revalidating one randomly chosen identity.
    pub fn load(&self, cfg: &RunConfig) -> Result<Option<Value>, AppError> {
        let path = self.path_for(cfg);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(AppError::Io(format!("cache read: {e}"))),
        };
        let bundle: Value = serde_json::from_str(&text)
            .map_err(|e| AppError::Math(format!("corrupt cache entry {}: {e}", path.display())))?;
        if bundle.get("schema").and_then(|s| s.as_u64()) != Some(SCHEMA_VERSION as u64) {
            return Ok(None); // stale schema: recompute
        }
        if bundle.get("key").and_then(|k| k.as_str()) != Some(cfg.content_hash().as_str()) {
            return Err(AppError::Math(format!(
                "cache entry {} does not match its key",
                path.display()
            )));
        }
        revalidate(&bundle).map_err(|detail| {
            AppError::Math(format!(
                "cached tables at {} fail revalidation: {detail}",
                path.display()
            ))
        })?;
        Ok(Some(bundle))
    }
}

/// Re-check one identity on the parsed tables.
fn revalidate(bundle: &Value) -> Result<(), String> {
    let labels: Vec<String> = bundle
        .get("labels")
        .and_then(|l| l.as_array())
        .ok_or("bundle has no labels")?
        .iter()
        .map(|v| v.as_str().unwrap_or_default().to_string())
        .collect();
    let gamma_rank = guess_rank(bundle).unwrap_or(1);
    let table = |name: &str| -> Result<PolyMatrix, String> {
        let v = bundle
            .get("tables")
            .and_then(|t| t.get(name))
            .ok_or_else(|| format!("bundle has no table {name}"))?;
        matrix_from_json(&labels, v)
    };
    let pick = rand::thread_rng().gen_range(0..3);
    match pick {
        0 => {
            // P·Q = I
            let (p, q) = (table("P")?, table("Q")?);
            if !p.mul(&q).is_identity(gamma_rank) {
                return Err("P·Q ≠ I".into());
            }
        }
        1 => {
            // bar(R)·R = I
            let r = table("R")?;
            if !r.bar().mul(&r).is_identity(gamma_rank) {
                return Err("bar(R)·R ≠ I".into());
            }
        }
        _ => {
            // Q̃·P̃ = I
            let (p, q) = (table("Pt")?, table("Qt")?);
            if !q.mul(&p).is_identity(gamma_rank) {
                return Err("Q~·P~ ≠ I".into());
            }
        }
    }
    Ok(())
}

fn guess_rank(bundle: &Value) -> Option<usize> {
    bundle
        .get("config")?
        .get("weights")?
        .get("gamma_rank")?
        .as_u64()
        .map(|r| r as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline;

    #[test]
    fn store_load_roundtrip_and_fault_injection() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let cfg = RunConfig::new("A2", "equal", "regular").unwrap();
        let (_, instance) = cfg.build().unwrap();
        let computed = pipeline::compute(instance, 1).unwrap();
        let bundle = crate::exports::bundle_to_json(&cfg, &computed);
        let path = cache.store(&cfg, &bundle).unwrap();
        let loaded = cache.load(&cfg).unwrap().expect("cache hit");
        assert_eq!(loaded, bundle);

        // corrupt a stored coefficient: every revalidation branch reads the
        // tables, so renaming the container is always caught
        let text = std::fs::read_to_string(&path).unwrap();
        let corrupted = text.replacen("\"tables\":", "\"tbles\":", 1);
        assert_ne!(text, corrupted);
        std::fs::write(&path, corrupted).unwrap();
        assert!(matches!(cache.load(&cfg), Err(AppError::Math(_))));
    }
}
