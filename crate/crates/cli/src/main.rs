//! `wgk` — tables and verification for W-graph ideals over Hecke algebras
//! with unequal parameters.
//!
//! Exit codes: 0 success, 1 mathematical verification failure (with a JSON
//! failure report on stdout), 2 configuration errors.

mod cache;
mod config;
mod exports;
mod pipeline;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{AppError, RunConfig};

#[derive(Parser)]
#[command(name = "wgk", version, about = "W-graph ideal tables for Hecke algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Group: a named type (A2, B3, I2(5), A1xA1, H3) or @file.json
    #[arg(long)]
    group: String,
    /// Weights: `equal`, a comma list like `1,2`, or @file.json
    #[arg(long, default_value = "equal")]
    weights: String,
    /// Instance spec (see `wgk list-instances`)
    #[arg(long, default_value = "regular")]
    instance: String,
    /// Cache directory (default: $WGK_CACHE_DIR or ./.wgk-cache)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Worker threads for independent table computations
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute tables, cache them, and write requested exports.
    Compute {
        #[command(flatten)]
        run: RunArgs,
        /// Outputs to export (comma list), e.g. P,Q,wgraph
        #[arg(long, default_value = "P")]
        out: String,
        /// Export formats: json, csv, dot
        #[arg(long, default_value = "json")]
        export: String,
        /// Directory for export files
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run every applicable identity check and print the report.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Also write the JSON report to this file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List the instance catalog.
    ListInstances,
    /// Export a single table in one format to stdout.
    Export {
        #[command(flatten)]
        run: RunArgs,
        /// Output name, e.g. P, Q, wgraph, inversion_report
        #[arg(long)]
        what: String,
        /// Format: json, csv or dot
        #[arg(long, default_value = "json")]
        format: String,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn cache_dir(args: &RunArgs) -> PathBuf {
    args.cache_dir
        .clone()
        .or_else(|| std::env::var_os("WGK_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".wgk-cache"))
}

/// Compute the bundle, serving it from the cache when the content hash
/// matches.
fn bundle_for(cfg: &RunConfig, args: &RunArgs) -> Result<serde_json::Value, AppError> {
    let cache = cache::Cache::new(&cache_dir(args))?;
    if let Some(bundle) = cache.load(cfg)? {
        return Ok(bundle);
    }
    let (_, instance) = cfg.build()?;
    let computed = pipeline::compute(instance, args.jobs.max(1))?;
    let bundle = exports::bundle_to_json(cfg, &computed);
    cache.store(cfg, &bundle)?;
    Ok(bundle)
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Compute {
            run,
            out,
            export,
            out_dir,
        } => {
            let cfg = RunConfig::new(&run.group, &run.weights, &run.instance)?;
            let bundle = bundle_for(&cfg, &run)?;
            std::fs::create_dir_all(&out_dir)
                .map_err(|e| AppError::Io(format!("cannot create out dir: {e}")))?;
            let formats: Vec<&str> = export.split(',').map(str::trim).collect();
            let stem = format!(
                "{}_{}",
                sanitize(&run.group),
                cfg.content_hash()[..12].to_string()
            );
            for name in out.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let value = exports::select_table(&bundle, name)?;
                for format in &formats {
                    let (ext, text) = render(&bundle, name, value, format)?;
                    let path = out_dir.join(format!("{stem}_{name}.{ext}"));
                    std::fs::write(&path, text)
                        .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        Command::Verify { run, report } => {
            let cfg = RunConfig::new(&run.group, &run.weights, &run.instance)?;
            let (_, instance) = cfg.build()?;
            let notes = instance.notes.clone();
            let computed = pipeline::compute(instance, run.jobs.max(1))?;
            let rep = pipeline::verify(&computed);
            for note in &notes {
                println!("note: {note}");
            }
            for e in &rep.entries {
                let status = match e.status {
                    pipeline::Status::Pass => "PASS",
                    pipeline::Status::Fail => "FAIL",
                    pipeline::Status::Info => "info",
                };
                if e.detail.is_empty() {
                    println!("[{status}] {}", e.name);
                } else {
                    println!("[{status}] {}: {}", e.name, e.detail);
                }
            }
            let json = exports::report_to_json(&rep);
            if let Some(path) = report {
                std::fs::write(&path, serde_json::to_string_pretty(&json).unwrap())
                    .map_err(|e| AppError::Io(format!("cannot write report: {e}")))?;
            }
            if rep.ok() {
                println!("verification: all claimed identities hold");
                Ok(())
            } else {
                println!("{json}");
                Err(AppError::Math("some claimed identities fail".into()))
            }
        }
        Command::ListInstances => {
            for (name, descr) in wgk_core::instances::catalog() {
                println!("{name:32} {descr}");
            }
            Ok(())
        }
        Command::Export { run, what, format } => {
            let cfg = RunConfig::new(&run.group, &run.weights, &run.instance)?;
            let bundle = bundle_for(&cfg, &run)?;
            let value = exports::select_table(&bundle, &what)?;
            let (_, text) = render(&bundle, &what, value, &format)?;
            println!("{text}");
            Ok(())
        }
    }
}

fn render(
    bundle: &serde_json::Value,
    name: &str,
    value: &serde_json::Value,
    format: &str,
) -> Result<(&'static str, String), AppError> {
    match format {
        "json" => Ok(("json", serde_json::to_string_pretty(value).unwrap())),
        "csv" => {
            let labels: Vec<String> = bundle["labels"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_str().unwrap().to_string())
                .collect();
            let m = exports::matrix_from_json(&labels, value)
                .map_err(|e| AppError::Config(format!("`{name}` has no CSV form: {e}")))?;
            Ok(("csv", exports::matrix_to_csv(&labels, &m)))
        }
        "dot" => {
            if name != "wgraph" {
                return Err(AppError::Config("dot export is for wgraph only".into()));
            }
            if value.is_null() {
                return Err(AppError::Math(
                    "no W-graph available for this instance".into(),
                ));
            }
            Ok(("dot", wgraph_json_to_dot(value)))
        }
        other => Err(AppError::Config(format!("unknown export format `{other}`"))),
    }
}

/// Render the already-serialized W-graph JSON as DOT (the bundle may come
/// from the cache, where the in-memory graph is gone).
fn wgraph_json_to_dot(v: &serde_json::Value) -> String {
    let vertices = v["vertices"].as_array().unwrap();
    let index: std::collections::HashMap<&str, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, vx)| (vx["label"].as_str().unwrap(), i))
        .collect();
    let mut out = String::from("graph wgraph {\n  node [shape=box];\n");
    for (i, vx) in vertices.iter().enumerate() {
        let iset: Vec<&str> = vx["I"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_str().unwrap())
            .collect();
        out.push_str(&format!(
            "  v{} [label=\"{} | I={{{}}}\"];\n",
            i,
            vx["label"].as_str().unwrap(),
            iset.join(",")
        ));
    }
    let mut pairs: std::collections::BTreeMap<(usize, usize), Vec<String>> =
        std::collections::BTreeMap::new();
    for e in v["mu"].as_array().unwrap() {
        let x = index[e["x"].as_str().unwrap()];
        let y = index[e["y"].as_str().unwrap()];
        let poly = wgk_core::LaurentPoly::from_json(&e["poly"]).unwrap();
        let key = (x.min(y), x.max(y));
        pairs.entry(key).or_default().push(format!(
            "{}:{}<-{}: {}",
            e["s"].as_str().unwrap(),
            e["x"].as_str().unwrap(),
            e["y"].as_str().unwrap(),
            poly
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

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}
