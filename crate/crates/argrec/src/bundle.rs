//! Model bundle: a directory holding the trained light model, the optional
//! reference heavy model, the recentness tables, and the pipeline
//! configuration. Counts serialize as sorted text keyed by vocabulary ids,
//! so identical training inputs produce byte-identical bundles.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::candgen::{ExprType, GenConfig};
use crate::features::{RecentnessTables, TableCounts};

/// Serialized recentness tables: the raw bucket counts (authoritative for
/// reload) plus the derived bucket probability arrays.
#[derive(Debug, Serialize, Deserialize)]
struct TablesDoc {
    #[serde(flatten)]
    counts: TableCounts,
    prob_create: Vec<f64>,
    prob_access: Vec<f64>,
}

impl TablesDoc {
    fn of<F: Real>(tables: &RecentnessTables<F>) -> Self {
        TablesDoc {
            counts: tables.counts(),
            prob_create: tables
                .prob_create_table()
                .iter()
                .map(|p| p.to_f64().unwrap())
                .collect(),
            prob_access: tables
                .prob_access_table()
                .iter()
                .map(|p| p.to_f64().unwrap())
                .collect(),
        }
    }
}
use crate::lm::{CountTable, LmParams, NGramModel, Vocab};
use crate::pipeline::PipelineConfig;
use crate::scalar::Real;

pub const COUNTS_FORMAT: &str = "sorted-text-v1";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("bundle io error at {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("bundle format error in {path}: {message}")]
    Format { path: PathBuf, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BundleError + '_ {
    move |source| BundleError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    schema: u32,
    counts_format: String,
    vocab_file: String,
    order: usize,
    lambda: f64,
    layer_weight: f64,
    min_count: u64,
    packages: Vec<String>,
    reduction_threshold: Option<u32>,
    heavy_types: Vec<ExprType>,
    parasim_floor: f64,
    member_depth: u32,
    strict_compat: bool,
    object_mapping: bool,
    has_heavy: bool,
    heavy_order: Option<usize>,
}

/// Everything a recommender needs at runtime.
#[derive(Debug)]
pub struct Bundle<F> {
    pub model: NGramModel<F>,
    pub heavy: Option<NGramModel<F>>,
    pub tables: RecentnessTables<F>,
    pub config: PipelineConfig<F>,
}

pub fn save_bundle<F: Real>(dir: &Path, bundle: &Bundle<F>) -> Result<(), BundleError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let manifest = Manifest {
        schema: SCHEMA_VERSION,
        counts_format: COUNTS_FORMAT.to_string(),
        vocab_file: "vocab.txt".to_string(),
        order: bundle.model.params.order,
        lambda: bundle.model.params.lambda.to_f64().unwrap(),
        layer_weight: bundle.model.params.layer_weight.to_f64().unwrap(),
        min_count: bundle.model.params.min_count,
        packages: bundle.model.package_tables().keys().cloned().collect(),
        reduction_threshold: bundle.config.reduction_threshold,
        heavy_types: bundle.config.heavy_types.iter().copied().collect(),
        parasim_floor: bundle.config.parasim_floor.to_f64().unwrap(),
        member_depth: bundle.config.gen.member_depth,
        strict_compat: bundle.config.gen.strict_compat,
        object_mapping: bundle.config.object_mapping,
        has_heavy: bundle.heavy.is_some(),
        heavy_order: bundle.heavy.as_ref().map(|h| h.params.order),
    };
    write_json(&dir.join("manifest.json"), &manifest)?;
    write_json(&dir.join("tables.json"), &TablesDoc::of(&bundle.tables))?;
    save_model_files(dir, &bundle.model)?;
    if let Some(heavy) = &bundle.heavy {
        let hdir = dir.join("heavy");
        fs::create_dir_all(&hdir).map_err(io_err(&hdir))?;
        save_model_files(&hdir, heavy)?;
    }
    Ok(())
}

fn save_model_files<F: Real>(dir: &Path, model: &NGramModel<F>) -> Result<(), BundleError> {
    let vocab_path = dir.join("vocab.txt");
    let mut vocab_text = String::new();
    for t in model.vocab().tokens() {
        vocab_text.push_str(t);
        vocab_text.push('\n');
    }
    fs::write(&vocab_path, vocab_text).map_err(io_err(&vocab_path))?;

    let counts_dir = dir.join("counts");
    fs::create_dir_all(&counts_dir).map_err(io_err(&counts_dir))?;
    write_counts(&counts_dir.join("global.txt"), model.global_table())?;
    for (i, (_, table)) in model.package_tables().iter().enumerate() {
        write_counts(&counts_dir.join(format!("pkg_{i}.txt")), table)?;
    }
    Ok(())
}

fn write_counts(path: &Path, table: &CountTable) -> Result<(), BundleError> {
    let mut out = fs::File::create(path).map_err(io_err(path))?;
    let mut buf = String::new();
    for (ctx, succ, count) in table.sorted_entries() {
        buf.push_str(&ctx.len().to_string());
        for c in &ctx {
            buf.push(' ');
            buf.push_str(&c.to_string());
        }
        buf.push(' ');
        buf.push_str(&succ.to_string());
        buf.push(' ');
        buf.push_str(&count.to_string());
        buf.push('\n');
    }
    out.write_all(buf.as_bytes()).map_err(io_err(path))?;
    Ok(())
}

fn read_counts(path: &Path) -> Result<CountTable, BundleError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut table = CountTable::default();
    for (lineno, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split(' ').collect();
        let bad = |m: &str| BundleError::Format {
            path: path.to_path_buf(),
            message: format!("line {}: {m}", lineno + 1),
        };
        if fields.len() < 3 {
            return Err(bad("too few fields"));
        }
        let k: usize = fields[0].parse().map_err(|_| bad("bad context length"))?;
        if fields.len() != k + 3 {
            return Err(bad("field count does not match context length"));
        }
        let mut ctx = Vec::with_capacity(k);
        for f in &fields[1..1 + k] {
            ctx.push(f.parse().map_err(|_| bad("bad context id"))?);
        }
        let succ: u32 = fields[1 + k].parse().map_err(|_| bad("bad successor id"))?;
        let count: u64 = fields[2 + k].parse().map_err(|_| bad("bad count"))?;
        table.insert_count(&ctx, succ, count);
    }
    Ok(table)
}

fn load_model_files<F: Real>(
    dir: &Path,
    params: LmParams<F>,
    packages: &[String],
) -> Result<NGramModel<F>, BundleError> {
    let vocab_path = dir.join("vocab.txt");
    let vocab_text = fs::read_to_string(&vocab_path).map_err(io_err(&vocab_path))?;
    let tokens: Vec<String> = vocab_text.lines().map(|l| l.to_string()).collect();
    let vocab = Vocab::from_tokens(tokens);
    let counts_dir = dir.join("counts");
    let global = read_counts(&counts_dir.join("global.txt"))?;
    let mut package_tables = BTreeMap::new();
    for (i, name) in packages.iter().enumerate() {
        let table = read_counts(&counts_dir.join(format!("pkg_{i}.txt")))?;
        package_tables.insert(name.clone(), table);
    }
    Ok(NGramModel::from_parts(params, vocab, global, package_tables))
}

pub fn load_bundle<F: Real>(dir: &Path) -> Result<Bundle<F>, BundleError> {
    let manifest_path = dir.join("manifest.json");
    let manifest: Manifest = read_json(&manifest_path)?;
    if manifest.counts_format != COUNTS_FORMAT {
        return Err(BundleError::Format {
            path: manifest_path,
            message: format!("unsupported counts format '{}'", manifest.counts_format),
        });
    }
    let to_f = |v: f64| {
        F::from_f64(v).ok_or_else(|| BundleError::Format {
            path: dir.join("manifest.json"),
            message: format!("value {v} not representable"),
        })
    };
    let params = LmParams {
        order: manifest.order,
        lambda: to_f(manifest.lambda)?,
        layer_weight: to_f(manifest.layer_weight)?,
        min_count: manifest.min_count,
    };
    let model = load_model_files(dir, params.clone(), &manifest.packages)?;
    let heavy = if manifest.has_heavy {
        let hparams = LmParams {
            order: manifest.heavy_order.unwrap_or(manifest.order + 2),
            ..params
        };
        Some(load_model_files(&dir.join("heavy"), hparams, &manifest.packages)?)
    } else {
        None
    };
    let doc: TablesDoc = read_json(&dir.join("tables.json"))?;
    let tables = RecentnessTables::from_counts(doc.counts);
    let config = PipelineConfig {
        reduction_threshold: manifest.reduction_threshold,
        heavy_types: manifest.heavy_types.into_iter().collect(),
        heavy_cmd: None,
        rules_enabled: true,
        static_features_enabled: true,
        heavy_enabled: false,
        parasim_floor: to_f(manifest.parasim_floor)?,
        object_mapping: manifest.object_mapping,
        gen: GenConfig {
            member_depth: manifest.member_depth,
            strict_compat: manifest.strict_compat,
        },
    };
    Ok(Bundle {
        model,
        heavy,
        tables,
        config,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), BundleError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| BundleError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    fs::write(path, text + "\n").map_err(io_err(path))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, BundleError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| BundleError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lm::{LmParams, QueryScope, Stream};

    fn toy_bundle() -> Bundle<f64> {
        let streams = vec![Stream {
            package: "p".into(),
            path: "f".into(),
            tokens: ["a", "b", "a", "b", "c", "c"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }];
        let model = NGramModel::train(&streams, LmParams::default()).unwrap();
        let tables = RecentnessTables::fit(&[(0, Some(1)), (1, None)], 16).unwrap();
        Bundle {
            model,
            heavy: None,
            tables,
            config: PipelineConfig::default(),
        }
    }

    #[test]
    fn round_trip_preserves_probabilities() {
        let dir = tempfile::tempdir().unwrap();
        let b = toy_bundle();
        save_bundle(dir.path(), &b).unwrap();
        let loaded: Bundle<f64> = load_bundle(dir.path()).unwrap();
        let scope = QueryScope::at("p", "f");
        let a = b.model.vocab().id_of("a");
        let bb = b.model.vocab().id_of("b");
        for t in 0..b.model.vocab().len() as u32 {
            let orig = b.model.token_prob(&scope, &[a, bb], t);
            let back = loaded.model.token_prob(&scope, &[a, bb], t);
            assert_eq!(orig, back);
        }
        assert_eq!(
            b.tables.prob_access_table(),
            loaded.tables.prob_access_table()
        );
    }

    #[test]
    fn saving_twice_is_byte_identical() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let b = toy_bundle();
        save_bundle(d1.path(), &b).unwrap();
        save_bundle(d2.path(), &b).unwrap();
        for name in ["manifest.json", "tables.json", "vocab.txt", "counts/global.txt"] {
            let x = fs::read(d1.path().join(name)).unwrap();
            let y = fs::read(d2.path().join(name)).unwrap();
            assert_eq!(x, y, "{name} differs");
        }
    }
}
