//! Offline evaluation across the three usage scenarios.
//!
//! Static: the bundle's model is used as trained. Dynamic: the file cache
//! grows with each file's own content as its requests are answered, one
//! cache layer per file. Maintenance: per test file the light model is
//! additionally trained on every other test file, on top of the dynamic
//! caching.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::Bundle;
use crate::corpus::ast::CompilationUnit;
use crate::corpus::request::{extract_requests, ArRequest};
use crate::corpus::{parse_unit, ParseError};
use crate::interface::matching::gold_rank;
use crate::interface::metrics::{EvalReport, MetricError, Tally};
use crate::lm::NGramModel;
use crate::pipeline::{recommend, HeavyClient, PipelineConfig};
use crate::scalar::Real;
use crate::typesys::{build_type_index, IndexError, StubFile, TypeIndex, TypeSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Static,
    Dynamic,
    Maintenance,
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "static" => Ok(Scenario::Static),
            "dynamic" => Ok(Scenario::Dynamic),
            "maintenance" => Ok(Scenario::Maintenance),
            other => Err(format!(
                "unknown scenario '{other}' (expected static|dynamic|maintenance)"
            )),
        }
    }
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Static => "static",
            Scenario::Dynamic => "dynamic",
            Scenario::Maintenance => "maintenance",
        }
    }
}

/// Train/test file lists; paths resolve against the split file's directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("split error: file {0} appears in both train and test")]
    Overlap(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("split json: {0}")]
    BadSplit(String),
}

pub fn load_split(path: &Path) -> Result<(Split, PathBuf), EvalError> {
    let text = std::fs::read_to_string(path).map_err(|e| EvalError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let split: Split = serde_json::from_str(&text).map_err(|e| EvalError::BadSplit(e.to_string()))?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    Ok((split, base))
}

fn read_units(base: &Path, files: &[String]) -> Result<Vec<CompilationUnit>, EvalError> {
    files
        .iter()
        .map(|f| {
            let path = if Path::new(f).is_absolute() {
                PathBuf::from(f)
            } else {
                base.join(f)
            };
            let text = std::fs::read_to_string(&path).map_err(|e| EvalError::Io {
                path: path.clone(),
                source: e,
            })?;
            parse_unit(&path.to_string_lossy(), &text)
                .map_err(|e| EvalError::Parse { path, source: e })
        })
        .collect()
}

/// Evaluate the bundle on the split under one scenario.
pub fn evaluate<F: Real>(
    split: &Split,
    base: &Path,
    scenario: Scenario,
    bundle: &Bundle<F>,
    stubs: &[StubFile],
    cfg: &PipelineConfig<F>,
    mut heavy: Option<&mut HeavyClient>,
) -> Result<EvalReport<F>, EvalError> {
    for t in &split.train {
        if split.test.contains(t) {
            return Err(EvalError::Overlap(t.clone()));
        }
    }
    let train_units = read_units(base, &split.train)?;
    let test_units = read_units(base, &split.test)?;
    let all: Vec<Arc<CompilationUnit>> = train_units
        .iter()
        .chain(test_units.iter())
        .cloned()
        .map(Arc::new)
        .collect();
    let index = build_type_index(&all, stubs)?;

    let test_arcs: Vec<Arc<CompilationUnit>> =
        test_units.into_iter().map(Arc::new).collect();

    let mut tally = Tally::default();
    let mut by_expr: BTreeMap<String, Tally> = BTreeMap::new();
    let mut by_origin: BTreeMap<String, Tally> = BTreeMap::new();
    let mut total_ms = 0f64;
    let mut timed = 0u64;

    // dynamic and maintenance mutate a working copy of the light model
    let mut dynamic_model: Option<NGramModel<F>> = match scenario {
        Scenario::Dynamic => Some(bundle.model.clone()),
        _ => None,
    };

    for unit in &test_arcs {
        let mut requests = extract_requests(unit, &index);
        requests.sort_by_key(|r| r.location);

        let maintenance_model: Option<NGramModel<F>> = if scenario == Scenario::Maintenance {
            let mut m = bundle.model.clone();
            let others: Vec<_> = test_arcs
                .iter()
                .filter(|u| u.path != unit.path)
                .map(|u| crate::lm::unit_stream(u))
                .collect();
            m.add_streams(&others);
            Some(m)
        } else {
            None
        };
        let mut working = maintenance_model;

        let mut cache_cursor: Option<crate::corpus::token::Pos> = None;
        for req in &requests {
            // grow the file cache with the content written since the last
            // request, before answering this one
            if scenario != Scenario::Static {
                let model = working.as_mut().or(dynamic_model.as_mut()).unwrap();
                if let Some(prev) = cache_cursor {
                    let segment: Vec<String> = segment_subtokens(unit, prev, req.location);
                    if !segment.is_empty() {
                        model.update_cache(&unit.path, &segment);
                    }
                }
                cache_cursor = Some(req.location);
            }

            let model: &NGramModel<F> = working
                .as_ref()
                .or(dynamic_model.as_ref())
                .unwrap_or(&bundle.model);
            let supported = is_supported(req);
            let start = Instant::now();
            let rank = if req.unresolved {
                None
            } else {
                let heavy_ref = heavy.as_deref_mut();
                match recommend(req, 10, cfg, &index, model, &bundle.tables, heavy_ref) {
                    Ok(ranked) => req.gold.as_ref().and_then(|g| gold_rank(&ranked.items, g)),
                    Err(_) => None,
                }
            };
            total_ms += start.elapsed().as_secs_f64() * 1000.0;
            timed += 1;

            tally.record(supported, rank);
            let ty = req
                .gold
                .as_ref()
                .map(|g| format!("{:?}", g.expr_type()))
                .unwrap_or_else(|| "Hole".to_string());
            by_expr.entry(ty).or_default().record(supported, rank);
            by_origin
                .entry(origin_of(req, &index).to_string())
                .or_default()
                .record(supported, rank);
        }
    }

    let mean = if timed == 0 { 0.0 } else { total_ms / timed as f64 };
    Ok(EvalReport::from_tally(
        scenario.name(),
        &tally,
        by_expr,
        by_origin,
        F::from_f64(mean).unwrap(),
    )?)
}

fn segment_subtokens(
    unit: &CompilationUnit,
    from: crate::corpus::token::Pos,
    to: crate::corpus::token::Pos,
) -> Vec<String> {
    let mut out = Vec::new();
    for t in &unit.tokens {
        let p = t.pos();
        if p < from {
            continue;
        }
        if p >= to {
            break;
        }
        match t.kind {
            crate::corpus::token::TokenKind::Ident => {
                out.extend(crate::corpus::subtok::split_subtokens(&t.text))
            }
            crate::corpus::token::TokenKind::Hole => out.push(crate::lm::HOLE.to_string()),
            _ => out.push(t.text.clone()),
        }
    }
    out
}

/// Supported requests: resolvable callee and a gold of a supported
/// expression type.
fn is_supported(req: &ArRequest) -> bool {
    if req.unresolved {
        return false;
    }
    req.gold
        .as_ref()
        .is_some_and(|g| g.expr_type().is_supported())
}

fn origin_of(req: &ArRequest, index: &TypeIndex) -> &'static str {
    if req.unresolved {
        return "unresolved";
    }
    let expected = crate::typesys::expected_types(req, index);
    let intra = expected.declared_in.iter().any(|d| {
        index
            .get(d)
            .is_some_and(|t| t.source == TypeSource::Project)
    });
    if intra {
        "intra-project"
    } else {
        "inter-project"
    }
}
