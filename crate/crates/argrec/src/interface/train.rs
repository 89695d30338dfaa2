//! Bundle training: language-model counts, recentness tables fitted from
//! gold variable arguments, and the pipeline configuration.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bundle::Bundle;
use crate::corpus::ast::Expr;
use crate::corpus::request::{extract_requests, ArRequest};
use crate::corpus::scope::VarKind;
use crate::corpus::Project;
use crate::features::{accessing_recentness, creating_distance, RecentnessTables, VarProvenance};
use crate::lm::{unit_stream, LmError, LmParams, NGramModel, Stream};
use crate::pipeline::PipelineConfig;
use crate::scalar::Real;
use crate::typesys::{
    accessible_elements, build_type_index, IndexError, StubFile, TypeIndex,
};

#[derive(Debug, Error)]
pub enum TrainError {
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Lm(#[from] LmError),
    #[error("no variable arguments found in the training corpus; recentness tables cannot be fit")]
    NoVariableArguments,
}

#[derive(Debug, Clone)]
pub struct TrainOptions<F> {
    pub lm: LmParams<F>,
    pub bucket_cap: u32,
    pub config: PipelineConfig<F>,
    pub with_heavy: bool,
    pub heavy_order: usize,
}

impl<F: Real> Default for TrainOptions<F> {
    fn default() -> Self {
        TrainOptions {
            lm: LmParams::default(),
            bucket_cap: crate::features::DEFAULT_BUCKET_CAP,
            config: PipelineConfig::default(),
            with_heavy: false,
            heavy_order: 8,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrainSummary {
    pub files: usize,
    pub tokens: usize,
    pub requests: usize,
    pub variable_observations: usize,
    pub vocab_size: usize,
    pub warnings: Vec<String>,
}

/// Train a bundle from parsed projects plus stubs.
pub fn build_bundle<F: Real>(
    projects: &[Project],
    stubs: &[StubFile],
    opts: &TrainOptions<F>,
) -> Result<(Bundle<F>, TrainSummary), TrainError> {
    let units: Vec<Arc<_>> = projects
        .iter()
        .flat_map(|p| p.units.iter().cloned().map(Arc::new))
        .collect();
    let index = build_type_index(&units, stubs)?;
    let streams: Vec<Stream> = units.iter().map(|u| unit_stream(u)).collect();
    let tokens: usize = streams.iter().map(|s| s.tokens.len()).sum();
    let model = NGramModel::train(&streams, opts.lm.clone())?;
    let heavy = if opts.with_heavy {
        let hp = LmParams {
            order: opts.heavy_order,
            ..opts.lm.clone()
        };
        Some(NGramModel::train(&streams, hp)?)
    } else {
        None
    };

    let mut observations = Vec::new();
    let mut requests = 0usize;
    for unit in &units {
        for req in extract_requests(unit, &index) {
            requests += 1;
            if let Some(obs) = gold_variable_observation(&req, &index) {
                observations.push(obs);
            }
        }
    }
    if observations.is_empty() {
        return Err(TrainError::NoVariableArguments);
    }
    let tables = RecentnessTables::fit(&observations, opts.bucket_cap)
        .map_err(|_| TrainError::NoVariableArguments)?;

    let summary = TrainSummary {
        files: units.len(),
        tokens,
        requests,
        variable_observations: observations.len(),
        vocab_size: model.vocab().len(),
        warnings: index.warnings.clone(),
    };
    Ok((
        Bundle {
            model,
            heavy,
            tables,
            config: opts.config.clone(),
        },
        summary,
    ))
}

/// Creating-distance and accessing-recentness of a gold argument that is a
/// variable; `None` when the gold is not a variable reference.
pub fn gold_variable_observation(
    req: &ArRequest,
    index: &TypeIndex,
) -> Option<(u32, Option<u32>)> {
    let gold = req.gold.as_ref()?;
    if req.unresolved {
        return None;
    }
    let (prov, ident) = match &gold.expr {
        Expr::Name { name, .. } => {
            let acc = accessible_elements(req, index);
            if let Some(v) = acc.locals.iter().find(|v| v.name == *name) {
                debug_assert!(matches!(v.kind, VarKind::Local | VarKind::Param));
                (VarProvenance::Scoped(v.block), name.clone())
            } else if acc.fields.iter().any(|f| f.name == *name) {
                (VarProvenance::EnclosingField, name.clone())
            } else {
                return None;
            }
        }
        Expr::FieldAccess { recv, name, .. } if matches!(**recv, Expr::This { .. }) => {
            (VarProvenance::EnclosingField, name.clone())
        }
        Expr::Qualified { parts, .. } => {
            // a static field or an instance field of another object
            (VarProvenance::Global, parts.last().cloned()?)
        }
        _ => return None,
    };
    let d = creating_distance(prov, req)?;
    let u = accessing_recentness(&ident, req);
    Some((d, u))
}
