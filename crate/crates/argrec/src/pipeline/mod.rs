//! The three-stage recommendation pipeline: heuristic reduction, light
//! ranking to the top-RT survivors, selective heavy/light probability, and
//! the final combined score.

pub mod heavy;
pub mod reduce;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::candgen::{generate_candidates, Candidate, ExprType, GenConfig};
use crate::corpus::request::ArRequest;
use crate::features::{
    accessing_recentness, creating_distance, normalize_parasim, parasim, FeatureVector,
    RecentnessTables,
};
use crate::lm::{beam_search, text_subtokens, NGramModel, QueryScope};
use crate::scalar::Real;
use crate::typesys::{accessible_elements, expected_types, map_object_to_type_param, TypeIndex};

pub use heavy::{HeavyClient, HeavyError};
pub use reduce::apply_reduction_rules;

#[derive(Debug, Error)]
pub enum RecommendError {
    #[error("request is unresolvable: no overload of {callee} has an argument {pos}")]
    Unresolvable { callee: String, pos: u32 },
}

/// Pipeline configuration.
#[derive(Debug, Clone)]
pub struct PipelineConfig<F> {
    /// Survivors of light ranking; `None` keeps everything.
    pub reduction_threshold: Option<u32>,
    /// Expression types routed to the heavy scorer when one is attached.
    pub heavy_types: BTreeSet<ExprType>,
    /// Command line of the external heavy scorer.
    pub heavy_cmd: Option<Vec<String>>,
    pub rules_enabled: bool,
    pub static_features_enabled: bool,
    pub heavy_enabled: bool,
    /// Lower bound of the normalized parameter similarity.
    pub parasim_floor: F,
    pub object_mapping: bool,
    pub gen: GenConfig,
}

pub const DEFAULT_REDUCTION_THRESHOLD: u32 = 20;

/// Expression types where the heavy model outranks the light one; the
/// generator does not emit lambdas or method references, so those stay out.
pub fn default_heavy_types() -> BTreeSet<ExprType> {
    [
        ExprType::SimpleName,
        ExprType::ArrayAccess,
        ExprType::TypeLiteral,
        ExprType::ObjectCreation,
        ExprType::ArrayCreation,
    ]
    .into_iter()
    .collect()
}

impl<F: Real> Default for PipelineConfig<F> {
    fn default() -> Self {
        PipelineConfig {
            reduction_threshold: Some(DEFAULT_REDUCTION_THRESHOLD),
            heavy_types: default_heavy_types(),
            heavy_cmd: None,
            rules_enabled: true,
            static_features_enabled: true,
            heavy_enabled: false,
            parasim_floor: F::from_f64(0.1).unwrap(),
            object_mapping: false,
            gen: GenConfig::default(),
        }
    }
}

/// Per-candidate scoring diagnostics.
#[derive(Debug, Clone)]
pub struct Diagnostics<F> {
    pub prob: F,
    pub features: FeatureVector<F>,
    pub recent: Option<F>,
    pub rules_fired: Vec<&'static str>,
    pub scored_by_heavy: bool,
}

#[derive(Debug, Clone)]
pub struct RankedCandidate<F> {
    pub candidate: Candidate,
    pub score: F,
    pub diag: Diagnostics<F>,
}

/// Final ranked output: strictly ordered by (score desc, rendered asc).
#[derive(Debug, Clone, Default)]
pub struct RankedList<F> {
    pub items: Vec<RankedCandidate<F>>,
    pub warnings: Vec<String>,
}

impl<F: Real> RankedList<F> {
    pub fn rank_of(&self, matches: impl Fn(&Candidate) -> bool) -> Option<usize> {
        self.items
            .iter()
            .position(|i| matches(&i.candidate))
            .map(|p| p + 1)
    }
}

/// Combined score: `(P * parasim_norm * recent^v) ^ (1 / (1 + v))` with
/// v = 1 for variable candidates and v = 0 otherwise, which keeps variable
/// and non-variable scores comparable.
pub fn combined_score<F: Real>(prob: F, parasim_norm: F, recent: Option<F>) -> F {
    match recent {
        Some(r) => (prob * parasim_norm * r).sqrt(),
        None => prob * parasim_norm,
    }
}

/// Static features of a candidate at a request; parameter similarity takes
/// the max over the expected parameter names.
pub fn candidate_features<F: Real>(
    c: &Candidate,
    req: &ArRequest,
    param_names: &[String],
    floor: F,
) -> FeatureVector<F> {
    let raw = param_names
        .iter()
        .map(|p| parasim::<F>(&c.rendered, p))
        .fold(F::zero(), F::max);
    let mut fv = FeatureVector {
        parasim_raw: raw,
        parasim_norm: normalize_parasim(raw, floor),
        create_dis: None,
        access_rec: None,
        is_variable: c.is_variable,
    };
    if c.is_variable {
        if let Some(prov) = c.var_prov {
            fv.create_dis = creating_distance(prov, req);
        }
        if let Some(name) = &c.recent_ident {
            fv.access_rec = accessing_recentness(name, req);
        }
    }
    fv
}

/// Sub-token context fed to the language models: every token of the
/// containing class up to the request position.
pub fn context_subtokens(req: &ArRequest) -> Vec<String> {
    let class_start = req
        .unit
        .all_types()
        .iter()
        .find(|t| t.qualified == req.containing_type)
        .map(|t| t.span.start);
    unit_subtokens_from(req, class_start)
}

fn unit_subtokens_from(
    req: &ArRequest,
    start: Option<crate::corpus::token::Pos>,
) -> Vec<String> {
    let mut out = Vec::new();
    for t in &req.unit.tokens {
        if t.pos() >= req.location {
            break;
        }
        if let Some(s) = start {
            if t.pos() < s {
                continue;
            }
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

pub fn query_scope(req: &ArRequest) -> QueryScope {
    QueryScope {
        package: Some(req.unit.package.clone()),
        file: Some(req.unit.path.clone()),
    }
}

struct Scored<F> {
    candidate: Candidate,
    light_prob: F,
    features: FeatureVector<F>,
    recent: Option<F>,
    rules_fired: Vec<&'static str>,
    light_score: F,
}

/// Run the full pipeline for one request and return the top-k list.
pub fn recommend<F: Real>(
    req: &ArRequest,
    k: usize,
    cfg: &PipelineConfig<F>,
    index: &TypeIndex,
    model: &NGramModel<F>,
    tables: &RecentnessTables<F>,
    heavy: Option<&mut HeavyClient>,
) -> Result<RankedList<F>, RecommendError> {
    let mut expected = expected_types(req, index);
    if expected.entries.is_empty() {
        return Err(RecommendError::Unresolvable {
            callee: req.callee.name(),
            pos: req.pos,
        });
    }
    if cfg.object_mapping {
        expected = map_object_to_type_param(req, index, &expected);
    }
    let types: Vec<_> = expected.types().into_iter().cloned().collect();
    let param_names: Vec<String> = {
        let mut names: Vec<String> = expected
            .entries
            .iter()
            .filter_map(|e| e.param_name.clone())
            .collect();
        names.sort();
        names.dedup();
        names
    };

    let acc = accessible_elements(req, index);
    let cands = generate_candidates(req, &acc, &types, index, &cfg.gen);
    let reduced: Vec<(Candidate, reduce::RuleOutcome)> = if cfg.rules_enabled {
        apply_reduction_rules(cands, req, &types, index)
    } else {
        cands
            .into_iter()
            .map(|c| (c, reduce::RuleOutcome::default()))
            .collect()
    };

    // light ranking
    let scope = query_scope(req);
    let context = context_subtokens(req);
    let ctx_ids = model.encode(&context);
    let mut scored: Vec<Scored<F>> = reduced
        .into_iter()
        .map(|(c, outcome)| {
            let seq = model.encode(&text_subtokens(&c.rendered));
            let light_prob = model.sequence_prob(&scope, &ctx_ids, &seq);
            let features = candidate_features(&c, req, &param_names, cfg.parasim_floor);
            let recent = if c.is_variable && cfg.static_features_enabled {
                // never null for accessible variables
                debug_assert!(features.create_dis.is_some(), "{} lacks a creation site", c.rendered);
                let d = features.create_dis.unwrap_or(0);
                Some(tables.recent_score(d, features.access_rec))
            } else {
                None
            };
            let light_score = if cfg.static_features_enabled {
                combined_score(light_prob, features.parasim_norm, recent)
            } else {
                light_prob
            };
            Scored {
                candidate: c,
                light_prob,
                features,
                recent,
                rules_fired: outcome.fired,
                light_score,
            }
        })
        .collect();
    scored.sort_by(|a, b| {
        b.light_score
            .partial_cmp(&a.light_score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.candidate.rendered.cmp(&b.candidate.rendered))
    });
    if let Some(rt) = cfg.reduction_threshold {
        scored.truncate(rt as usize);
    }

    // selective heavy/light probability
    let mut warnings = Vec::new();
    let mut heavy_probs: Vec<Option<F>> = vec![None; scored.len()];
    if cfg.heavy_enabled {
        if let Some(client) = heavy {
            let batch: Vec<usize> = scored
                .iter()
                .enumerate()
                .filter(|(_, s)| cfg.heavy_types.contains(&s.candidate.expr_type))
                .map(|(i, _)| i)
                .collect();
            if !batch.is_empty() {
                let cand_tokens: Vec<Vec<String>> = batch
                    .iter()
                    .map(|i| text_subtokens(&scored[*i].candidate.rendered))
                    .collect();
                match client.score_batch(&context, &cand_tokens) {
                    Ok(scores) => {
                        for (slot, s) in batch.iter().zip(scores) {
                            heavy_probs[*slot] = F::from_f64(s);
                        }
                    }
                    Err(e) => {
                        warnings.push(format!("heavy scorer unavailable, using light: {e}"));
                    }
                }
            }
        }
    }

    // final combined score over the survivors
    let mut items: Vec<RankedCandidate<F>> = scored
        .into_iter()
        .zip(heavy_probs)
        .map(|(s, hp)| {
            let prob = hp.unwrap_or(s.light_prob);
            let score = if cfg.static_features_enabled {
                combined_score(prob, s.features.parasim_norm, s.recent)
            } else {
                prob
            };
            RankedCandidate {
                candidate: s.candidate,
                score,
                diag: Diagnostics {
                    prob,
                    features: s.features,
                    recent: s.recent,
                    rules_fired: s.rules_fired,
                    scored_by_heavy: hp.is_some(),
                },
            }
        })
        .collect();
    items.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.candidate.rendered.cmp(&b.candidate.rendered))
    });
    items.truncate(k);
    Ok(RankedList { items, warnings })
}

/// Ablation baseline: construct whole arguments with beam search over the
/// language model, no validity filtering. The output may name things that
/// do not exist in scope.
pub fn beam_baseline_recommend<F: Real>(
    req: &ArRequest,
    k: usize,
    model: &NGramModel<F>,
    width: usize,
    max_len: usize,
) -> RankedList<F> {
    let scope = query_scope(req);
    let context = context_subtokens(req);
    let ctx_ids = model.encode(&context);
    let results = beam_search(model, &scope, &ctx_ids, k.max(1), width.max(k.max(1)), max_len);
    let items = results
        .into_iter()
        .map(|r| {
            let rendered = crate::lm::beam::detokenize(model, &r.tokens);
            let expr_type = crate::corpus::parse_expression(&rendered)
                .map(|e| ExprType::of(&e))
                .unwrap_or(ExprType::CompoundExpr);
            RankedCandidate {
                candidate: Candidate {
                    expr_type,
                    rendered,
                    result_type: crate::typesys::ResolvedType::object(),
                    holes: 0,
                    is_variable: false,
                    recent_ident: None,
                    var_prov: None,
                    static_member_owner: None,
                    origin: "beam".to_string(),
                },
                score: r.prob,
                diag: Diagnostics {
                    prob: r.prob,
                    features: FeatureVector::non_variable(F::zero(), F::zero()),
                    recent: None,
                    rules_fired: Vec::new(),
                    scored_by_heavy: false,
                },
            }
        })
        .collect();
    RankedList {
        items,
        warnings: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn light_score_hand_examples() {
        // variable: (0.5 * 0.8 * 0.2) ^ (1/2)
        let v: f64 = combined_score(0.5, 0.8, Some(0.2));
        assert!((v - 0.08f64.sqrt()).abs() < 1e-12);
        assert!((v - 0.282842712474619).abs() < 1e-12);
        // non-variable: exponent 1
        let nv: f64 = combined_score(0.5, 0.8, None);
        assert!((nv - 0.4).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_is_one() {
        let v: f64 = combined_score(1.0, 1.0, None);
        assert_eq!(v, 1.0);
        let v2: f64 = combined_score(1.0, 1.0, Some(1.0));
        assert_eq!(v2, 1.0);
    }

    #[test]
    fn argmax_invariant_under_common_prob_scaling() {
        let probs = [0.3f64, 0.1, 0.25];
        let paras = [0.2f64, 0.9, 0.4];
        let base: Vec<f64> = probs
            .iter()
            .zip(paras)
            .map(|(p, s)| combined_score(*p, s, None))
            .collect();
        let scaled: Vec<f64> = probs
            .iter()
            .zip(paras)
            .map(|(p, s)| combined_score(*p * 0.37, s, None))
            .collect();
        let argmax = |v: &[f64]| {
            v.iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0
        };
        assert_eq!(argmax(&base), argmax(&scaled));
    }
}
