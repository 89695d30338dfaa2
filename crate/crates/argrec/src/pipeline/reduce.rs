//! Heuristic candidate reduction.
//!
//! Candidates built from static members whose expected types are all common
//! (Object, String, numeric) must satisfy at least one keep rule; every
//! other candidate passes untouched.

use std::collections::BTreeSet;

use crate::candgen::Candidate;
use crate::corpus::request::{ArRequest, Callee};
use crate::corpus::subtok::split_subtokens;
use crate::corpus::token::TokenKind;
use crate::typesys::infer::ReqScope;
use crate::typesys::{is_compatible, BaseType, ResolvedType, TypeIndex};

/// Names of the reduction rules, in diagnostic output order.
pub const RULE_SHARED_SUBTOKEN: &str = "shared-subtoken";
pub const RULE_RECENT_CLASS: &str = "recently-used-class";
pub const RULE_BOUNDARY: &str = "boundary-constant";
pub const RULE_ENCLOSING_MEMBER: &str = "enclosing-member";
pub const RULE_SAME_PACKAGE: &str = "same-package";

/// Common expected types that trigger reduction of static-derived
/// candidates.
fn is_common_type(t: &ResolvedType) -> bool {
    if t.dims != 0 {
        return false;
    }
    match &t.base {
        BaseType::Primitive(p) => p != "boolean" && p != "char",
        BaseType::Named(n) => matches!(
            n.as_str(),
            "java.lang.Object"
                | "java.lang.String"
                | "java.lang.Number"
                | "java.lang.Integer"
                | "java.lang.Long"
                | "java.lang.Short"
                | "java.lang.Byte"
                | "java.lang.Float"
                | "java.lang.Double"
        ),
        _ => false,
    }
}

/// Result of the rule pass for one candidate.
#[derive(Debug, Clone, Default)]
pub struct RuleOutcome {
    pub kept: bool,
    pub fired: Vec<&'static str>,
    /// Whether the rule set applied at all to this candidate.
    pub gated: bool,
}

pub struct ReductionContext {
    name_pool: BTreeSet<String>,
    accessed_owners: BTreeSet<String>,
    enclosing_chain: BTreeSet<String>,
    package: String,
}

impl ReductionContext {
    /// Collect once per request: the sub-token pool of callee / receiver /
    /// receiver type / containing method names, the owners whose members
    /// were accessed earlier in the unit, and the enclosing supertype chain.
    pub fn build(req: &ArRequest, index: &TypeIndex) -> Self {
        let scope = ReqScope::new(index, req);
        let mut name_pool = BTreeSet::new();
        let mut add = |s: &str| {
            for t in split_subtokens(s) {
                name_pool.insert(t);
            }
        };
        add(&req.callee.name());
        add(&req.containing_method);
        if let Callee::Method { recv: Some(r), .. } = &req.callee {
            let rendered = crate::candgen::render_expr(r);
            add(&rendered);
            if let Some(rt) = scope.infer(r) {
                add(&rt.simple_name());
            }
        }

        // owners whose members were accessed earlier in the unit: lexical
        // pattern `name . name` before the request position
        let mut accessed_owners = BTreeSet::new();
        let toks = &req.unit.tokens;
        for i in 0..toks.len().saturating_sub(2) {
            if toks[i + 2].pos() >= req.location {
                break;
            }
            if toks[i].kind == TokenKind::Ident
                && toks[i + 1].text == "."
                && toks[i + 2].kind == TokenKind::Ident
            {
                let head = &toks[i].text;
                if let Some(owner) = scope.resolver().resolve_simple(head) {
                    accessed_owners.insert(owner);
                }
                if let Some(vt) = scope.lookup_var(head) {
                    if let Some(base) = vt.named_base() {
                        accessed_owners.insert(base.to_string());
                    }
                }
            }
        }

        let enclosing_chain = index
            .supertype_closure(&req.containing_type)
            .into_iter()
            .collect();
        ReductionContext {
            name_pool,
            accessed_owners,
            enclosing_chain,
            package: req.unit.package.clone(),
        }
    }

    fn judge(&self, c: &Candidate, index: &TypeIndex) -> RuleOutcome {
        let Some(owner) = &c.static_member_owner else {
            return RuleOutcome {
                kept: true,
                fired: Vec::new(),
                gated: false,
            };
        };
        let mut fired = Vec::new();
        if let Some(name) = &c.recent_ident {
            if split_subtokens(name)
                .iter()
                .any(|t| self.name_pool.contains(t))
            {
                fired.push(RULE_SHARED_SUBTOKEN);
            }
            let lowered: Vec<String> = split_subtokens(name);
            if lowered.iter().any(|t| t == "max" || t == "min") {
                fired.push(RULE_BOUNDARY);
            }
        } else {
            // static method candidates share by their method name
            let name = c
                .rendered
                .split('.')
                .nth(1)
                .unwrap_or(&c.rendered)
                .trim_end_matches(|ch: char| !ch.is_alphanumeric());
            if split_subtokens(name)
                .iter()
                .any(|t| self.name_pool.contains(t))
            {
                fired.push(RULE_SHARED_SUBTOKEN);
            }
            if split_subtokens(name).iter().any(|t| t == "max" || t == "min") {
                fired.push(RULE_BOUNDARY);
            }
        }
        if self.accessed_owners.contains(owner) {
            fired.push(RULE_RECENT_CLASS);
        }
        if self.enclosing_chain.contains(owner) {
            fired.push(RULE_ENCLOSING_MEMBER);
        }
        if index
            .get(owner)
            .is_some_and(|e| e.package == self.package)
        {
            fired.push(RULE_SAME_PACKAGE);
        }
        RuleOutcome {
            kept: !fired.is_empty(),
            fired,
            gated: true,
        }
    }
}

/// Apply the reduction rules. Returns the kept candidates with the rules
/// that fired for each (empty for ungated candidates).
pub fn apply_reduction_rules(
    cands: Vec<Candidate>,
    req: &ArRequest,
    expected: &[ResolvedType],
    index: &TypeIndex,
) -> Vec<(Candidate, RuleOutcome)> {
    let ctx = ReductionContext::build(req, index);
    cands
        .into_iter()
        .filter_map(|c| {
            // gate only when every expected type the candidate satisfies is
            // a common type; a candidate matching a specific type is already
            // constrained enough
            let matched: Vec<&ResolvedType> = expected
                .iter()
                .filter(|e| is_compatible(index, &c.result_type, e))
                .collect();
            let gate = c.is_static_derived()
                && !matched.is_empty()
                && matched.iter().all(|t| is_common_type(t));
            if !gate {
                return Some((
                    c,
                    RuleOutcome {
                        kept: true,
                        fired: Vec::new(),
                        gated: false,
                    },
                ));
            }
            let outcome = ctx.judge(&c, index);
            outcome.kept.then_some((c, outcome))
        })
        .collect()
}
