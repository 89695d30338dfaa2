//! Candidate enumeration over the supported expression grammar.
//!
//! Construction starts from the accessible elements and adds exactly one
//! level of member access or method invocation on an accessible receiver
//! (configurable), plus the unary forms: casts, type literals, `this`,
//! literal defaults, object/array creation, and array access. Every
//! candidate's result type must fit at least one expected type.

use std::collections::BTreeMap;

use crate::corpus::request::ArRequest;
use crate::corpus::scope::VarKind;
use crate::features::VarProvenance;
use crate::typesys::compat::is_compatible_strict;
use crate::typesys::{
    AccessibleSet, BaseType, EntryKind, MemberKind, ResolvedType, TypeIndex, CLASS, STRING,
};

use super::render::*;
use super::{Candidate, ExprType};

/// Generation knobs. Depth 1 is the default setting; depth 2 chains
/// hole-free accesses one more level for experiments.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub member_depth: u32,
    pub strict_compat: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            member_depth: 1,
            strict_compat: false,
        }
    }
}

struct Gen<'a> {
    index: &'a TypeIndex,
    req: &'a ArRequest,
    acc: &'a AccessibleSet,
    expected: Vec<ResolvedType>,
    cfg: &'a GenConfig,
    out: BTreeMap<(ExprType, String), Candidate>,
}

/// Enumerate the valid candidate set for a request. Deterministic: results
/// sort by (expression type, rendered text). An empty expected set yields
/// an empty result.
pub fn generate_candidates(
    req: &ArRequest,
    acc: &AccessibleSet,
    expected: &[ResolvedType],
    index: &TypeIndex,
    cfg: &GenConfig,
) -> Vec<Candidate> {
    let mut gen = Gen {
        index,
        req,
        acc,
        expected: expected.to_vec(),
        cfg,
        out: BTreeMap::new(),
    };
    if gen.expected.is_empty() {
        return Vec::new();
    }
    gen.simple_names();
    gen.member_accesses();
    gen.static_members();
    gen.unqualified_calls();
    gen.literals();
    gen.type_literals();
    gen.this_expr();
    gen.casts();
    gen.object_creations();
    gen.array_creations();
    gen.array_accesses();
    gen.out.into_values().collect()
}

impl<'a> Gen<'a> {
    fn fits(&self, t: &ResolvedType) -> bool {
        self.expected
            .iter()
            .any(|e| is_compatible_strict(self.index, t, e, self.cfg.strict_compat))
    }

    fn push(&mut self, c: Candidate) {
        if !self.fits(&c.result_type) {
            return;
        }
        self.out.entry((c.expr_type, c.rendered.clone())).or_insert(c);
    }

    fn visible(&self, m: &crate::typesys::MemberSig) -> bool {
        let same = m.declared_in == self.req.containing_type;
        self.index
            .member_visible(m.access, &m.declared_in, &self.acc.package, false, same)
    }

    // ---- base variables --------------------------------------------------

    fn simple_names(&mut self) {
        let locals: Vec<_> = self.acc.locals.to_vec();
        for v in locals {
            self.push(Candidate {
                expr_type: ExprType::SimpleName,
                rendered: v.name.clone(),
                result_type: v.ty.clone(),
                holes: 0,
                is_variable: true,
                recent_ident: Some(v.name.clone()),
                var_prov: Some(VarProvenance::Scoped(v.block)),
                static_member_owner: None,
                origin: format!(
                    "{} {}",
                    match v.kind {
                        VarKind::Param => "param",
                        _ => "local",
                    },
                    v.name
                ),
            });
        }
        let fields: Vec<_> = self.acc.fields.to_vec();
        for f in &fields {
            if f.shadowed {
                // the bare name is taken; the field is reachable as `this.f`
                if self.acc.this_type.is_some() && !f.is_static {
                    self.push(Candidate {
                        expr_type: ExprType::FieldAccess,
                        rendered: format!("this.{}", f.name),
                        result_type: f.ty.clone(),
                        holes: 0,
                        is_variable: true,
                        recent_ident: Some(f.name.clone()),
                        var_prov: Some(VarProvenance::EnclosingField),
                        static_member_owner: None,
                        origin: format!("field {}.{}", f.owner, f.name),
                    });
                }
                continue;
            }
            self.push(Candidate {
                expr_type: ExprType::SimpleName,
                rendered: f.name.clone(),
                result_type: f.ty.clone(),
                holes: 0,
                is_variable: true,
                recent_ident: Some(f.name.clone()),
                var_prov: Some(VarProvenance::EnclosingField),
                static_member_owner: None,
                origin: format!("field {}.{}", f.owner, f.name),
            });
        }
    }

    // ---- one-level member access on accessible variables ------------------

    fn member_accesses(&mut self) {
        if self.cfg.member_depth == 0 {
            return;
        }
        // receivers at depth d; hole-free renders only, so deeper levels can
        // legally chain
        let mut receivers: Vec<(String, ResolvedType, String)> = self
            .acc
            .variables()
            .map(|(name, ty)| (name.to_string(), ty.clone(), name.to_string()))
            .collect();
        for _depth in 0..self.cfg.member_depth {
            let mut next: Vec<(String, ResolvedType, String)> = Vec::new();
            for (render, rty, base) in &receivers {
                if rty.dims > 0 {
                    let rendered = format!("{render}.length");
                    let result = ResolvedType::primitive("int");
                    next.push((rendered.clone(), result.clone(), base.clone()));
                    self.push(Candidate {
                        expr_type: ExprType::QualifiedName,
                        rendered,
                        result_type: result,
                        holes: 0,
                        is_variable: true,
                        recent_ident: Some("length".to_string()),
                        var_prov: Some(VarProvenance::Global),
                        static_member_owner: None,
                        origin: format!("array length of {base}"),
                    });
                    continue;
                }
                let Some(owner) = rty.named_base().map(|s| s.to_string()) else {
                    continue;
                };
                let env = {
                    let mut env = BTreeMap::new();
                    if let Some(entry) = self.index.get(&owner) {
                        for (p, a) in entry.type_params.iter().zip(rty.args.iter()) {
                            env.insert(p.clone(), a.clone());
                        }
                    }
                    env
                };
                let members: Vec<_> = self
                    .index
                    .members_of(&owner)
                    .into_iter()
                    .cloned()
                    .collect();
                for m in members {
                    if m.is_static || !self.visible(&m) {
                        continue;
                    }
                    let Some(result) = m
                        .result
                        .as_ref()
                        .map(|t| crate::typesys::infer::substitute(t, &env).vars_erased())
                    else {
                        continue;
                    };
                    match m.kind {
                        MemberKind::Field => {
                            let rendered = format!("{render}.{}", m.name);
                            // hole-free: usable as a deeper receiver
                            next.push((rendered.clone(), result.clone(), base.clone()));
                            self.push(Candidate {
                                expr_type: ExprType::QualifiedName,
                                rendered,
                                result_type: result,
                                holes: 0,
                                is_variable: true,
                                recent_ident: Some(m.name.clone()),
                                var_prov: Some(VarProvenance::Global),
                                static_member_owner: None,
                                origin: format!("field {}.{}", owner, m.name),
                            });
                        }
                        MemberKind::Method => {
                            let holes = m.arity();
                            let rendered = render_call(Some(render), &m.name, holes);
                            if holes == 0 {
                                next.push((rendered.clone(), result.clone(), base.clone()));
                            }
                            self.push(Candidate {
                                expr_type: ExprType::MethodInvocation,
                                rendered,
                                result_type: result,
                                holes,
                                is_variable: false,
                                recent_ident: None,
                                var_prov: None,
                                static_member_owner: None,
                                origin: format!("method {}.{}", owner, m.name),
                            });
                        }
                        MemberKind::Constructor => {}
                    }
                }
            }
            receivers = next;
        }
    }

    // ---- static members of the universe ------------------------------------

    fn static_members(&mut self) {
        let members: Vec<_> = self.acc.static_members.to_vec();
        for sm in members {
            let owner_simple = crate::typesys::simple_of(&sm.owner);
            let Some(result) = sm.sig.result.as_ref().map(|t| t.vars_erased()) else {
                continue;
            };
            match sm.sig.kind {
                MemberKind::Field => self.push(Candidate {
                    expr_type: ExprType::QualifiedName,
                    rendered: format!("{owner_simple}.{}", sm.sig.name),
                    result_type: result,
                    holes: 0,
                    is_variable: true,
                    recent_ident: Some(sm.sig.name.clone()),
                    var_prov: Some(VarProvenance::Global),
                    static_member_owner: Some(sm.owner.clone()),
                    origin: format!("static field {}.{}", sm.owner, sm.sig.name),
                }),
                MemberKind::Method => {
                    let holes = sm.sig.arity();
                    self.push(Candidate {
                        expr_type: ExprType::MethodInvocation,
                        rendered: render_call(Some(&owner_simple), &sm.sig.name, holes),
                        result_type: result,
                        holes,
                        is_variable: false,
                        recent_ident: None,
                        var_prov: None,
                        static_member_owner: Some(sm.owner.clone()),
                        origin: format!("static method {}.{}", sm.owner, sm.sig.name),
                    });
                }
                MemberKind::Constructor => {}
            }
        }
    }

    // ---- unqualified calls on the enclosing class ---------------------------

    fn unqualified_calls(&mut self) {
        let methods: Vec<_> = self.acc.methods.to_vec();
        for m in methods {
            let Some(result) = m.sig.result.as_ref().map(|t| t.vars_erased()) else {
                continue;
            };
            let holes = m.sig.arity();
            self.push(Candidate {
                expr_type: ExprType::MethodInvocation,
                rendered: render_call(None, &m.sig.name, holes),
                result_type: result,
                holes,
                is_variable: false,
                recent_ident: None,
                var_prov: None,
                static_member_owner: None,
                origin: format!("method {}.{}", m.sig.declared_in, m.sig.name),
            });
        }
    }

    // ---- literal defaults ----------------------------------------------------

    fn literal(&mut self, expr_type: ExprType, rendered: &str, result: ResolvedType) {
        self.push(Candidate {
            expr_type,
            rendered: rendered.to_string(),
            result_type: result,
            holes: 0,
            is_variable: false,
            recent_ident: None,
            var_prov: None,
            static_member_owner: None,
            origin: "literal".to_string(),
        });
    }

    fn literals(&mut self) {
        self.literal(
            ExprType::StringLiteral,
            EMPTY_STRING_LITERAL,
            ResolvedType::named(STRING),
        );
        // number defaults per expected primitive family
        for e in self.expected.clone() {
            let name = match (&e.base, e.dims) {
                (BaseType::Named(n), 0) => crate::typesys::simple_of(n),
                (BaseType::Primitive(p), 0) => p.clone(),
                _ => continue,
            };
            match name.as_str() {
                "int" | "short" | "byte" | "Integer" | "Short" | "Byte" | "Object" | "Number" => {
                    self.literal(ExprType::NumberLiteral, "0", ResolvedType::primitive("int"))
                }
                "long" | "Long" => self.literal(
                    ExprType::NumberLiteral,
                    "0L",
                    ResolvedType::primitive("long"),
                ),
                "double" | "Double" => self.literal(
                    ExprType::NumberLiteral,
                    "0.0",
                    ResolvedType::primitive("double"),
                ),
                "float" | "Float" => self.literal(
                    ExprType::NumberLiteral,
                    "0.0f",
                    ResolvedType::primitive("float"),
                ),
                _ => {}
            }
        }
        self.literal(
            ExprType::BooleanLiteral,
            "true",
            ResolvedType::primitive("boolean"),
        );
        self.literal(
            ExprType::BooleanLiteral,
            "false",
            ResolvedType::primitive("boolean"),
        );
        self.literal(
            ExprType::CharacterLiteral,
            NULL_CHAR_LITERAL,
            ResolvedType::primitive("char"),
        );
        self.literal(ExprType::NullLiteral, "null", ResolvedType::null());
    }

    // ---- type literals ---------------------------------------------------------

    fn type_literals(&mut self) {
        if !self.fits(&ResolvedType::named(CLASS)) {
            return;
        }
        let types = self.acc.types.clone();
        for ty in types {
            let simple = crate::typesys::simple_of(&ty);
            self.push(Candidate {
                expr_type: ExprType::TypeLiteral,
                rendered: format!("{simple}.class"),
                result_type: ResolvedType::named(CLASS),
                holes: 0,
                is_variable: false,
                recent_ident: None,
                var_prov: None,
                static_member_owner: None,
                origin: format!("type {ty}"),
            });
        }
    }

    fn this_expr(&mut self) {
        if let Some(t) = self.acc.this_type.clone() {
            self.push(Candidate {
                expr_type: ExprType::ThisExpr,
                rendered: "this".to_string(),
                result_type: t,
                holes: 0,
                is_variable: false,
                recent_ident: None,
                var_prov: None,
                static_member_owner: None,
                origin: "this".to_string(),
            });
        }
    }

    // ---- down-casts of accessible variables ---------------------------------

    fn casts(&mut self) {
        let vars: Vec<(String, ResolvedType)> = self
            .acc
            .variables()
            .map(|(n, t)| (n.to_string(), t.clone()))
            .collect();
        for e in self.expected.clone() {
            if e.dims != 0 {
                continue;
            }
            let Some(target) = e.named_base().map(|s| s.to_string()) else {
                continue;
            };
            for (name, vty) in &vars {
                if vty.dims != 0 {
                    continue;
                }
                let Some(vbase) = vty.named_base() else {
                    continue;
                };
                if vbase == target {
                    continue;
                }
                // down-cast: the variable's type must be a strict supertype
                if crate::typesys::compat::named_inherits(self.index, &target, vbase) {
                    let simple = crate::typesys::simple_of(&target);
                    self.push(Candidate {
                        expr_type: ExprType::CastExpr,
                        rendered: render_cast(&simple, name),
                        result_type: e.clone(),
                        holes: 0,
                        is_variable: false,
                        recent_ident: None,
                        var_prov: None,
                        static_member_owner: None,
                        origin: format!("cast of {name}"),
                    });
                }
            }
        }
    }

    // ---- creations and accesses ------------------------------------------------

    fn object_creations(&mut self) {
        let types = self.acc.types.clone();
        for ty in types {
            let Some(entry) = self.index.get(&ty) else {
                continue;
            };
            if entry.kind != EntryKind::Class || entry.is_abstract {
                continue;
            }
            if !self.fits(&ResolvedType::named(&ty)) {
                continue;
            }
            let simple = entry.simple.clone();
            let ctors: Vec<usize> = self
                .index
                .members_of(&ty)
                .into_iter()
                .filter(|m| m.kind == MemberKind::Constructor && self.visible(m))
                .map(|m| m.arity())
                .collect();
            for holes in ctors {
                self.push(Candidate {
                    expr_type: ExprType::ObjectCreation,
                    rendered: render_new(&simple, holes),
                    result_type: ResolvedType::named(&ty),
                    holes,
                    is_variable: false,
                    recent_ident: None,
                    var_prov: None,
                    static_member_owner: None,
                    origin: format!("constructor {ty}"),
                });
            }
        }
    }

    fn array_creations(&mut self) {
        for e in self.expected.clone() {
            if e.dims != 1 {
                continue;
            }
            let elem = e.element().unwrap();
            let simple = elem.simple_name();
            self.push(Candidate {
                expr_type: ExprType::ArrayCreation,
                rendered: render_new_array(&simple),
                result_type: e.clone(),
                holes: 1,
                is_variable: false,
                recent_ident: None,
                var_prov: None,
                static_member_owner: None,
                origin: format!("array of {simple}"),
            });
        }
    }

    fn array_accesses(&mut self) {
        let vars: Vec<(String, ResolvedType)> = self
            .acc
            .variables()
            .map(|(n, t)| (n.to_string(), t.clone()))
            .collect();
        for (name, vty) in vars {
            if vty.dims == 0 {
                continue;
            }
            let elem = vty.element().unwrap();
            self.push(Candidate {
                expr_type: ExprType::ArrayAccess,
                rendered: render_index(&name),
                result_type: elem,
                holes: 1,
                is_variable: false,
                recent_ident: None,
                var_prov: None,
                static_member_owner: None,
                origin: format!("array access {name}"),
            });
        }
    }
}
