//! Static typing of receiver expressions in a request context.

use std::collections::BTreeMap;

use crate::corpus::ast::{Expr, Lit};
use crate::corpus::request::ArRequest;
use crate::corpus::scope::VarKind;

use super::entry::{BaseType, MemberKind, ResolvedType, CLASS, STRING};
use super::{Resolver, TypeIndex};

/// Request-scoped view over the index: variable lookup and expression typing
/// at the request location.
pub struct ReqScope<'a> {
    pub index: &'a TypeIndex,
    pub req: &'a ArRequest,
}

impl<'a> ReqScope<'a> {
    pub fn new(index: &'a TypeIndex, req: &'a ArRequest) -> Self {
        ReqScope { index, req }
    }

    pub fn resolver(&self) -> Resolver<'a> {
        let type_params = self
            .index
            .get(&self.req.containing_type)
            .map(|e| e.type_params.as_slice())
            .unwrap_or(&[]);
        Resolver {
            index: self.index,
            unit: Some(self.req.unit.as_ref()),
            type_params,
        }
    }

    /// A local or parameter visible at the request location; innermost block
    /// first, declared strictly before the request.
    pub fn lookup_local(&self, name: &str) -> Option<ResolvedType> {
        let scopes = &self.req.scopes;
        for block in scopes.chain_at(self.req.location) {
            let node = scopes.node(block);
            let mut best: Option<&crate::corpus::scope::ScopeVar> = None;
            for v in &node.vars {
                if v.name == name
                    && matches!(v.kind, VarKind::Local | VarKind::Param)
                    && v.pos < self.req.location
                {
                    match best {
                        Some(b) if b.pos >= v.pos => {}
                        _ => best = Some(v),
                    }
                }
            }
            if let Some(v) = best {
                return self.resolver().resolve(&v.ty).map(|t| t.vars_erased());
            }
        }
        None
    }

    /// A field of the enclosing class or its supertypes, access- and
    /// static-context-filtered.
    pub fn lookup_field(&self, name: &str) -> Option<ResolvedType> {
        let pkg = &self.req.unit.package;
        for m in self.index.members_of(&self.req.containing_type) {
            if m.kind != MemberKind::Field || m.name != name {
                continue;
            }
            if self.req.method_is_static && !m.is_static {
                continue;
            }
            let same_type = m.declared_in == self.req.containing_type;
            if !self
                .index
                .member_visible(m.access, &m.declared_in, pkg, true, same_type)
            {
                continue;
            }
            return m.result.clone().map(|t| t.vars_erased());
        }
        None
    }

    pub fn lookup_var(&self, name: &str) -> Option<ResolvedType> {
        self.lookup_local(name).or_else(|| self.lookup_field(name))
    }

    /// Try to read an expression as a static type reference (`Integer`,
    /// `java.util.Arrays`). Variables shadow type names.
    pub fn as_type_ref(&self, e: &Expr) -> Option<String> {
        match e {
            Expr::Name { name, .. } => {
                if self.lookup_var(name).is_some() {
                    return None;
                }
                self.resolver().resolve_simple(name)
            }
            Expr::Qualified { parts, .. } => {
                if self.lookup_var(&parts[0]).is_some() {
                    return None;
                }
                let joined = parts.join(".");
                if self.index.contains(&joined) {
                    return Some(joined);
                }
                // package-relative Outer.Inner
                let resolver = self.resolver();
                if let Some(first) = resolver.resolve_simple(&parts[0]) {
                    let rest = parts[1..].join(".");
                    let candidate = format!("{first}.{rest}");
                    if self.index.contains(&candidate) {
                        return Some(candidate);
                    }
                }
                None
            }
            _ => None,
        }
    }

    /// Best-effort static type of an expression; `None` when the subset
    /// cannot type it.
    pub fn infer(&self, e: &Expr) -> Option<ResolvedType> {
        match e {
            Expr::Name { name, .. } => self.lookup_var(name),
            Expr::Qualified { parts, .. } => self.type_of_chain(parts),
            Expr::FieldAccess { recv, name, .. } => {
                let rt = self.infer(recv)?;
                self.member_field_type(&rt, name)
            }
            Expr::Call { recv, name, args, .. } => {
                let (owner, env) = match recv {
                    Some(r) => {
                        if let Some(ty) = self.as_type_ref(r) {
                            (ty, BTreeMap::new())
                        } else {
                            let rt = self.infer(r)?;
                            let owner = rt.named_base()?.to_string();
                            (owner.clone(), self.subst_env(&rt))
                        }
                    }
                    None => (self.req.containing_type.clone(), BTreeMap::new()),
                };
                let members = self.index.members_of(&owner);
                let arity = args.len();
                let exact = members.iter().find(|m| {
                    m.kind == MemberKind::Method && m.name == *name && m.arity() == arity
                });
                let loose = members
                    .iter()
                    .find(|m| m.kind == MemberKind::Method && m.name == *name);
                let m = exact.or(loose)?;
                m.result.as_ref().map(|t| substitute(t, &env).vars_erased())
            }
            Expr::Lit { lit, .. } => Some(lit_type(lit)),
            Expr::TypeLit { .. } => Some(ResolvedType::named(CLASS)),
            Expr::This { .. } => Some(ResolvedType::named(&self.req.containing_type)),
            Expr::Super { .. } => {
                let entry = self.index.get(&self.req.containing_type)?;
                entry.supertypes.first().map(|s| ResolvedType::named(s))
            }
            Expr::Cast { ty, .. } => self.resolver().resolve(ty).map(|t| t.vars_erased()),
            Expr::New { ty, .. } => self.resolver().resolve(ty),
            Expr::NewArray { elem, dims, .. } => {
                let mut t = self.resolver().resolve(elem)?;
                t.dims += dims.len() as u8;
                Some(t)
            }
            Expr::Index { base, .. } => self.infer(base)?.element(),
            Expr::Compound { children, .. } => {
                // parenthesized expressions keep their inner type; other
                // compounds are untyped in the subset
                if children.len() == 1 {
                    self.infer(&children[0])
                } else {
                    None
                }
            }
            Expr::Hole { .. } | Expr::Lambda { .. } => None,
        }
    }

    /// Substitution environment from a receiver's recorded type arguments.
    pub fn subst_env(&self, recv: &ResolvedType) -> BTreeMap<String, ResolvedType> {
        let mut env = BTreeMap::new();
        if let Some(base) = recv.named_base() {
            if let Some(entry) = self.index.get(base) {
                for (p, a) in entry.type_params.iter().zip(recv.args.iter()) {
                    env.insert(p.clone(), a.clone());
                }
            }
        }
        env
    }

    fn member_field_type(&self, recv: &ResolvedType, name: &str) -> Option<ResolvedType> {
        if recv.dims > 0 {
            if name == "length" {
                return Some(ResolvedType::primitive("int"));
            }
            return None;
        }
        let owner = recv.named_base()?;
        let env = self.subst_env(recv);
        self.index
            .members_of(owner)
            .into_iter()
            .find(|m| m.kind == MemberKind::Field && m.name == name)
            .and_then(|m| m.result.as_ref().map(|t| substitute(t, &env).vars_erased()))
    }

    /// Type of a dotted name chain used as a value: variable-rooted or
    /// static-field-rooted.
    fn type_of_chain(&self, parts: &[String]) -> Option<ResolvedType> {
        // variable root
        if let Some(mut cur) = self.lookup_var(&parts[0]) {
            for name in &parts[1..] {
                cur = self.member_field_type(&cur, name)?;
            }
            return Some(cur);
        }
        // longest type prefix, then static field walk
        for k in (1..parts.len()).rev() {
            let prefix = parts[..k].join(".");
            let resolved = if self.index.contains(&prefix) {
                Some(prefix)
            } else if k == 1 {
                self.resolver().resolve_simple(&parts[0])
            } else {
                None
            };
            if let Some(tyname) = resolved {
                let mut cur = self
                    .index
                    .members_of(&tyname)
                    .into_iter()
                    .find(|m| m.kind == MemberKind::Field && m.is_static && m.name == parts[k])
                    .and_then(|m| m.result.clone())?
                    .vars_erased();
                for name in &parts[k + 1..] {
                    cur = self.member_field_type(&cur, name)?;
                }
                return Some(cur);
            }
        }
        None
    }
}

pub fn lit_type(lit: &Lit) -> ResolvedType {
    match lit {
        Lit::Str(_) => ResolvedType::named(STRING),
        Lit::Int(text) => {
            if text.ends_with('l') || text.ends_with('L') {
                ResolvedType::primitive("long")
            } else {
                ResolvedType::primitive("int")
            }
        }
        Lit::Float(text) => {
            if text.ends_with('f') || text.ends_with('F') {
                ResolvedType::primitive("float")
            } else {
                ResolvedType::primitive("double")
            }
        }
        Lit::Bool(_) => ResolvedType::primitive("boolean"),
        Lit::Char(_) => ResolvedType::primitive("char"),
        Lit::Null => ResolvedType::null(),
    }
}

/// Apply a type-parameter substitution environment.
pub fn substitute(
    t: &ResolvedType,
    env: &BTreeMap<String, ResolvedType>,
) -> ResolvedType {
    match &t.base {
        BaseType::TypeVar(v) => match env.get(v) {
            Some(bound) => {
                let mut out = bound.clone();
                out.dims += t.dims;
                out
            }
            None => t.clone(),
        },
        _ => {
            let mut out = t.clone();
            out.args = t.args.iter().map(|a| substitute(a, env)).collect();
            out
        }
    }
}
