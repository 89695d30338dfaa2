//! Accessible program elements at a request location.

use std::collections::BTreeSet;

use crate::corpus::ast::Access;
use crate::corpus::request::ArRequest;
use crate::corpus::scope::{BlockId, VarKind};
use crate::corpus::token::TokenKind;

use super::entry::{MemberKind, MemberSig, ResolvedType};
use super::infer::ReqScope;
use super::TypeIndex;

/// A local variable or parameter in scope.
#[derive(Debug, Clone)]
pub struct VarElement {
    pub name: String,
    pub ty: ResolvedType,
    pub kind: VarKind,
    /// Block that declares the variable.
    pub block: BlockId,
}

/// A field of the enclosing class or one of its supertypes.
#[derive(Debug, Clone)]
pub struct FieldElement {
    pub name: String,
    pub ty: ResolvedType,
    pub is_static: bool,
    pub owner: String,
    /// A local or parameter with the same name hides the bare form.
    pub shadowed: bool,
}

/// A method of the enclosing class callable without a receiver.
#[derive(Debug, Clone)]
pub struct MethodElement {
    pub sig: MemberSig,
}

/// A static member reachable through its owner type.
#[derive(Debug, Clone)]
pub struct StaticMember {
    pub owner: String,
    pub sig: MemberSig,
}

/// Everything reachable from the request location under the subset's access
/// rules.
#[derive(Debug, Clone, Default)]
pub struct AccessibleSet {
    pub locals: Vec<VarElement>,
    pub fields: Vec<FieldElement>,
    pub methods: Vec<MethodElement>,
    pub static_members: Vec<StaticMember>,
    /// Types usable for static access, object creation, and type literals.
    pub types: Vec<String>,
    /// `Some` iff `this` is available (instance context).
    pub this_type: Option<ResolvedType>,
    pub enclosing_type: String,
    pub package: String,
}

impl AccessibleSet {
    /// Variables usable as one-level member-access receivers.
    pub fn variables(&self) -> impl Iterator<Item = (&str, &ResolvedType)> {
        self.locals
            .iter()
            .map(|v| (v.name.as_str(), &v.ty))
            .chain(
                self.fields
                    .iter()
                    .filter(|f| !f.shadowed)
                    .map(|f| (f.name.as_str(), &f.ty)),
            )
    }
}

/// Collect the accessible set: locals declared before the request, fields
/// and methods of the enclosing chain, and static members of the imported /
/// same-package / `java.lang` / previously-referenced types.
pub fn accessible_elements(req: &ArRequest, index: &TypeIndex) -> AccessibleSet {
    let scope = ReqScope::new(index, req);
    let resolver = scope.resolver();
    let pkg = req.unit.package.clone();
    let mut set = AccessibleSet {
        enclosing_type: req.containing_type.clone(),
        package: pkg.clone(),
        ..Default::default()
    };

    // locals and parameters, innermost block first, shadowing by name
    let mut seen_names = BTreeSet::new();
    for block in req.scopes.chain_at(req.location) {
        let node = req.scopes.node(block);
        let mut block_vars: Vec<_> = node
            .vars
            .iter()
            .filter(|v| {
                matches!(v.kind, VarKind::Local | VarKind::Param) && v.pos < req.location
            })
            .collect();
        // later declarations shadow earlier ones within a block
        block_vars.sort_by_key(|v| std::cmp::Reverse(v.pos));
        for v in block_vars {
            if seen_names.insert(v.name.clone()) {
                if let Some(ty) = resolver.resolve(&v.ty) {
                    set.locals.push(VarElement {
                        name: v.name.clone(),
                        ty: ty.vars_erased(),
                        kind: v.kind,
                        block,
                    });
                }
            }
        }
    }
    set.locals.sort_by(|a, b| a.name.cmp(&b.name));

    // fields and unqualified-callable methods of the enclosing chain
    for m in index.members_of(&req.containing_type) {
        if req.method_is_static && !m.is_static {
            continue;
        }
        let same_type = m.declared_in == req.containing_type;
        if !index.member_visible(m.access, &m.declared_in, &pkg, true, same_type) {
            continue;
        }
        match m.kind {
            MemberKind::Field => {
                if let Some(ty) = &m.result {
                    set.fields.push(FieldElement {
                        name: m.name.clone(),
                        ty: ty.vars_erased(),
                        is_static: m.is_static,
                        owner: m.declared_in.clone(),
                        shadowed: seen_names.contains(&m.name),
                    });
                }
            }
            MemberKind::Method => set.methods.push(MethodElement { sig: m.clone() }),
            MemberKind::Constructor => {}
        }
    }
    set.fields.sort_by(|a, b| a.name.cmp(&b.name));
    set.methods.sort_by(|a, b| a.sig.name.cmp(&b.sig.name));

    // static universe: imports, same package, java.lang, and types whose
    // name was already referenced earlier in this unit
    let mut universe = BTreeSet::new();
    for t in index.all() {
        if t.package == "java.lang" || (t.package == pkg && t.access != Access::Private) {
            universe.insert(t.qualified.clone());
        }
    }
    for imp in &req.unit.imports {
        if imp.is_static {
            continue;
        }
        if imp.wildcard {
            for t in index.all() {
                if t.package == imp.path {
                    universe.insert(t.qualified.clone());
                }
            }
        } else if index.contains(&imp.path) {
            universe.insert(imp.path.clone());
        }
    }
    for tok in &req.unit.tokens {
        if tok.kind != TokenKind::Ident || tok.pos() >= req.location {
            continue;
        }
        if let Some(q) = resolver.resolve_simple(&tok.text) {
            universe.insert(q);
        }
    }
    set.types = universe.into_iter().collect();

    // static members of the universe, excluding the enclosing chain whose
    // members are already present in bare form
    let enclosing_chain: BTreeSet<String> = index
        .supertype_closure(&req.containing_type)
        .into_iter()
        .collect();
    for ty in &set.types {
        if enclosing_chain.contains(ty) {
            continue;
        }
        for m in index.members_of(ty) {
            if !m.is_static || m.kind == MemberKind::Constructor {
                continue;
            }
            if !index.member_visible(m.access, &m.declared_in, &pkg, false, false) {
                continue;
            }
            set.static_members.push(StaticMember {
                owner: ty.clone(),
                sig: m.clone(),
            });
        }
    }

    if !req.method_is_static {
        set.this_type = Some(ResolvedType::named(&req.containing_type));
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{extract_requests, parse_unit};
    use crate::typesys::{build_type_index, builtin_stubs};
    use std::sync::Arc;

    fn set_for(src: &str, callee: &str) -> AccessibleSet {
        let unit = Arc::new(parse_unit("A.java", src).unwrap());
        let index = build_type_index(&[Arc::clone(&unit)], &builtin_stubs()).unwrap();
        let reqs = extract_requests(&unit, &index);
        let req = reqs.iter().find(|r| r.callee.name() == callee).unwrap();
        accessible_elements(req, &index)
    }

    #[test]
    fn params_and_prior_locals_are_in_scope() {
        let src = r#"
            class Provider {}
            class A {
                void ignore(Object user, Object provider) {}
                void m(Object user) {
                    Provider provider = new Provider();
                    ignore(user, provider);
                }
            }
        "#;
        let set = set_for(src, "ignore");
        let names: Vec<_> = set.locals.iter().map(|v| v.name.as_str()).collect();
        assert!(names.contains(&"user"));
        assert!(names.contains(&"provider"));
    }

    #[test]
    fn local_declared_after_request_is_excluded() {
        let src = r#"
            class A {
                void f(int q) {}
                void m() {
                    int before = 1;
                    f(before);
                    int after = 2;
                }
            }
        "#;
        let set = set_for(src, "f");
        let names: Vec<_> = set.locals.iter().map(|v| v.name.as_str()).collect();
        assert!(names.contains(&"before"));
        assert!(!names.contains(&"after"));
    }

    #[test]
    fn private_field_of_unrelated_class_is_excluded() {
        let src = r#"
            class Other { private int secret; static int open; }
            class A {
                void f(int q) {}
                void m(Other o) { f(1); }
            }
        "#;
        let set = set_for(src, "f");
        assert!(!set
            .static_members
            .iter()
            .any(|s| s.sig.name == "secret"));
        // package-visible static member of a same-package class is reachable
        assert!(set
            .static_members
            .iter()
            .any(|s| s.sig.name == "open" && s.owner == "Other"));
    }

    #[test]
    fn static_context_drops_instance_members() {
        let src = r#"
            class A {
                int instanceField;
                static int staticField;
                static void f(int q) {}
                static void m() { f(1); }
            }
        "#;
        let set = set_for(src, "f");
        assert!(set.fields.iter().all(|f| f.is_static));
        assert!(set.this_type.is_none());
    }

    #[test]
    fn monotone_in_context_prefix() {
        // extending the context with more declarations never removes elements
        let shorter = r#"
            class A {
                void f(int q) {}
                void m() {
                    int a = 1;
                    f(a);
                }
            }
        "#;
        let longer = r#"
            class A {
                void f(int q) {}
                void m() {
                    int a = 1;
                    int b = 2;
                    f(a);
                }
            }
        "#;
        let s1 = set_for(shorter, "f");
        let s2 = set_for(longer, "f");
        let names1: BTreeSet<_> = s1.locals.iter().map(|v| v.name.clone()).collect();
        let names2: BTreeSet<_> = s2.locals.iter().map(|v| v.name.clone()).collect();
        assert!(names1.is_subset(&names2));
    }
}
