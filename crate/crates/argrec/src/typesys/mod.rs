//! The type universe: project declarations plus library stubs, with
//! accessibility and type-compatibility queries.

pub mod access;
pub mod compat;
pub mod entry;
pub mod expected;
pub mod infer;
pub mod stubs;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::corpus::ast::{Access, CompilationUnit, TypeDecl, TypeKind, TypeName};

pub use access::{accessible_elements, AccessibleSet, FieldElement, MethodElement, VarElement};
pub use compat::is_compatible;
pub use entry::{
    BaseType, EntryKind, MemberKind, MemberSig, ResolvedType, TypeEntry, TypeSource, CLASS,
    OBJECT, STRING,
};
pub use expected::{expected_types, map_object_to_type_param, ExpectedTypes};
pub use stubs::{parse_stub_file, StubFile};

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("duplicate type {name}: declared in {first} and {second}")]
    DuplicateType {
        name: String,
        first: String,
        second: String,
    },
    #[error("invalid stub: {0}")]
    InvalidStub(String),
}

/// Immutable universe of known types. Built once, then shared read-only.
#[derive(Debug, Clone, Default)]
pub struct TypeIndex {
    types: BTreeMap<String, TypeEntry>,
    by_simple: BTreeMap<String, Vec<String>>,
    pub warnings: Vec<String>,
}

impl TypeIndex {
    pub fn get(&self, qualified: &str) -> Option<&TypeEntry> {
        self.types.get(qualified)
    }

    pub fn contains(&self, qualified: &str) -> bool {
        self.types.contains_key(qualified)
    }

    pub fn all(&self) -> impl Iterator<Item = &TypeEntry> {
        self.types.values()
    }

    /// Qualified names whose simple name matches, sorted.
    pub fn by_simple_name(&self, simple: &str) -> &[String] {
        self.by_simple
            .get(simple)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn types_in_package(&self, package: &str) -> Vec<&TypeEntry> {
        self.types
            .values()
            .filter(|t| t.package == package)
            .collect()
    }

    /// Supertype closure including the type itself. Unknown names fall back
    /// to `java.lang.Object`.
    pub fn supertype_closure(&self, qualified: &str) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        let mut queue = vec![qualified.to_string()];
        while let Some(name) = queue.pop() {
            if !seen.insert(name.clone()) {
                continue;
            }
            order.push(name.clone());
            match self.types.get(&name) {
                Some(e) => queue.extend(e.supertypes.iter().cloned()),
                None => {
                    if name != OBJECT && !seen.contains(OBJECT) {
                        queue.push(OBJECT.to_string());
                    }
                }
            }
        }
        order
    }

    /// All members visible on a type, inherited ones included. Fields are
    /// shadowed by name (most-derived wins); methods dedupe on signature.
    pub fn members_of(&self, qualified: &str) -> Vec<&MemberSig> {
        let mut out: Vec<&MemberSig> = Vec::new();
        let mut field_names = BTreeSet::new();
        let mut method_sigs = BTreeSet::new();
        for ty in self.supertype_closure(qualified) {
            let Some(entry) = self.types.get(&ty) else {
                continue;
            };
            for m in &entry.members {
                match m.kind {
                    MemberKind::Field => {
                        if field_names.insert(m.name.clone()) {
                            out.push(m);
                        }
                    }
                    MemberKind::Method => {
                        let sig = (
                            m.name.clone(),
                            m.params
                                .iter()
                                .map(|(_, t)| t.erased().to_string())
                                .collect::<Vec<_>>(),
                        );
                        if method_sigs.insert(sig) {
                            out.push(m);
                        }
                    }
                    MemberKind::Constructor => {
                        // constructors are not inherited
                        if ty == qualified {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    /// Fallback array member: arrays expose a public `length` field.
    pub fn array_length_member() -> MemberSig {
        MemberSig {
            name: "length".to_string(),
            kind: MemberKind::Field,
            is_static: false,
            access: Access::Public,
            params: Vec::new(),
            varargs: false,
            result: Some(ResolvedType::primitive("int")),
            declared_in: String::new(),
        }
    }

    /// Whether members of `owner` at `level` are visible from a context in
    /// `from_package`, optionally from a subtype of the owner.
    pub fn member_visible(
        &self,
        level: Access,
        owner: &str,
        from_package: &str,
        from_subtype: bool,
        from_same_type: bool,
    ) -> bool {
        let owner_pkg = self
            .types
            .get(owner)
            .map(|e| e.package.as_str())
            .unwrap_or("");
        match level {
            Access::Public => true,
            Access::Protected => from_subtype || owner_pkg == from_package,
            Access::Package => owner_pkg == from_package,
            Access::Private => from_same_type,
        }
    }
}

/// Build the type universe from parsed units plus stub libraries.
///
/// Every project type and stub type gets an entry; unresolved supertype
/// names fall back to `java.lang.Object` with a warning record. Two
/// declarations of the same qualified name are an error.
pub fn build_type_index(
    units: &[Arc<CompilationUnit>],
    stub_files: &[StubFile],
) -> Result<TypeIndex, IndexError> {
    let mut index = TypeIndex::default();

    // phase 1: register entries so name resolution can see everything
    for stub in stub_files {
        for st in &stub.types {
            let kind = match st.kind.as_str() {
                "interface" => EntryKind::Interface,
                "class" => EntryKind::Class,
                other => {
                    return Err(IndexError::InvalidStub(format!(
                        "unknown type kind '{other}' for {}",
                        st.qualified_name
                    )))
                }
            };
            let entry = TypeEntry {
                qualified: st.qualified_name.clone(),
                simple: simple_of(&st.qualified_name),
                kind,
                access: Access::Public,
                is_abstract: st.r#abstract || kind == EntryKind::Interface,
                supertypes: Vec::new(),
                type_params: st.type_params.clone(),
                members: Vec::new(),
                package: package_of(&st.qualified_name),
                source: TypeSource::Stub,
                file: stub.library.clone(),
            };
            register(&mut index, entry)?;
        }
    }
    for unit in units {
        for decl in unit.all_types() {
            let entry = TypeEntry {
                qualified: decl.qualified.clone(),
                simple: decl.name.clone(),
                kind: match decl.kind {
                    TypeKind::Class => EntryKind::Class,
                    TypeKind::Interface => EntryKind::Interface,
                },
                access: decl.access,
                is_abstract: decl.is_abstract || decl.kind == TypeKind::Interface,
                supertypes: Vec::new(),
                type_params: decl.type_params.clone(),
                members: Vec::new(),
                package: unit.package.clone(),
                source: TypeSource::Project,
                file: unit.path.clone(),
            };
            register(&mut index, entry)?;
        }
    }
    if !index.contains(OBJECT) {
        let object = TypeEntry {
            qualified: OBJECT.to_string(),
            simple: "Object".to_string(),
            kind: EntryKind::Class,
            access: Access::Public,
            is_abstract: false,
            supertypes: Vec::new(),
            type_params: Vec::new(),
            members: Vec::new(),
            package: "java.lang".to_string(),
            source: TypeSource::Builtin,
            file: String::new(),
        };
        register(&mut index, object)?;
    }

    // phase 2: resolve supertypes and member signatures
    let mut warnings = Vec::new();
    for stub in stub_files {
        for st in &stub.types {
            let resolver = Resolver {
                index: &index,
                unit: None,
                type_params: &st.type_params,
            };
            let mut supers = Vec::new();
            for s in &st.supertypes {
                match resolver.resolve_str(s) {
                    Some(rt) if rt.named_base().is_some() => {
                        supers.push(rt.named_base().unwrap().to_string())
                    }
                    _ => {
                        warnings.push(format!(
                            "{}: unresolved supertype '{s}', using java.lang.Object",
                            st.qualified_name
                        ));
                        supers.push(OBJECT.to_string());
                    }
                }
            }
            if supers.is_empty() && st.qualified_name != OBJECT {
                supers.push(OBJECT.to_string());
            }
            let mut members = Vec::new();
            for m in &st.members {
                let kind = match m.kind.as_str() {
                    "field" => MemberKind::Field,
                    "method" => MemberKind::Method,
                    "constructor" => MemberKind::Constructor,
                    other => {
                        return Err(IndexError::InvalidStub(format!(
                            "unknown member kind '{other}' on {}",
                            st.qualified_name
                        )))
                    }
                };
                let params = m
                    .params
                    .iter()
                    .map(|p| {
                        (
                            p.name.clone(),
                            resolver.resolve_str(&p.ty).unwrap_or_else(|| {
                                warnings.push(format!(
                                    "{}.{}: unresolved parameter type '{}'",
                                    st.qualified_name, m.name, p.ty
                                ));
                                ResolvedType::object()
                            }),
                        )
                    })
                    .collect();
                let result = match kind {
                    MemberKind::Constructor => Some(ResolvedType::named(&st.qualified_name)),
                    _ => match m.return_type.as_deref() {
                        None | Some("void") => None,
                        Some(rt) => Some(resolver.resolve_str(rt).unwrap_or_else(|| {
                            warnings.push(format!(
                                "{}.{}: unresolved type '{rt}'",
                                st.qualified_name, m.name
                            ));
                            ResolvedType::object()
                        })),
                    },
                };
                members.push(MemberSig {
                    name: m.name.clone(),
                    kind,
                    is_static: m.is_static,
                    access: stubs::parse_access(&m.access),
                    params,
                    varargs: m.varargs,
                    result,
                    declared_in: st.qualified_name.clone(),
                });
            }
            let e = index.types.get_mut(&st.qualified_name).unwrap();
            e.supertypes = supers;
            e.members = members;
        }
    }
    for unit in units {
        for decl in unit.all_types() {
            let (supers, members, mut warns) = resolve_decl(&index, unit, decl);
            warnings.append(&mut warns);
            let e = index.types.get_mut(&decl.qualified).unwrap();
            e.supertypes = supers;
            e.members = members;
        }
    }
    index.warnings = warnings;
    Ok(index)
}

fn resolve_decl(
    index: &TypeIndex,
    unit: &CompilationUnit,
    decl: &TypeDecl,
) -> (Vec<String>, Vec<MemberSig>, Vec<String>) {
    let mut warnings = Vec::new();
    let resolver = Resolver {
        index,
        unit: Some(unit),
        type_params: &decl.type_params,
    };
    let mut supers = Vec::new();
    for s in decl.extends.iter().chain(decl.implements.iter()) {
        match resolver.resolve(s) {
            Some(rt) if rt.dims == 0 && rt.named_base().is_some() => {
                supers.push(rt.named_base().unwrap().to_string())
            }
            _ => {
                warnings.push(format!(
                    "{}: unresolved supertype '{}', using java.lang.Object",
                    decl.qualified, s.name
                ));
            }
        }
    }
    if supers.is_empty() && decl.qualified != OBJECT {
        supers.push(OBJECT.to_string());
    }
    let mut members = Vec::new();
    for f in &decl.fields {
        members.push(MemberSig {
            name: f.name.clone(),
            kind: MemberKind::Field,
            is_static: f.is_static,
            access: f.access,
            params: Vec::new(),
            varargs: false,
            result: Some(resolver.resolve_or_warn(&f.ty, &decl.qualified, &mut warnings)),
            declared_in: decl.qualified.clone(),
        });
    }
    let mut has_ctor = false;
    for m in &decl.methods {
        let kind = if m.is_ctor {
            has_ctor = true;
            MemberKind::Constructor
        } else {
            MemberKind::Method
        };
        let params = m
            .params
            .iter()
            .map(|p| {
                (
                    p.name.clone(),
                    resolver.resolve_or_warn(&p.ty, &decl.qualified, &mut warnings),
                )
            })
            .collect();
        let result = if m.is_ctor {
            Some(ResolvedType::named(&decl.qualified))
        } else {
            m.return_type
                .as_ref()
                .map(|t| resolver.resolve_or_warn(t, &decl.qualified, &mut warnings))
        };
        members.push(MemberSig {
            name: m.name.clone(),
            kind,
            is_static: m.is_static,
            access: m.access,
            params,
            varargs: m.params.last().is_some_and(|p| p.varargs),
            result,
            declared_in: decl.qualified.clone(),
        });
    }
    if !has_ctor && decl.kind == TypeKind::Class {
        // implicit default constructor
        members.push(MemberSig {
            name: decl.name.clone(),
            kind: MemberKind::Constructor,
            is_static: false,
            access: decl.access,
            params: Vec::new(),
            varargs: false,
            result: Some(ResolvedType::named(&decl.qualified)),
            declared_in: decl.qualified.clone(),
        });
    }
    (supers, members, warnings)
}

fn register(index: &mut TypeIndex, entry: TypeEntry) -> Result<(), IndexError> {
    if let Some(prev) = index.types.get(&entry.qualified) {
        return Err(IndexError::DuplicateType {
            name: entry.qualified.clone(),
            first: prev.file.clone(),
            second: entry.file.clone(),
        });
    }
    index
        .by_simple
        .entry(entry.simple.clone())
        .or_default()
        .push(entry.qualified.clone());
    index.types.insert(entry.qualified.clone(), entry);
    Ok(())
}

pub fn package_of(qualified: &str) -> String {
    match qualified.rfind('.') {
        Some(i) => qualified[..i].to_string(),
        None => String::new(),
    }
}

pub fn simple_of(qualified: &str) -> String {
    qualified
        .rsplit('.')
        .next()
        .unwrap_or(qualified)
        .to_string()
}

/// Resolves source-level type names against the index, in the context of a
/// unit (imports, package) and a set of in-scope type parameters.
pub struct Resolver<'a> {
    pub index: &'a TypeIndex,
    pub unit: Option<&'a CompilationUnit>,
    pub type_params: &'a [String],
}

impl<'a> Resolver<'a> {
    pub fn resolve(&self, t: &TypeName) -> Option<ResolvedType> {
        let args: Vec<ResolvedType> = t
            .args
            .iter()
            .map(|a| self.resolve(a).unwrap_or_else(ResolvedType::object))
            .collect();
        let base = self.resolve_base(&t.name)?;
        Some(ResolvedType {
            base,
            args,
            dims: t.dims,
        })
    }

    pub fn resolve_or_warn(
        &self,
        t: &TypeName,
        context: &str,
        warnings: &mut Vec<String>,
    ) -> ResolvedType {
        match self.resolve(t) {
            Some(rt) => rt,
            None => {
                warnings.push(format!("{context}: unresolved type '{}'", t.name));
                // keep the written name so diagnostics stay readable
                ResolvedType {
                    base: BaseType::Named(t.name.clone()),
                    args: Vec::new(),
                    dims: t.dims,
                }
            }
        }
    }

    /// Resolve a stub-file type string like `java.util.List<E>[]`.
    pub fn resolve_str(&self, text: &str) -> Option<ResolvedType> {
        let parsed = crate::corpus::parser::parse_type_text(text).ok()?;
        self.resolve(&parsed)
    }

    fn resolve_base(&self, name: &str) -> Option<BaseType> {
        if entry::PRIMITIVES.contains(&name) {
            return Some(BaseType::Primitive(name.to_string()));
        }
        if self.type_params.contains(&name.to_string()) {
            return Some(BaseType::TypeVar(name.to_string()));
        }
        if name.contains('.') {
            if self.index.contains(name) {
                return Some(BaseType::Named(name.to_string()));
            }
            // a dotted name may still be Outer.Inner relative to the package
            if let Some(unit) = self.unit {
                let candidate = format!("{}.{}", unit.package, name);
                if self.index.contains(&candidate) {
                    return Some(BaseType::Named(candidate));
                }
            }
            return None;
        }
        self.resolve_simple(name).map(BaseType::Named)
    }

    /// Resolution order for simple names: unit-declared types, single-type
    /// imports, same package, `java.lang`, wildcard imports, then a unique
    /// global match.
    pub fn resolve_simple(&self, name: &str) -> Option<String> {
        if let Some(unit) = self.unit {
            for decl in unit.all_types() {
                if decl.name == name {
                    return Some(decl.qualified.clone());
                }
            }
            for imp in &unit.imports {
                if !imp.wildcard && !imp.is_static && imp.path.ends_with(&format!(".{name}")) {
                    return Some(imp.path.clone());
                }
            }
            let same_pkg = if unit.package.is_empty() {
                name.to_string()
            } else {
                format!("{}.{name}", unit.package)
            };
            if self.index.contains(&same_pkg) {
                return Some(same_pkg);
            }
        }
        let lang = format!("java.lang.{name}");
        if self.index.contains(&lang) {
            return Some(lang);
        }
        if let Some(unit) = self.unit {
            for imp in &unit.imports {
                if imp.wildcard && !imp.is_static {
                    let candidate = format!("{}.{name}", imp.path);
                    if self.index.contains(&candidate) {
                        return Some(candidate);
                    }
                }
            }
        }
        let global = self.index.by_simple_name(name);
        if global.len() == 1 {
            return Some(global[0].clone());
        }
        None
    }
}

pub fn builtin_stubs() -> Vec<StubFile> {
    vec![
        parse_stub_file(stubs::JAVA_LANG).expect("bundled java.lang stub is valid"),
        parse_stub_file(stubs::JAVA_UTIL).expect("bundled java.util stub is valid"),
    ]
}
