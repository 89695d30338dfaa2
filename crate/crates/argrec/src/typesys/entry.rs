//! Type entries, member signatures, and resolved type references.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::ast::Access;

pub const OBJECT: &str = "java.lang.Object";
pub const STRING: &str = "java.lang.String";
pub const CLASS: &str = "java.lang.Class";

pub const PRIMITIVES: [&str; 8] = [
    "int", "long", "short", "byte", "char", "float", "double", "boolean",
];

/// Base of a resolved type reference.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseType {
    /// Qualified reference type name.
    Named(String),
    Primitive(String),
    /// Type parameter of a generic declaration, erased on demand.
    TypeVar(String),
    /// The type of the `null` literal.
    Null,
}

/// A resolved type: base plus recorded type arguments and array dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResolvedType {
    pub base: BaseType,
    pub args: Vec<ResolvedType>,
    pub dims: u8,
}

impl ResolvedType {
    pub fn named(name: &str) -> Self {
        ResolvedType {
            base: BaseType::Named(name.to_string()),
            args: Vec::new(),
            dims: 0,
        }
    }

    pub fn primitive(name: &str) -> Self {
        ResolvedType {
            base: BaseType::Primitive(name.to_string()),
            args: Vec::new(),
            dims: 0,
        }
    }

    pub fn null() -> Self {
        ResolvedType {
            base: BaseType::Null,
            args: Vec::new(),
            dims: 0,
        }
    }

    pub fn object() -> Self {
        Self::named(OBJECT)
    }

    pub fn array_of(mut t: ResolvedType) -> Self {
        t.dims += 1;
        t
    }

    /// Element type of an array, `None` for non-arrays.
    pub fn element(&self) -> Option<ResolvedType> {
        if self.dims == 0 {
            return None;
        }
        let mut t = self.clone();
        t.dims -= 1;
        Some(t)
    }

    pub fn is_reference(&self) -> bool {
        self.dims > 0 || matches!(self.base, BaseType::Named(_) | BaseType::TypeVar(_))
    }

    pub fn is_primitive(&self) -> bool {
        self.dims == 0 && matches!(self.base, BaseType::Primitive(_))
    }

    /// Type parameters erase to Object; arguments are dropped.
    pub fn erased(&self) -> ResolvedType {
        let base = match &self.base {
            BaseType::TypeVar(_) => BaseType::Named(OBJECT.to_string()),
            other => other.clone(),
        };
        ResolvedType {
            base,
            args: Vec::new(),
            dims: self.dims,
        }
    }

    /// Erase unbound type variables but keep recorded type arguments, so a
    /// `List<String>` stays usable for substitution downstream.
    pub fn vars_erased(&self) -> ResolvedType {
        let base = match &self.base {
            BaseType::TypeVar(_) => BaseType::Named(OBJECT.to_string()),
            other => other.clone(),
        };
        ResolvedType {
            base,
            args: self.args.iter().map(|a| a.vars_erased()).collect(),
            dims: self.dims,
        }
    }

    /// Qualified name of the erased base when it is a reference type.
    pub fn named_base(&self) -> Option<&str> {
        match &self.base {
            BaseType::Named(n) => Some(n),
            _ => None,
        }
    }

    pub fn simple_name(&self) -> String {
        let base = match &self.base {
            BaseType::Named(n) => n.rsplit('.').next().unwrap_or(n).to_string(),
            BaseType::Primitive(p) => p.clone(),
            BaseType::TypeVar(v) => v.clone(),
            BaseType::Null => "null".to_string(),
        };
        format!("{}{}", base, "[]".repeat(self.dims as usize))
    }
}

impl fmt::Display for ResolvedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.base {
            BaseType::Named(n) => write!(f, "{n}")?,
            BaseType::Primitive(p) => write!(f, "{p}")?,
            BaseType::TypeVar(v) => write!(f, "{v}")?,
            BaseType::Null => write!(f, "null")?,
        }
        if !self.args.is_empty() {
            write!(
                f,
                "<{}>",
                self.args
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )?;
        }
        write!(f, "{}", "[]".repeat(self.dims as usize))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryKind {
    Class,
    Interface,
    Primitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeSource {
    Project,
    Stub,
    Builtin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MemberKind {
    Field,
    Method,
    Constructor,
}

/// Signature of a field, method, or constructor. Parameter names are kept;
/// they feed the parameter-similarity feature.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberSig {
    pub name: String,
    pub kind: MemberKind,
    pub is_static: bool,
    pub access: Access,
    pub params: Vec<(String, ResolvedType)>,
    pub varargs: bool,
    /// Return type for methods, field type for fields, declaring type for
    /// constructors. Void methods use `None`.
    pub result: Option<ResolvedType>,
    pub declared_in: String,
}

impl MemberSig {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// One entry in the type universe.
#[derive(Debug, Clone)]
pub struct TypeEntry {
    pub qualified: String,
    pub simple: String,
    pub kind: EntryKind,
    pub access: Access,
    pub is_abstract: bool,
    pub supertypes: Vec<String>,
    pub type_params: Vec<String>,
    pub members: Vec<MemberSig>,
    pub package: String,
    pub source: TypeSource,
    /// Defining file for duplicate diagnostics; empty for stubs/builtins.
    pub file: String,
}
