//! Library stub files: declarative type records standing in for compiled
//! dependencies. One JSON document per library.

use serde::{Deserialize, Serialize};

use crate::corpus::ast::Access;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StubFile {
    pub library: String,
    pub types: Vec<StubType>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StubType {
    #[serde(rename = "qualifiedName")]
    pub qualified_name: String,
    /// "class" or "interface".
    pub kind: String,
    #[serde(default)]
    pub supertypes: Vec<String>,
    #[serde(default, rename = "typeParams")]
    pub type_params: Vec<String>,
    #[serde(default)]
    pub r#abstract: bool,
    #[serde(default)]
    pub members: Vec<StubMember>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StubMember {
    pub name: String,
    /// "field", "method", or "constructor".
    pub kind: String,
    #[serde(default, rename = "static")]
    pub is_static: bool,
    #[serde(default = "default_access")]
    pub access: String,
    #[serde(default)]
    pub params: Vec<StubParam>,
    #[serde(default)]
    pub varargs: bool,
    /// Return type for methods, field type for fields; "void" or absent for
    /// void methods and constructors.
    #[serde(default, rename = "returnType")]
    pub return_type: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StubParam {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

fn default_access() -> String {
    "public".to_string()
}

pub fn parse_access(s: &str) -> Access {
    match s {
        "public" => Access::Public,
        "protected" => Access::Protected,
        "private" => Access::Private,
        _ => Access::Package,
    }
}

pub fn parse_stub_file(text: &str) -> Result<StubFile, serde_json::Error> {
    serde_json::from_str(text)
}

/// Minimal `java.lang` stub bundled with the binary.
pub const JAVA_LANG: &str = include_str!("../../stubs/java.lang.json");
/// Minimal `java.util` stub bundled with the binary.
pub const JAVA_UTIL: &str = include_str!("../../stubs/java.util.json");
