//! Parsing, scope trees, sub-token streams, request extraction, and corpus
//! statistics for the Java subset.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod request;
pub mod scope;
pub mod stats;
pub mod subtok;
pub mod token;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use ast::{CompilationUnit, ExprType};
pub use parser::{parse_expression, parse_unit};
pub use request::{extract_requests, ArRequest, GoldArg};
pub use scope::{build_scope_tree, BlockId, BlockKind, ScopeTree};
pub use subtok::split_subtokens;

/// Parse failure with source position.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ParseError {
    pub fn new(line: u32, col: u32, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("corpus manifest {0} lists no projects")]
    EmptyManifest(PathBuf),
}

/// One project listed in a corpus manifest.
#[derive(Debug, Clone)]
pub struct Project {
    pub name: String,
    pub root: PathBuf,
    pub units: Vec<CompilationUnit>,
}

/// Read a corpus manifest: one project root directory per line, `#` comments
/// and blank lines ignored. Relative paths resolve against the manifest.
pub fn load_manifest(manifest: &Path) -> Result<Vec<Project>, CorpusError> {
    let text = std::fs::read_to_string(manifest).map_err(|e| CorpusError::Io {
        path: manifest.to_path_buf(),
        source: e,
    })?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let mut projects = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let root = if Path::new(line).is_absolute() {
            PathBuf::from(line)
        } else {
            base.join(line)
        };
        let name = root
            .file_name()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| line.to_string());
        let units = load_project_units(&root)?;
        projects.push(Project { name, root, units });
    }
    if projects.is_empty() {
        return Err(CorpusError::EmptyManifest(manifest.to_path_buf()));
    }
    Ok(projects)
}

/// Parse every `.java` file under a project root, in sorted path order.
pub fn load_project_units(root: &Path) -> Result<Vec<CompilationUnit>, CorpusError> {
    let mut files = Vec::new();
    collect_java_files(root, &mut files)?;
    files.sort();
    files
        .into_iter()
        .map(|path| {
            let text = std::fs::read_to_string(&path).map_err(|e| CorpusError::Io {
                path: path.clone(),
                source: e,
            })?;
            parse_unit(&path.to_string_lossy(), &text)
                .map_err(|e| CorpusError::Parse { path, source: e })
        })
        .collect()
}

fn collect_java_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), CorpusError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CorpusError::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    for entry in entries {
        let entry = entry.map_err(|e| CorpusError::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
        let path = entry.path();
        if path.is_dir() {
            collect_java_files(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "java") {
            out.push(path);
        }
    }
    Ok(())
}
