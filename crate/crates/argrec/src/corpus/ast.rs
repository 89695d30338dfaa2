//! Syntax tree for the Java subset.
//!
//! The tree keeps source spans (with byte offsets) on every node so gold
//! arguments can be sliced back out of the original text and so scope and
//! recentness queries can cut the file at a request position. Constructs
//! outside the subset are preserved as opaque spans that contribute no
//! candidates and no requests.

use serde::{Deserialize, Serialize};

use super::token::{Pos, Token};

/// A span with both positions and byte offsets into the unit source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeSpan {
    pub start: Pos,
    pub end: Pos,
    pub start_off: usize,
    pub end_off: usize,
}

impl NodeSpan {
    pub fn contains(&self, other: &NodeSpan) -> bool {
        self.start_off <= other.start_off && other.end_off <= self.end_off
    }

    pub fn disjoint(&self, other: &NodeSpan) -> bool {
        self.end_off <= other.start_off || other.end_off <= self.start_off
    }

    pub fn contains_pos(&self, p: Pos) -> bool {
        self.start <= p && p < self.end
    }
}

#[derive(Debug, Clone)]
pub struct CompilationUnit {
    pub path: String,
    pub source: String,
    pub package: String,
    pub imports: Vec<Import>,
    pub types: Vec<TypeDecl>,
    pub tokens: Vec<Token>,
}

impl CompilationUnit {
    pub fn slice(&self, span: &NodeSpan) -> &str {
        &self.source[span.start_off..span.end_off]
    }

    /// All type declarations, nesting included, paired with their nesting path.
    pub fn all_types(&self) -> Vec<&TypeDecl> {
        let mut out = Vec::new();
        fn walk<'a>(t: &'a TypeDecl, out: &mut Vec<&'a TypeDecl>) {
            out.push(t);
            for n in &t.nested {
                walk(n, out);
            }
        }
        for t in &self.types {
            walk(t, &mut out);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Import {
    pub path: String,
    pub wildcard: bool,
    pub is_static: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeKind {
    Class,
    Interface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Access {
    Public,
    Protected,
    Package,
    Private,
}

/// A type as written in source: erased base name plus the recorded type
/// arguments and array dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeName {
    pub name: String,
    pub args: Vec<TypeName>,
    pub dims: u8,
}

impl TypeName {
    pub fn simple(name: &str) -> Self {
        TypeName {
            name: name.to_string(),
            args: Vec::new(),
            dims: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TypeDecl {
    pub name: String,
    pub qualified: String,
    pub kind: TypeKind,
    pub access: Access,
    pub is_abstract: bool,
    pub type_params: Vec<String>,
    pub extends: Vec<TypeName>,
    pub implements: Vec<TypeName>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    pub nested: Vec<TypeDecl>,
    pub span: NodeSpan,
    pub body_span: NodeSpan,
}

#[derive(Debug, Clone)]
pub struct FieldDecl {
    pub name: String,
    pub ty: TypeName,
    pub is_static: bool,
    pub access: Access,
    pub span: NodeSpan,
}

#[derive(Debug, Clone)]
pub struct Param {
    pub name: String,
    pub ty: TypeName,
    pub varargs: bool,
}

#[derive(Debug, Clone)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<Param>,
    /// `None` for void methods and constructors.
    pub return_type: Option<TypeName>,
    pub is_static: bool,
    pub is_ctor: bool,
    pub is_abstract: bool,
    pub access: Access,
    pub body: Option<Block>,
    pub span: NodeSpan,
}

#[derive(Debug, Clone)]
pub struct Block {
    pub span: NodeSpan,
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone)]
pub struct LocalVar {
    pub name: String,
    pub ty: TypeName,
    pub init: Option<Expr>,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub enum Stmt {
    Local { vars: Vec<LocalVar>, span: NodeSpan },
    Expr { expr: Expr, span: NodeSpan },
    If {
        cond: Expr,
        then_branch: Box<Stmt>,
        else_branch: Option<Box<Stmt>>,
        span: NodeSpan,
    },
    While {
        cond: Expr,
        body: Box<Stmt>,
        span: NodeSpan,
    },
    For {
        decls: Vec<LocalVar>,
        exprs: Vec<Expr>,
        body: Box<Stmt>,
        span: NodeSpan,
    },
    Try {
        body: Block,
        catches: Vec<(Param, Pos, Block)>,
        finally: Option<Block>,
        span: NodeSpan,
    },
    Return { expr: Option<Expr>, span: NodeSpan },
    Throw { expr: Expr, span: NodeSpan },
    Break { span: NodeSpan },
    Continue { span: NodeSpan },
    Block(Block),
    Opaque { span: NodeSpan },
}

impl Stmt {
    pub fn span(&self) -> &NodeSpan {
        match self {
            Stmt::Local { span, .. }
            | Stmt::Expr { span, .. }
            | Stmt::If { span, .. }
            | Stmt::While { span, .. }
            | Stmt::For { span, .. }
            | Stmt::Try { span, .. }
            | Stmt::Return { span, .. }
            | Stmt::Throw { span, .. }
            | Stmt::Break { span }
            | Stmt::Continue { span }
            | Stmt::Opaque { span } => span,
            Stmt::Block(b) => &b.span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lit {
    Str(String),
    Int(String),
    Float(String),
    Bool(bool),
    Char(String),
    Null,
}

#[derive(Debug, Clone)]
pub enum Expr {
    /// Bare identifier.
    Name { name: String, span: NodeSpan },
    /// Pure dotted name chain `a.b.c`.
    Qualified { parts: Vec<String>, span: NodeSpan },
    /// Member access on a non-name primary (`this.f`, `m().f`).
    FieldAccess {
        recv: Box<Expr>,
        name: String,
        span: NodeSpan,
    },
    Call {
        recv: Option<Box<Expr>>,
        name: String,
        args: Vec<Expr>,
        /// Span of the parenthesized argument list, parens included.
        arg_list_span: NodeSpan,
        span: NodeSpan,
    },
    Lit { lit: Lit, span: NodeSpan },
    /// `T.class`
    TypeLit { ty: TypeName, span: NodeSpan },
    This { span: NodeSpan },
    Super { span: NodeSpan },
    Cast {
        ty: TypeName,
        expr: Box<Expr>,
        span: NodeSpan,
    },
    New {
        ty: TypeName,
        args: Vec<Expr>,
        arg_list_span: NodeSpan,
        span: NodeSpan,
    },
    NewArray {
        elem: TypeName,
        dims: Vec<Expr>,
        span: NodeSpan,
    },
    Index {
        base: Box<Expr>,
        index: Box<Expr>,
        span: NodeSpan,
    },
    /// Unfilled argument slot.
    Hole { span: NodeSpan },
    /// Lambda expression, kept opaque.
    Lambda { span: NodeSpan },
    /// Anything else (binary/unary/ternary/assignment/paren/method-ref).
    /// Children are retained so nested calls still surface.
    Compound { children: Vec<Expr>, span: NodeSpan },
}

impl Expr {
    pub fn span(&self) -> &NodeSpan {
        match self {
            Expr::Name { span, .. }
            | Expr::Qualified { span, .. }
            | Expr::FieldAccess { span, .. }
            | Expr::Call { span, .. }
            | Expr::Lit { span, .. }
            | Expr::TypeLit { span, .. }
            | Expr::This { span }
            | Expr::Super { span }
            | Expr::Cast { span, .. }
            | Expr::New { span, .. }
            | Expr::NewArray { span, .. }
            | Expr::Index { span, .. }
            | Expr::Hole { span }
            | Expr::Lambda { span }
            | Expr::Compound { span, .. } => span,
        }
    }
}

/// Syntactic category of an argument expression. The first fifteen variants
/// are generated by the engine; the last two exist for classification only.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum ExprType {
    SimpleName,
    QualifiedName,
    FieldAccess,
    MethodInvocation,
    StringLiteral,
    NumberLiteral,
    BooleanLiteral,
    CharacterLiteral,
    NullLiteral,
    TypeLiteral,
    ThisExpr,
    CastExpr,
    ObjectCreation,
    ArrayCreation,
    ArrayAccess,
    LambdaExpr,
    CompoundExpr,
}

impl ExprType {
    pub const SUPPORTED: [ExprType; 15] = [
        ExprType::SimpleName,
        ExprType::QualifiedName,
        ExprType::FieldAccess,
        ExprType::MethodInvocation,
        ExprType::StringLiteral,
        ExprType::NumberLiteral,
        ExprType::BooleanLiteral,
        ExprType::CharacterLiteral,
        ExprType::NullLiteral,
        ExprType::TypeLiteral,
        ExprType::ThisExpr,
        ExprType::CastExpr,
        ExprType::ObjectCreation,
        ExprType::ArrayCreation,
        ExprType::ArrayAccess,
    ];

    pub fn is_supported(self) -> bool {
        !matches!(self, ExprType::LambdaExpr | ExprType::CompoundExpr)
    }

    pub fn is_literal(self) -> bool {
        matches!(
            self,
            ExprType::StringLiteral
                | ExprType::NumberLiteral
                | ExprType::BooleanLiteral
                | ExprType::CharacterLiteral
                | ExprType::NullLiteral
        )
    }

    pub fn of(expr: &Expr) -> ExprType {
        match expr {
            Expr::Name { .. } => ExprType::SimpleName,
            Expr::Qualified { .. } => ExprType::QualifiedName,
            Expr::FieldAccess { .. } => ExprType::FieldAccess,
            Expr::Call { .. } => ExprType::MethodInvocation,
            Expr::Lit { lit, .. } => match lit {
                Lit::Str(_) => ExprType::StringLiteral,
                Lit::Int(_) | Lit::Float(_) => ExprType::NumberLiteral,
                Lit::Bool(_) => ExprType::BooleanLiteral,
                Lit::Char(_) => ExprType::CharacterLiteral,
                Lit::Null => ExprType::NullLiteral,
            },
            Expr::TypeLit { .. } => ExprType::TypeLiteral,
            Expr::This { .. } => ExprType::ThisExpr,
            Expr::Cast { .. } => ExprType::CastExpr,
            Expr::New { .. } => ExprType::ObjectCreation,
            Expr::NewArray { .. } => ExprType::ArrayCreation,
            Expr::Index { .. } => ExprType::ArrayAccess,
            Expr::Lambda { .. } => ExprType::LambdaExpr,
            // holes have no category of their own; they never appear as golds
            Expr::Hole { .. } | Expr::Super { .. } | Expr::Compound { .. } => {
                ExprType::CompoundExpr
            }
        }
    }
}
