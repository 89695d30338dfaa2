//! Argument recommendation requests: one per argument of every method or
//! constructor call, extracted with the gold argument in evaluation mode.

use std::sync::Arc;

use super::ast::*;
use super::scope::ScopeTree;
use super::token::Pos;
use crate::typesys::TypeIndex;

/// The call a request points into.
#[derive(Debug, Clone)]
pub enum Callee {
    Method { name: String, recv: Option<Expr> },
    Ctor { ty: TypeName },
}

impl Callee {
    pub fn name(&self) -> String {
        match self {
            Callee::Method { name, .. } => name.clone(),
            Callee::Ctor { ty } => ty.name.rsplit('.').next().unwrap_or(&ty.name).to_string(),
        }
    }
}

/// Gold argument captured when extracting requests from complete code.
#[derive(Debug, Clone)]
pub struct GoldArg {
    pub text: String,
    pub expr: Expr,
}

impl GoldArg {
    pub fn expr_type(&self) -> ExprType {
        ExprType::of(&self.expr)
    }
}

/// A recommendation request: context, callee, and argument index.
#[derive(Debug, Clone)]
pub struct ArRequest {
    pub unit: Arc<CompilationUnit>,
    pub scopes: Arc<ScopeTree>,
    /// Qualified name of the type whose body contains the call.
    pub containing_type: String,
    pub containing_method: String,
    pub method_is_static: bool,
    pub callee: Callee,
    /// 1-based argument index.
    pub pos: u32,
    /// Position of the argument slot; context cuts here.
    pub location: Pos,
    /// Start of the whole call expression.
    pub call_start: Pos,
    /// Span of the call's parenthesized argument list.
    pub arg_list_span: NodeSpan,
    /// Span of the containing method declaration, header included.
    pub method_span: NodeSpan,
    pub gold: Option<GoldArg>,
    /// Resolution had to go through a trailing variadic parameter.
    pub varargs: bool,
    /// Callee could not be resolved against the index.
    pub unresolved: bool,
}

/// Extract one request per argument of every call in the unit. Calls whose
/// callee does not resolve against the index are emitted flagged
/// `unresolved` rather than dropped.
pub fn extract_requests(unit: &Arc<CompilationUnit>, index: &TypeIndex) -> Vec<ArRequest> {
    walk_requests(unit, index, false)
}

/// Like [`extract_requests`], but zero-argument call sites also yield a
/// synthetic position-1 hole request, so a cursor inside empty parens can
/// resolve to something. Evaluation never wants these.
pub fn extract_requests_including_empty(
    unit: &Arc<CompilationUnit>,
    index: &TypeIndex,
) -> Vec<ArRequest> {
    walk_requests(unit, index, true)
}

fn walk_requests(
    unit: &Arc<CompilationUnit>,
    index: &TypeIndex,
    include_empty: bool,
) -> Vec<ArRequest> {
    let scopes = Arc::new(super::scope::build_scope_tree(unit));
    let mut out = Vec::new();
    for decl in unit.all_types() {
        for method in &decl.methods {
            if let Some(body) = &method.body {
                let mut cx = Walker {
                    unit,
                    scopes: &scopes,
                    index,
                    containing_type: &decl.qualified,
                    containing_method: &method.name,
                    method_is_static: method.is_static,
                    method_span: method.span,
                    include_empty,
                    out: &mut out,
                };
                for stmt in &body.stmts {
                    cx.stmt(stmt);
                }
            }
        }
    }
    out
}

struct Walker<'a> {
    unit: &'a Arc<CompilationUnit>,
    scopes: &'a Arc<ScopeTree>,
    index: &'a TypeIndex,
    containing_type: &'a str,
    containing_method: &'a str,
    method_is_static: bool,
    method_span: NodeSpan,
    include_empty: bool,
    out: &'a mut Vec<ArRequest>,
}

impl<'a> Walker<'a> {
    fn stmt(&mut self, s: &Stmt) {
        match s {
            Stmt::Local { vars, .. } => {
                for v in vars {
                    if let Some(init) = &v.init {
                        self.expr(init);
                    }
                }
            }
            Stmt::Expr { expr, .. } => self.expr(expr),
            Stmt::If {
                cond,
                then_branch,
                else_branch,
                ..
            } => {
                self.expr(cond);
                self.stmt(then_branch);
                if let Some(e) = else_branch {
                    self.stmt(e);
                }
            }
            Stmt::While { cond, body, .. } => {
                self.expr(cond);
                self.stmt(body);
            }
            Stmt::For {
                decls, exprs, body, ..
            } => {
                for v in decls {
                    if let Some(init) = &v.init {
                        self.expr(init);
                    }
                }
                for e in exprs {
                    self.expr(e);
                }
                self.stmt(body);
            }
            Stmt::Try {
                body,
                catches,
                finally,
                ..
            } => {
                for st in &body.stmts {
                    self.stmt(st);
                }
                for (_, _, cb) in catches {
                    for st in &cb.stmts {
                        self.stmt(st);
                    }
                }
                if let Some(fb) = finally {
                    for st in &fb.stmts {
                        self.stmt(st);
                    }
                }
            }
            Stmt::Return { expr, .. } => {
                if let Some(e) = expr {
                    self.expr(e);
                }
            }
            Stmt::Throw { expr, .. } => self.expr(expr),
            Stmt::Block(b) => {
                for st in &b.stmts {
                    self.stmt(st);
                }
            }
            Stmt::Break { .. } | Stmt::Continue { .. } | Stmt::Opaque { .. } => {}
        }
    }

    fn expr(&mut self, e: &Expr) {
        match e {
            Expr::Call {
                recv,
                name,
                args,
                arg_list_span,
                ..
            } => {
                if let Some(r) = recv {
                    self.expr(r);
                }
                self.emit(
                    Callee::Method {
                        name: name.clone(),
                        recv: recv.as_deref().cloned(),
                    },
                    args,
                    e.span(),
                    arg_list_span,
                );
                for a in args {
                    self.expr(a);
                }
            }
            Expr::New {
                ty,
                args,
                arg_list_span,
                ..
            } => {
                self.emit(Callee::Ctor { ty: ty.clone() }, args, e.span(), arg_list_span);
                for a in args {
                    self.expr(a);
                }
            }
            Expr::FieldAccess { recv, .. } => self.expr(recv),
            Expr::Cast { expr, .. } => self.expr(expr),
            Expr::NewArray { dims, .. } => {
                for d in dims {
                    self.expr(d);
                }
            }
            Expr::Index { base, index, .. } => {
                self.expr(base);
                self.expr(index);
            }
            Expr::Compound { children, .. } => {
                for c in children {
                    self.expr(c);
                }
            }
            _ => {}
        }
    }

    fn emit(
        &mut self,
        callee: Callee,
        args: &[Expr],
        call_span: &NodeSpan,
        arg_list_span: &NodeSpan,
    ) {
        // delegation calls are not argument recommendation targets
        if matches!(&callee, Callee::Method { name, .. } if name == "this" || name == "super") {
            return;
        }
        if args.is_empty() {
            if self.include_empty {
                let inside = Pos::new(
                    arg_list_span.start.line,
                    arg_list_span.start.col + 1,
                );
                let mut req = ArRequest {
                    unit: Arc::clone(self.unit),
                    scopes: Arc::clone(self.scopes),
                    containing_type: self.containing_type.to_string(),
                    containing_method: self.containing_method.to_string(),
                    method_is_static: self.method_is_static,
                    method_span: self.method_span,
                    callee: callee.clone(),
                    pos: 1,
                    location: inside,
                    call_start: call_span.start,
                    arg_list_span: *arg_list_span,
                    gold: None,
                    varargs: false,
                    unresolved: false,
                };
                let expected = crate::typesys::expected_types(&req, self.index);
                req.varargs = expected.varargs;
                req.unresolved = expected.entries.is_empty();
                self.out.push(req);
            }
            return;
        }
        for (i, arg) in args.iter().enumerate() {
            let gold = match arg {
                Expr::Hole { .. } => None,
                other => Some(GoldArg {
                    text: self.unit.slice(other.span()).trim().to_string(),
                    expr: other.clone(),
                }),
            };
            let mut req = ArRequest {
                unit: Arc::clone(self.unit),
                scopes: Arc::clone(self.scopes),
                containing_type: self.containing_type.to_string(),
                containing_method: self.containing_method.to_string(),
                method_is_static: self.method_is_static,
                method_span: self.method_span,
                callee: callee.clone(),
                pos: (i + 1) as u32,
                location: arg.span().start,
                call_start: call_span.start,
                arg_list_span: *arg_list_span,
                gold,
                varargs: false,
                unresolved: false,
            };
            let expected = crate::typesys::expected_types(&req, self.index);
            req.varargs = expected.varargs;
            req.unresolved = expected.entries.is_empty();
            self.out.push(req);
        }
    }
}
