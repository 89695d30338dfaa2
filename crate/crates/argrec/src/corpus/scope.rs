//! Scope trees: the block structure of a compilation unit.
//!
//! A block is a sequence of statements, local class declarations, and local
//! variable declarations within braces. Class bodies, method bodies, and
//! statement blocks each form a block; fields attach to the class-body block
//! and one outermost block per unit roots the tree.

use super::ast::*;
use super::token::Pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Outermost,
    ClassBody,
    MethodBody,
    Statement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Field,
    Param,
    Local,
}

#[derive(Debug, Clone)]
pub struct ScopeVar {
    pub name: String,
    pub ty: TypeName,
    pub pos: Pos,
    pub kind: VarKind,
    pub is_static: bool,
}

#[derive(Debug, Clone)]
pub struct BlockNode {
    pub kind: BlockKind,
    pub span: NodeSpan,
    pub parent: Option<BlockId>,
    pub vars: Vec<ScopeVar>,
    /// Set for method-body blocks.
    pub method_name: Option<String>,
    /// Qualified name of the class whose body this block is (class-body only).
    pub class_name: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ScopeTree {
    pub blocks: Vec<BlockNode>,
}

impl ScopeTree {
    pub fn root(&self) -> BlockId {
        BlockId(0)
    }

    pub fn node(&self, id: BlockId) -> &BlockNode {
        &self.blocks[id.0]
    }

    pub fn parent(&self, id: BlockId) -> Option<BlockId> {
        self.blocks[id.0].parent
    }

    /// Innermost block whose span contains the position.
    pub fn block_at(&self, pos: Pos) -> BlockId {
        let mut best = BlockId(0);
        let mut best_len = usize::MAX;
        for (i, b) in self.blocks.iter().enumerate() {
            if b.kind == BlockKind::Outermost || b.span.contains_pos(pos) {
                let len = b.span.end_off.saturating_sub(b.span.start_off);
                let len = if b.kind == BlockKind::Outermost {
                    usize::MAX - 1
                } else {
                    len
                };
                if len < best_len {
                    best = BlockId(i);
                    best_len = len;
                }
            }
        }
        best
    }

    /// Distance from `outer` down to `inner`: 0 when equal, otherwise one per
    /// parent link from `inner` up to `outer`. `None` when `outer` does not
    /// transitively contain `inner`.
    pub fn scope_dis(&self, outer: BlockId, inner: BlockId) -> Option<u32> {
        let mut cur = inner;
        let mut d = 0u32;
        loop {
            if cur == outer {
                return Some(d);
            }
            match self.parent(cur) {
                Some(p) => {
                    cur = p;
                    d += 1;
                }
                None => return None,
            }
        }
    }

    pub fn depth(&self, id: BlockId) -> u32 {
        let mut d = 0;
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            cur = p;
            d += 1;
        }
        d
    }

    /// Walk from the innermost block at `pos` to the root.
    pub fn chain_at(&self, pos: Pos) -> Vec<BlockId> {
        let mut out = Vec::new();
        let mut cur = Some(self.block_at(pos));
        while let Some(id) = cur {
            out.push(id);
            cur = self.parent(id);
        }
        out
    }

    /// Method-body block enclosing the position, if any.
    pub fn enclosing_method_body(&self, pos: Pos) -> Option<BlockId> {
        self.chain_at(pos)
            .into_iter()
            .find(|id| self.node(*id).kind == BlockKind::MethodBody)
    }
}

pub fn build_scope_tree(unit: &CompilationUnit) -> ScopeTree {
    let file_span = NodeSpan {
        start: Pos::new(1, 1),
        end: Pos::new(u32::MAX, u32::MAX),
        start_off: 0,
        end_off: unit.source.len(),
    };
    let mut tree = ScopeTree {
        blocks: vec![BlockNode {
            kind: BlockKind::Outermost,
            span: file_span,
            parent: None,
            vars: Vec::new(),
            method_name: None,
            class_name: None,
        }],
    };
    for t in &unit.types {
        add_type(&mut tree, t, BlockId(0));
    }
    tree
}

fn add_type(tree: &mut ScopeTree, t: &TypeDecl, parent: BlockId) {
    let class_block = push(tree, BlockKind::ClassBody, t.body_span, parent);
    tree.blocks[class_block.0].class_name = Some(t.qualified.clone());
    for f in &t.fields {
        tree.blocks[class_block.0].vars.push(ScopeVar {
            name: f.name.clone(),
            ty: f.ty.clone(),
            pos: f.span.start,
            kind: VarKind::Field,
            is_static: f.is_static,
        });
    }
    for m in &t.methods {
        if let Some(body) = &m.body {
            let mb = push(tree, BlockKind::MethodBody, body.span, class_block);
            tree.blocks[mb.0].method_name = Some(m.name.clone());
            for p in &m.params {
                tree.blocks[mb.0].vars.push(ScopeVar {
                    name: p.name.clone(),
                    ty: p.ty.clone(),
                    pos: m.span.start,
                    kind: VarKind::Param,
                    is_static: false,
                });
            }
            for s in &body.stmts {
                add_stmt(tree, s, mb);
            }
        }
    }
    for n in &t.nested {
        add_type(tree, n, class_block);
    }
}

fn add_stmt(tree: &mut ScopeTree, s: &Stmt, cur: BlockId) {
    match s {
        Stmt::Local { vars, .. } => {
            for v in vars {
                tree.blocks[cur.0].vars.push(ScopeVar {
                    name: v.name.clone(),
                    ty: v.ty.clone(),
                    pos: v.pos,
                    kind: VarKind::Local,
                    is_static: false,
                });
            }
        }
        Stmt::Block(b) => {
            let id = push(tree, BlockKind::Statement, b.span, cur);
            for st in &b.stmts {
                add_stmt(tree, st, id);
            }
        }
        Stmt::If {
            then_branch,
            else_branch,
            ..
        } => {
            add_stmt(tree, then_branch, cur);
            if let Some(e) = else_branch {
                add_stmt(tree, e, cur);
            }
        }
        Stmt::While { body, .. } => add_stmt(tree, body, cur),
        Stmt::For {
            decls, body, span, ..
        } => {
            // the for header introduces its own scope around the body
            let id = push(tree, BlockKind::Statement, *span, cur);
            for v in decls {
                tree.blocks[id.0].vars.push(ScopeVar {
                    name: v.name.clone(),
                    ty: v.ty.clone(),
                    pos: v.pos,
                    kind: VarKind::Local,
                    is_static: false,
                });
            }
            add_stmt(tree, body, id);
        }
        Stmt::Try {
            body,
            catches,
            finally,
            ..
        } => {
            let id = push(tree, BlockKind::Statement, body.span, cur);
            for st in &body.stmts {
                add_stmt(tree, st, id);
            }
            for (param, pos, cb) in catches {
                let cid = push(tree, BlockKind::Statement, cb.span, cur);
                tree.blocks[cid.0].vars.push(ScopeVar {
                    name: param.name.clone(),
                    ty: param.ty.clone(),
                    pos: *pos,
                    kind: VarKind::Local,
                    is_static: false,
                });
                for st in &cb.stmts {
                    add_stmt(tree, st, cid);
                }
            }
            if let Some(fb) = finally {
                let fid = push(tree, BlockKind::Statement, fb.span, cur);
                for st in &fb.stmts {
                    add_stmt(tree, st, fid);
                }
            }
        }
        _ => {}
    }
}

fn push(tree: &mut ScopeTree, kind: BlockKind, span: NodeSpan, parent: BlockId) -> BlockId {
    tree.blocks.push(BlockNode {
        kind,
        span,
        parent: Some(parent),
        vars: Vec::new(),
        method_name: None,
        class_name: None,
    });
    BlockId(tree.blocks.len() - 1)
}
