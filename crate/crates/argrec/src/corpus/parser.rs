//! Recursive-descent parser for the Java subset.
//!
//! The parser covers exactly the surface needed by candidate generation:
//! packages, imports, (nested) classes and interfaces, fields, methods,
//! constructors, local variables, the common statement forms, and the
//! argument expression grammar. Generic types are parsed and kept as erased
//! names with their argument lists recorded. Annotations, lambdas, anonymous
//! class bodies, and switch blocks are consumed as opaque spans.

use super::ast::*;
use super::lexer::lex;
use super::token::{Pos, Token, TokenKind};
use super::ParseError;

pub fn parse_unit(path: &str, source: &str) -> Result<CompilationUnit, ParseError> {
    let tokens = lex(source)?;
    let offsets = token_offsets(source, &tokens);
    let mut p = Parser {
        toks: &tokens,
        offs: &offsets,
        src_len: source.len(),
        pos: 0,
        holes: Vec::new(),
    };
    let unit = p.unit(path, source)?;
    Ok(unit)
}

/// Parse a standalone expression, holes allowed. Used to re-parse rendered
/// candidates and to normalize gold arguments.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let tokens = lex(text)?;
    let offsets = token_offsets(text, &tokens);
    let mut p = Parser {
        toks: &tokens,
        offs: &offsets,
        src_len: text.len(),
        pos: 0,
        holes: Vec::new(),
    };
    let expr = p.expr()?;
    if !p.at_end() {
        let t = p.peek_tok().unwrap();
        return Err(ParseError::new(
            t.line,
            t.col,
            format!("trailing input after expression: '{}'", t.text),
        ));
    }
    Ok(expr)
}

/// Parse a standalone type reference like `java.util.List<String>[]`.
pub fn parse_type_text(text: &str) -> Result<TypeName, ParseError> {
    let tokens = lex(text)?;
    let offsets = token_offsets(text, &tokens);
    let mut p = Parser {
        toks: &tokens,
        offs: &offsets,
        src_len: text.len(),
        pos: 0,
        holes: Vec::new(),
    };
    let ty = p.type_name()?;
    if !p.at_end() {
        let t = p.peek_tok().unwrap();
        return Err(ParseError::new(
            t.line,
            t.col,
            format!("trailing input after type: '{}'", t.text),
        ));
    }
    Ok(ty)
}

/// Byte offset of each token in the source. The lexer tracks lines and
/// columns; offsets are recovered by scanning forward from the last match.
fn token_offsets(source: &str, tokens: &[Token]) -> Vec<usize> {
    let mut line_starts = vec![0usize];
    for (i, b) in source.bytes().enumerate() {
        if b == b'\n' {
            line_starts.push(i + 1);
        }
    }
    tokens
        .iter()
        .map(|t| {
            let ls = line_starts[(t.line - 1) as usize];
            // column counts chars, offset counts bytes
            let mut off = ls;
            let mut col = 1u32;
            for c in source[ls..].chars() {
                if col == t.col {
                    break;
                }
                off += c.len_utf8();
                col += 1;
            }
            off
        })
        .collect()
}

struct Parser<'a> {
    toks: &'a [Token],
    offs: &'a [usize],
    src_len: usize,
    pos: usize,
    holes: Vec<Pos>,
}

impl<'a> Parser<'a> {
    // ---- cursor helpers -------------------------------------------------

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek_tok(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(|t| t.text.as_str())
    }

    fn peek_at(&self, n: usize) -> Option<&'a str> {
        self.toks.get(self.pos + n).map(|t| t.text.as_str())
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.toks.get(self.pos).map(|t| t.kind)
    }

    fn is(&self, text: &str) -> bool {
        self.peek() == Some(text)
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.toks[self.pos];
        self.pos += 1;
        t
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.is(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> Result<&'a Token, ParseError> {
        match self.peek_tok() {
            Some(t) if t.text == text => Ok(self.bump()),
            Some(t) => Err(ParseError::new(
                t.line,
                t.col,
                format!("expected '{}', found '{}'", text, t.text),
            )),
            None => Err(ParseError::new(
                self.last_pos().line,
                self.last_pos().col,
                format!("expected '{}', found end of input", text),
            )),
        }
    }

    fn last_pos(&self) -> Pos {
        self.toks
            .last()
            .map(|t| t.pos())
            .unwrap_or(Pos::new(1, 1))
    }

    fn pos_of(&self, idx: usize) -> Pos {
        if idx < self.toks.len() {
            self.toks[idx].pos()
        } else {
            self.last_pos()
        }
    }

    fn off_of(&self, idx: usize) -> usize {
        if idx < self.offs.len() {
            self.offs[idx]
        } else {
            self.src_len
        }
    }

    fn end_of(&self, idx: usize) -> (Pos, usize) {
        // end position/offset right after token idx
        if idx < self.toks.len() {
            let t = &self.toks[idx];
            let chars = t.text.chars().count() as u32;
            (
                Pos::new(t.line, t.col + chars),
                self.offs[idx] + t.text.len(),
            )
        } else {
            (self.last_pos(), self.src_len)
        }
    }

    fn span_from(&self, start_idx: usize) -> NodeSpan {
        let end_idx = self.pos.saturating_sub(1);
        let (end, end_off) = self.end_of(end_idx);
        NodeSpan {
            start: self.pos_of(start_idx),
            end,
            start_off: self.off_of(start_idx),
            end_off,
        }
    }

    fn here_span(&self) -> NodeSpan {
        // empty span at the current position
        let p = self.pos_of(self.pos);
        let o = self.off_of(self.pos);
        NodeSpan {
            start: p,
            end: p,
            start_off: o,
            end_off: o,
        }
    }

    fn err_here(&self, msg: impl Into<String>) -> ParseError {
        let p = self.pos_of(self.pos);
        ParseError::new(p.line, p.col, msg)
    }

    // ---- compilation unit ----------------------------------------------

    fn unit(&mut self, path: &str, source: &str) -> Result<CompilationUnit, ParseError> {
        let mut package = String::new();
        let mut imports = Vec::new();
        self.skip_annotations();
        if self.eat("package") {
            package = self.dotted_name()?;
            self.expect(";")?;
        }
        while self.is("import") {
            self.bump();
            let is_static = self.eat("static");
            let mut parts = vec![self.ident()?];
            let mut wildcard = false;
            while self.eat(".") {
                if self.eat("*") {
                    wildcard = true;
                    break;
                }
                parts.push(self.ident()?);
            }
            self.expect(";")?;
            imports.push(Import {
                path: parts.join("."),
                wildcard,
                is_static,
            });
        }
        let mut types = Vec::new();
        while !self.at_end() {
            self.skip_annotations();
            if self.at_end() {
                break;
            }
            if self.eat(";") {
                continue;
            }
            types.push(self.type_decl(&package, "")?);
        }
        // materialize holes collected during parsing into the token stream
        let mut tokens = self.toks.to_vec();
        for hp in &self.holes {
            let idx = tokens
                .iter()
                .position(|t| t.pos() >= *hp)
                .unwrap_or(tokens.len());
            tokens.insert(
                idx,
                Token {
                    text: String::new(),
                    kind: TokenKind::Hole,
                    line: hp.line,
                    col: hp.col,
                },
            );
        }
        Ok(CompilationUnit {
            path: path.to_string(),
            source: source.to_string(),
            package,
            imports,
            types,
            tokens,
        })
    }

    fn skip_annotations(&mut self) {
        while self.is("@") {
            self.bump();
            if matches!(self.peek_kind(), Some(TokenKind::Ident | TokenKind::Keyword)) {
                self.bump();
                while self.eat(".") {
                    if matches!(self.peek_kind(), Some(TokenKind::Ident)) {
                        self.bump();
                    } else {
                        break;
                    }
                }
                if self.is("(") {
                    self.skip_balanced("(", ")");
                }
            }
        }
    }

    fn dotted_name(&mut self) -> Result<String, ParseError> {
        let mut parts = vec![self.ident()?];
        while self.eat(".") {
            parts.push(self.ident()?);
        }
        Ok(parts.join("."))
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek_tok() {
            Some(t) if t.kind == TokenKind::Ident => {
                self.pos += 1;
                Ok(t.text.clone())
            }
            Some(t) => Err(ParseError::new(
                t.line,
                t.col,
                format!("expected identifier, found '{}'", t.text),
            )),
            None => Err(ParseError::new(
                self.last_pos().line,
                self.last_pos().col,
                "expected identifier, found end of input",
            )),
        }
    }

    // ---- declarations ----------------------------------------------------

    fn modifiers(&mut self) -> (Access, bool, bool, bool) {
        let mut access = Access::Package;
        let mut is_static = false;
        let mut is_abstract = false;
        let mut is_final = false;
        loop {
            match self.peek() {
                Some("public") => {
                    access = Access::Public;
                    self.bump();
                }
                Some("protected") => {
                    access = Access::Protected;
                    self.bump();
                }
                Some("private") => {
                    access = Access::Private;
                    self.bump();
                }
                Some("static") => {
                    is_static = true;
                    self.bump();
                }
                Some("abstract") => {
                    is_abstract = true;
                    self.bump();
                }
                Some("final") => {
                    is_final = true;
                    self.bump();
                }
                Some("native") | Some("synchronized") | Some("transient") | Some("volatile") => {
                    self.bump();
                }
                Some("@") => self.skip_annotations(),
                _ => break,
            }
        }
        (access, is_static, is_abstract, is_final)
    }

    fn type_decl(&mut self, package: &str, outer: &str) -> Result<TypeDecl, ParseError> {
        let start = self.pos;
        let (access, _is_static, is_abstract, _) = self.modifiers();
        let kind = if self.eat("class") {
            TypeKind::Class
        } else if self.eat("interface") {
            TypeKind::Interface
        } else {
            return Err(self.err_here("expected 'class' or 'interface'"));
        };
        let name = self.ident()?;
        let qualified = if outer.is_empty() {
            if package.is_empty() {
                name.clone()
            } else {
                format!("{package}.{name}")
            }
        } else {
            format!("{outer}.{name}")
        };
        let mut type_params = Vec::new();
        if self.eat("<") {
            loop {
                type_params.push(self.ident()?);
                if self.eat("extends") {
                    self.type_name()?; // bound recorded nowhere; erased
                }
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(">")?;
        }
        let mut extends = Vec::new();
        let mut implements = Vec::new();
        if self.eat("extends") {
            loop {
                extends.push(self.type_name()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        if self.eat("implements") {
            loop {
                implements.push(self.type_name()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        let body_start = self.pos;
        let open = self.expect("{")?.pos();
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        let mut nested = Vec::new();
        loop {
            if self.at_end() {
                return Err(ParseError::new(
                    open.line,
                    open.col,
                    "unbalanced brace: class body never closed",
                ));
            }
            if self.is("}") {
                self.bump();
                break;
            }
            if self.eat(";") {
                continue;
            }
            self.member(&name, &qualified, kind, &mut fields, &mut methods, &mut nested)?;
        }
        let body_span = self.span_from(body_start);
        let span = self.span_from(start);
        Ok(TypeDecl {
            name,
            qualified,
            kind,
            access,
            is_abstract,
            type_params,
            extends,
            implements,
            fields,
            methods,
            nested,
            span,
            body_span,
        })
    }

    fn member(
        &mut self,
        type_name: &str,
        qualified: &str,
        owner_kind: TypeKind,
        fields: &mut Vec<FieldDecl>,
        methods: &mut Vec<MethodDecl>,
        nested: &mut Vec<TypeDecl>,
    ) -> Result<(), ParseError> {
        let start = self.pos;
        self.skip_annotations();
        let (mut access, is_static, is_abstract, _) = self.modifiers();
        if owner_kind == TypeKind::Interface && access == Access::Package {
            access = Access::Public; // interface members default public
        }
        if self.is("class") || self.is("interface") {
            self.pos = start; // replay modifiers inside type_decl
            nested.push(self.type_decl("", qualified)?);
            return Ok(());
        }
        // static / instance initializer block: opaque
        if self.is("{") {
            self.skip_balanced("{", "}");
            return Ok(());
        }
        // constructor: Name (
        if self.peek() == Some(type_name) && self.peek_at(1) == Some("(") {
            let name = self.ident()?;
            let params = self.params()?;
            self.skip_throws()?;
            let body = if self.is("{") {
                Some(self.block()?)
            } else {
                self.expect(";")?;
                None
            };
            methods.push(MethodDecl {
                name,
                params,
                return_type: None,
                is_static: false,
                is_ctor: true,
                is_abstract: false,
                access,
                body,
                span: self.span_from(start),
            });
            return Ok(());
        }
        // method generic params: <T> T foo(...)
        if self.eat("<") {
            loop {
                self.ident()?;
                if self.eat("extends") {
                    self.type_name()?;
                }
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(">")?;
        }
        let return_type = if self.eat("void") {
            None
        } else {
            Some(self.type_name()?)
        };
        let name = self.ident()?;
        if self.is("(") {
            let params = self.params()?;
            // trailing array dims on the method name are out of the subset
            self.skip_throws()?;
            let body = if self.is("{") {
                Some(self.block()?)
            } else {
                self.expect(";")?;
                None
            };
            let has_body = body.is_some();
            methods.push(MethodDecl {
                name,
                params,
                return_type,
                is_static,
                is_ctor: false,
                is_abstract: is_abstract || !has_body,
                access,
                body,
                span: self.span_from(start),
            });
        } else {
            // field declaration, possibly with several declarators
            let ty = return_type.ok_or_else(|| self.err_here("field requires a type"))?;
            let mut names = vec![name];
            loop {
                if self.eat("=") {
                    // initializer expressions in field position are parsed and
                    // dropped; array initializers skipped as balanced braces
                    if self.is("{") {
                        self.skip_balanced("{", "}");
                    } else {
                        self.expr()?;
                    }
                }
                if self.eat(",") {
                    names.push(self.ident()?);
                } else {
                    break;
                }
            }
            self.expect(";")?;
            let span = self.span_from(start);
            for n in names {
                fields.push(FieldDecl {
                    name: n,
                    ty: ty.clone(),
                    is_static,
                    access,
                    span,
                });
            }
        }
        Ok(())
    }

    fn params(&mut self) -> Result<Vec<Param>, ParseError> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            self.skip_annotations();
            self.eat("final");
            let mut ty = self.type_name()?;
            let mut varargs = false;
            if self.is(".") && self.peek_at(1) == Some(".") && self.peek_at(2) == Some(".") {
                self.bump();
                self.bump();
                self.bump();
                varargs = true;
                ty.dims += 1; // the variadic slot is an array type
            }
            let name = self.ident()?;
            while self.eat("[") {
                self.expect("]")?;
                ty.dims += 1;
            }
            out.push(Param { name, ty, varargs });
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(out)
    }

    fn skip_throws(&mut self) -> Result<(), ParseError> {
        if self.eat("throws") {
            loop {
                self.type_name()?;
                if !self.eat(",") {
                    break;
                }
            }
        }
        Ok(())
    }

    fn skip_balanced(&mut self, open: &str, close: &str) {
        debug_assert!(self.is(open));
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            if t == open {
                depth += 1;
            } else if t == close {
                depth -= 1;
                if depth == 0 {
                    self.bump();
                    return;
                }
            }
            self.bump();
        }
    }

    // ---- types -----------------------------------------------------------

    fn type_name(&mut self) -> Result<TypeName, ParseError> {
        let mut ty = self.type_name_no_dims()?;
        while self.is("[") && self.peek_at(1) == Some("]") {
            self.bump();
            self.bump();
            ty.dims += 1;
        }
        Ok(ty)
    }

    /// Type name without trailing array dims; `new T[...]` needs the dims
    /// for itself.
    fn type_name_no_dims(&mut self) -> Result<TypeName, ParseError> {
        let mut name = match self.peek_tok() {
            Some(t)
                if t.kind == TokenKind::Ident
                    || matches!(
                        t.text.as_str(),
                        "int" | "long"
                            | "short"
                            | "byte"
                            | "char"
                            | "float"
                            | "double"
                            | "boolean"
                    ) =>
            {
                self.bump().text.clone()
            }
            _ => return Err(self.err_here("expected type name")),
        };
        while self.is(".") && matches!(self.toks.get(self.pos + 1).map(|t| t.kind), Some(TokenKind::Ident)) {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        let mut args = Vec::new();
        if self.is("<") {
            let save = self.pos;
            if let Ok(parsed) = self.try_type_args() {
                args = parsed;
            } else {
                self.pos = save;
            }
        }
        Ok(TypeName {
            name,
            args,
            dims: 0,
        })
    }

    fn try_type_args(&mut self) -> Result<Vec<TypeName>, ParseError> {
        self.expect("<")?;
        let mut args = Vec::new();
        if self.eat(">") {
            return Ok(args); // diamond
        }
        loop {
            if self.eat("?") {
                // wildcard, possibly bounded; erased to Object
                if self.eat("extends") || self.eat("super") {
                    self.type_name()?;
                }
                args.push(TypeName::simple("Object"));
            } else {
                args.push(self.type_name()?);
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(">")?;
        Ok(args)
    }

    // ---- statements --------------------------------------------------------

    fn block(&mut self) -> Result<Block, ParseError> {
        let start = self.pos;
        let open = self.expect("{")?.pos();
        let mut stmts = Vec::new();
        loop {
            if self.at_end() {
                return Err(ParseError::new(
                    open.line,
                    open.col,
                    "unbalanced brace: block never closed",
                ));
            }
            if self.is("}") {
                self.bump();
                break;
            }
            stmts.push(self.stmt()?);
        }
        Ok(Block {
            span: self.span_from(start),
            stmts,
        })
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let start = self.pos;
        self.skip_annotations();
        match self.peek() {
            Some("{") => Ok(Stmt::Block(self.block()?)),
            Some(";") => {
                self.bump();
                Ok(Stmt::Opaque {
                    span: self.span_from(start),
                })
            }
            Some("if") => {
                self.bump();
                self.expect("(")?;
                let cond = self.expr()?;
                self.expect(")")?;
                let then_branch = Box::new(self.stmt()?);
                let else_branch = if self.eat("else") {
                    Some(Box::new(self.stmt()?))
                } else {
                    None
                };
                Ok(Stmt::If {
                    cond,
                    then_branch,
                    else_branch,
                    span: self.span_from(start),
                })
            }
            Some("while") => {
                self.bump();
                self.expect("(")?;
                let cond = self.expr()?;
                self.expect(")")?;
                let body = Box::new(self.stmt()?);
                Ok(Stmt::While {
                    cond,
                    body,
                    span: self.span_from(start),
                })
            }
            Some("for") => {
                self.bump();
                self.expect("(")?;
                let mut decls = Vec::new();
                let mut exprs = Vec::new();
                // enhanced for: Type name : expr
                let save = self.pos;
                let enhanced = (|| -> Result<(LocalVar, Expr), ParseError> {
                    self.eat("final");
                    let ty = self.type_name()?;
                    let name_tok_idx = self.pos;
                    let name = self.ident()?;
                    self.expect(":")?;
                    let it = self.expr()?;
                    Ok((
                        LocalVar {
                            name,
                            ty,
                            init: None,
                            pos: self.pos_of(name_tok_idx),
                        },
                        it,
                    ))
                })();
                match enhanced {
                    Ok((var, it)) => {
                        decls.push(var);
                        exprs.push(it);
                    }
                    Err(_) => {
                        self.pos = save;
                        // classic for: init; cond; update
                        if !self.is(";") {
                            match self.local_or_expr()? {
                                Stmt::Local { vars, .. } => decls.extend(vars),
                                Stmt::Expr { expr, .. } => exprs.push(expr),
                                _ => {}
                            }
                        } else {
                            self.bump();
                        }
                        if !self.is(";") {
                            exprs.push(self.expr()?);
                        }
                        self.expect(";")?;
                        if !self.is(")") {
                            loop {
                                exprs.push(self.expr()?);
                                if !self.eat(",") {
                                    break;
                                }
                            }
                        }
                    }
                }
                self.expect(")")?;
                let body = Box::new(self.stmt()?);
                Ok(Stmt::For {
                    decls,
                    exprs,
                    body,
                    span: self.span_from(start),
                })
            }
            Some("try") => {
                self.bump();
                if self.is("(") {
                    // try-with-resources header skipped as opaque
                    self.skip_balanced("(", ")");
                }
                let body = self.block()?;
                let mut catches = Vec::new();
                let mut finally = None;
                while self.eat("catch") {
                    self.expect("(")?;
                    self.eat("final");
                    let ty = self.type_name()?;
                    let name_idx = self.pos;
                    let name = self.ident()?;
                    self.expect(")")?;
                    let cb = self.block()?;
                    catches.push((
                        Param {
                            name,
                            ty,
                            varargs: false,
                        },
                        self.pos_of(name_idx),
                        cb,
                    ));
                }
                if self.eat("finally") {
                    finally = Some(self.block()?);
                }
                Ok(Stmt::Try {
                    body,
                    catches,
                    finally,
                    span: self.span_from(start),
                })
            }
            Some("return") => {
                self.bump();
                let expr = if self.is(";") { None } else { Some(self.expr()?) };
                self.expect(";")?;
                Ok(Stmt::Return {
                    expr,
                    span: self.span_from(start),
                })
            }
            Some("throw") => {
                self.bump();
                let expr = self.expr()?;
                self.expect(";")?;
                Ok(Stmt::Throw {
                    expr,
                    span: self.span_from(start),
                })
            }
            Some("break") => {
                self.bump();
                if matches!(self.peek_kind(), Some(TokenKind::Ident)) {
                    self.bump();
                }
                self.expect(";")?;
                Ok(Stmt::Break {
                    span: self.span_from(start),
                })
            }
            Some("continue") => {
                self.bump();
                if matches!(self.peek_kind(), Some(TokenKind::Ident)) {
                    self.bump();
                }
                self.expect(";")?;
                Ok(Stmt::Continue {
                    span: self.span_from(start),
                })
            }
            Some("switch") | Some("do") | Some("synchronized") => {
                // out of the subset: consume as an opaque span
                self.bump();
                if self.is("(") {
                    self.skip_balanced("(", ")");
                }
                if self.is("{") {
                    self.skip_balanced("{", "}");
                }
                // do-while tail
                if self.eat("while") {
                    if self.is("(") {
                        self.skip_balanced("(", ")");
                    }
                    self.eat(";");
                }
                Ok(Stmt::Opaque {
                    span: self.span_from(start),
                })
            }
            _ => {
                let st = self.local_or_expr()?;
                Ok(st)
            }
        }
    }

    /// Either a local variable declaration or an expression statement;
    /// both end with ';'. Disambiguated by trial-parsing a type.
    fn local_or_expr(&mut self) -> Result<Stmt, ParseError> {
        let start = self.pos;
        self.eat("final");
        let save = self.pos;
        let looks_like_decl = (|| -> Result<bool, ParseError> {
            let _ty = self.type_name()?;
            Ok(matches!(self.peek_kind(), Some(TokenKind::Ident)))
        })()
        .unwrap_or(false);
        if looks_like_decl {
            self.pos = save;
            let ty = self.type_name()?;
            let mut vars = Vec::new();
            loop {
                let name_idx = self.pos;
                let name = self.ident()?;
                let mut vty = ty.clone();
                while self.eat("[") {
                    self.expect("]")?;
                    vty.dims += 1;
                }
                let init = if self.eat("=") {
                    if self.is("{") {
                        // array initializer: opaque
                        let h = self.pos;
                        self.skip_balanced("{", "}");
                        Some(Expr::Compound {
                            children: Vec::new(),
                            span: self.span_from(h),
                        })
                    } else {
                        Some(self.expr()?)
                    }
                } else {
                    None
                };
                vars.push(LocalVar {
                    name,
                    ty: vty,
                    init,
                    pos: self.pos_of(name_idx),
                });
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(";")?;
            return Ok(Stmt::Local {
                vars,
                span: self.span_from(start),
            });
        }
        self.pos = save;
        let expr = self.expr()?;
        self.expect(";")?;
        Ok(Stmt::Expr {
            expr,
            span: self.span_from(start),
        })
    }

    // ---- expressions -----------------------------------------------------

    pub(crate) fn expr(&mut self) -> Result<Expr, ParseError> {
        self.assignment()
    }

    fn assignment(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        // lambda forms: `x ->` or `(params) ->`
        if let Some(e) = self.try_lambda()? {
            return Ok(e);
        }
        let lhs = self.ternary()?;
        if matches!(
            self.peek(),
            Some("=" | "+=" | "-=" | "*=" | "/=" | "%=" | "&=" | "|=" | "^=")
        ) {
            self.bump();
            let rhs = self.assignment()?;
            return Ok(Expr::Compound {
                children: vec![lhs, rhs],
                span: self.span_from(start),
            });
        }
        Ok(lhs)
    }

    fn try_lambda(&mut self) -> Result<Option<Expr>, ParseError> {
        let start = self.pos;
        // `x -> ...`
        if matches!(self.peek_kind(), Some(TokenKind::Ident)) && self.peek_at(1) == Some("->") {
            self.bump();
            self.bump();
            self.skip_lambda_body();
            return Ok(Some(Expr::Lambda {
                span: self.span_from(start),
            }));
        }
        // `(a, b) -> ...`
        if self.is("(") {
            let mut depth = 0usize;
            let mut j = self.pos;
            while j < self.toks.len() {
                match self.toks[j].text.as_str() {
                    "(" => depth += 1,
                    ")" => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                j += 1;
            }
            if j + 1 < self.toks.len() && self.toks[j + 1].text == "->" {
                self.pos = j + 2;
                self.skip_lambda_body();
                return Ok(Some(Expr::Lambda {
                    span: self.span_from(start),
                }));
            }
        }
        Ok(None)
    }

    fn skip_lambda_body(&mut self) {
        if self.is("{") {
            self.skip_balanced("{", "}");
            return;
        }
        // expression body: runs to the next ',' or ')' or ';' at depth 0
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            match t {
                "(" | "[" => depth += 1,
                ")" | "]" => {
                    if depth == 0 {
                        return;
                    }
                    depth -= 1;
                }
                "," | ";" if depth == 0 => return,
                _ => {}
            }
            self.bump();
        }
    }

    fn ternary(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let cond = self.binary(0)?;
        if self.eat("?") {
            let a = self.expr()?;
            self.expect(":")?;
            let b = self.ternary()?;
            return Ok(Expr::Compound {
                children: vec![cond, a, b],
                span: self.span_from(start),
            });
        }
        Ok(cond)
    }

    const BIN_LEVELS: &'static [&'static [&'static str]] = &[
        &["||"],
        &["&&"],
        &["|"],
        &["^"],
        &["&"],
        &["==", "!="],
        &["<", ">", "<=", ">=", "instanceof"],
        &["<<", ">>"],
        &["+", "-"],
        &["*", "/", "%"],
    ];

    fn binary(&mut self, level: usize) -> Result<Expr, ParseError> {
        if level >= Self::BIN_LEVELS.len() {
            return self.unary();
        }
        let start = self.pos;
        let mut lhs = self.binary(level + 1)?;
        loop {
            let op = match self.peek() {
                Some(op) if Self::BIN_LEVELS[level].contains(&op) => op,
                _ => break,
            };
            if op == "instanceof" {
                self.bump();
                self.type_name()?;
                lhs = Expr::Compound {
                    children: vec![lhs],
                    span: self.span_from(start),
                };
                continue;
            }
            self.bump();
            let rhs = self.binary(level + 1)?;
            lhs = Expr::Compound {
                children: vec![lhs, rhs],
                span: self.span_from(start),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some("+" | "-" | "!" | "~" | "++" | "--") => {
                self.bump();
                let inner = self.unary()?;
                Ok(Expr::Compound {
                    children: vec![inner],
                    span: self.span_from(start),
                })
            }
            Some("(") => {
                // cast vs parenthesized expression
                if let Some(cast) = self.try_cast()? {
                    return Ok(cast);
                }
                self.postfix_chain()
            }
            _ => self.postfix_chain(),
        }
    }

    fn try_cast(&mut self) -> Result<Option<Expr>, ParseError> {
        let start = self.pos;
        let save = self.pos;
        self.bump(); // '('
        let cast = (|| -> Result<Option<Expr>, ParseError> {
            let ty = self.type_name()?;
            if !self.eat(")") {
                return Ok(None);
            }
            // a cast must be followed by something that can start an operand
            let starts_operand = match self.peek_tok() {
                Some(t) => {
                    matches!(
                        t.kind,
                        TokenKind::Ident
                            | TokenKind::IntLit
                            | TokenKind::FloatLit
                            | TokenKind::StringLit
                            | TokenKind::CharLit
                    ) || matches!(t.text.as_str(), "(" | "this" | "super" | "new" | "!" | "~")
                }
                None => false,
            };
            if !starts_operand {
                return Ok(None);
            }
            let operand = self.unary()?;
            Ok(Some(Expr::Cast {
                ty,
                expr: Box::new(operand),
                span: self.span_from(start),
            }))
        })();
        match cast {
            Ok(Some(e)) => Ok(Some(e)),
            _ => {
                self.pos = save;
                Ok(None)
            }
        }
    }

    fn postfix_chain(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let mut e = self.primary()?;
        loop {
            if self.is(".") {
                // `.class` after a name chain
                if self.peek_at(1) == Some("class") {
                    if let Some(ty) = name_chain_type(&e) {
                        self.bump();
                        self.bump();
                        e = Expr::TypeLit {
                            ty,
                            span: self.span_from(start),
                        };
                        continue;
                    }
                }
                if matches!(
                    self.toks.get(self.pos + 1).map(|t| t.kind),
                    Some(TokenKind::Ident)
                ) {
                    let name = self.toks[self.pos + 1].text.clone();
                    if self.peek_at(2) == Some("(") {
                        self.bump();
                        self.bump();
                        let al_start = self.pos;
                        let args = self.args()?;
                        let arg_list_span = self.span_from(al_start);
                        e = Expr::Call {
                            recv: Some(Box::new(e)),
                            name,
                            args,
                            arg_list_span,
                            span: self.span_from(start),
                        };
                    } else {
                        self.bump();
                        self.bump();
                        // extend pure name chains, otherwise build field access
                        e = match e {
                            Expr::Name { name: n0, .. } => Expr::Qualified {
                                parts: vec![n0, name],
                                span: self.span_from(start),
                            },
                            Expr::Qualified { mut parts, .. } => {
                                parts.push(name);
                                Expr::Qualified {
                                    parts,
                                    span: self.span_from(start),
                                }
                            }
                            other => Expr::FieldAccess {
                                recv: Box::new(other),
                                name,
                                span: self.span_from(start),
                            },
                        };
                    }
                    continue;
                }
                // `.new`, `.<T>m()` and friends: out of subset
                self.bump();
                let span = self.span_from(start);
                e = Expr::Compound {
                    children: vec![e],
                    span,
                };
                continue;
            }
            if self.is("[") {
                self.bump();
                let index = if self.is("]") {
                    Expr::Hole {
                        span: self.here_span(),
                    }
                } else {
                    self.expr()?
                };
                self.expect("]")?;
                e = Expr::Index {
                    base: Box::new(e),
                    index: Box::new(index),
                    span: self.span_from(start),
                };
                continue;
            }
            if self.is("::") {
                self.bump();
                if matches!(self.peek_kind(), Some(TokenKind::Ident)) || self.is("new") {
                    self.bump();
                }
                e = Expr::Compound {
                    children: vec![e],
                    span: self.span_from(start),
                };
                continue;
            }
            if self.is("++") || self.is("--") {
                self.bump();
                e = Expr::Compound {
                    children: vec![e],
                    span: self.span_from(start),
                };
                continue;
            }
            break;
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let t = match self.peek_tok() {
            Some(t) => t,
            None => return Err(self.err_here("expected expression, found end of input")),
        };
        match t.kind {
            TokenKind::IntLit => {
                self.bump();
                Ok(Expr::Lit {
                    lit: Lit::Int(t.text.clone()),
                    span: self.span_from(start),
                })
            }
            TokenKind::FloatLit => {
                self.bump();
                Ok(Expr::Lit {
                    lit: Lit::Float(t.text.clone()),
                    span: self.span_from(start),
                })
            }
            TokenKind::StringLit => {
                self.bump();
                Ok(Expr::Lit {
                    lit: Lit::Str(t.text.clone()),
                    span: self.span_from(start),
                })
            }
            TokenKind::CharLit => {
                self.bump();
                Ok(Expr::Lit {
                    lit: Lit::Char(t.text.clone()),
                    span: self.span_from(start),
                })
            }
            TokenKind::Ident => {
                let name = self.ident()?;
                if self.is("(") {
                    let al_start = self.pos;
                    let args = self.args()?;
                    let arg_list_span = self.span_from(al_start);
                    return Ok(Expr::Call {
                        recv: None,
                        name,
                        args,
                        arg_list_span,
                        span: self.span_from(start),
                    });
                }
                Ok(Expr::Name {
                    name,
                    span: self.span_from(start),
                })
            }
            _ => match t.text.as_str() {
                "true" | "false" => {
                    self.bump();
                    Ok(Expr::Lit {
                        lit: Lit::Bool(t.text == "true"),
                        span: self.span_from(start),
                    })
                }
                "null" => {
                    self.bump();
                    Ok(Expr::Lit {
                        lit: Lit::Null,
                        span: self.span_from(start),
                    })
                }
                "this" => {
                    self.bump();
                    if self.is("(") {
                        // this(...) delegation: treat as a call named `this`
                        let al_start = self.pos;
                        let args = self.args()?;
                        let arg_list_span = self.span_from(al_start);
                        return Ok(Expr::Call {
                            recv: None,
                            name: "this".to_string(),
                            args,
                            arg_list_span,
                            span: self.span_from(start),
                        });
                    }
                    Ok(Expr::This {
                        span: self.span_from(start),
                    })
                }
                "super" => {
                    self.bump();
                    if self.is("(") {
                        let al_start = self.pos;
                        let args = self.args()?;
                        let arg_list_span = self.span_from(al_start);
                        return Ok(Expr::Call {
                            recv: None,
                            name: "super".to_string(),
                            args,
                            arg_list_span,
                            span: self.span_from(start),
                        });
                    }
                    Ok(Expr::Super {
                        span: self.span_from(start),
                    })
                }
                "new" => {
                    self.bump();
                    let ty = self.type_name_no_dims()?;
                    if self.is("[") {
                        let mut dims = Vec::new();
                        while self.eat("[") {
                            if self.is("]") {
                                dims.push(Expr::Hole {
                                    span: self.here_span(),
                                });
                            } else {
                                dims.push(self.expr()?);
                            }
                            self.expect("]")?;
                        }
                        if self.is("{") {
                            self.skip_balanced("{", "}");
                        }
                        return Ok(Expr::NewArray {
                            elem: ty,
                            dims,
                            span: self.span_from(start),
                        });
                    }
                    let al_start = self.pos;
                    let args = self.args()?;
                    let arg_list_span = self.span_from(al_start);
                    if self.is("{") {
                        // anonymous class body: opaque
                        self.skip_balanced("{", "}");
                        return Ok(Expr::Compound {
                            children: args,
                            span: self.span_from(start),
                        });
                    }
                    Ok(Expr::New {
                        ty,
                        args,
                        arg_list_span,
                        span: self.span_from(start),
                    })
                }
                "(" => {
                    self.bump();
                    let inner = self.expr()?;
                    self.expect(")")?;
                    Ok(Expr::Compound {
                        children: vec![inner],
                        span: self.span_from(start),
                    })
                }
                "int" | "long" | "short" | "byte" | "char" | "float" | "double" | "boolean" => {
                    // primitive type literal `int.class` or array `int[].class`
                    let ty = self.type_name()?;
                    if self.eat(".") {
                        self.expect("class")?;
                        return Ok(Expr::TypeLit {
                            ty,
                            span: self.span_from(start),
                        });
                    }
                    Err(self.err_here("unexpected primitive type in expression"))
                }
                other => Err(self.err_here(format!("unexpected token '{other}' in expression"))),
            },
        }
    }

    /// Parse a parenthesized argument list. Empty slots between delimiters
    /// become holes; `()` parses as an empty list, not a hole.
    fn args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            if self.is(",") || self.is(")") {
                let span = self.here_span();
                self.holes.push(span.start);
                out.push(Expr::Hole { span });
            } else {
                out.push(self.expr()?);
            }
            if self.eat(",") {
                continue;
            }
            self.expect(")")?;
            break;
        }
        Ok(out)
    }
}

/// If the expression is a pure name chain, view it as a type reference.
fn name_chain_type(e: &Expr) -> Option<TypeName> {
    match e {
        Expr::Name { name, .. } => Some(TypeName::simple(name)),
        Expr::Qualified { parts, .. } => Some(TypeName {
            name: parts.join("."),
            args: Vec::new(),
            dims: 0,
        }),
        _ => None,
    }
}
