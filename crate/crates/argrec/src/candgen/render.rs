//! Canonical rendering and placeholder shapes.
//!
//! Rendering is deterministic: no redundant whitespace, `this.` only for
//! shadowed fields, literal defaults for values that cannot be synthesized.
//! Nested argument positions, array dims, and array indices render as empty
//! slots; `m(, )` is a two-hole call, `m()` with one hole is a one-hole call
//! distinguished from the zero-argument call by its hole count.

use crate::corpus::ast::{Expr, ExprType, Lit, TypeName};

/// Join `n` empty hole slots into an argument list body.
pub fn hole_list(n: usize) -> String {
    vec![""; n].join(", ")
}

pub fn render_call(recv: Option<&str>, name: &str, holes: usize) -> String {
    match recv {
        Some(r) => format!("{r}.{name}({})", hole_list(holes)),
        None => format!("{name}({})", hole_list(holes)),
    }
}

pub fn render_new(type_simple: &str, holes: usize) -> String {
    format!("new {type_simple}({})", hole_list(holes))
}

pub fn render_new_array(elem_simple: &str) -> String {
    format!("new {elem_simple}[]")
}

pub fn render_index(recv: &str) -> String {
    format!("{recv}[]")
}

pub fn render_cast(ty_simple: &str, operand: &str) -> String {
    format!("({ty_simple}) {operand}")
}

pub const EMPTY_STRING_LITERAL: &str = "\"<EMPTY_STRING>\"";
pub const NULL_CHAR_LITERAL: &str = "'\\0'";

/// Canonical re-rendering of a parsed expression: token-normalized text
/// with single spaces only where the grammar needs them.
pub fn render_expr(e: &Expr) -> String {
    match e {
        Expr::Name { name, .. } => name.clone(),
        Expr::Qualified { parts, .. } => parts.join("."),
        Expr::FieldAccess { recv, name, .. } => format!("{}.{name}", render_expr(recv)),
        Expr::Call {
            recv, name, args, ..
        } => {
            let body = args.iter().map(render_expr).collect::<Vec<_>>().join(", ");
            match recv {
                Some(r) => format!("{}.{name}({body})", render_expr(r)),
                None => format!("{name}({body})"),
            }
        }
        Expr::Lit { lit, .. } => match lit {
            Lit::Str(s) => s.clone(),
            Lit::Int(s) | Lit::Float(s) | Lit::Char(s) => s.clone(),
            Lit::Bool(b) => b.to_string(),
            Lit::Null => "null".to_string(),
        },
        Expr::TypeLit { ty, .. } => format!("{}.class", type_text(ty)),
        Expr::This { .. } => "this".to_string(),
        Expr::Super { .. } => "super".to_string(),
        Expr::Cast { ty, expr, .. } => format!("({}) {}", type_text(ty), render_expr(expr)),
        Expr::New { ty, args, .. } => {
            let body = args.iter().map(render_expr).collect::<Vec<_>>().join(", ");
            format!("new {}({body})", type_text(ty))
        }
        Expr::NewArray { elem, dims, .. } => {
            let dims_text: String = dims
                .iter()
                .map(|d| format!("[{}]", render_expr(d)))
                .collect();
            format!("new {}{dims_text}", type_text(elem))
        }
        Expr::Index { base, index, .. } => {
            format!("{}[{}]", render_expr(base), render_expr(index))
        }
        Expr::Hole { .. } => String::new(),
        Expr::Lambda { .. } => "<lambda>".to_string(),
        Expr::Compound { .. } => "<expr>".to_string(),
    }
}

fn type_text(t: &TypeName) -> String {
    format!("{}{}", t.name, "[]".repeat(t.dims as usize))
}

/// Placeholder shape of a call-like expression: its callee identity plus the
/// number of unfilled slots once arguments, dims, and indices are replaced
/// by holes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceholderShape {
    pub expr_type: ExprType,
    /// Method name, created type name, or indexed array expression.
    pub head: String,
    /// Canonical receiver text, when there is one.
    pub receiver: Option<String>,
    pub holes: usize,
    pub rendered: String,
}

/// Replace nested argument positions, array dims, and array indices with
/// holes. Returns `None` for expressions that take no placeholder form.
pub fn placeholderize(e: &Expr) -> Option<PlaceholderShape> {
    match e {
        Expr::Call {
            recv, name, args, ..
        } => {
            let receiver = recv.as_ref().map(|r| render_expr(r));
            Some(PlaceholderShape {
                expr_type: ExprType::MethodInvocation,
                head: name.clone(),
                receiver: receiver.clone(),
                holes: args.len(),
                rendered: render_call(receiver.as_deref(), name, args.len()),
            })
        }
        Expr::New { ty, args, .. } => Some(PlaceholderShape {
            expr_type: ExprType::ObjectCreation,
            head: simple_name(&ty.name).to_string(),
            receiver: None,
            holes: args.len(),
            rendered: render_new(simple_name(&ty.name), args.len()),
        }),
        Expr::NewArray { elem, dims, .. } => Some(PlaceholderShape {
            expr_type: ExprType::ArrayCreation,
            head: simple_name(&elem.name).to_string(),
            receiver: None,
            holes: dims.len().max(1),
            rendered: render_new_array(simple_name(&elem.name)),
        }),
        Expr::Index { base, .. } => {
            let b = render_expr(base);
            Some(PlaceholderShape {
                expr_type: ExprType::ArrayAccess,
                head: b.clone(),
                receiver: None,
                holes: 1,
                rendered: render_index(&b),
            })
        }
        _ => None,
    }
}

pub fn simple_name(dotted: &str) -> &str {
    dotted.rsplit('.').next().unwrap_or(dotted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_expression;

    #[test]
    fn object_creation_two_holes() {
        let e = parse_expression("new Point(3, 4)").unwrap();
        let p = placeholderize(&e).unwrap();
        assert_eq!(p.rendered, "new Point(, )");
        assert_eq!(p.holes, 2);
    }

    #[test]
    fn array_access_one_hole() {
        let e = parse_expression("arr[i]").unwrap();
        let p = placeholderize(&e).unwrap();
        assert_eq!(p.rendered, "arr[]");
        assert_eq!(p.holes, 1);
    }

    #[test]
    fn method_invocation_one_hole_renders_empty_parens() {
        let e = parse_expression("f(s)").unwrap();
        let p = placeholderize(&e).unwrap();
        assert_eq!(p.rendered, "f()");
        assert_eq!(p.holes, 1);
        // distinct from a zero-argument call by hole count
        let zero = parse_expression("f()").unwrap();
        let pz = placeholderize(&zero).unwrap();
        assert_eq!(pz.holes, 0);
        assert_eq!(pz.rendered, "f()");
    }

    #[test]
    fn rendered_placeholders_reparse_to_same_kind() {
        for text in ["new Point(, )", "arr[]", "new int[]", "recv.m(, , )"] {
            let e = parse_expression(text).unwrap();
            let p = placeholderize(&e).unwrap();
            assert_eq!(p.rendered, text);
        }
    }
}
