//! Positional features of variable candidates: how recently a variable was
//! created (scope distance) and accessed (line distance).

use crate::corpus::request::ArRequest;
use crate::corpus::scope::BlockId;
use crate::corpus::token::TokenKind;

/// Where a variable candidate was created, for the creating-distance rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarProvenance {
    /// Local or parameter: the block in the scope tree that declares it.
    Scoped(BlockId),
    /// Field of the enclosing class or its supertypes: created in the block
    /// containing all blocks of the containing method.
    EnclosingField,
    /// Static field of another type: created in the outermost block.
    Global,
}

/// Scope distance between the block where the candidate is created and the
/// closest block containing the call. Defined whenever the candidate is
/// accessible at the request, hence `None` signals a contract violation.
pub fn creating_distance(prov: VarProvenance, req: &ArRequest) -> Option<u32> {
    let scopes = &req.scopes;
    let call_block = scopes.block_at(req.call_start);
    let created = match prov {
        VarProvenance::Scoped(b) => b,
        VarProvenance::EnclosingField => scopes.enclosing_method_body(req.call_start)?,
        VarProvenance::Global => scopes.root(),
    };
    scopes.scope_dis(created, call_block)
}

/// Line distance to the most recent prior line in the containing method
/// where the identifier is defined or used; `None` when it never appears
/// before the call (inter-procedural depth is zero).
pub fn accessing_recentness(name: &str, req: &ArRequest) -> Option<u32> {
    let mut last_line: Option<u32> = None;
    for tok in &req.unit.tokens {
        let p = tok.pos();
        if p >= req.location {
            break;
        }
        if p < req.method_span.start {
            continue;
        }
        if tok.kind == TokenKind::Ident && tok.text == name {
            last_line = Some(tok.line);
        }
    }
    last_line.map(|l| req.location.line.abs_diff(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{extract_requests, parse_unit};
    use crate::typesys::{build_type_index, builtin_stubs};
    use std::sync::Arc;

    fn request(src: &str, callee: &str) -> ArRequest {
        let unit = Arc::new(parse_unit("A.java", src).unwrap());
        let index = build_type_index(&[Arc::clone(&unit)], &builtin_stubs()).unwrap();
        extract_requests(&unit, &index)
            .into_iter()
            .find(|r| r.callee.name() == callee)
            .unwrap()
    }

    fn block_of(req: &ArRequest, var: &str) -> BlockId {
        for (i, b) in req.scopes.blocks.iter().enumerate() {
            if b.vars.iter().any(|v| v.name == var) {
                return BlockId(i);
            }
        }
        panic!("no block declares {var}");
    }

    #[test]
    fn same_block_distance_zero() {
        let src = r#"
class A {
    void use(int q) {}
    void m() {
        int v = 1;
        use(v);
    }
}
"#;
        let req = request(src, "use");
        let b = block_of(&req, "v");
        assert_eq!(creating_distance(VarProvenance::Scoped(b), &req), Some(0));
    }

    #[test]
    fn enclosing_block_distance_one() {
        let src = r#"
class Provider {}
class A {
    void ignoreProvider(Object u, Object p) {}
    void m(Object user) {
        Provider provider = new Provider();
        if (user != null) {
            ignoreProvider(user, provider);
        }
    }
}
"#;
        let req = request(src, "ignoreProvider");
        let b = block_of(&req, "provider");
        assert_eq!(creating_distance(VarProvenance::Scoped(b), &req), Some(1));
    }

    #[test]
    fn field_distance_counts_blocks_below_method_body() {
        let src = r#"
class A {
    int field;
    void use(int q) {}
    void m(boolean c) {
        if (c) {
            if (c) {
                if (c) {
                    use(field);
                }
            }
        }
    }
}
"#;
        let req = request(src, "use");
        assert_eq!(
            creating_distance(VarProvenance::EnclosingField, &req),
            Some(3)
        );
    }

    #[test]
    fn recentness_same_line_prior_use_is_zero() {
        let src = r#"
class A {
    int f(int q) { return q; }
    void g(int a, int b) {}
    void m(int user) {
        g(f(user), user);
    }
}
"#;
        // the second argument's request sees `user` earlier on the same line
        let unit = Arc::new(parse_unit("A.java", src).unwrap());
        let index = build_type_index(&[Arc::clone(&unit)], &builtin_stubs()).unwrap();
        let reqs = extract_requests(&unit, &index);
        let second = reqs
            .iter()
            .find(|r| r.callee.name() == "g" && r.pos == 2)
            .unwrap();
        assert_eq!(accessing_recentness("user", second), Some(0));
    }

    #[test]
    fn recentness_one_line_above() {
        let src = r#"
class Provider {}
class A {
    void take(Object p) {}
    void m() {
        Provider provider = new Provider();
        take(provider);
    }
}
"#;
        let req = request(src, "take");
        assert_eq!(accessing_recentness("provider", &req), Some(1));
    }

    #[test]
    fn field_never_referenced_in_method_is_null() {
        let src = r#"
class A {
    int field;
    void use(int q) {}
    void m() {
        use(field);
    }
}
"#;
        let req = request(src, "use");
        assert_eq!(accessing_recentness("field", &req), None);
    }

    #[test]
    fn distance_equals_depth_difference_under_containment() {
        let src = r#"
class A {
    void use(int q) {}
    void m(boolean c) {
        int v = 0;
        if (c) {
            if (c) {
                use(v);
            }
        }
    }
}
"#;
        let req = request(src, "use");
        let b = block_of(&req, "v");
        let call_block = req.scopes.block_at(req.call_start);
        let expected = req.scopes.depth(call_block) - req.scopes.depth(b);
        assert_eq!(
            creating_distance(VarProvenance::Scoped(b), &req),
            Some(expected)
        );
    }
}
