//! Gold matching: does a recommended candidate count as the expected
//! argument?
//!
//! A candidate matches when (1) the texts are token-equal after
//! canonicalization (`this.f` standardizes to `f`), (2) both are literals
//! of the same expression type (defaults stand in for unpredictable
//! values), or (3) both take the same placeholderized shape: call-like
//! expressions with the same callee/type, receiver, and hole count.

use crate::candgen::{placeholderize, Candidate};
use crate::corpus::lexer::lex;
use crate::corpus::request::GoldArg;
use crate::corpus::parse_expression;

/// Token texts after lexing, with a leading `this.` stripped.
fn canon_tokens(text: &str) -> Option<Vec<String>> {
    let toks = lex(text).ok()?;
    let mut texts: Vec<String> = toks
        .iter()
        .filter(|t| !t.text.is_empty())
        .map(|t| t.text.clone())
        .collect();
    if texts.len() >= 3 && texts[0] == "this" && texts[1] == "." {
        texts.drain(0..2);
    }
    Some(texts)
}

pub fn matches_gold(candidate: &Candidate, gold: &GoldArg) -> bool {
    // (1) canonicalized token equality
    if candidate.holes == 0 {
        if let (Some(a), Some(b)) = (canon_tokens(&candidate.rendered), canon_tokens(&gold.text))
        {
            if a == b {
                return true;
            }
        }
    }
    let gold_type = gold.expr_type();
    // (2) literals of the same expression type match by default-value rule
    if candidate.expr_type.is_literal() && candidate.expr_type == gold_type {
        return true;
    }
    // (3) same placeholderized shape
    if candidate.holes > 0 {
        if let Some(gold_shape) = placeholderize(&gold.expr) {
            if let Ok(cand_expr) = parse_expression(&candidate.rendered) {
                if let Some(cand_shape) = placeholderize(&cand_expr) {
                    return cand_shape.expr_type == gold_shape.expr_type
                        && cand_shape.head == gold_shape.head
                        && canon_opt(&cand_shape.receiver) == canon_opt(&gold_shape.receiver)
                        && candidate.holes == gold_shape.holes;
                }
            }
        }
    }
    false
}

fn canon_opt(r: &Option<String>) -> Option<Vec<String>> {
    r.as_ref().and_then(|t| canon_tokens(t))
}

/// Convenience over a ranked list: 1-based rank of the first match.
pub fn gold_rank<F>(
    items: &[crate::pipeline::RankedCandidate<F>],
    gold: &GoldArg,
) -> Option<usize> {
    items
        .iter()
        .position(|i| matches_gold(&i.candidate, gold))
        .map(|p| p + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candgen::ExprType;
    use crate::typesys::ResolvedType;

    fn cand(expr_type: ExprType, rendered: &str, holes: usize) -> Candidate {
        Candidate {
            expr_type,
            rendered: rendered.to_string(),
            result_type: ResolvedType::object(),
            holes,
            is_variable: false,
            recent_ident: None,
            var_prov: None,
            static_member_owner: None,
            origin: "test".into(),
        }
    }

    fn gold(text: &str) -> GoldArg {
        GoldArg {
            text: text.to_string(),
            expr: parse_expression(text).unwrap(),
        }
    }

    #[test]
    fn this_prefix_standardizes() {
        assert!(matches_gold(
            &cand(ExprType::FieldAccess, "this.count", 0),
            &gold("count")
        ));
        assert!(matches_gold(
            &cand(ExprType::SimpleName, "count", 0),
            &gold("this.count")
        ));
    }

    #[test]
    fn default_literal_matches_same_kind() {
        assert!(matches_gold(
            &cand(ExprType::StringLiteral, "\"<EMPTY_STRING>\"", 0),
            &gold("\"hello\"")
        ));
        assert!(matches_gold(
            &cand(ExprType::NumberLiteral, "0", 0),
            &gold("42")
        ));
        // different literal kinds do not cross-match
        assert!(!matches_gold(
            &cand(ExprType::NumberLiteral, "0", 0),
            &gold("\"42\"")
        ));
    }

    #[test]
    fn plain_mismatch() {
        assert!(!matches_gold(&cand(ExprType::SimpleName, "a", 0), &gold("b")));
    }

    #[test]
    fn placeholder_shapes() {
        assert!(matches_gold(
            &cand(ExprType::ObjectCreation, "new Point(, )", 2),
            &gold("new Point(3, 4)")
        ));
        assert!(!matches_gold(
            &cand(ExprType::ObjectCreation, "new Point(, )", 2),
            &gold("new Point(3)")
        ));
        assert!(matches_gold(
            &cand(ExprType::ArrayAccess, "names[]", 1),
            &gold("names[i]")
        ));
        assert!(matches_gold(
            &cand(ExprType::MethodInvocation, "f()", 1),
            &gold("f(x)")
        ));
        // the zero-argument call is a different shape than the one-hole call
        assert!(!matches_gold(
            &cand(ExprType::MethodInvocation, "f()", 1),
            &gold("f()")
        ));
        // receivers must agree
        assert!(matches_gold(
            &cand(ExprType::MethodInvocation, "tok.getImage()", 1),
            &gold("tok.getImage(x)")
        ));
        assert!(!matches_gold(
            &cand(ExprType::MethodInvocation, "other.getImage()", 1),
            &gold("tok.getImage(x)")
        ));
    }

    #[test]
    fn whitespace_is_irrelevant() {
        assert!(matches_gold(
            &cand(ExprType::MethodInvocation, "tokenID.getImage()", 0),
            &gold("tokenID . getImage(  )")
        ));
    }
}
