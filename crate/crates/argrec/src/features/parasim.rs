//! Parameter similarity: sub-token overlap between a candidate's name and
//! the formal parameter's name.
//!
//! For names c and p with `terms()` the sub-token decomposition,
//!
//! ```text
//! parasim(c, p) = (|com_terms(c, p)| + |com_terms(p, c)|) / (|terms(c)| + |terms(p)|)
//! ```
//!
//! where `com_terms(a, b)` is the longest subsequence of `terms(a)` whose
//! elements all occur in `terms(b)`. Since any qualifying element can join
//! the subsequence, that longest subsequence is simply every element of
//! `terms(a)` that occurs in `terms(b)`, in order.

use crate::corpus::lexer::lex;
use crate::corpus::subtok::split_subtokens;
use crate::corpus::token::TokenKind;
use crate::scalar::Real;

/// Sub-token terms of every identifier in a rendered expression. Literals
/// and punctuation contribute nothing.
pub fn identifier_terms(rendered: &str) -> Vec<String> {
    match lex(rendered) {
        Ok(tokens) => tokens
            .iter()
            .filter(|t| t.kind == TokenKind::Ident)
            .flat_map(|t| split_subtokens(&t.text))
            .collect(),
        Err(_) => Vec::new(),
    }
}

/// Number of elements of `a` that occur in `b` (multiset membership).
pub fn com_terms_len(a: &[String], b: &[String]) -> usize {
    a.iter().filter(|t| b.contains(t)).count()
}

/// Raw similarity of two term lists, in [0, 1]. Empty-on-both-sides is 0.
pub fn parasim_of_terms<F: Real>(c: &[String], p: &[String]) -> F {
    let den = c.len() + p.len();
    if den == 0 {
        return F::zero();
    }
    let num = com_terms_len(c, p) + com_terms_len(p, c);
    F::from_len(num) / F::from_len(den)
}

/// Similarity between a candidate's rendered name and a parameter name.
/// Candidates without identifiers (literals, holes) score 0 pre-normalization.
pub fn parasim<F: Real>(candidate: &str, param: &str) -> F {
    let c = identifier_terms(candidate);
    if c.is_empty() {
        return F::zero();
    }
    let p = split_subtokens(param);
    parasim_of_terms(&c, &p)
}

/// Map a raw similarity into [x, 1] so that zero similarity cannot zero out
/// a multiplicative score.
pub fn normalize_parasim<F: Real>(v: F, x: F) -> F {
    x + v * (F::one() - x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity() {
        assert_eq!(parasim::<f64>("name", "name"), 1.0);
    }

    #[test]
    fn disjoint() {
        assert_eq!(parasim::<f64>("foo", "bar"), 0.0);
    }

    #[test]
    fn partial_overlap() {
        // terms: [user, name] vs [name]; one common element each way
        let v: f64 = parasim("userName", "name");
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn method_invocation_uses_full_identifier_chain() {
        let terms = identifier_terms("tokenID.getImage()");
        assert_eq!(terms, vec!["token", "id", "get", "image"]);
    }

    #[test]
    fn literals_score_zero() {
        assert_eq!(parasim::<f64>("\"<EMPTY_STRING>\"", "name"), 0.0);
        assert_eq!(parasim::<f64>("0", "count"), 0.0);
    }

    #[test]
    fn normalization_bounds() {
        assert_eq!(normalize_parasim(0.0f64, 0.1), 0.1);
        assert_eq!(normalize_parasim(1.0f64, 0.1), 1.0);
        assert!((normalize_parasim(0.5f64, 0.1) - 0.55).abs() < 1e-12);
    }

    /// Brute-force oracle: enumerate every subsequence of `a`, keep those
    /// whose elements all occur in `b`, return the longest length.
    fn com_terms_oracle(a: &[String], b: &[String]) -> usize {
        let n = a.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let picked: Vec<&String> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &a[i]).collect();
            if picked.iter().all(|t| b.contains(t)) {
                best = best.max(picked.len());
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_subsequence_enumeration_oracle(
            a in proptest::collection::vec("[a-d]{1,3}", 0..6),
            b in proptest::collection::vec("[a-d]{1,3}", 0..6),
        ) {
            prop_assert_eq!(com_terms_len(&a, &b), com_terms_oracle(&a, &b));
        }

        #[test]
        fn normalization_is_strictly_monotone(v1 in 0.0f64..1.0, v2 in 0.0f64..1.0) {
            prop_assume!(v1 < v2);
            prop_assert!(normalize_parasim(v1, 0.1) < normalize_parasim(v2, 0.1));
        }
    }
}
