//! Type compatibility without casting.
//!
//! A candidate type t' fits an expected type t when t' = t, t' inherits
//! from t, t' widens implicitly to t (primitives), or t' boxes/unboxes into
//! one of the former. The `null` type fits every reference type. Strict
//! mode keeps only the identity and inheritance clauses.

use super::entry::{BaseType, ResolvedType, OBJECT};
use super::TypeIndex;

const WIDENING: [(&str, &[&str]); 7] = [
    ("byte", &["short", "int", "long", "float", "double"]),
    ("short", &["int", "long", "float", "double"]),
    ("char", &["int", "long", "float", "double"]),
    ("int", &["long", "float", "double"]),
    ("long", &["float", "double"]),
    ("float", &["double"]),
    ("double", &[]),
];

const BOXES: [(&str, &str); 8] = [
    ("int", "java.lang.Integer"),
    ("long", "java.lang.Long"),
    ("short", "java.lang.Short"),
    ("byte", "java.lang.Byte"),
    ("char", "java.lang.Character"),
    ("float", "java.lang.Float"),
    ("double", "java.lang.Double"),
    ("boolean", "java.lang.Boolean"),
];

pub fn widens(from: &str, to: &str) -> bool {
    WIDENING
        .iter()
        .find(|(p, _)| *p == from)
        .is_some_and(|(_, tos)| tos.contains(&to))
}

pub fn box_of(primitive: &str) -> Option<&'static str> {
    BOXES.iter().find(|(p, _)| *p == primitive).map(|(_, b)| *b)
}

pub fn unbox_of(boxed: &str) -> Option<&'static str> {
    BOXES.iter().find(|(_, b)| *b == boxed).map(|(p, _)| *p)
}

/// Reachability in the supertype graph, endpoints included.
pub fn named_inherits(index: &TypeIndex, sub: &str, sup: &str) -> bool {
    if sub == sup {
        return true;
    }
    index.supertype_closure(sub).iter().any(|t| t == sup)
}

/// Is `t_prime` usable where `t` is expected, without a cast?
pub fn is_compatible(index: &TypeIndex, t_prime: &ResolvedType, t: &ResolvedType) -> bool {
    compatible(index, t_prime, t, false)
}

pub fn is_compatible_strict(
    index: &TypeIndex,
    t_prime: &ResolvedType,
    t: &ResolvedType,
    strict: bool,
) -> bool {
    compatible(index, t_prime, t, strict)
}

fn compatible(index: &TypeIndex, t_prime: &ResolvedType, t: &ResolvedType, strict: bool) -> bool {
    let a = t_prime.erased();
    let b = t.erased();
    if a == b {
        return true;
    }
    if matches!(a.base, BaseType::Null) {
        return b.is_reference();
    }
    // arrays: covariant on reference element types, assignable to Object
    if a.dims > 0 {
        if b.dims == 0 {
            return matches!(&b.base, BaseType::Named(n) if n == OBJECT);
        }
        if a.dims == b.dims {
            if let (BaseType::Named(an), BaseType::Named(bn)) = (&a.base, &b.base) {
                return named_inherits(index, an, bn);
            }
        }
        return false;
    }
    if b.dims > 0 {
        return false;
    }
    match (&a.base, &b.base) {
        // box conversions never chain boxed-to-boxed, so reference-to-
        // reference compatibility is inheritance alone
        (BaseType::Named(an), BaseType::Named(bn)) => named_inherits(index, an, bn),
        (BaseType::Primitive(ap), BaseType::Primitive(bp)) => {
            if strict {
                false
            } else {
                widens(ap, bp)
            }
        }
        (BaseType::Primitive(ap), BaseType::Named(bn)) => {
            if strict {
                return false;
            }
            // boxing, then reference widening
            box_of(ap).is_some_and(|bx| named_inherits(index, bx, bn))
        }
        (BaseType::Named(an), BaseType::Primitive(bp)) => {
            if strict {
                return false;
            }
            // unboxing, then primitive widening
            unbox_of(an).is_some_and(|p| p == bp.as_str() || widens(p, bp))
        }
        _ => false,
    }
}
