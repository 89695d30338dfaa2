//! Identifier sub-token splitting.
//!
//! Identifiers split on `under_score` boundaries and on camelCase
//! transitions; trailing digits stay attached to the alphabetic run in
//! front of them (`name2` stays one sub-token). Everything is lowercased.

/// Split an identifier into lowercase sub-tokens.
pub fn split_subtokens(identifier: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in identifier.chars() {
        if ch == '_' || ch == '$' {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            prev = None;
            continue;
        }
        if ch.is_uppercase() {
            if let Some(p) = prev {
                // split only on lower-to-upper (digits count as lower)
                if p.is_lowercase() || p.is_ascii_digit() {
                    if !cur.is_empty() {
                        out.push(std::mem::take(&mut cur));
                    }
                }
            }
        }
        cur.extend(ch.to_lowercase());
        prev = Some(ch);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn underscore_convention() {
        assert_eq!(
            split_subtokens("PROP_BACKGROUND_DRAWING"),
            vec!["prop", "background", "drawing"]
        );
    }

    #[test]
    fn camel_case_convention() {
        assert_eq!(split_subtokens("getUserName2"), vec!["get", "user", "name2"]);
    }

    #[test]
    fn single_letter_identity() {
        assert_eq!(split_subtokens("x"), vec!["x"]);
    }

    #[test]
    fn digit_then_upper_splits() {
        assert_eq!(split_subtokens("name2Foo"), vec!["name2", "foo"]);
    }

    #[test]
    fn upper_runs_stay_together() {
        // only lower-to-upper transitions split
        assert_eq!(split_subtokens("HTMLParser"), vec!["htmlparser"]);
    }

    #[test]
    fn empty_segments_dropped() {
        assert_eq!(split_subtokens("__a__b__"), vec!["a", "b"]);
    }

    proptest! {
        #[test]
        fn idempotent_on_joined_output(ident in "[a-zA-Z][a-zA-Z0-9_]{0,24}") {
            let once = split_subtokens(&ident);
            let joined = once.join("_");
            prop_assert_eq!(split_subtokens(&joined), once);
        }
    }
}
