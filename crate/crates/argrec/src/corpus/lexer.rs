//! Lexer for the Java subset. Comments are stripped; everything else becomes
//! a token. Concatenating token texts reproduces the input with whitespace
//! removed and comments dropped.

use super::token::{is_keyword, Token, TokenKind};
use super::ParseError;

const PUNCT2: &[&str] = &[
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=", "<<", ">>", "->", "::",
];

pub fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! advance {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance!();
            continue;
        }
        // comments
        if c == '/' && i + 1 < chars.len() {
            if chars[i + 1] == '/' {
                while i < chars.len() && chars[i] != '\n' {
                    advance!();
                }
                continue;
            }
            if chars[i + 1] == '*' {
                let (sl, sc) = (line, col);
                advance!();
                advance!();
                let mut closed = false;
                while i < chars.len() {
                    if chars[i] == '*' && i + 1 < chars.len() && chars[i + 1] == '/' {
                        advance!();
                        advance!();
                        closed = true;
                        break;
                    }
                    advance!();
                }
                if !closed {
                    return Err(ParseError::new(sl, sc, "unterminated block comment"));
                }
                continue;
            }
        }
        let (tl, tc) = (line, col);
        // identifiers / keywords
        if c.is_alphabetic() || c == '_' || c == '$' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$')
            {
                advance!();
            }
            let text: String = chars[start..i].iter().collect();
            let kind = if is_keyword(&text) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
            tokens.push(Token {
                text,
                kind,
                line: tl,
                col: tc,
            });
            continue;
        }
        // numbers
        if c.is_ascii_digit() {
            let start = i;
            let mut is_float = false;
            if c == '0' && i + 1 < chars.len() && (chars[i + 1] == 'x' || chars[i + 1] == 'X') {
                advance!();
                advance!();
                while i < chars.len() && chars[i].is_ascii_hexdigit() {
                    advance!();
                }
            } else {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '_') {
                    advance!();
                }
                if i < chars.len()
                    && chars[i] == '.'
                    && i + 1 < chars.len()
                    && chars[i + 1].is_ascii_digit()
                {
                    is_float = true;
                    advance!();
                    while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '_') {
                        advance!();
                    }
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    is_float = true;
                    advance!();
                    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                        advance!();
                    }
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        advance!();
                    }
                }
            }
            if i < chars.len() {
                match chars[i] {
                    'l' | 'L' => advance!(),
                    'f' | 'F' | 'd' | 'D' => {
                        is_float = true;
                        advance!();
                    }
                    _ => {}
                }
            }
            let text: String = chars[start..i].iter().collect();
            tokens.push(Token {
                text,
                kind: if is_float {
                    TokenKind::FloatLit
                } else {
                    TokenKind::IntLit
                },
                line: tl,
                col: tc,
            });
            continue;
        }
        // string literal
        if c == '"' {
            let start = i;
            advance!();
            let mut closed = false;
            while i < chars.len() {
                match chars[i] {
                    '\\' => {
                        advance!();
                        if i < chars.len() {
                            advance!();
                        }
                    }
                    '"' => {
                        advance!();
                        closed = true;
                        break;
                    }
                    '\n' => break,
                    _ => advance!(),
                }
            }
            if !closed {
                return Err(ParseError::new(tl, tc, "unterminated string literal"));
            }
            tokens.push(Token {
                text: chars[start..i].iter().collect(),
                kind: TokenKind::StringLit,
                line: tl,
                col: tc,
            });
            continue;
        }
        // char literal
        if c == '\'' {
            let start = i;
            advance!();
            let mut closed = false;
            while i < chars.len() {
                match chars[i] {
                    '\\' => {
                        advance!();
                        if i < chars.len() {
                            advance!();
                        }
                    }
                    '\'' => {
                        advance!();
                        closed = true;
                        break;
                    }
                    '\n' => break,
                    _ => advance!(),
                }
            }
            if !closed {
                return Err(ParseError::new(tl, tc, "unterminated character literal"));
            }
            tokens.push(Token {
                text: chars[start..i].iter().collect(),
                kind: TokenKind::CharLit,
                line: tl,
                col: tc,
            });
            continue;
        }
        // punctuation, longest match first
        let pair: String = chars[i..chars.len().min(i + 2)].iter().collect();
        if PUNCT2.contains(&pair.as_str()) {
            advance!();
            advance!();
            tokens.push(Token {
                text: pair,
                kind: TokenKind::Punct,
                line: tl,
                col: tc,
            });
            continue;
        }
        if "(){}[];,.<>=+-*/%!&|^~?:@".contains(c) {
            advance!();
            tokens.push(Token {
                text: c.to_string(),
                kind: TokenKind::Punct,
                line: tl,
                col: tc,
            });
            continue;
        }
        return Err(ParseError::new(
            tl,
            tc,
            format!("unexpected character '{c}'"),
        ));
    }
    Ok(tokens)
}
