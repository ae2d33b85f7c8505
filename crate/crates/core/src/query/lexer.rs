//! Tokenizer shared by the query and transformation parsers.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct SyntaxError {
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl SyntaxError {
    pub fn at(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    /// Single-quoted raw text, used for attribute default literals.
    Quoted(String),
    /// `-->`
    Arrow,
    /// `<>--`
    Diamond,
    /// `<==`
    Feed,
    /// `:=`
    Assign,
    /// `->`
    MapsTo,
    /// `<>`
    NotEq,
    Eq,
    Colon,
    Comma,
    Semi,
    Dot,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Amp,
    At,
    Plus,
    Star,
    Bar,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Int(i) => format!("integer {i}"),
            Tok::Quoted(s) => format!("'{s}'"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Arrow => "-->",
            Tok::Diamond => "<>--",
            Tok::Feed => "<==",
            Tok::Assign => ":=",
            Tok::MapsTo => "->",
            Tok::NotEq => "<>",
            Tok::Eq => "=",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Amp => "&",
            Tok::At => "@",
            Tok::Plus => "+",
            Tok::Star => "*",
            Tok::Bar => "|",
            _ => "?",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const PUNCT: &[(&str, Tok)] = &[
    ("<>--", Tok::Diamond),
    ("-->", Tok::Arrow),
    ("<==", Tok::Feed),
    ("<>", Tok::NotEq),
    (":=", Tok::Assign),
    ("->", Tok::MapsTo),
    ("=", Tok::Eq),
    (":", Tok::Colon),
    (",", Tok::Comma),
    (";", Tok::Semi),
    (".", Tok::Dot),
    ("{", Tok::LBrace),
    ("}", Tok::RBrace),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("[", Tok::LBracket),
    ("]", Tok::RBracket),
    ("&", Tok::Amp),
    ("@", Tok::At),
    ("+", Tok::Plus),
    ("*", Tok::Star),
    ("|", Tok::Bar),
];

/// Tokenizes `text`; `//` starts a comment running to the end of the line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut column = 1u32;

    macro_rules! advance {
        ($n:expr) => {
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    column = 1;
                } else {
                    column += 1;
                }
                i += 1;
            }
        };
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance!(1);
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                pos,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance!(1);
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse().map_err(|_| {
                SyntaxError::at(pos, format!("integer literal {digits} out of range"))
            })?;
            out.push(Token {
                tok: Tok::Int(n),
                pos,
            });
            continue;
        }
        if c == '"' {
            advance!(1);
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(SyntaxError::at(pos, "unterminated string literal")),
                    Some('"') => {
                        advance!(1);
                        break;
                    }
                    Some('\\') => {
                        let escaped = match chars.get(i + 1) {
                            Some('n') => '\n',
                            Some('t') => '\t',
                            Some('"') => '"',
                            Some('\\') => '\\',
                            _ => {
                                return Err(SyntaxError::at(
                                    Pos { line, column },
                                    "invalid escape sequence",
                                ))
                            }
                        };
                        s.push(escaped);
                        advance!(2);
                    }
                    Some(&ch) => {
                        s.push(ch);
                        advance!(1);
                    }
                }
            }
            out.push(Token {
                tok: Tok::Str(s),
                pos,
            });
            continue;
        }
        if c == '\'' {
            advance!(1);
            let start = i;
            while i < chars.len() && chars[i] != '\'' {
                advance!(1);
            }
            if i >= chars.len() {
                return Err(SyntaxError::at(pos, "unterminated quoted literal"));
            }
            let s: String = chars[start..i].iter().collect();
            advance!(1);
            out.push(Token {
                tok: Tok::Quoted(s),
                pos,
            });
            continue;
        }
        let rest = &chars[i..];
        let matched = PUNCT.iter().find(|(sym, _)| {
            let sym: Vec<char> = sym.chars().collect();
            rest.starts_with(&sym)
        });
        match matched {
            Some((sym, tok)) => {
                advance!(sym.chars().count());
                out.push(Token {
                    tok: tok.clone(),
                    pos,
                });
            }
            None => return Err(SyntaxError::at(pos, format!("unexpected character `{c}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, column },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_prefer_longest_match() {
        assert_eq!(
            toks("a <>--{x} -->+ <> -> <== :="),
            vec![
                Tok::Ident("a".into()),
                Tok::Diamond,
                Tok::LBrace,
                Tok::Ident("x".into()),
                Tok::RBrace,
                Tok::Arrow,
                Tok::Plus,
                Tok::NotEq,
                Tok::MapsTo,
                Tok::Feed,
                Tok::Assign,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn literals_and_comments() {
        assert_eq!(
            toks("'\"--\"' \"a\\\"b\" 42 // trailing\nx"),
            vec![
                Tok::Quoted("\"--\"".into()),
                Tok::Str("a\"b".into()),
                Tok::Int(42),
                Tok::Ident("x".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_track_lines() {
        let t = tokenize("a\n  bc").unwrap();
        assert_eq!(t[1].pos, Pos { line: 2, column: 3 });
    }

    #[test]
    fn errors_carry_location() {
        let e = tokenize("x\n \"open").unwrap_err();
        assert_eq!((e.line, e.column), (2, 2));
        let e = tokenize("a # b").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
    }
}
