use std::fmt;

use super::ParseError;
use crate::ast::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    TyVar(String),
    Int(i64),
    Backslash,
    /// `/\`
    BigLambda,
    Dot,
    Colon,
    Comma,
    Semi,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Minus,
    /// `->`
    Arrow,
    Plus,
    Eq,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::TyVar(s) => write!(f, "`'{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Backslash => f.write_str("`\\`"),
            Tok::BigLambda => f.write_str("`/\\`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let span = Span::new(line, col);
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump!();
            }
            continue;
        }
        let word = |first: Option<char>, chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let mut s: String = first.into_iter().collect();
            while let Some(&c) = chars.peek() {
                if !is_ident_continue(c) {
                    break;
                }
                s.push(c);
                chars.next();
            }
            s
        };
        let tok = if is_ident_start(c) {
            let s = word(None, &mut chars);
            col += s.chars().count() as u32;
            Tok::Ident(s)
        } else if c == '\'' {
            bump!();
            match chars.peek() {
                Some(&c) if is_ident_start(c) => {
                    let s = word(None, &mut chars);
                    col += s.chars().count() as u32;
                    Tok::TyVar(s)
                }
                _ => {
                    return Err(ParseError::new(span, ["type variable name"], "`'`"));
                }
            }
        } else if c.is_ascii_digit() || c == '-' {
            bump!();
            if c == '-' {
                match chars.peek() {
                    Some('>') => {
                        bump!();
                        out.push((Tok::Arrow, span));
                        continue;
                    }
                    Some(d) if d.is_ascii_digit() => {}
                    _ => {
                        out.push((Tok::Minus, span));
                        continue;
                    }
                }
            }
            let mut digits = String::from(c);
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                bump!();
            }
            match digits.parse::<i64>() {
                Ok(n) => Tok::Int(n),
                Err(_) => {
                    return Err(ParseError::new(
                        span,
                        ["64-bit integer literal"],
                        format!("`{digits}`"),
                    ))
                }
            }
        } else {
            bump!();
            match c {
                '\\' => Tok::Backslash,
                '/' if chars.peek() == Some(&'\\') => {
                    bump!();
                    Tok::BigLambda
                }
                '/' => Tok::Slash,
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '+' => Tok::Plus,
                '=' => Tok::Eq,
                other => {
                    return Err(ParseError::new(span, ["token"], format!("`{other}`")));
                }
            }
        };
        out.push((tok, span));
    }
    out.push((Tok::Eof, Span::new(line, col)));
    Ok(out)
}
