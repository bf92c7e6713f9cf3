// Copyright 2026 The pmst Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use alloc::string::String;
use alloc::vec::Vec;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// `INT`, `INT/INT` or `INT.DIGITS`, kept as source text.
    Num(String),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Dot,
    Bar,
    Arrow,
    Eq,
    Oplus,
    Amp,
    Bang,
    Quest,
    Lt,
    Gt,
    Minus,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        use alloc::format;
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Bar => "|",
            Tok::Arrow => "->",
            Tok::Eq => "=",
            Tok::Oplus => "(+)",
            Tok::Amp => "&",
            Tok::Bang => "!",
            Tok::Quest => "?",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Minus => "-",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let bump = |i: &mut usize, line: &mut usize, col: &mut usize| {
        let c = chars[*i];
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump(&mut i, &mut line, &mut col);
            }
            continue;
        }
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: l0, col: c0 });
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump(&mut i, &mut line, &mut col);
            }
            push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            let digits = |i: &mut usize, line: &mut usize, col: &mut usize| {
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    bump(i, line, col);
                }
            };
            digits(&mut i, &mut line, &mut col);
            let next_digit = |k: usize| k < chars.len() && chars[k].is_ascii_digit();
            if i < chars.len() && (chars[i] == '/' || chars[i] == '.') && next_digit(i + 1) {
                bump(&mut i, &mut line, &mut col);
                digits(&mut i, &mut line, &mut col);
            }
            push(&mut out, Tok::Num(chars[start..i].iter().collect()));
            continue;
        }
        if c == '"' {
            bump(&mut i, &mut line, &mut col);
            let mut s = String::new();
            loop {
                let Some(&d) = chars.get(i) else {
                    return Err(ParseError::syntax(l0, c0, "closing `\"`"));
                };
                bump(&mut i, &mut line, &mut col);
                match d {
                    '"' => break,
                    '\\' => {
                        let Some(&e) = chars.get(i) else {
                            return Err(ParseError::syntax(line, col, "escaped character"));
                        };
                        bump(&mut i, &mut line, &mut col);
                        match e {
                            '"' | '\\' => s.push(e),
                            'n' => s.push('\n'),
                            't' => s.push('\t'),
                            _ => return Err(ParseError::syntax(line, col, "one of `\\\"`, `\\\\`, `\\n`, `\\t`")),
                        }
                    }
                    _ => s.push(d),
                }
            }
            push(&mut out, Tok::Str(s));
            continue;
        }
        let two = |a: char, b: char| c == a && chars.get(i + 1) == Some(&b);
        let (tok, len) = if c == '(' && chars.get(i + 1) == Some(&'+') && chars.get(i + 2) == Some(&')') {
            (Tok::Oplus, 3)
        } else if two('-', '>') {
            (Tok::Arrow, 2)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBrack,
                ']' => Tok::RBrack,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                '|' => Tok::Bar,
                '=' => Tok::Eq,
                '&' => Tok::Amp,
                '!' => Tok::Bang,
                '?' => Tok::Quest,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '-' => Tok::Minus,
                _ => return Err(ParseError::syntax(l0, c0, "a token")),
            };
            (t, 1)
        };
        for _ in 0..len {
            bump(&mut i, &mut line, &mut col);
        }
        push(&mut out, tok);
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_and_dots() {
        assert_eq!(
            toks("0.6: l(v). 0"),
            [
                Tok::Num("0.6".into()),
                Tok::Colon,
                Tok::Ident("l".into()),
                Tok::LParen,
                Tok::Ident("v".into()),
                Tok::RParen,
                Tok::Dot,
                Tok::Num("0".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks("3/5")[0], Tok::Num("3/5".into()));
    }

    #[test]
    fn oplus_arrow_comment() {
        assert_eq!(toks("(+) -> # x\n&"), [Tok::Oplus, Tok::Arrow, Tok::Amp, Tok::Eof]);
        assert_eq!(toks("( 0 )")[0], Tok::LParen);
        assert!(lex("( + )").is_err());
    }

    #[test]
    fn strings_and_positions() {
        let t = lex("a\n  \"x\\\"y\"").unwrap();
        assert_eq!(t[1].tok, Tok::Str("x\"y".into()));
        assert_eq!((t[1].line, t[1].col), (2, 3));
        assert!(lex("\"open").is_err());
        assert!(lex("$").is_err());
    }
}
