use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Bar,
    Eq,
    Neq,
    Tilde,
    Amp,
    Arrow,
    DArrow,
    Slash,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::If => "`:-`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, msg: String| Error::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' || c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (l0, c0) = (line, col);
        let next = chars.get(i + 1).copied();
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '.' => (Tok::Dot, 1),
            '|' => (Tok::Bar, 1),
            '=' => (Tok::Eq, 1),
            '~' => (Tok::Tilde, 1),
            '&' => (Tok::Amp, 1),
            '/' => (Tok::Slash, 1),
            ':' if next == Some('-') => (Tok::If, 2),
            '!' if next == Some('=') => (Tok::Neq, 2),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => (Tok::DArrow, 3),
            c if is_ident_start(c) => {
                let start = i;
                let mut j = i;
                while j < chars.len() && is_ident_start(chars[j]) {
                    j += 1;
                }
                let s: String = chars[start..j].iter().collect();
                (Tok::Ident(s), j - start)
            }
            other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned {
            tok,
            line: l0,
            col: c0,
        });
        i += len;
        col += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}
