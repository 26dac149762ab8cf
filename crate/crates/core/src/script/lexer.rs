//! Tokens of the formula and sequent syntax.

use std::fmt;

use crate::term::CorrelationTag;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    /// `,_i` or `,_o`
    CorrComma(CorrelationTag),
    /// `~i` or `~o`
    Tilde(CorrelationTag),
    Dot,
    Amp,
    Vee,
    Star,
    Arrow,
    BackArrow,
    Eq,
    Neq,
    Slash,
    Caret,
    Turnstile,
    Colon,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::CorrComma(t) => write!(f, "`,_{}`", t.suffix()),
            Tok::Tilde(t) => write!(f, "`~{}`", t.suffix()),
            other => write!(f, "`{}`", other.text()),
        }
    }
}

impl Tok {
    pub fn text(&self) -> &'static str {
        match self {
            Tok::Ident(_) => "identifier",
            Tok::Num(_) => "number",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::CorrComma(_) => ",_f",
            Tok::Tilde(_) => "~f",
            Tok::Dot => ".",
            Tok::Amp => "&",
            Tok::Vee => "\\/",
            Tok::Star => "*",
            Tok::Arrow => "->",
            Tok::BackArrow => "<-",
            Tok::Eq => "=",
            Tok::Neq => "/=",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Turnstile => "|-",
            Tok::Colon => ":",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    /// 1-based column of the first character.
    pub col: usize,
}

/// Position and the unexpected text; the parser adds the expected set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub col: usize,
    pub found: char,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokenize one line; `col0` is the column of the first character.
pub fn lex(text: &str, col0: usize) -> Result<Vec<Spanned>, LexError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = col0 + k;
        let next = chars.get(k + 1).copied();
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, col });
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && is_ident_char(chars[k]) {
                k += 1;
            }
            push(&mut out, Tok::Ident(chars[start..k].iter().collect()));
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            let n = s.parse().map_err(|_| LexError { col, found: c })?;
            push(&mut out, Tok::Num(n));
            continue;
        }
        let (tok, len) = match (c, next) {
            (',', Some('_')) => match chars.get(k + 2).copied().and_then(CorrelationTag::from_suffix) {
                Some(tag) if !chars.get(k + 3).copied().is_some_and(is_ident_char) => (Tok::CorrComma(tag), 3),
                _ => return Err(LexError { col, found: '_' }),
            },
            ('~', Some(s)) => match CorrelationTag::from_suffix(s) {
                Some(tag) => (Tok::Tilde(tag), 2),
                None => return Err(LexError { col, found: '~' }),
            },
            ('\\', Some('/')) => (Tok::Vee, 2),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('<', Some('-')) => (Tok::BackArrow, 2),
            ('/', Some('=')) => (Tok::Neq, 2),
            ('|', Some('-')) => (Tok::Turnstile, 2),
            (',', _) => (Tok::Comma, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('.', _) => (Tok::Dot, 1),
            ('&', _) => (Tok::Amp, 1),
            ('*', _) => (Tok::Star, 1),
            ('=', _) => (Tok::Eq, 1),
            ('/', _) => (Tok::Slash, 1),
            ('^', _) => (Tok::Caret, 1),
            (':', _) => (Tok::Colon, 1),
            _ => return Err(LexError { col, found: c }),
        };
        push(&mut out, tok);
        k += len;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s, 1).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn lexes_operators() {
        assert_eq!(
            toks("p -> q <- r \\/ s"),
            vec![
                Tok::Ident("p".into()),
                Tok::Arrow,
                Tok::Ident("q".into()),
                Tok::BackArrow,
                Tok::Ident("r".into()),
                Tok::Vee,
                Tok::Ident("s".into()),
            ]
        );
        assert_eq!(toks("A ,_o B")[1], Tok::CorrComma(CorrelationTag::Opposite));
        assert_eq!(toks("1 ~i 2")[1], Tok::Tilde(CorrelationTag::Identical));
        assert_eq!(toks("(down,1/2)").len(), 7);
    }

    #[test]
    fn reports_column_of_bad_character() {
        assert_eq!(lex("p # q", 1), Err(LexError { col: 3, found: '#' }));
    }
}
