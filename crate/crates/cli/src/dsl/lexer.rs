use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    /// Single-character punctuation: `{ } ( ) [ ] , . = + - * / & ;`
    Punct(char),
    /// `..` in special-name ranges.
    DotDot,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::DotDot => "`..`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Byte offsets into the source.
    pub start: usize,
    pub end: usize,
}

pub fn tokenize(src: &str) -> CliResult<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&(at, c)) = chars.peek() {
        let (tl, tc) = (line, col);
        let bump = |line: &mut usize, col: &mut usize, c: char| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        if c.is_whitespace() {
            chars.next();
            bump(&mut line, &mut col, c);
            continue;
        }
        if c == '#' {
            while let Some(&(_, d)) = chars.peek() {
                if d == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            let n = s.parse::<i64>().map_err(|_| CliError::Syntax { line: tl, col: tc, msg: format!("integer {s} is too large") })?;
            Tok::Int(n)
        } else if c == '.' {
            chars.next();
            col += 1;
            if matches!(chars.peek(), Some(&(_, '.'))) {
                chars.next();
                col += 1;
                Tok::DotDot
            } else {
                Tok::Punct('.')
            }
        } else if "{}()[],=+-*/&;".contains(c) {
            chars.next();
            col += 1;
            Tok::Punct(c)
        } else {
            return Err(CliError::Syntax { line: tl, col: tc, msg: format!("unexpected character `{c}`") });
        };
        let end = chars.peek().map_or(src.len(), |&(i, _)| i);
        out.push(Token { tok, line: tl, col: tc, start: at, end });
    }
    out.push(Token { tok: Tok::Eof, line, col, start: src.len(), end: src.len() });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn words_numbers_and_punctuation() {
        assert_eq!(
            toks("pair v . Vstar[j] = 1/2 # note\n"),
            vec![
                Tok::Ident("pair".into()),
                Tok::Ident("v".into()),
                Tok::Punct('.'),
                Tok::Ident("Vstar".into()),
                Tok::Punct('['),
                Tok::Ident("j".into()),
                Tok::Punct(']'),
                Tok::Punct('='),
                Tok::Int(1),
                Tok::Punct('/'),
                Tok::Int(2),
                Tok::Eof,
            ]
        );
        assert_eq!(toks("w1..w3"), vec![Tok::Ident("w1".into()), Tok::DotDot, Tok::Ident("w3".into()), Tok::Eof]);
    }

    #[test]
    fn positions_are_one_based() {
        let t = tokenize("space V\n  dual").unwrap();
        assert_eq!((t[2].line, t[2].col), (2, 3));
        let e = tokenize("space $").unwrap_err();
        assert_eq!(e.to_string(), "1:7: syntax error: unexpected character `$`");
    }
}
