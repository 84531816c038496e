//! Token stream shared by the theory parser and the ground-program parser.

use crate::theory::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Nat(usize),
    /// Directive name without the leading `#`, e.g. `null`, `una`.
    Directive(String),
    Dot,
    Pipe,
    Comma,
    Semi,
    SemiSemi,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Slash,
    ColonDash,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Directive(s) => write!(f, "`#{s}`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::SemiSemi => write!(f, "`;;`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::ColonDash => write!(f, "`:-`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenize a source text.  `%` starts a comment that runs to end of line.
pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(c) = c {
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    loop {
        let (tline, tcol) = (line, col);
        let c = match chars.peek().copied() {
            Some(c) => c,
            None => break,
        };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump!();
            }
            continue;
        }
        let tok = if is_ident_start(c) {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if !is_ident_continue(c) {
                    break;
                }
                s.push(c);
                bump!();
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut n = 0usize;
            while let Some(&c) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                n = n.saturating_mul(10).saturating_add(c as usize - '0' as usize);
                bump!();
            }
            Tok::Nat(n)
        } else {
            match c {
                '#' => {
                    bump!();
                    let mut s = String::new();
                    while let Some(&c) = chars.peek() {
                        if !is_ident_continue(c) {
                            break;
                        }
                        s.push(c);
                        bump!();
                    }
                    if s.is_empty() {
                        return Err(ParseError::at(tline, tcol, ParseErrorKind::UnexpectedChar('#')));
                    }
                    Tok::Directive(s)
                }
                '.' => {
                    bump!();
                    Tok::Dot
                }
                '|' => {
                    bump!();
                    Tok::Pipe
                }
                ',' => {
                    bump!();
                    Tok::Comma
                }
                ';' => {
                    bump!();
                    if chars.peek() == Some(&';') {
                        bump!();
                        Tok::SemiSemi
                    } else {
                        Tok::Semi
                    }
                }
                '(' => {
                    bump!();
                    Tok::LParen
                }
                ')' => {
                    bump!();
                    Tok::RParen
                }
                '{' => {
                    bump!();
                    Tok::LBrace
                }
                '}' => {
                    bump!();
                    Tok::RBrace
                }
                '/' => {
                    bump!();
                    Tok::Slash
                }
                ':' => {
                    bump!();
                    if chars.peek() == Some(&'-') {
                        bump!();
                        Tok::ColonDash
                    } else {
                        return Err(ParseError::at(tline, tcol, ParseErrorKind::UnexpectedChar(':')));
                    }
                }
                other => {
                    return Err(ParseError::at(tline, tcol, ParseErrorKind::UnexpectedChar(other)));
                }
            }
        };
        out.push(Token { tok, line: tline, col: tcol });
    }
    Ok(out)
}

/// Cursor over a token stream with single-token lookahead.
pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], src: &str) -> Self {
        let end_line = src.lines().count().max(1);
        let end_col = src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
        Cursor { toks, pos: 0, end_line, end_col }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// Position for error reporting when the stream runs out.
    pub fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.col),
            None => (self.end_line, self.end_col),
        }
    }

    pub fn err_here(&self, expected: &'static str) -> ParseError {
        let (line, col) = self.here();
        match self.peek() {
            Some(t) => ParseError::at(
                line,
                col,
                ParseErrorKind::UnexpectedToken { found: t.tok.to_string(), expected },
            ),
            None => ParseError::at(line, col, ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    pub fn expect(&mut self, tok: &Tok, expected: &'static str) -> Result<&'a Token, ParseError> {
        match self.peek() {
            Some(t) if &t.tok == tok => Ok(self.next().unwrap()),
            _ => Err(self.err_here(expected)),
        }
    }

    pub fn expect_ident(&mut self, expected: &'static str) -> Result<(&'a str, usize, usize), ParseError> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), line, col }) => {
                self.next();
                Ok((s, *line, *col))
            }
            _ => Err(self.err_here(expected)),
        }
    }
}
