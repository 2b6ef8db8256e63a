use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use super::{Expr, Func, Node};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyInput,
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    ExpectedClosingParen,
    /// `^` must be followed by a literal number.
    NonLiteralExponent,
    UnknownIdentifier(String),
    BadNumber(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {}", describe(.kind))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the source.
    pub offset: usize,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::EmptyInput => "empty expression".into(),
        ParseErrorKind::UnexpectedChar(c) => format!("unexpected character {c:?}"),
        ParseErrorKind::UnexpectedToken(t) => format!("unexpected token {t:?}"),
        ParseErrorKind::UnexpectedEnd => "unexpected end of input".into(),
        ParseErrorKind::ExpectedClosingParen => "expected ')'".into(),
        ParseErrorKind::NonLiteralExponent => "exponent must be a literal number".into(),
        ParseErrorKind::UnknownIdentifier(id) => {
            format!("unknown identifier {id:?} (not a coordinate, constant or function)")
        }
        ParseErrorKind::BadNumber(s) => format!("malformed number {s:?}"),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Lexer<'s> {
    fn tokenize(src: &'s str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (tok, at) = lx.next()?;
            let end = tok == Tok::End;
            out.push((tok, at));
            if end {
                return Ok(out);
            }
        }
    }

    fn peek_byte(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        while self.peek_byte().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(b) = self.peek_byte() else {
            return Ok((Tok::End, start));
        };
        if b.is_ascii_digit() || b == b'.' {
            return self.number(start);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self
                .peek_byte()
                .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
            {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        if matches!(b, b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')') {
            self.pos += 1;
            return Ok((Tok::Op(b as char), start));
        }
        let c = self.src[start..].chars().next().unwrap_or('?');
        Err(ParseError {
            kind: ParseErrorKind::UnexpectedChar(c),
            offset: start,
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize), ParseError> {
        let digits = |lx: &mut Self| {
            while lx.peek_byte().is_some_and(|b| b.is_ascii_digit()) {
                lx.pos += 1;
            }
        };
        digits(self);
        if self.peek_byte() == Some(b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.peek_byte(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek_byte(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.peek_byte().is_some_and(|b| b.is_ascii_digit()) {
                digits(self);
            } else {
                self.pos = save;
            }
        }
        let text = &self.src[start..self.pos];
        text.parse::<f64>()
            .map(|v| (Tok::Num(v), start))
            .map_err(|_| ParseError {
                kind: ParseErrorKind::BadNumber(text.to_string()),
                offset: start,
            })
    }
}

/// Recursive-descent parser bound to an ordered list of coordinate names.
#[derive(Clone, Debug)]
pub struct Parser {
    coords: Vec<Arc<str>>,
    constants: HashMap<String, f64>,
}

impl Parser {
    /// Fails if `coords` is empty, has duplicates, or shadows a function name.
    pub fn new<S: AsRef<str>>(coords: &[S]) -> Result<Self, String> {
        if coords.is_empty() {
            return Err("at least one coordinate is required".into());
        }
        let mut names: Vec<Arc<str>> = Vec::with_capacity(coords.len());
        for c in coords {
            let c = c.as_ref();
            let valid = c
                .chars()
                .next()
                .is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
                && c.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
            if !valid {
                return Err(format!("coordinate name {c:?} is not an identifier"));
            }
            if Func::from_name(c).is_some() {
                return Err(format!("coordinate name {c:?} clashes with a function"));
            }
            if names.iter().any(|n| &**n == c) {
                return Err(format!("duplicate coordinate name {c:?}"));
            }
            names.push(Arc::from(c));
        }
        Ok(Parser {
            coords: names,
            constants: HashMap::new(),
        })
    }

    /// Binds a named constant; occurrences parse to its literal value.
    /// Coordinates take precedence over constants of the same name.
    pub fn with_constant(mut self, name: &str, value: f64) -> Self {
        self.constants.insert(name.to_string(), value);
        self
    }

    pub fn coords(&self) -> &[Arc<str>] {
        &self.coords
    }

    pub fn parse(&self, src: &str) -> Result<Expr, ParseError> {
        let toks = Lexer::tokenize(src)?;
        if toks.len() == 1 {
            return Err(ParseError {
                kind: ParseErrorKind::EmptyInput,
                offset: 0,
            });
        }
        let mut st = State {
            parser: self,
            toks,
            i: 0,
        };
        let e = st.sum()?;
        match st.peek() {
            Tok::End => Ok(e),
            Tok::Op(')') => Err(st.err(ParseErrorKind::UnexpectedToken(")".into()))),
            t => Err(st.err(ParseErrorKind::UnexpectedToken(tok_text(t)))),
        }
    }
}

fn tok_text(t: &Tok) -> String {
    match t {
        Tok::Num(v) => v.to_string(),
        Tok::Ident(s) => s.clone(),
        Tok::Op(c) => c.to_string(),
        Tok::End => "<end>".into(),
    }
}

struct State<'p> {
    parser: &'p Parser,
    toks: Vec<(Tok, usize)>,
    i: usize,
}

impl State<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            offset: self.offset(),
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Tok::End => self.err(ParseErrorKind::UnexpectedEnd),
            t => self.err(ParseErrorKind::UnexpectedToken(tok_text(t))),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let node = match self.peek() {
                Tok::Op('+') => Node::Add as fn(Expr, Expr) -> Node,
                Tok::Op('-') => Node::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Expr::new(node(lhs, rhs));
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let node = match self.peek() {
                Tok::Op('*') => Node::Mul as fn(Expr, Expr) -> Node,
                Tok::Op('/') => Node::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::new(node(lhs, rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == &Tok::Op('-') {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::new(Node::Neg(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let sign = match self.peek() {
            Tok::Op('-') => {
                self.bump();
                -1.0
            }
            Tok::Op('+') => {
                self.bump();
                1.0
            }
            _ => 1.0,
        };
        match self.peek() {
            Tok::Num(v) => {
                let v = *v;
                self.bump();
                Ok(Expr::new(Node::Pow(base, sign * v)))
            }
            Tok::End => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            _ => Err(self.err(ParseErrorKind::NonLiteralExponent)),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::num(v))
            }
            Tok::Op('(') => {
                self.bump();
                let e = self.sum()?;
                self.expect_close()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.offset();
                self.bump();
                if let Some(index) = self.parser.coords.iter().position(|c| **c == *name) {
                    return Ok(Expr::new(Node::Coord {
                        index,
                        name: self.parser.coords[index].clone(),
                    }));
                }
                if let Some(func) = Func::from_name(&name) {
                    if self.peek() != &Tok::Op('(') {
                        return Err(self.unexpected());
                    }
                    self.bump();
                    let arg = self.sum()?;
                    self.expect_close()?;
                    return Ok(Expr::call(func, arg));
                }
                if let Some(v) = self.parser.constants.get(&name) {
                    return Ok(Expr::num(*v));
                }
                Err(ParseError {
                    kind: ParseErrorKind::UnknownIdentifier(name),
                    offset: at,
                })
            }
            _ => Err(self.unexpected()),
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Op(')') => {
                self.bump();
                Ok(())
            }
            Tok::End => Err(self.err(ParseErrorKind::ExpectedClosingParen)),
            _ => Err(self.unexpected()),
        }
    }
}
