//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor | factor)*     juxtaposition multiplies
//! factor := unary ("^" "-"? int)?
//! unary  := "-" unary | atom
//! atom   := number | "h1".."h5" | ident "(" expr ("," expr)* ")" | "(" expr ")"
//! ```

use std::fmt;

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn join(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Inv,
    Pow,
}

impl Func {
    const ALL: [Func; 8] = [
        Func::Exp,
        Func::Ln,
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Inv,
        Func::Pow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Inv => "inv",
            Func::Pow => "pow",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pow => 2,
            _ => 1,
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Number(f64),
    /// `h1`..`h5`.
    Basis(usize),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(Func, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    /// Equality of the trees, ignoring spans.
    pub fn same_tree(&self, other: &Expr) -> bool {
        match (&self.kind, &other.kind) {
            (ExprKind::Number(a), ExprKind::Number(b)) => a == b,
            (ExprKind::Basis(a), ExprKind::Basis(b)) => a == b,
            (ExprKind::Neg(a), ExprKind::Neg(b)) => a.same_tree(b),
            (ExprKind::Binary(o1, a1, b1), ExprKind::Binary(o2, a2, b2)) => {
                o1 == o2 && a1.same_tree(a2) && b1.same_tree(b2)
            }
            (ExprKind::Pow(a, n), ExprKind::Pow(b, m)) => n == m && a.same_tree(b),
            (ExprKind::Call(f, a), ExprKind::Call(g, b)) => {
                f == g && a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_tree(y))
            }
            _ => false,
        }
    }
}

/// Fully parenthesized form; parsing it gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(v) => write!(f, "{v}"),
            ExprKind::Basis(k) => write!(f, "h{k}"),
            ExprKind::Neg(e) => write!(f, "(-{e})"),
            ExprKind::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            ExprKind::Pow(e, n) => write!(f, "({e}^{n})"),
            ExprKind::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub span: Span,
    /// What the parser would have accepted here.
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: expected ", self.line, self.column)?;
        match self.expected.as_slice() {
            [one] => f.write_str(one)?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(v) => format!("number {v}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Token {
    tok: Tok,
    span: Span,
}

const ATOM_START: [&str; 4] = ["number", "h1..h5", "function name", "'('"];

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            tokens.push(Token {
                tok,
                span: Span { start, end: i },
            });
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // exponent only when digits follow
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let span = Span { start, end: i };
            let literal = &text[start..i];
            let value: f64 = literal.parse().map_err(|_| {
                error_at(text, span, vec!["number".into()], format!("'{literal}'"))
            })?;
            tokens.push(Token {
                tok: Tok::Number(value),
                span,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            // identifiers are letters only, so `h1` and `2h1` split as expected
            while i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                i += 1;
            }
            if &text[start..i] == "h" && i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            tokens.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                span: Span { start, end: i },
            });
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        let span = Span {
            start,
            end: start + ch.len_utf8(),
        };
        return Err(error_at(
            text,
            span,
            ATOM_START.iter().map(|s| s.to_string()).chain(["operator".to_string()]).collect(),
            format!("'{ch}'"),
        ));
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: Span {
            start: text.len(),
            end: text.len(),
        },
    });
    Ok(tokens)
}

fn error_at(text: &str, span: Span, expected: Vec<String>, found: String) -> ParseError {
    let before = &text[..span.start.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError {
        line,
        column,
        span,
        expected,
        found,
    }
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let t = self.peek();
        Err(error_at(
            self.text,
            t.span,
            expected.iter().map(|s| s.to_string()).collect(),
            t.tok.describe(),
        ))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek().tok, Tok::Number(_) | Tok::Ident(_) | Tok::LParen)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    BinOp::Mul
                }
                Tok::Slash => {
                    self.bump();
                    BinOp::Div
                }
                _ if self.starts_atom() => BinOp::Mul,
                _ => return Ok(lhs),
            };
            let rhs = self.factor()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let token = self.peek();
        let span = token.span;
        match token.tok {
            Tok::Number(v) if v.fract() == 0.0 && v.abs() < 1e15 && !self.text[span.start..span.end].contains(['.', 'e', 'E']) => {
                self.bump();
                let n = if negative { -(v as i64) } else { v as i64 };
                Ok(Expr {
                    span: base.span.join(span),
                    kind: ExprKind::Pow(Box::new(base), n),
                })
            }
            _ => self.fail(&["integer exponent"]),
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Minus {
            let start = self.bump().span;
            let inner = self.unary()?;
            return Ok(Expr {
                span: start.join(inner.span),
                kind: ExprKind::Neg(Box::new(inner)),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.peek().span;
        match self.peek().tok.clone() {
            Tok::Number(v) => {
                self.bump();
                Ok(Expr {
                    kind: ExprKind::Number(v),
                    span,
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                let close = self.expect_rparen()?;
                Ok(Expr {
                    kind: inner.kind,
                    span: span.join(close),
                })
            }
            Tok::Ident(name) => {
                if let Some(k) = basis_index(&name) {
                    self.bump();
                    return Ok(Expr {
                        kind: ExprKind::Basis(k),
                        span,
                    });
                }
                let Some(func) = Func::lookup(&name) else {
                    return self.fail(&["h1..h5", "exp", "ln", "sin", "cos", "sinh", "cosh", "inv", "pow"]);
                };
                self.bump();
                if self.peek().tok != Tok::LParen {
                    return self.fail(&["'('"]);
                }
                self.bump();
                let mut args = vec![self.expr()?];
                while args.len() < func.arity() {
                    if self.peek().tok != Tok::Comma {
                        return self.fail(&["','"]);
                    }
                    self.bump();
                    args.push(self.expr()?);
                }
                let close = self.expect_rparen()?;
                Ok(Expr {
                    kind: ExprKind::Call(func, args),
                    span: span.join(close),
                })
            }
            _ => self.fail(&ATOM_START.iter().copied().chain(["'-'"]).collect::<Vec<_>>()),
        }
    }

    fn expect_rparen(&mut self) -> Result<Span, ParseError> {
        if self.peek().tok == Tok::RParen {
            Ok(self.bump().span)
        } else {
            self.fail(&["')'", "operator"])
        }
    }
}

fn basis_index(name: &str) -> Option<usize> {
    match name {
        "h1" => Some(1),
        "h2" => Some(2),
        "h3" => Some(3),
        "h4" => Some(4),
        "h5" => Some(5),
        _ => None,
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    Expr {
        span: lhs.span.join(rhs.span),
        kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
    }
}

/// Parses a complete expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        text,
        tokens: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return p.fail(&["operator", "end of input"]);
    }
    Ok(e)
}
