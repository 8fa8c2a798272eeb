//! Statement grammar, lowest precedence first:
//!
//! ```text
//! program    = { statement (";" | newline) }
//! statement  = ident { "," ident } "=" expr | expr
//! expr       = sum [ "==" sum ]
//! sum        = product { ("+" | "-") product }
//! product    = unary { "*" unary }
//! unary      = "-" unary | power
//! power      = postfix [ "^" unary ]
//! postfix    = primary { "(" [ args ] ")" }
//! primary    = int | string | ident | "(" expr { "," expr } ")" | "[" [ args ] "]"
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! is `-(x^2)` and `2^-1` is `2^(-1)`.

use num_bigint::BigInt;

use super::error::{EvalError, Result};
use super::lexer::{tokenize, Tok, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Pow,
    Eq,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Pow => "^",
            BinOp::Eq => "==",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Str(String),
    Var(String),
    List(Vec<Expr>),
    Tuple(Vec<Expr>),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Box<Expr>, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    /// One name, or several for tuple destructuring.
    Assign(Vec<String>, Expr),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub kind: StatementKind,
    /// Ended by `;`: evaluated but not printed.
    pub silent: bool,
}

pub fn parse_program(src: &str) -> Result<Vec<Statement>> {
    let tokens = tokenize(src)?;
    Parser { tokens, pos: 0 }.program()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> EvalError {
        let t = &self.tokens[self.pos];
        EvalError::Parse {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> EvalError {
        self.error(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn program(&mut self) -> Result<Vec<Statement>> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Tok::Newline | Tok::Semi) {
                self.next();
            }
            if *self.peek() == Tok::Eof {
                return Ok(out);
            }
            let kind = self.statement()?;
            let silent = match self.peek() {
                Tok::Semi => {
                    self.next();
                    true
                }
                Tok::Newline | Tok::Eof => false,
                _ => return Err(self.unexpected("';' or end of line")),
            };
            out.push(Statement { kind, silent });
        }
    }

    /// True when the tokens ahead read `ident { "," ident } "="`.
    fn at_assignment(&self) -> Option<usize> {
        let mut k = 0;
        loop {
            if !matches!(self.peek_at(k), Tok::Ident(_)) {
                return None;
            }
            match self.peek_at(k + 1) {
                Tok::Assign => return Some(k / 2 + 1),
                Tok::Comma => k += 2,
                _ => return None,
            }
        }
    }

    fn statement(&mut self) -> Result<StatementKind> {
        if let Some(count) = self.at_assignment() {
            let mut names = Vec::with_capacity(count);
            for _ in 0..count {
                if let Tok::Ident(name) = self.next() {
                    names.push(name);
                }
                self.next();
            }
            let mut seen = std::collections::HashSet::new();
            if let Some(dup) = names.iter().find(|n| !seen.insert(*n)) {
                return Err(self.error(format!("'{dup}' assigned twice")));
            }
            return Ok(StatementKind::Assign(names, self.expr()?));
        }
        Ok(StatementKind::Expr(self.expr()?))
    }

    fn expr(&mut self) -> Result<Expr> {
        let lhs = self.sum()?;
        if *self.peek() == Tok::EqEq {
            self.next();
            let rhs = self.sum()?;
            if *self.peek() == Tok::EqEq {
                return Err(self.error("comparisons cannot be chained"));
            }
            return Ok(Expr::Binary(BinOp::Eq, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.product()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.next();
            let rhs = self.unary()?;
            lhs = Expr::Binary(BinOp::Mul, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.postfix()?;
        if *self.peek() == Tok::Caret {
            self.next();
            let exp = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        while *self.peek() == Tok::LParen {
            self.next();
            let args = self.args(Tok::RParen, "')'")?;
            e = Expr::Call(Box::new(e), args);
        }
        Ok(e)
    }

    fn args(&mut self, close: Tok, wanted: &str) -> Result<Vec<Expr>> {
        let mut out = Vec::new();
        if *self.peek() == close {
            self.next();
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            match self.peek() {
                Tok::Comma => {
                    self.next();
                }
                t if *t == close => {
                    self.next();
                    return Ok(out);
                }
                _ => return Err(self.unexpected(&format!("',' or {wanted}"))),
            }
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.next();
                Ok(Expr::Int(v))
            }
            Tok::Str(s) => {
                self.next();
                Ok(Expr::Str(s))
            }
            Tok::Ident(name) => {
                self.next();
                Ok(Expr::Var(name))
            }
            Tok::LBracket => {
                self.next();
                Ok(Expr::List(self.args(Tok::RBracket, "']'")?))
            }
            Tok::LParen => {
                self.next();
                let first = self.expr()?;
                if *self.peek() == Tok::RParen {
                    self.next();
                    return Ok(first);
                }
                self.expect(Tok::Comma, "',' or ')'")?;
                let mut items = vec![first];
                items.extend(self.args(Tok::RParen, "')'")?);
                Ok(Expr::Tuple(items))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}
