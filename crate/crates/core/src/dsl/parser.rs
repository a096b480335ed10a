use std::collections::HashSet;

use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::expr::{BinaryOp, Constant, Expr, UnaryOp};
use crate::spec::{BoundLiterals, InequalitySpec};

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Number of `dom` lines seen in the current inequality.
    dim: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, at: &Token, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn unexpected(&self, at: &Token, wanted: &str) -> ParseError {
        self.syntax(at, format!("expected {wanted}, found {}", at.tok.describe()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(self.unexpected(&t, &tok.describe()))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<Token> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(t),
            _ => Err(self.unexpected(&t, &format!("`{kw}`"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_zero(&mut self) -> PResult<()> {
        let t = self.next();
        match &t.tok {
            Tok::Number(s) if s == "0" => Ok(()),
            _ => Err(self.unexpected(&t, "`0`")),
        }
    }

    fn file(&mut self) -> PResult<Vec<InequalitySpec>> {
        let mut specs = Vec::new();
        let mut ids = HashSet::new();
        if self.peek().tok == Tok::Eof {
            return Err(self.unexpected(&self.peek().clone(), "`ineq`"));
        }
        while self.peek().tok != Tok::Eof {
            let start = self.peek().clone();
            let spec = self.ineq()?;
            if !ids.insert(spec.id().to_string()) {
                return Err(ParseError::DuplicateId {
                    line: start.line,
                    column: start.column,
                    id: spec.id().to_string(),
                });
            }
            specs.push(spec);
        }
        Ok(specs)
    }

    fn ineq(&mut self) -> PResult<InequalitySpec> {
        let start = self.expect_keyword("ineq")?;
        let id_tok = self.next();
        let Tok::Ident(id) = id_tok.tok.clone() else {
            return Err(self.unexpected(&id_tok, "an inequality identifier"));
        };
        let name_tok = self.next();
        let Tok::Str(name) = name_tok.tok.clone() else {
            return Err(self.unexpected(&name_tok, "a quoted name"));
        };
        self.expect(Tok::LBrace)?;

        self.dim = 0;
        let mut bounds = Vec::new();
        while self.at_keyword("dom") {
            bounds.push(self.dom()?);
        }
        if bounds.is_empty() {
            return Err(self.unexpected(&self.peek().clone(), "`dom`"));
        }

        let mut constraints = Vec::new();
        while self.at_keyword("constraint") {
            self.next();
            constraints.push(self.expr()?);
            self.expect(Tok::Ge)?;
            self.expect_zero()?;
            self.expect(Tok::Semi)?;
        }

        self.expect_keyword("goal")?;
        let mut disjuncts = vec![self.expr()?];
        self.expect(Tok::Lt)?;
        self.expect_zero()?;
        while self.peek().tok == Tok::Or {
            self.next();
            disjuncts.push(self.expr()?);
            self.expect(Tok::Lt)?;
            self.expect_zero()?;
        }
        self.expect(Tok::Semi)?;
        self.expect(Tok::RBrace)?;

        InequalitySpec::new(id, name, bounds, disjuncts, constraints).map_err(|e| self.syntax(&start, e.to_string()))
    }

    fn dom(&mut self) -> PResult<BoundLiterals> {
        self.next();
        let var = self.next();
        match &var.tok {
            Tok::Ident(s) if var_index(s) == Some(self.dim) => {}
            _ => return Err(self.unexpected(&var, &format!("`x{}`", self.dim))),
        }
        self.expect_keyword("in")?;
        self.expect(Tok::LBracket)?;
        let lo_tok = self.peek().clone();
        let lo = self.signed_number()?;
        self.expect(Tok::Comma)?;
        let hi = self.signed_number()?;
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Semi)?;
        if crate::interval::Interval::from_literals(&lo, &hi).is_err() {
            return Err(self.syntax(&lo_tok, format!("invalid bounds [{lo}, {hi}]")));
        }
        self.dim += 1;
        Ok(BoundLiterals { lo, hi })
    }

    fn signed_number(&mut self) -> PResult<String> {
        let negative = self.peek().tok == Tok::Minus;
        if negative {
            self.next();
        }
        let t = self.next();
        match t.tok {
            Tok::Number(s) if negative => Ok(format!("-{s}")),
            Tok::Number(s) => Ok(s),
            _ => Err(self.unexpected(&t, "a number")),
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> PResult<Expr> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    // power := primary ('^' NAT)?
    fn power(&mut self) -> PResult<Expr> {
        let base = self.primary()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        match &t.tok {
            Tok::Number(s) if s.bytes().all(|b| b.is_ascii_digit()) => match s.parse::<u32>() {
                Ok(n) => Ok(base.pow(n)),
                Err(_) => Err(self.syntax(&t, "exponent too large")),
            },
            _ => Err(self.unexpected(&t, "a natural-number exponent")),
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = self.next();
        match &t.tok {
            Tok::Number(s) => Constant::new(s)
                .map(Expr::Const)
                .map_err(|_| self.syntax(&t, format!("constant `{s}` is out of range"))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if let Some(index) = var_index(name) {
                    if index >= self.dim {
                        return Err(ParseError::UnboundVariable {
                            line: t.line,
                            column: t.column,
                            index,
                            dim: self.dim,
                        });
                    }
                    return Ok(Expr::Var(index));
                }
                if name == "pi" {
                    return Ok(Expr::Pi);
                }
                let arity = match name.as_str() {
                    "sqrt" | "sin" | "cos" | "atn" | "acs" => 1,
                    "atn2" => 2,
                    _ => return Err(self.syntax(&t, format!("unknown identifier `{name}`"))),
                };
                let args = self.call_args()?;
                if args.len() != arity {
                    return Err(ParseError::Arity {
                        line: t.line,
                        column: t.column,
                        function: name.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let mut args = args.into_iter();
                let a = args.next().expect("arity checked");
                Ok(match name.as_str() {
                    "sqrt" => Expr::unary(UnaryOp::Sqrt, a),
                    "sin" => Expr::unary(UnaryOp::Sin, a),
                    "cos" => Expr::unary(UnaryOp::Cos, a),
                    "atn" => Expr::unary(UnaryOp::Atn, a),
                    "acs" => Expr::unary(UnaryOp::Acs, a),
                    _ => Expr::atn2(a, args.next().expect("arity checked")),
                })
            }
            _ => Err(self.unexpected(&t, "an expression")),
        }
    }

    fn call_args(&mut self) -> PResult<Vec<Expr>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if self.peek().tok == Tok::RParen {
            self.next();
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            let t = self.next();
            match t.tok {
                Tok::Comma => continue,
                Tok::RParen => return Ok(args),
                _ => return Err(self.unexpected(&t, "`,` or `)`")),
            }
        }
    }
}

/// `x17` -> 17. Leading zeros (`x01`) are not variable names.
fn var_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

pub(super) fn parse(src: &str) -> PResult<Vec<InequalitySpec>> {
    let tokens = tokenize(src)?;
    Parser { tokens, pos: 0, dim: 0 }.file()
}
