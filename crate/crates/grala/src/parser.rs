//! Recursive-descent parser.
//!
//! Precedence, loosest first: `||`, `&&`, comparisons (non-associative),
//! additive, multiplicative, unary minus, postfix (member access, method
//! call, indexing). Method chains associate left.
//!
//! `<` opens a collection literal only in primary position, where a
//! comparison cannot start; literal elements parse below comparison level so
//! the closing `>` is never swallowed. Symbols are a colon directly followed
//! by an identifier. `(` starts a lambda exactly when `Type name` follows.

use crate::ast::{BinOp, Expr, Lambda, LambdaBody, Script, Stmt};
use crate::token::{Pos, Token, TokenKind};
use crate::{lexer, GralaError};

pub fn parse(source: &str) -> Result<Script, GralaError> {
    let tokens = lexer::tokenize(source)?;
    let mut parser = Parser { tokens, pos: 0 };
    let script = parser.script()?;
    validate_bindings(&script)?;
    Ok(script)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, offset: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn here(&self) -> Pos {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|t| t.pos)
            .unwrap_or(Pos { line: 1, column: 1 })
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Pos, GralaError> {
        let pos = self.here();
        match self.peek() {
            Some(k) if *k == kind => {
                self.pos += 1;
                Ok(pos)
            }
            found => Err(GralaError::Parse {
                pos,
                message: match found {
                    Some(f) => format!("expected {kind}, found {f}"),
                    None => format!("expected {kind}, found end of script"),
                },
            }),
        }
    }

    fn fail(&self, message: impl Into<String>) -> GralaError {
        GralaError::Parse {
            pos: self.here(),
            message: message.into(),
        }
    }

    fn script(&mut self) -> Result<Script, GralaError> {
        let mut stmts = Vec::new();
        while self.peek().is_some() {
            stmts.push(self.statement()?);
        }
        Ok(Script { stmts })
    }

    fn statement(&mut self) -> Result<Stmt, GralaError> {
        // `name = expr` when an identifier is directly followed by `=`.
        if let (Some(TokenKind::Ident(name)), Some(TokenKind::Assign)) =
            (self.peek(), self.peek_at(1))
        {
            let name = name.clone();
            let pos = self.here();
            self.bump();
            self.bump();
            let expr = self.expr(true)?;
            return Ok(Stmt::Assign { name, expr, pos });
        }
        Ok(Stmt::Expr {
            expr: self.expr(true)?,
        })
    }

    /// `allow_compare` is switched off inside collection literals, where a
    /// bare `>` must close the literal instead of comparing.
    fn expr(&mut self, allow_compare: bool) -> Result<Expr, GralaError> {
        self.or_expr(allow_compare)
    }

    fn or_expr(&mut self, allow_compare: bool) -> Result<Expr, GralaError> {
        let mut lhs = self.and_expr(allow_compare)?;
        while self.peek() == Some(&TokenKind::OrOr) {
            let pos = self.here();
            self.bump();
            let rhs = self.and_expr(allow_compare)?;
            lhs = Expr::Binary {
                op: BinOp::Or,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                pos,
            };
        }
        Ok(lhs)
    }

    fn and_expr(&mut self, allow_compare: bool) -> Result<Expr, GralaError> {
        let mut lhs = self.cmp_expr(allow_compare)?;
        while self.peek() == Some(&TokenKind::AndAnd) {
            let pos = self.here();
            self.bump();
            let rhs = self.cmp_expr(allow_compare)?;
            lhs = Expr::Binary {
                op: BinOp::And,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                pos,
            };
        }
        Ok(lhs)
    }

    fn cmp_expr(&mut self, allow_compare: bool) -> Result<Expr, GralaError> {
        let lhs = self.add_expr()?;
        if !allow_compare {
            return Ok(lhs);
        }
        let op = match self.peek() {
            Some(TokenKind::EqEq) => BinOp::Eq,
            Some(TokenKind::NotEq) => BinOp::Ne,
            Some(TokenKind::Lt) => BinOp::Lt,
            Some(TokenKind::Gt) => BinOp::Gt,
            Some(TokenKind::Le) => BinOp::Le,
            Some(TokenKind::Ge) => BinOp::Ge,
            _ => return Ok(lhs),
        };
        let pos = self.here();
        self.bump();
        let rhs = self.add_expr()?;
        Ok(Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            pos,
        })
    }

    fn add_expr(&mut self) -> Result<Expr, GralaError> {
        let mut lhs = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => break,
            };
            let pos = self.here();
            self.bump();
            let rhs = self.mul_expr()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                pos,
            };
        }
        Ok(lhs)
    }

    fn mul_expr(&mut self) -> Result<Expr, GralaError> {
        let mut lhs = self.unary_expr()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => break,
            };
            let pos = self.here();
            self.bump();
            let rhs = self.unary_expr()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                pos,
            };
        }
        Ok(lhs)
    }

    fn unary_expr(&mut self) -> Result<Expr, GralaError> {
        if self.peek() == Some(&TokenKind::Minus) {
            let pos = self.here();
            self.bump();
            let operand = self.unary_expr()?;
            return Ok(Expr::Neg {
                operand: Box::new(operand),
                pos,
            });
        }
        self.postfix_expr()
    }

    fn postfix_expr(&mut self) -> Result<Expr, GralaError> {
        let mut expr = self.primary()?;
        loop {
            match self.peek() {
                Some(TokenKind::Dot) => {
                    let pos = self.here();
                    self.bump();
                    let name = match self.bump().map(|t| t.kind) {
                        Some(TokenKind::Ident(name)) => name,
                        other => {
                            return Err(GralaError::Parse {
                                pos,
                                message: match other {
                                    Some(o) => format!("expected member name after '.', found {o}"),
                                    None => "expected member name after '.'".to_string(),
                                },
                            })
                        }
                    };
                    if self.eat(&TokenKind::LParen) {
                        let args = self.call_args()?;
                        expr = Expr::MethodCall {
                            recv: Box::new(expr),
                            method: name,
                            args,
                            pos,
                        };
                    } else {
                        expr = Expr::Member {
                            recv: Box::new(expr),
                            name,
                            pos,
                        };
                    }
                }
                Some(TokenKind::LBracket) => {
                    let pos = self.here();
                    self.bump();
                    let index = self.expr(true)?;
                    self.expect(TokenKind::RBracket)?;
                    expr = Expr::Index {
                        recv: Box::new(expr),
                        index: Box::new(index),
                        pos,
                    };
                }
                _ => break,
            }
        }
        Ok(expr)
    }

    /// Arguments of an already-opened call; consumes the closing paren.
    /// An argument may be a bare lambda (`select(Vertex v => ...)`), where
    /// the call's own parentheses double as the lambda's.
    fn call_args(&mut self) -> Result<Vec<Expr>, GralaError> {
        let mut args = Vec::new();
        if self.eat(&TokenKind::RParen) {
            return Ok(args);
        }
        loop {
            // Two adjacent identifiers can only start lambda parameters.
            if matches!(
                (self.peek(), self.peek_at(1)),
                (Some(TokenKind::Ident(_)), Some(TokenKind::Ident(_)))
            ) {
                let pos = self.here();
                let lambda = self.lambda_params_and_body(pos)?;
                args.push(Expr::Lambda(Box::new(lambda)));
            } else {
                args.push(self.expr(true)?);
            }
            if self.eat(&TokenKind::Comma) {
                continue;
            }
            self.expect(TokenKind::RParen)?;
            break;
        }
        Ok(args)
    }

    fn primary(&mut self) -> Result<Expr, GralaError> {
        let pos = self.here();
        match self.peek() {
            Some(TokenKind::Int(_)) => {
                let Some(TokenKind::Int(value)) = self.bump().map(|t| t.kind) else {
                    unreachable!()
                };
                Ok(Expr::Int { value, pos })
            }
            Some(TokenKind::Float(_)) => {
                let Some(TokenKind::Float(value)) = self.bump().map(|t| t.kind) else {
                    unreachable!()
                };
                Ok(Expr::Float { value, pos })
            }
            Some(TokenKind::Str(_)) => {
                let Some(TokenKind::Str(value)) = self.bump().map(|t| t.kind) else {
                    unreachable!()
                };
                Ok(Expr::Str { value, pos })
            }
            Some(TokenKind::Binding(_)) => {
                let Some(TokenKind::Binding(name)) = self.bump().map(|t| t.kind) else {
                    unreachable!()
                };
                Ok(Expr::Binding { name, pos })
            }
            // A colon immediately followed by an identifier is a symbol.
            Some(TokenKind::Colon) => {
                self.bump();
                match self.bump().map(|t| t.kind) {
                    Some(TokenKind::Ident(name)) => Ok(Expr::Symbol { name, pos }),
                    _ => Err(GralaError::Parse {
                        pos,
                        message: "expected identifier after ':'".to_string(),
                    }),
                }
            }
            Some(TokenKind::Ident(name)) => {
                let expr = match name.as_str() {
                    "true" => Expr::Bool { value: true, pos },
                    "false" => Expr::Bool { value: false, pos },
                    _ => Expr::Var {
                        name: name.clone(),
                        pos,
                    },
                };
                self.bump();
                Ok(expr)
            }
            Some(TokenKind::New) => {
                self.bump();
                let class = match self.bump().map(|t| t.kind) {
                    Some(TokenKind::Ident(class)) => class,
                    _ => return Err(self.fail("expected class name after 'new'")),
                };
                if !matches!(class.as_str(), "Graph" | "Vertex" | "Edge") {
                    return Err(GralaError::Parse {
                        pos,
                        message: format!("unknown constructor 'new {class}'"),
                    });
                }
                self.expect(TokenKind::LParen)?;
                let args = self.call_args()?;
                Ok(Expr::New { class, args, pos })
            }
            // Collection literal: '<' cannot start a comparison here.
            Some(TokenKind::Lt) => {
                self.bump();
                let mut items = Vec::new();
                if !self.eat(&TokenKind::Gt) {
                    loop {
                        items.push(self.expr(false)?);
                        if self.eat(&TokenKind::Comma) {
                            continue;
                        }
                        self.expect(TokenKind::Gt)?;
                        break;
                    }
                }
                Ok(Expr::CollectionLit { items, pos })
            }
            Some(TokenKind::LBrace) => {
                self.bump();
                if self.eat(&TokenKind::RBrace) {
                    // `{}` is an empty map; contexts needing an empty key
                    // set coerce it.
                    return Ok(Expr::MapLit {
                        entries: Vec::new(),
                        pos,
                    });
                }
                let first = self.expr(true)?;
                if self.eat(&TokenKind::Colon) {
                    // Map literal.
                    let mut entries = Vec::new();
                    let value = self.expr(true)?;
                    entries.push((first, value));
                    while self.eat(&TokenKind::Comma) {
                        let key = self.expr(true)?;
                        self.expect(TokenKind::Colon)?;
                        let value = self.expr(true)?;
                        entries.push((key, value));
                    }
                    self.expect(TokenKind::RBrace)?;
                    Ok(Expr::MapLit { entries, pos })
                } else {
                    // Set literal.
                    let mut items = vec![first];
                    while self.eat(&TokenKind::Comma) {
                        items.push(self.expr(true)?);
                    }
                    self.expect(TokenKind::RBrace)?;
                    Ok(Expr::SetLit { items, pos })
                }
            }
            Some(TokenKind::LParen) => {
                // Lambda when `Type name` follows, grouped expression
                // otherwise.
                if matches!(
                    (self.peek_at(1), self.peek_at(2)),
                    (Some(TokenKind::Ident(_)), Some(TokenKind::Ident(_)))
                ) {
                    return self.lambda();
                }
                self.bump();
                let inner = self.expr(true)?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            Some(other) => Err(GralaError::Parse {
                pos,
                message: format!("expected an expression, found {other}"),
            }),
            None => Err(GralaError::Parse {
                pos,
                message: "expected an expression, found end of script".to_string(),
            }),
        }
    }

    fn lambda(&mut self) -> Result<Expr, GralaError> {
        let pos = self.here();
        self.expect(TokenKind::LParen)?;
        let lambda = self.lambda_params_and_body(pos)?;
        self.expect(TokenKind::RParen)?;
        Ok(Expr::Lambda(Box::new(lambda)))
    }

    /// `Type name (, Type name)* => body`, without surrounding parentheses.
    fn lambda_params_and_body(&mut self, pos: Pos) -> Result<Lambda, GralaError> {
        let mut params = Vec::new();
        loop {
            let ty = match self.bump().map(|t| t.kind) {
                Some(TokenKind::Ident(ty)) => ty,
                _ => return Err(self.fail("expected parameter type")),
            };
            let name = match self.bump().map(|t| t.kind) {
                Some(TokenKind::Ident(name)) => name,
                _ => return Err(self.fail("expected parameter name")),
            };
            params.push((ty, name));
            if self.eat(&TokenKind::Comma) {
                continue;
            }
            self.expect(TokenKind::Arrow)?;
            break;
        }
        let body = self.lambda_body()?;
        Ok(Lambda { params, body, pos })
    }

    fn lambda_body(&mut self) -> Result<LambdaBody, GralaError> {
        let expr = self.expr(true)?;
        // `x["key"] = value` makes the body an index assignment.
        if self.peek() == Some(&TokenKind::Assign) {
            let pos = self.here();
            self.bump();
            let value = self.expr(true)?;
            if let Expr::Index { recv, index, .. } = expr {
                if let Expr::Var { name, .. } = *recv {
                    return Ok(LambdaBody::IndexAssign {
                        target: name,
                        key: *index,
                        value,
                        pos,
                    });
                }
            }
            return Err(GralaError::Parse {
                pos,
                message: "assignment in a lambda must target parameter[key]".to_string(),
            });
        }
        Ok(LambdaBody::Expr(expr))
    }
}

/// `$name` binding access only makes sense inside a predicate lambda handed
/// to `match` (which is where bindings exist at runtime). The parser rejects
/// bindings outside any lambda body; the evaluator rejects lambdas touching
/// bindings outside a running match.
fn validate_bindings(script: &Script) -> Result<(), GralaError> {
    fn check(expr: &Expr, in_lambda: bool) -> Result<(), GralaError> {
        match expr {
            Expr::Binding { name, pos } if !in_lambda => Err(GralaError::Parse {
                pos: *pos,
                message: format!(
                    "binding ${name} is only available inside a predicate passed to match"
                ),
            }),
            Expr::Binding { .. } => Ok(()),
            Expr::Int { .. }
            | Expr::Float { .. }
            | Expr::Bool { .. }
            | Expr::Str { .. }
            | Expr::Symbol { .. }
            | Expr::Var { .. } => Ok(()),
            Expr::CollectionLit { items, .. } | Expr::SetLit { items, .. } => {
                items.iter().try_for_each(|e| check(e, in_lambda))
            }
            Expr::MapLit { entries, .. } => entries.iter().try_for_each(|(k, v)| {
                check(k, in_lambda)?;
                check(v, in_lambda)
            }),
            Expr::Lambda(lambda) => match &lambda.body {
                LambdaBody::Expr(e) => check(e, true),
                LambdaBody::IndexAssign { key, value, .. } => {
                    check(key, true)?;
                    check(value, true)
                }
            },
            Expr::New { args, .. } => args.iter().try_for_each(|e| check(e, in_lambda)),
            Expr::Member { recv, .. } => check(recv, in_lambda),
            Expr::MethodCall { recv, args, .. } => {
                check(recv, in_lambda)?;
                args.iter().try_for_each(|e| check(e, in_lambda))
            }
            Expr::Index { recv, index, .. } => {
                check(recv, in_lambda)?;
                check(index, in_lambda)
            }
            Expr::Neg { operand, .. } => check(operand, in_lambda),
            Expr::Binary { lhs, rhs, .. } => {
                check(lhs, in_lambda)?;
                check(rhs, in_lambda)
            }
        }
    }

    for stmt in &script.stmts {
        let expr = match stmt {
            Stmt::Assign { expr, .. } => expr,
            Stmt::Expr { expr } => expr,
        };
        check(expr, false)?;
    }
    Ok(())
}
