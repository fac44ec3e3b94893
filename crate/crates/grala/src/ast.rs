//! Abstract syntax and the canonical pretty-printer. `Display` emits source
//! text that re-parses to a structurally identical tree (binary expressions
//! print fully parenthesized, so precedence never shifts on the way back).

use std::fmt;

use crate::token::Pos;

#[derive(Debug, Clone, PartialEq)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Assign { name: String, expr: Expr, pos: Pos },
    Expr { expr: Expr },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    And,
    Or,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Gt => ">",
            BinOp::Le => "<=",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int {
        value: i64,
        pos: Pos,
    },
    Float {
        value: f64,
        pos: Pos,
    },
    Bool {
        value: bool,
        pos: Pos,
    },
    Str {
        value: String,
        pos: Pos,
    },
    Symbol {
        name: String,
        pos: Pos,
    },
    Var {
        name: String,
        pos: Pos,
    },
    Binding {
        name: String,
        pos: Pos,
    },
    CollectionLit {
        items: Vec<Expr>,
        pos: Pos,
    },
    SetLit {
        items: Vec<Expr>,
        pos: Pos,
    },
    MapLit {
        entries: Vec<(Expr, Expr)>,
        pos: Pos,
    },
    Lambda(Box<Lambda>),
    New {
        class: String,
        args: Vec<Expr>,
        pos: Pos,
    },
    Member {
        recv: Box<Expr>,
        name: String,
        pos: Pos,
    },
    MethodCall {
        recv: Box<Expr>,
        method: String,
        args: Vec<Expr>,
        pos: Pos,
    },
    Index {
        recv: Box<Expr>,
        index: Box<Expr>,
        pos: Pos,
    },
    Neg {
        operand: Box<Expr>,
        pos: Pos,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        pos: Pos,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lambda {
    /// (declared type, parameter name) pairs.
    pub params: Vec<(String, String)>,
    pub body: LambdaBody,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LambdaBody {
    Expr(Expr),
    /// `target["key"] = value` — the only statement form allowed inside a
    /// lambda; used by summarization callbacks to mutate summary elements.
    IndexAssign {
        target: String,
        key: Expr,
        value: Expr,
        pos: Pos,
    },
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Int { pos, .. }
            | Expr::Float { pos, .. }
            | Expr::Bool { pos, .. }
            | Expr::Str { pos, .. }
            | Expr::Symbol { pos, .. }
            | Expr::Var { pos, .. }
            | Expr::Binding { pos, .. }
            | Expr::CollectionLit { pos, .. }
            | Expr::SetLit { pos, .. }
            | Expr::MapLit { pos, .. }
            | Expr::New { pos, .. }
            | Expr::Member { pos, .. }
            | Expr::MethodCall { pos, .. }
            | Expr::Index { pos, .. }
            | Expr::Neg { pos, .. }
            | Expr::Binary { pos, .. } => *pos,
            Expr::Lambda(lambda) => lambda.pos,
        }
    }
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out.push('"');
    out
}

fn join(items: &[Expr]) -> String {
    items
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int { value, .. } => write!(f, "{value}"),
            Expr::Float { value, .. } => write!(f, "{value:?}"),
            Expr::Bool { value, .. } => write!(f, "{value}"),
            Expr::Str { value, .. } => write!(f, "{}", quote(value)),
            Expr::Symbol { name, .. } => write!(f, ":{name}"),
            Expr::Var { name, .. } => write!(f, "{name}"),
            Expr::Binding { name, .. } => write!(f, "${name}"),
            Expr::CollectionLit { items, .. } => write!(f, "<{}>", join(items)),
            Expr::SetLit { items, .. } => write!(f, "{{{}}}", join(items)),
            Expr::MapLit { entries, .. } => {
                let body = entries
                    .iter()
                    .map(|(k, v)| format!("{k}:{v}"))
                    .collect::<Vec<_>>()
                    .join(",");
                write!(f, "{{{body}}}")
            }
            Expr::Lambda(lambda) => write!(f, "{lambda}"),
            Expr::New { class, args, .. } => write!(f, "new {class}({})", join(args)),
            Expr::Member { recv, name, .. } => write!(f, "{recv}.{name}"),
            Expr::MethodCall {
                recv, method, args, ..
            } => write!(f, "{recv}.{method}({})", join(args)),
            Expr::Index { recv, index, .. } => write!(f, "{recv}[{index}]"),
            Expr::Neg { operand, .. } => write!(f, "(-{operand})"),
            Expr::Binary { op, lhs, rhs, .. } => {
                write!(f, "({lhs} {} {rhs})", op.symbol())
            }
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self
            .params
            .iter()
            .map(|(ty, name)| format!("{ty} {name}"))
            .collect::<Vec<_>>()
            .join(", ");
        write!(f, "({params} => {})", self.body)
    }
}

impl fmt::Display for LambdaBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaBody::Expr(e) => write!(f, "{e}"),
            LambdaBody::IndexAssign {
                target, key, value, ..
            } => write!(f, "{target}[{key}] = {value}"),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Assign { name, expr, .. } => write!(f, "{name} = {expr}"),
            Stmt::Expr { expr } => write!(f, "{expr}"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for stmt in &self.stmts {
            writeln!(f, "{stmt}")?;
        }
        Ok(())
    }
}
