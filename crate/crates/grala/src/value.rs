//! Runtime values and lexical environments.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use epgm_model::{Edge, GraphCollection, LogicalGraph, PropertyValue, Vertex};
use epgm_pattern::PatternGraph;

use crate::ast::Lambda;

#[derive(Clone)]
pub enum Value {
    Graph(LogicalGraph),
    Collection(GraphCollection),
    Vertex(Vertex),
    Edge(Edge),
    VertexSet(Vec<Arc<Vertex>>),
    EdgeSet(Vec<Arc<Edge>>),
    /// Extracted property values, the result of `values(key)`.
    List(Vec<PropertyValue>),
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Symbol(String),
    Map(BTreeMap<String, Value>),
    Set(Vec<Value>),
    Pattern(PatternGraph),
    Lambda(Rc<LambdaValue>),
    /// The `db` handle.
    Database,
    /// A property read that found nothing. Distinguishable from every
    /// stored value; arithmetic on it is an error, equality is false.
    Absent,
}

pub struct LambdaValue {
    pub lambda: Lambda,
    pub env: Env,
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Graph(_) => "graph",
            Value::Collection(_) => "collection",
            Value::Vertex(_) => "vertex",
            Value::Edge(_) => "edge",
            Value::VertexSet(_) => "vertex set",
            Value::EdgeSet(_) => "edge set",
            Value::List(_) => "value list",
            Value::Int(_) => "integer",
            Value::Float(_) => "float",
            Value::Bool(_) => "boolean",
            Value::Str(_) => "string",
            Value::Symbol(_) => "symbol",
            Value::Map(_) => "map",
            Value::Set(_) => "set",
            Value::Pattern(_) => "pattern",
            Value::Lambda(_) => "lambda",
            Value::Database => "database",
            Value::Absent => "absent",
        }
    }

    pub fn from_property(value: &PropertyValue) -> Value {
        match value {
            PropertyValue::Int(v) => Value::Int(*v),
            PropertyValue::Float(v) => Value::Float(*v),
            PropertyValue::Bool(v) => Value::Bool(*v),
            PropertyValue::Str(v) => Value::Str(v.clone()),
        }
    }

    /// Scalar view for storing into properties; `None` for structured
    /// values and `Absent`.
    pub fn to_property(&self) -> Option<PropertyValue> {
        match self {
            Value::Int(v) => Some(PropertyValue::Int(*v)),
            Value::Float(v) => Some(PropertyValue::Float(*v)),
            Value::Bool(v) => Some(PropertyValue::Bool(*v)),
            Value::Str(v) => Some(PropertyValue::Str(v.clone())),
            _ => None,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        use Value::*;
        match (self, other) {
            (Graph(a), Graph(b)) => a == b,
            (Collection(a), Collection(b)) => a == b,
            (Vertex(a), Vertex(b)) => a == b,
            (Edge(a), Edge(b)) => a == b,
            (VertexSet(a), VertexSet(b)) => a == b,
            (EdgeSet(a), EdgeSet(b)) => a == b,
            (List(a), List(b)) => a == b,
            (Int(a), Int(b)) => a == b,
            (Float(a), Float(b)) => a == b,
            (Bool(a), Bool(b)) => a == b,
            (Str(a), Str(b)) => a == b,
            (Symbol(a), Symbol(b)) => a == b,
            (Map(a), Map(b)) => a == b,
            (Set(a), Set(b)) => a == b,
            (Pattern(a), Pattern(b)) => a == b,
            (Lambda(a), Lambda(b)) => Rc::ptr_eq(a, b),
            (Database, Database) => true,
            (Absent, Absent) => true,
            _ => false,
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Graph(g) => write!(
                f,
                "Graph(id={}, |V|={}, |E|={})",
                g.id(),
                g.vertex_count(),
                g.edge_count()
            ),
            Value::Collection(c) => write!(f, "Collection(len={})", c.len()),
            Value::Vertex(v) => write!(f, "Vertex({})", v.id),
            Value::Edge(e) => write!(f, "Edge({})", e.id),
            Value::VertexSet(s) => write!(f, "VertexSet(len={})", s.len()),
            Value::EdgeSet(s) => write!(f, "EdgeSet(len={})", s.len()),
            Value::List(l) => write!(f, "List({l:?})"),
            Value::Int(v) => write!(f, "Int({v})"),
            Value::Float(v) => write!(f, "Float({v})"),
            Value::Bool(v) => write!(f, "Bool({v})"),
            Value::Str(v) => write!(f, "Str({v:?})"),
            Value::Symbol(v) => write!(f, "Symbol(:{v})"),
            Value::Map(m) => write!(f, "Map({} entries)", m.len()),
            Value::Set(s) => write!(f, "Set(len={})", s.len()),
            Value::Pattern(p) => write!(
                f,
                "Pattern({} vertices, {} edges)",
                p.vertex_count(),
                p.edge_count()
            ),
            Value::Lambda(_) => write!(f, "Lambda"),
            Value::Database => write!(f, "Database"),
            Value::Absent => write!(f, "Absent"),
        }
    }
}

/// Lexical scope chain. Lambdas capture their defining environment by
/// reference; interior mutability covers index assignments in callbacks.
#[derive(Clone)]
pub struct Env {
    scope: Rc<Scope>,
}

struct Scope {
    vars: RefCell<HashMap<String, Value>>,
    parent: Option<Env>,
}

impl Env {
    pub fn root() -> Env {
        Env {
            scope: Rc::new(Scope {
                vars: RefCell::new(HashMap::new()),
                parent: None,
            }),
        }
    }

    pub fn child(&self) -> Env {
        Env {
            scope: Rc::new(Scope {
                vars: RefCell::new(HashMap::new()),
                parent: Some(self.clone()),
            }),
        }
    }

    /// Define or overwrite a binding in this scope.
    pub fn define(&self, name: impl Into<String>, value: Value) {
        self.scope.vars.borrow_mut().insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        if let Some(v) = self.scope.vars.borrow().get(name) {
            return Some(v.clone());
        }
        self.scope.parent.as_ref().and_then(|p| p.get(name))
    }

    /// Overwrite the binding owned by this scope, without touching parents.
    pub fn set_local(&self, name: &str, value: Value) -> bool {
        let mut vars = self.scope.vars.borrow_mut();
        if vars.contains_key(name) {
            vars.insert(name.to_string(), value);
            true
        } else {
            false
        }
    }
}
