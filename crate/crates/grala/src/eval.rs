//! Tree-walking evaluator. Method names dispatch to the operator algebra,
//! the pattern matcher and the algorithm registry; `db` exposes the graph
//! collection `db.G` and pattern matching over the database graph.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;
use std::sync::Arc;
use std::time::{Duration, Instant};

use epgm_algorithms::{AlgorithmRegistry, CallInput, Params};
use epgm_model::{
    Edge, EpgmDatabase, GraphCollection, LogicalGraph, Properties, PropertyValue, Vertex,
};
use epgm_operators as ops;
use epgm_pattern::{match_pattern, parse_pattern, Embedding};

use crate::ast::{BinOp, Expr, Lambda, LambdaBody, Script, Stmt};
use crate::token::Pos;
use crate::value::{Env, LambdaValue, Value};
use crate::GralaError;

type DynError = Box<dyn std::error::Error + Send + Sync + 'static>;

/// Everything a finished run reports: final root bindings in first
/// assignment order, the value of the last statement, and per-statement
/// wall-clock timings.
#[derive(Debug)]
pub struct RunOutcome {
    pub bindings: Vec<(String, Value)>,
    pub last: Option<Value>,
    pub timings: Vec<StatementTiming>,
}

#[derive(Debug)]
pub struct StatementTiming {
    pub statement: String,
    pub duration: Duration,
}

/// Parse and evaluate a script against a database. `extra_bindings` are
/// preinstalled variables (the workflow layer binds dataset aliases such as
/// the full database graph).
pub fn run_script(
    source: &str,
    db: Rc<EpgmDatabase>,
    registry: Rc<AlgorithmRegistry>,
    extra_bindings: Vec<(String, Value)>,
) -> Result<RunOutcome, GralaError> {
    let script = crate::parser::parse(source)?;
    run_parsed(&script, db, registry, extra_bindings)
}

pub fn run_parsed(
    script: &Script,
    db: Rc<EpgmDatabase>,
    registry: Rc<AlgorithmRegistry>,
    extra_bindings: Vec<(String, Value)>,
) -> Result<RunOutcome, GralaError> {
    let interp = Interpreter {
        db,
        registry,
        match_stack: RefCell::new(Vec::new()),
    };
    let env = Env::root();
    env.define("db", Value::Database);
    for (name, value) in extra_bindings {
        env.define(name, value);
    }

    let mut order: Vec<String> = Vec::new();
    let mut last = None;
    let mut timings = Vec::new();
    for stmt in &script.stmts {
        let started = Instant::now();
        let value = match stmt {
            Stmt::Assign { name, expr, .. } => {
                let value = interp.eval(expr, &env)?;
                if !order.contains(name) {
                    order.push(name.clone());
                }
                env.define(name.clone(), value.clone());
                value
            }
            Stmt::Expr { expr } => interp.eval(expr, &env)?,
        };
        timings.push(StatementTiming {
            statement: stmt.to_string(),
            duration: started.elapsed(),
        });
        last = Some(value);
    }

    let bindings = order
        .into_iter()
        .map(|name| {
            let value = env.get(&name).expect("tracked binding");
            (name, value)
        })
        .collect();
    Ok(RunOutcome {
        bindings,
        last,
        timings,
    })
}

struct Interpreter {
    db: Rc<EpgmDatabase>,
    registry: Rc<AlgorithmRegistry>,
    /// Embeddings of in-flight match predicate evaluations; `$x` reads the
    /// innermost one.
    match_stack: RefCell<Vec<Embedding>>,
}

fn err(pos: Pos, message: impl Into<String>) -> GralaError {
    GralaError::Eval {
        pos,
        message: message.into(),
    }
}

impl Interpreter {
    fn eval(&self, expr: &Expr, env: &Env) -> Result<Value, GralaError> {
        match expr {
            Expr::Int { value, .. } => Ok(Value::Int(*value)),
            Expr::Float { value, .. } => Ok(Value::Float(*value)),
            Expr::Bool { value, .. } => Ok(Value::Bool(*value)),
            Expr::Str { value, .. } => Ok(Value::Str(value.clone())),
            Expr::Symbol { name, .. } => Ok(Value::Symbol(name.clone())),
            Expr::Var { name, pos } => env
                .get(name)
                .ok_or_else(|| err(*pos, format!("unknown variable '{name}'"))),
            Expr::Binding { name, pos } => Err(err(
                *pos,
                format!("binding ${name} can only index g.V or g.E"),
            )),
            Expr::CollectionLit { items, pos } => {
                let mut graphs = Vec::with_capacity(items.len());
                for item in items {
                    match self.eval(item, env)? {
                        Value::Graph(g) => graphs.push(g),
                        other => {
                            return Err(err(
                                *pos,
                                format!("collection literals hold graphs, found {}", other.kind()),
                            ))
                        }
                    }
                }
                Ok(Value::Collection(graphs.into()))
            }
            Expr::SetLit { items, .. } => {
                let values = items
                    .iter()
                    .map(|item| self.eval(item, env))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Value::Set(values))
            }
            Expr::MapLit { entries, pos } => {
                let mut map = BTreeMap::new();
                for (key_expr, value_expr) in entries {
                    let key = match self.eval(key_expr, env)? {
                        Value::Str(s) => s,
                        other => {
                            return Err(err(
                                key_expr.pos(),
                                format!("map keys must be strings, found {}", other.kind()),
                            ))
                        }
                    };
                    let value = self.eval(value_expr, env)?;
                    map.insert(key, value);
                }
                let _ = pos;
                Ok(Value::Map(map))
            }
            Expr::Lambda(lambda) => Ok(Value::Lambda(Rc::new(LambdaValue {
                lambda: (**lambda).clone(),
                env: env.clone(),
            }))),
            Expr::New { class, args, pos } => self.eval_new(class, args, *pos, env),
            Expr::Member { recv, name, pos } => {
                let recv = self.eval(recv, env)?;
                self.eval_member(recv, name, *pos)
            }
            Expr::MethodCall {
                recv,
                method,
                args,
                pos,
            } => {
                let recv = self.eval(recv, env)?;
                let arg_values = args
                    .iter()
                    .map(|a| self.eval(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                self.call_method(recv, method, arg_values, *pos)
            }
            Expr::Index { recv, index, pos } => {
                let recv_value = self.eval(recv, env)?;
                // Pattern bindings index element sets directly.
                if let Expr::Binding { name, pos: bpos } = &**index {
                    return self.eval_binding_index(recv_value, name, *bpos);
                }
                let index_value = self.eval(index, env)?;
                self.eval_index(recv_value, index_value, *pos)
            }
            Expr::Neg { operand, pos } => match self.eval(operand, env)? {
                Value::Int(v) => Ok(Value::Int(-v)),
                Value::Float(v) => Ok(Value::Float(-v)),
                other => Err(err(*pos, format!("cannot negate {}", other.kind()))),
            },
            Expr::Binary { op, lhs, rhs, pos } => self.eval_binary(*op, lhs, rhs, *pos, env),
        }
    }

    fn eval_new(
        &self,
        class: &str,
        args: &[Expr],
        pos: Pos,
        env: &Env,
    ) -> Result<Value, GralaError> {
        match class {
            "Graph" => {
                if args.len() != 1 {
                    return Err(err(pos, "new Graph takes exactly one pattern string"));
                }
                let text = match self.eval(&args[0], env)? {
                    Value::Str(s) => s,
                    other => {
                        return Err(err(
                            args[0].pos(),
                            format!("new Graph expects a pattern string, found {}", other.kind()),
                        ))
                    }
                };
                let pattern =
                    parse_pattern(&text).map_err(|e| err(pos, format!("invalid pattern: {e}")))?;
                Ok(Value::Pattern(pattern))
            }
            "Vertex" | "Edge" => {
                if args.len() != 2 {
                    return Err(err(pos, format!("new {class} takes (label, properties)")));
                }
                let label = match self.eval(&args[0], env)? {
                    Value::Str(s) => s,
                    Value::Absent => return Err(err(args[0].pos(), "constructor label is absent")),
                    other => {
                        return Err(err(
                            args[0].pos(),
                            format!("{class} label must be a string, found {}", other.kind()),
                        ))
                    }
                };
                let props_value = self.eval(&args[1], env)?;
                let mut props = Properties::new();
                match props_value {
                    Value::Map(map) => {
                        for (key, value) in map {
                            match value {
                                // An absent source property simply emits no key.
                                Value::Absent => {}
                                other => match other.to_property() {
                                    Some(p) => props.set(key, p),
                                    None => {
                                        return Err(err(
                                            args[1].pos(),
                                            format!(
                                                "property {key:?} must be a scalar, found {}",
                                                other.kind()
                                            ),
                                        ))
                                    }
                                },
                            }
                        }
                    }
                    other => {
                        return Err(err(
                            args[1].pos(),
                            format!("{class} properties must be a map, found {}", other.kind()),
                        ))
                    }
                }
                if class == "Vertex" {
                    Ok(Value::Vertex(Vertex::detached(label, props)))
                } else {
                    Ok(Value::Edge(Edge::detached(label, props)))
                }
            }
            _ => unreachable!("parser validates constructor names"),
        }
    }

    fn eval_member(&self, recv: Value, name: &str, pos: Pos) -> Result<Value, GralaError> {
        match (recv, name) {
            (Value::Database, "G") => Ok(Value::Collection(self.db.graphs())),
            (Value::Graph(g), "V") => Ok(Value::VertexSet(g.vertices().cloned().collect())),
            (Value::Graph(g), "E") => Ok(Value::EdgeSet(g.edges().cloned().collect())),
            (recv, _) => Err(err(
                pos,
                format!("unknown member '{name}' on {}", recv.kind()),
            )),
        }
    }

    fn eval_binding_index(&self, recv: Value, name: &str, pos: Pos) -> Result<Value, GralaError> {
        let stack = self.match_stack.borrow();
        let embedding = stack
            .last()
            .ok_or_else(|| err(pos, format!("binding ${name} used outside match")))?;
        match recv {
            Value::VertexSet(set) => {
                let id = embedding
                    .vertex(name)
                    .ok_or_else(|| err(pos, format!("pattern has no vertex variable '{name}'")))?;
                set.iter()
                    .find(|v| v.id == id)
                    .map(|v| Value::Vertex((**v).clone()))
                    .ok_or_else(|| err(pos, format!("bound vertex {id} not in this set")))
            }
            Value::EdgeSet(set) => {
                let id = embedding
                    .edge(name)
                    .ok_or_else(|| err(pos, format!("pattern has no edge variable '{name}'")))?;
                set.iter()
                    .find(|e| e.id == id)
                    .map(|e| Value::Edge((**e).clone()))
                    .ok_or_else(|| err(pos, format!("bound edge {id} not in this set")))
            }
            other => Err(err(
                pos,
                format!("bindings index vertex or edge sets, not {}", other.kind()),
            )),
        }
    }

    fn eval_index(&self, recv: Value, index: Value, pos: Pos) -> Result<Value, GralaError> {
        match (recv, index) {
            // Property reads; the reserved symbol :type reads the label.
            (Value::Graph(g), Value::Str(key)) => Ok(g
                .properties()
                .get(&key)
                .map(Value::from_property)
                .unwrap_or(Value::Absent)),
            (Value::Graph(g), Value::Symbol(sym)) if sym == "type" => {
                Ok(Value::Str(g.label().to_string()))
            }
            (Value::Vertex(v), Value::Str(key)) => Ok(v
                .properties
                .get(&key)
                .map(Value::from_property)
                .unwrap_or(Value::Absent)),
            (Value::Vertex(v), Value::Symbol(sym)) if sym == "type" => {
                Ok(Value::Str(v.label.clone()))
            }
            (Value::Edge(e), Value::Str(key)) => Ok(e
                .properties
                .get(&key)
                .map(Value::from_property)
                .unwrap_or(Value::Absent)),
            (Value::Edge(e), Value::Symbol(sym)) if sym == "type" => {
                Ok(Value::Str(e.label.clone()))
            }
            (Value::Collection(coll), Value::Int(i)) => {
                if i < 0 || i as usize >= coll.len() {
                    return Err(err(
                        pos,
                        format!("collection index {i} out of range 0..{}", coll.len()),
                    ));
                }
                Ok(Value::Graph(coll.get(i as usize).unwrap().clone()))
            }
            (recv, index) => Err(err(
                pos,
                format!("cannot index {} with {}", recv.kind(), index.kind()),
            )),
        }
    }

    fn eval_binary(
        &self,
        op: BinOp,
        lhs: &Expr,
        rhs: &Expr,
        pos: Pos,
        env: &Env,
    ) -> Result<Value, GralaError> {
        // Logical operators short-circuit.
        if matches!(op, BinOp::And | BinOp::Or) {
            let left = match self.eval(lhs, env)? {
                Value::Bool(b) => b,
                other => {
                    return Err(err(
                        lhs.pos(),
                        format!("logical operand must be boolean, found {}", other.kind()),
                    ))
                }
            };
            if (op == BinOp::And && !left) || (op == BinOp::Or && left) {
                return Ok(Value::Bool(left));
            }
            return match self.eval(rhs, env)? {
                Value::Bool(b) => Ok(Value::Bool(b)),
                other => Err(err(
                    rhs.pos(),
                    format!("logical operand must be boolean, found {}", other.kind()),
                )),
            };
        }

        let left = self.eval(lhs, env)?;
        let right = self.eval(rhs, env)?;
        match op {
            BinOp::Eq => Ok(Value::Bool(loose_equals(&left, &right))),
            BinOp::Ne => Ok(Value::Bool(!loose_equals(&left, &right))),
            BinOp::Lt | BinOp::Gt | BinOp::Le | BinOp::Ge => {
                let ordering = compare_values(&left, &right).ok_or_else(|| {
                    err(
                        pos,
                        format!("cannot order {} against {}", left.kind(), right.kind()),
                    )
                })?;
                let result = match op {
                    BinOp::Lt => ordering.is_lt(),
                    BinOp::Gt => ordering.is_gt(),
                    BinOp::Le => ordering.is_le(),
                    BinOp::Ge => ordering.is_ge(),
                    _ => unreachable!(),
                };
                Ok(Value::Bool(result))
            }
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div => arithmetic(op, &left, &right, pos),
            BinOp::And | BinOp::Or => unreachable!("handled above"),
        }
    }

    // ------------------------------------------------------------------
    // Lambda machinery

    /// Invoke a lambda; returns the body's value plus the final values of
    /// the parameters (summarization reads mutated summaries back).
    fn call_lambda(
        &self,
        lam: &LambdaValue,
        args: Vec<Value>,
        pos: Pos,
    ) -> Result<(Value, Vec<Value>), GralaError> {
        let Lambda { params, body, .. } = &lam.lambda;
        if params.len() != args.len() {
            return Err(err(
                pos,
                format!(
                    "lambda takes {} parameter(s), got {} argument(s)",
                    params.len(),
                    args.len()
                ),
            ));
        }
        let frame = lam.env.child();
        for ((ty, name), value) in params.iter().zip(args) {
            check_param_type(ty, &value, pos)?;
            frame.define(name.clone(), value);
        }
        let result = match body {
            LambdaBody::Expr(expr) => self.eval(expr, &frame)?,
            LambdaBody::IndexAssign {
                target,
                key,
                value,
                pos: assign_pos,
            } => {
                if !params.iter().any(|(_, name)| name == target) {
                    return Err(err(
                        *assign_pos,
                        format!("assignment target '{target}' is not a lambda parameter"),
                    ));
                }
                let key = match self.eval(key, &frame)? {
                    Value::Str(s) => s,
                    other => {
                        return Err(err(
                            *assign_pos,
                            format!("property key must be a string, found {}", other.kind()),
                        ))
                    }
                };
                let value = self.eval(value, &frame)?;
                let property = value.to_property().ok_or_else(|| {
                    err(
                        *assign_pos,
                        format!("cannot store a {} as a property", value.kind()),
                    )
                })?;
                let mut current = frame.get(target).expect("parameter bound above");
                match &mut current {
                    Value::Vertex(v) => v.properties.set(key, property),
                    Value::Edge(e) => e.properties.set(key, property),
                    Value::Graph(g) => g.set_property(key, property),
                    other => {
                        return Err(err(
                            *assign_pos,
                            format!("cannot set a property on {}", other.kind()),
                        ))
                    }
                }
                frame.set_local(target, current);
                Value::Absent
            }
        };
        let finals = params
            .iter()
            .map(|(_, name)| frame.get(name).expect("parameter bound"))
            .collect();
        Ok((result, finals))
    }

    fn lambda_as_bool(
        &self,
        lam: &LambdaValue,
        args: Vec<Value>,
        pos: Pos,
    ) -> Result<bool, GralaError> {
        match self.call_lambda(lam, args, pos)?.0 {
            Value::Bool(b) => Ok(b),
            other => Err(err(
                pos,
                format!("predicate must produce a boolean, found {}", other.kind()),
            )),
        }
    }

    fn lambda_as_graph(
        &self,
        lam: &LambdaValue,
        args: Vec<Value>,
        pos: Pos,
    ) -> Result<LogicalGraph, GralaError> {
        match self.call_lambda(lam, args, pos)?.0 {
            Value::Graph(g) => Ok(g),
            other => Err(err(
                pos,
                format!("operator must produce a graph, found {}", other.kind()),
            )),
        }
    }

    // ------------------------------------------------------------------
    // Method dispatch

    fn call_method(
        &self,
        recv: Value,
        method: &str,
        args: Vec<Value>,
        pos: Pos,
    ) -> Result<Value, GralaError> {
        match recv {
            Value::Database => self.database_method(method, args, pos),
            Value::Collection(coll) => self.collection_method(coll, method, args, pos),
            Value::Graph(graph) => self.graph_method(graph, method, args, pos),
            Value::VertexSet(set) => self.vertex_set_method(set, method, args, pos),
            Value::EdgeSet(set) => self.edge_set_method(set, method, args, pos),
            Value::List(values) => self.list_method(values, method, args, pos),
            other => Err(err(
                pos,
                format!("unknown method '{method}' on {}", other.kind()),
            )),
        }
    }

    fn database_method(
        &self,
        method: &str,
        args: Vec<Value>,
        pos: Pos,
    ) -> Result<Value, GralaError> {
        match method {
            "match" | "callForGraph" | "callForCollection" => {
                self.graph_method(self.db.database_graph(), method, args, pos)
            }
            _ => Err(err(pos, format!("unknown method '{method}' on database"))),
        }
    }

    fn collection_method(
        &self,
        coll: GraphCollection,
        method: &str,
        mut args: Vec<Value>,
        pos: Pos,
    ) -> Result<Value, GralaError> {
        match method {
            "select" => {
                let lam = take_lambda(&mut args, 0, method, pos)?;
                let result = ops::select(&coll, |g| {
                    self.lambda_as_bool(&lam, vec![Value::Graph(g.clone())], pos)
                        .map_err(box_dyn)
                })
                .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Collection(result))
            }
            "distinct" => {
                expect_arity(&args, 0, method, pos)?;
                Ok(Value::Collection(ops::distinct(&coll)))
            }
            "sortBy" => {
                let key = take_string(&mut args, 0, method, pos)?;
                let order = match args.first() {
                    None => ops::SortOrder::Ascending,
                    Some(Value::Symbol(s)) if s == "asc" => ops::SortOrder::Ascending,
                    Some(Value::Symbol(s)) if s == "desc" => ops::SortOrder::Descending,
                    Some(other) => {
                        return Err(err(
                            pos,
                            format!("sortBy order must be :asc or :desc, found {}", other.kind()),
                        ))
                    }
                };
                let result =
                    ops::sort_by(&coll, &key, order).map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Collection(result))
            }
            "top" => {
                let n = take_int(&mut args, 0, method, pos)?;
                if n < 0 {
                    return Err(err(pos, "top takes a non-negative count"));
                }
                Ok(Value::Collection(ops::top(&coll, n as usize)))
            }
            "union" => {
                let other = take_collection(&mut args, 0, method, pos)?;
                Ok(Value::Collection(ops::union(&coll, &other)))
            }
            "intersect" => {
                let other = take_collection(&mut args, 0, method, pos)?;
                Ok(Value::Collection(ops::intersect(&coll, &other)))
            }
            "difference" => {
                let other = take_collection(&mut args, 0, method, pos)?;
                Ok(Value::Collection(ops::difference(&coll, &other)))
            }
            "apply" => {
                let lam = take_lambda(&mut args, 0, method, pos)?;
                let result = ops::apply(&coll, |g| {
                    self.lambda_as_graph(&lam, vec![Value::Graph(g.clone())], pos)
                        .map_err(box_dyn)
                })
                .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Collection(result))
            }
            "reduce" => {
                let lam = take_lambda(&mut args, 0, method, pos)?;
                let result = ops::reduce(&coll, |acc, g| {
                    self.lambda_as_graph(
                        &lam,
                        vec![Value::Graph(acc), Value::Graph(g.clone())],
                        pos,
                    )
                    .map_err(box_dyn)
                })
                .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Graph(result))
            }
            "callForGraph" => {
                let (symbol, params) = self.call_args(&mut args, method, pos)?;
                let result = self
                    .registry
                    .call_for_graph(CallInput::Collection(coll), &symbol, &params)
                    .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Graph(result))
            }
            "callForCollection" => {
                let (symbol, params) = self.call_args(&mut args, method, pos)?;
                let result = self
                    .registry
                    .call_for_collection(CallInput::Collection(coll), &symbol, &params)
                    .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Collection(result))
            }
            "count" => {
                expect_arity(&args, 0, method, pos)?;
                Ok(Value::Int(coll.len() as i64))
            }
            _ => Err(err(pos, format!("unknown method '{method}' on collection"))),
        }
    }

    fn graph_method(
        &self,
        graph: LogicalGraph,
        method: &str,
        mut args: Vec<Value>,
        pos: Pos,
    ) -> Result<Value, GralaError> {
        match method {
            "combine" | "overlap" | "exclude" => {
                let other = take_graph(&mut args, 0, method, pos)?;
                let result = match method {
                    "combine" => ops::combine(&graph, &other),
                    "overlap" => ops::overlap(&graph, &other),
                    _ => ops::exclude(&graph, &other),
                }
                .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Graph(result))
            }
            "match" => {
                let pattern = match args_get(&mut args, 0, method, pos)? {
                    Value::Pattern(p) => p,
                    other => {
                        return Err(err(
                            pos,
                            format!("match expects a pattern graph, found {}", other.kind()),
                        ))
                    }
                };
                let lam = take_lambda(&mut args, 0, method, pos)?;
                let result = match_pattern(&graph, &pattern, |sub, embedding| {
                    self.match_stack.borrow_mut().push(embedding.clone());
                    let outcome = self.lambda_as_bool(&lam, vec![Value::Graph(sub.clone())], pos);
                    self.match_stack.borrow_mut().pop();
                    outcome.map_err(box_dyn)
                })
                .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Collection(result))
            }
            "aggregate" => {
                let key = take_string(&mut args, 0, method, pos)?;
                let lam = take_lambda(&mut args, 0, method, pos)?;
                let result = ops::aggregate(&graph, &key, |g| {
                    match self
                        .call_lambda(&lam, vec![Value::Graph(g.clone())], pos)
                        .map_err(box_dyn)?
                        .0
                    {
                        Value::Int(v) => Ok(PropertyValue::Int(v)),
                        Value::Float(v) => Ok(PropertyValue::Float(v)),
                        other => Err(box_dyn(err(
                            pos,
                            format!(
                                "aggregate function must produce a number, found {}",
                                other.kind()
                            ),
                        ))),
                    }
                })
                .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Graph(result))
            }
            "project" => {
                let vertex_lam = take_lambda(&mut args, 0, method, pos)?;
                let edge_lam = take_lambda(&mut args, 0, method, pos)?;
                let result = ops::project(
                    &graph,
                    |v| match self
                        .call_lambda(&vertex_lam, vec![Value::Vertex(v.clone())], pos)
                        .map_err(box_dyn)?
                        .0
                    {
                        Value::Vertex(nv) => Ok(nv),
                        other => Err(box_dyn(err(
                            pos,
                            format!(
                                "vertex projection must produce a vertex, found {}",
                                other.kind()
                            ),
                        ))),
                    },
                    |e| match self
                        .call_lambda(&edge_lam, vec![Value::Edge(e.clone())], pos)
                        .map_err(box_dyn)?
                        .0
                    {
                        Value::Edge(ne) => Ok(ne),
                        other => Err(box_dyn(err(
                            pos,
                            format!(
                                "edge projection must produce an edge, found {}",
                                other.kind()
                            ),
                        ))),
                    },
                )
                .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Graph(result))
            }
            "summarize" => {
                let vertex_keys = take_group_keys(&mut args, method, pos)?;
                let vertex_lam = take_lambda(&mut args, 0, method, pos)?;
                let edge_keys = take_group_keys(&mut args, method, pos)?;
                let edge_lam = take_lambda(&mut args, 0, method, pos)?;
                let result = ops::summarize(
                    &graph,
                    &vertex_keys,
                    |summary: &mut Vertex, members: &[Arc<Vertex>]| {
                        let (_, finals) = self
                            .call_lambda(
                                &vertex_lam,
                                vec![
                                    Value::Vertex(summary.clone()),
                                    Value::VertexSet(members.to_vec()),
                                ],
                                pos,
                            )
                            .map_err(box_dyn)?;
                        match finals.into_iter().next() {
                            Some(Value::Vertex(v)) => {
                                *summary = v;
                                Ok(())
                            }
                            _ => Err(box_dyn(err(pos, "summary vertex parameter was replaced"))),
                        }
                    },
                    &edge_keys,
                    |summary: &mut Edge, members: &[Arc<Edge>]| {
                        let (_, finals) = self
                            .call_lambda(
                                &edge_lam,
                                vec![
                                    Value::Edge(summary.clone()),
                                    Value::EdgeSet(members.to_vec()),
                                ],
                                pos,
                            )
                            .map_err(box_dyn)?;
                        match finals.into_iter().next() {
                            Some(Value::Edge(e)) => {
                                *summary = e;
                                Ok(())
                            }
                            _ => Err(box_dyn(err(pos, "summary edge parameter was replaced"))),
                        }
                    },
                )
                .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Graph(result))
            }
            "callForGraph" => {
                let (symbol, params) = self.call_args(&mut args, method, pos)?;
                let result = self
                    .registry
                    .call_for_graph(CallInput::Graph(graph), &symbol, &params)
                    .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Graph(result))
            }
            "callForCollection" => {
                let (symbol, params) = self.call_args(&mut args, method, pos)?;
                let result = self
                    .registry
                    .call_for_collection(CallInput::Graph(graph), &symbol, &params)
                    .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::Collection(result))
            }
            _ => Err(err(pos, format!("unknown method '{method}' on graph"))),
        }
    }

    fn vertex_set_method(
        &self,
        set: Vec<Arc<Vertex>>,
        method: &str,
        mut args: Vec<Value>,
        pos: Pos,
    ) -> Result<Value, GralaError> {
        match method {
            "select" => {
                let lam = take_lambda(&mut args, 0, method, pos)?;
                let mut kept = Vec::new();
                for v in &set {
                    if self.lambda_as_bool(&lam, vec![Value::Vertex((**v).clone())], pos)? {
                        kept.push(v.clone());
                    }
                }
                Ok(Value::VertexSet(kept))
            }
            "count" => {
                expect_arity(&args, 0, method, pos)?;
                Ok(Value::Int(set.len() as i64))
            }
            "sum" => {
                let key = take_string(&mut args, 0, method, pos)?;
                let total = ops::aggregates::sum(set.iter().map(|v| &**v), &key)
                    .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::from_property(&total))
            }
            "average" => {
                let key = take_string(&mut args, 0, method, pos)?;
                let avg = ops::aggregates::average(set.iter().map(|v| &**v), &key)
                    .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::from_property(&avg))
            }
            "values" => {
                let key = take_string(&mut args, 0, method, pos)?;
                Ok(Value::List(ops::aggregates::values(
                    set.iter().map(|v| &**v),
                    &key,
                )))
            }
            _ => Err(err(pos, format!("unknown method '{method}' on vertex set"))),
        }
    }

    fn edge_set_method(
        &self,
        set: Vec<Arc<Edge>>,
        method: &str,
        mut args: Vec<Value>,
        pos: Pos,
    ) -> Result<Value, GralaError> {
        match method {
            "select" => {
                let lam = take_lambda(&mut args, 0, method, pos)?;
                let mut kept = Vec::new();
                for e in &set {
                    if self.lambda_as_bool(&lam, vec![Value::Edge((**e).clone())], pos)? {
                        kept.push(e.clone());
                    }
                }
                Ok(Value::EdgeSet(kept))
            }
            "count" => {
                expect_arity(&args, 0, method, pos)?;
                Ok(Value::Int(set.len() as i64))
            }
            "sum" => {
                let key = take_string(&mut args, 0, method, pos)?;
                let total = ops::aggregates::sum(set.iter().map(|e| &**e), &key)
                    .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::from_property(&total))
            }
            "average" => {
                let key = take_string(&mut args, 0, method, pos)?;
                let avg = ops::aggregates::average(set.iter().map(|e| &**e), &key)
                    .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::from_property(&avg))
            }
            "values" => {
                let key = take_string(&mut args, 0, method, pos)?;
                Ok(Value::List(ops::aggregates::values(
                    set.iter().map(|e| &**e),
                    &key,
                )))
            }
            _ => Err(err(pos, format!("unknown method '{method}' on edge set"))),
        }
    }

    fn list_method(
        &self,
        values: Vec<PropertyValue>,
        method: &str,
        args: Vec<Value>,
        pos: Pos,
    ) -> Result<Value, GralaError> {
        expect_arity(&args, 0, method, pos)?;
        match method {
            "count" => Ok(Value::Int(values.len() as i64)),
            "sum" => {
                let total =
                    ops::aggregates::sum_of_values(&values).map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::from_property(&total))
            }
            "average" => {
                let avg = ops::aggregates::average_of_values(&values)
                    .map_err(|e| err(pos, e.to_string()))?;
                Ok(Value::from_property(&avg))
            }
            _ => Err(err(pos, format!("unknown method '{method}' on value list"))),
        }
    }

    /// Shared (symbol, params) argument handling for the call operators.
    fn call_args(
        &self,
        args: &mut Vec<Value>,
        method: &str,
        pos: Pos,
    ) -> Result<(String, Params), GralaError> {
        let symbol = match args_get(args, 0, method, pos)? {
            Value::Symbol(s) => s,
            other => {
                return Err(err(
                    pos,
                    format!(
                        "{method} expects an algorithm symbol, found {}",
                        other.kind()
                    ),
                ))
            }
        };
        let params = if args.is_empty() {
            Params::new()
        } else {
            match args.remove(0) {
                Value::Map(map) => {
                    let mut params = Params::new();
                    for (key, value) in map {
                        match value {
                            Value::Str(s) => {
                                params.insert(key, s);
                            }
                            other => {
                                return Err(err(
                                    pos,
                                    format!(
                                        "algorithm parameter {key:?} must be a string, found {}",
                                        other.kind()
                                    ),
                                ))
                            }
                        }
                    }
                    params
                }
                other => {
                    return Err(err(
                        pos,
                        format!("{method} parameters must be a map, found {}", other.kind()),
                    ))
                }
            }
        };
        Ok((symbol, params))
    }
}

// ----------------------------------------------------------------------
// Argument plumbing

fn box_dyn(e: GralaError) -> DynError {
    Box::new(e)
}

fn expect_arity(args: &[Value], want: usize, method: &str, pos: Pos) -> Result<(), GralaError> {
    if args.len() != want {
        return Err(err(
            pos,
            format!("{method} takes {want} argument(s), got {}", args.len()),
        ));
    }
    Ok(())
}

fn args_get(
    args: &mut Vec<Value>,
    index: usize,
    method: &str,
    pos: Pos,
) -> Result<Value, GralaError> {
    if index >= args.len() {
        return Err(err(pos, format!("{method} is missing an argument")));
    }
    Ok(args.remove(index))
}

fn take_lambda(
    args: &mut Vec<Value>,
    index: usize,
    method: &str,
    pos: Pos,
) -> Result<Rc<LambdaValue>, GralaError> {
    match args_get(args, index, method, pos)? {
        Value::Lambda(lam) => Ok(lam),
        other => Err(err(
            pos,
            format!("{method} expects a lambda, found {}", other.kind()),
        )),
    }
}

fn take_string(
    args: &mut Vec<Value>,
    index: usize,
    method: &str,
    pos: Pos,
) -> Result<String, GralaError> {
    match args_get(args, index, method, pos)? {
        Value::Str(s) => Ok(s),
        other => Err(err(
            pos,
            format!("{method} expects a string, found {}", other.kind()),
        )),
    }
}

fn take_int(
    args: &mut Vec<Value>,
    index: usize,
    method: &str,
    pos: Pos,
) -> Result<i64, GralaError> {
    match args_get(args, index, method, pos)? {
        Value::Int(v) => Ok(v),
        other => Err(err(
            pos,
            format!("{method} expects an integer, found {}", other.kind()),
        )),
    }
}

fn take_graph(
    args: &mut Vec<Value>,
    index: usize,
    method: &str,
    pos: Pos,
) -> Result<LogicalGraph, GralaError> {
    match args_get(args, index, method, pos)? {
        Value::Graph(g) => Ok(g),
        other => Err(err(
            pos,
            format!("{method} expects a graph, found {}", other.kind()),
        )),
    }
}

fn take_collection(
    args: &mut Vec<Value>,
    index: usize,
    method: &str,
    pos: Pos,
) -> Result<GraphCollection, GralaError> {
    match args_get(args, index, method, pos)? {
        Value::Collection(c) => Ok(c),
        other => Err(err(
            pos,
            format!("{method} expects a collection, found {}", other.kind()),
        )),
    }
}

/// Grouping keys arrive as a set literal of symbols (`:type`) and strings,
/// or as `{}` (which parses as an empty map).
fn take_group_keys(
    args: &mut Vec<Value>,
    method: &str,
    pos: Pos,
) -> Result<Vec<ops::GroupKey>, GralaError> {
    match args_get(args, 0, method, pos)? {
        Value::Set(items) => items
            .into_iter()
            .map(|item| match item {
                Value::Symbol(s) if s == "type" => Ok(ops::GroupKey::Label),
                Value::Symbol(s) => Err(err(pos, format!("unknown grouping marker :{s}"))),
                Value::Str(key) => Ok(ops::GroupKey::Property(key)),
                other => Err(err(
                    pos,
                    format!("grouping keys are strings or :type, found {}", other.kind()),
                )),
            })
            .collect(),
        Value::Map(map) if map.is_empty() => Ok(Vec::new()),
        other => Err(err(
            pos,
            format!(
                "{method} expects a grouping key set, found {}",
                other.kind()
            ),
        )),
    }
}

fn check_param_type(ty: &str, value: &Value, pos: Pos) -> Result<(), GralaError> {
    let ok = match ty {
        "Graph" => matches!(value, Value::Graph(_)),
        "Vertex" => matches!(value, Value::Vertex(_)),
        "Edge" => matches!(value, Value::Edge(_)),
        "Set" => matches!(
            value,
            Value::VertexSet(_) | Value::EdgeSet(_) | Value::Set(_)
        ),
        "Collection" => matches!(value, Value::Collection(_)),
        other => return Err(err(pos, format!("unknown lambda parameter type '{other}'"))),
    };
    if ok {
        Ok(())
    } else {
        Err(err(
            pos,
            format!("lambda parameter declared {ty} received {}", value.kind()),
        ))
    }
}

// ----------------------------------------------------------------------
// Value comparison semantics

/// Equality with int-to-float promotion; values of unrelated kinds are
/// unequal rather than an error, and `Absent` equals only itself.
fn loose_equals(left: &Value, right: &Value) -> bool {
    match (number_of(left), number_of(right)) {
        (Some(a), Some(b)) => return a == b,
        (None, None) => {}
        _ => return false,
    }
    left == right
}

fn number_of(value: &Value) -> Option<f64> {
    match value {
        Value::Int(v) => Some(*v as f64),
        Value::Float(v) => Some(*v),
        _ => None,
    }
}

/// Ordering for compatible kinds; `None` reports an unusable comparison.
fn compare_values(left: &Value, right: &Value) -> Option<std::cmp::Ordering> {
    if let (Some(a), Some(b)) = (number_of(left), number_of(right)) {
        return Some(a.total_cmp(&b));
    }
    match (left, right) {
        (Value::Str(a), Value::Str(b)) => Some(a.cmp(b)),
        _ => None,
    }
}

fn arithmetic(op: BinOp, left: &Value, right: &Value, pos: Pos) -> Result<Value, GralaError> {
    let fail = || {
        err(
            pos,
            format!(
                "arithmetic needs numbers, found {} and {}",
                left.kind(),
                right.kind()
            ),
        )
    };
    match (left, right) {
        (Value::Int(a), Value::Int(b)) => {
            let result = match op {
                BinOp::Add => a.checked_add(*b),
                BinOp::Sub => a.checked_sub(*b),
                BinOp::Mul => a.checked_mul(*b),
                BinOp::Div => {
                    if *b == 0 {
                        return Err(err(pos, "integer division by zero"));
                    }
                    a.checked_div(*b)
                }
                _ => unreachable!(),
            };
            result
                .map(Value::Int)
                .ok_or_else(|| err(pos, "integer overflow"))
        }
        _ => {
            let a = number_of(left).ok_or_else(fail)?;
            let b = number_of(right).ok_or_else(fail)?;
            let result = match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                _ => unreachable!(),
            };
            Ok(Value::Float(result))
        }
    }
}
