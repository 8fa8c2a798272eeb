use std::collections::HashMap;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::error::{EvalError, Result};
use super::parser::{parse_program, BinOp, Expr, Statement, StatementKind};
use super::value::Value;
use crate::env::{collect_versioninfo, ManifestFile, Verbosity};
use crate::kernel::{polynomial_ring, snf_euclidean, snf_integer, Field, IntMatrix};
use crate::mrdi::{MrdiError, Session};

/// Largest exponent accepted for integer powers.
const MAX_INT_EXPONENT: u64 = 1 << 20;

pub const BUILTINS: &[&str] = &[
    "GF",
    "gen",
    "load",
    "matrix",
    "parent",
    "polynomial_ring",
    "save",
    "snf",
    "snf_generic",
    "versioninfo",
];

/// Lines printed by a piece of source, and the error that stopped it.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub lines: Vec<String>,
    pub error: Option<EvalError>,
}

impl Output {
    /// Printed lines followed by `error: <message>` when evaluation failed.
    pub fn rendered(&self) -> Vec<String> {
        let mut out = self.lines.clone();
        if let Some(e) = &self.error {
            out.push(format!("error: {e}"));
        }
        out
    }
}

/// Variable bindings plus the session that `load` reads into.
#[derive(Debug)]
pub struct Environment {
    vars: HashMap<String, Value>,
    session: Session,
    base_dir: PathBuf,
    manifest: Option<ManifestFile>,
}

impl Default for Environment {
    fn default() -> Self {
        Environment::new(".")
    }
}

impl Environment {
    /// Relative paths given to `save` and `load` resolve against `base_dir`.
    pub fn new(base_dir: impl Into<PathBuf>) -> Environment {
        Environment {
            vars: HashMap::new(),
            session: Session::new(),
            base_dir: base_dir.into(),
            manifest: None,
        }
    }

    /// Manifest whose entries `versioninfo("full")` reports.
    pub fn set_manifest(&mut self, manifest: Option<ManifestFile>) {
        self.manifest = manifest;
    }

    pub fn base_dir(&self) -> &Path {
        &self.base_dir
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.vars.get(name)
    }

    pub fn set(&mut self, name: impl Into<String>, value: Value) {
        self.vars.insert(name.into(), value);
    }

    /// Parses all of `src`, then runs its statements in order until one
    /// fails. Nothing runs when `src` does not parse.
    pub fn run(&mut self, src: &str) -> Output {
        let mut lines = Vec::new();
        let stmts = match parse_program(src) {
            Ok(s) => s,
            Err(e) => return Output { lines, error: Some(e) },
        };
        for stmt in &stmts {
            match self.eval_statement(stmt) {
                Ok(v) if !stmt.silent => lines.extend(v.lines()),
                Ok(_) => {}
                Err(e) => return Output { lines, error: Some(e) },
            }
        }
        Output { lines, error: None }
    }

    /// Runs `src` and returns the value of its last statement.
    pub fn value_of(&mut self, src: &str) -> Result<Value> {
        let mut last = Value::Nothing;
        for stmt in &parse_program(src)? {
            last = self.eval_statement(stmt)?;
        }
        Ok(last)
    }

    /// Evaluates one statement and returns the value it would print.
    pub fn eval_statement(&mut self, stmt: &Statement) -> Result<Value> {
        match &stmt.kind {
            StatementKind::Expr(e) => self.eval(e),
            StatementKind::Assign(names, e) => {
                let value = self.eval(e)?;
                if names.len() == 1 {
                    self.vars.insert(names[0].clone(), value.clone());
                    return Ok(value);
                }
                let items = match &value {
                    Value::Tuple(items) | Value::List(items) => items,
                    other => {
                        return Err(EvalError::Type(format!(
                            "cannot destructure a {} into {} names",
                            other.type_name(),
                            names.len()
                        )))
                    }
                };
                if items.len() != names.len() {
                    return Err(EvalError::Type(format!(
                        "cannot destructure {} values into {} names",
                        items.len(),
                        names.len()
                    )));
                }
                for (name, item) in names.iter().zip(items) {
                    self.vars.insert(name.clone(), item.clone());
                }
                Ok(value)
            }
        }
    }

    pub fn eval(&mut self, expr: &Expr) -> Result<Value> {
        match expr {
            Expr::Int(v) => Ok(Value::Int(v.clone())),
            Expr::Str(s) => Ok(Value::Str(s.clone())),
            Expr::Var(name) => self.lookup(name),
            Expr::List(items) => Ok(Value::List(self.eval_all(items)?)),
            Expr::Tuple(items) => Ok(Value::Tuple(self.eval_all(items)?)),
            Expr::Neg(e) => negate(self.eval(e)?),
            Expr::Binary(op, l, r) => {
                let l = self.eval(l)?;
                let r = self.eval(r)?;
                binary(*op, l, r)
            }
            Expr::Call(callee, args) => {
                let args = self.eval_all(args)?;
                match callee.as_ref() {
                    Expr::Var(name) if !self.vars.contains_key(name) => self.call_builtin(name, args),
                    other => {
                        let f = self.eval(other)?;
                        call_value(f, args)
                    }
                }
            }
        }
    }

    fn eval_all(&mut self, items: &[Expr]) -> Result<Vec<Value>> {
        items.iter().map(|e| self.eval(e)).collect()
    }

    fn lookup(&self, name: &str) -> Result<Value> {
        if let Some(v) = self.vars.get(name) {
            return Ok(v.clone());
        }
        if name == "true" || name == "false" {
            return Ok(Value::Bool(name == "true"));
        }
        if BUILTINS.contains(&name) {
            return Err(EvalError::Type(format!("'{name}' is a function; call it with arguments")));
        }
        Err(EvalError::UndefinedVariable(name.into()))
    }

    fn resolve(&self, path: &str) -> PathBuf {
        let p = Path::new(path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn call_builtin(&mut self, name: &str, args: Vec<Value>) -> Result<Value> {
        match name {
            "GF" => {
                arity(name, &args, 1, 2)?;
                let p = int_arg(name, &args[0])?;
                match args.get(1) {
                    None => Ok(Value::Field(Field::prime(p)?)),
                    Some(n) => {
                        let n = int_arg(name, n)?
                            .to_i64()
                            .ok_or_else(|| EvalError::Type("GF: degree out of range".into()))?;
                        Ok(Value::Field(Field::finite(p, n)?))
                    }
                }
            }
            "gen" => {
                arity(name, &args, 1, 1)?;
                match &args[0] {
                    Value::Field(f) => Ok(Value::Elem(f.generator())),
                    other => Err(wrong_type(name, "a Field", other)),
                }
            }
            "parent" => {
                arity(name, &args, 1, 1)?;
                match &args[0] {
                    Value::Elem(e) => Ok(Value::Field(e.parent().clone())),
                    Value::Poly(p) => Ok(Value::Ring(p.parent().clone())),
                    other => Err(wrong_type(name, "a FieldElem or Polynomial", other)),
                }
            }
            "polynomial_ring" => {
                arity(name, &args, 2, 2)?;
                let field = match &args[0] {
                    Value::Field(f) => f,
                    other => return Err(wrong_type(name, "a Field", other)),
                };
                let names = match &args[1] {
                    Value::List(items) => items
                        .iter()
                        .map(|v| match v {
                            Value::Str(s) => Ok(s.as_str()),
                            other => Err(wrong_type(name, "a list of strings", other)),
                        })
                        .collect::<Result<Vec<_>>>()?,
                    other => return Err(wrong_type(name, "a list of strings", other)),
                };
                let (ring, gens) = polynomial_ring(field, &names)?;
                let mut items = vec![Value::Ring(ring)];
                items.extend(gens.into_iter().map(Value::Poly));
                Ok(Value::Tuple(items))
            }
            "matrix" => {
                let rows = match args.as_slice() {
                    [Value::List(rows)] if rows.iter().all(|r| matches!(r, Value::List(_))) => rows.clone(),
                    _ => args,
                };
                if rows.is_empty() {
                    return Err(EvalError::Type("matrix: needs at least one row".into()));
                }
                let rows = rows
                    .iter()
                    .map(|row| match row {
                        Value::List(items) => items.iter().map(|v| int_arg(name, v).cloned()).collect(),
                        other => Err(wrong_type(name, "rows given as lists of integers", other)),
                    })
                    .collect::<Result<Vec<Vec<BigInt>>>>()?;
                Ok(Value::Matrix(IntMatrix::from_rows(rows)?))
            }
            "snf" | "snf_generic" => {
                arity(name, &args, 1, 1)?;
                match &args[0] {
                    Value::Matrix(m) if name == "snf" => Ok(Value::Matrix(snf_integer(m))),
                    Value::Matrix(m) => Ok(Value::Matrix(snf_euclidean(m))),
                    other => Err(wrong_type(name, "a Matrix", other)),
                }
            }
            "save" => {
                arity(name, &args, 2, 2)?;
                let path = str_arg(name, &args[0])?;
                let obj = args[1]
                    .to_object()
                    .ok_or_else(|| wrong_type(name, "a savable value", &args[1]))?;
                let full = self.resolve(path);
                self.session
                    .save_file(&full, &obj)
                    .map_err(|e| file_error(path, e))?;
                Ok(Value::Nothing)
            }
            "load" => {
                arity(name, &args, 1, 1)?;
                let path = str_arg(name, &args[0])?;
                let full = self.resolve(path);
                let obj = self.session.load_file(&full).map_err(|e| file_error(path, e))?;
                Ok(obj.into())
            }
            "versioninfo" => {
                arity(name, &args, 0, 1)?;
                let verbosity = match args.first() {
                    None => Verbosity::Brief,
                    Some(Value::Str(s)) if s == "full" => Verbosity::Full,
                    Some(Value::Str(s)) if s == "brief" => Verbosity::Brief,
                    Some(other) => return Err(wrong_type(name, "\"brief\" or \"full\"", other)),
                };
                let report = collect_versioninfo(verbosity, self.manifest.as_ref());
                Ok(Value::Report(Box::new(report)))
            }
            _ => Err(EvalError::UndefinedVariable(name.into())),
        }
    }
}

fn file_error(path: &str, e: MrdiError) -> EvalError {
    let message = match e {
        MrdiError::Io { source, .. } => source.to_string(),
        other => other.to_string(),
    };
    EvalError::File {
        path: path.into(),
        message,
    }
}

fn arity(name: &str, args: &[Value], min: usize, max: usize) -> Result<()> {
    if (min..=max).contains(&args.len()) {
        return Ok(());
    }
    let expected = if min == max {
        min.to_string()
    } else {
        format!("{min} to {max}")
    };
    Err(EvalError::Arity {
        name: name.into(),
        expected,
        found: args.len(),
    })
}

fn wrong_type(name: &str, wanted: &str, got: &Value) -> EvalError {
    EvalError::Type(format!("{name}: expected {wanted}, got {}", got.type_name()))
}

fn int_arg<'a>(name: &str, v: &'a Value) -> Result<&'a BigInt> {
    match v {
        Value::Int(i) => Ok(i),
        other => Err(wrong_type(name, "an Int", other)),
    }
}

fn str_arg<'a>(name: &str, v: &'a Value) -> Result<&'a str> {
    match v {
        Value::Str(s) => Ok(s),
        other => Err(wrong_type(name, "a String path", other)),
    }
}

/// Calling a field or ring converts its argument into that structure.
fn call_value(f: Value, args: Vec<Value>) -> Result<Value> {
    let name = f.type_name();
    match (&f, args.as_slice()) {
        (Value::Field(field), [Value::Int(v)]) => Ok(Value::Elem(field.from_integer(v))),
        (Value::Field(field), [Value::Elem(e)]) if e.parent().is_same(field) => Ok(Value::Elem(e.clone())),
        (Value::Ring(ring), [Value::Int(v)]) => Ok(Value::Poly(ring.from_integer(v))),
        (Value::Ring(ring), [Value::Elem(e)]) => Ok(Value::Poly(ring.constant(e.clone())?)),
        (Value::Ring(ring), [Value::Poly(p)]) if p.parent().is_same(ring) => Ok(Value::Poly(p.clone())),
        (Value::Field(_) | Value::Ring(_), [arg]) => Err(EvalError::Type(format!(
            "cannot convert a {} into this {name}",
            arg.type_name()
        ))),
        (Value::Field(_) | Value::Ring(_), _) => Err(EvalError::Arity {
            name: name.into(),
            expected: "1".into(),
            found: args.len(),
        }),
        _ => Err(EvalError::Type(format!("a {name} is not callable"))),
    }
}

fn negate(v: Value) -> Result<Value> {
    match v {
        Value::Int(i) => Ok(Value::Int(-i)),
        Value::Elem(e) => Ok(Value::Elem(e.neg())),
        Value::Poly(p) => Ok(Value::Poly(p.neg())),
        other => Err(EvalError::Type(format!("unsupported operand for -: {}", other.type_name()))),
    }
}

fn unsupported(op: BinOp, l: &Value, r: &Value) -> EvalError {
    EvalError::Type(format!(
        "unsupported operands for {}: {} and {}",
        op.symbol(),
        l.type_name(),
        r.type_name()
    ))
}

/// Brings an Int to the other operand's structure.
fn coerce(l: Value, r: Value) -> Result<(Value, Value)> {
    Ok(match (l, r) {
        (Value::Elem(e), Value::Int(i)) => {
            let c = e.parent().from_integer(&i);
            (Value::Elem(e), Value::Elem(c))
        }
        (Value::Int(i), Value::Elem(e)) => (Value::Elem(e.parent().from_integer(&i)), Value::Elem(e)),
        (Value::Poly(p), Value::Int(i)) => {
            let c = p.parent().from_integer(&i);
            (Value::Poly(p), Value::Poly(c))
        }
        (Value::Int(i), Value::Poly(p)) => (Value::Poly(p.parent().from_integer(&i)), Value::Poly(p)),
        (Value::Poly(p), Value::Elem(e)) => {
            let c = p.parent().constant(e)?;
            (Value::Poly(p), Value::Poly(c))
        }
        (Value::Elem(e), Value::Poly(p)) => (Value::Poly(p.parent().constant(e)?), Value::Poly(p)),
        pair => pair,
    })
}

fn binary(op: BinOp, l: Value, r: Value) -> Result<Value> {
    if op == BinOp::Pow {
        return power(l, r);
    }
    if op == BinOp::Eq {
        return Ok(Value::Bool(match coerce(l.clone(), r.clone()) {
            Ok((a, b)) => a == b,
            Err(_) => false,
        }));
    }
    let (l, r) = coerce(l, r)?;
    Ok(match (op, &l, &r) {
        (BinOp::Add, Value::Int(a), Value::Int(b)) => Value::Int(a + b),
        (BinOp::Sub, Value::Int(a), Value::Int(b)) => Value::Int(a - b),
        (BinOp::Mul, Value::Int(a), Value::Int(b)) => Value::Int(a * b),
        (BinOp::Add, Value::Elem(a), Value::Elem(b)) => Value::Elem(a.add(b)?),
        (BinOp::Sub, Value::Elem(a), Value::Elem(b)) => Value::Elem(a.sub(b)?),
        (BinOp::Mul, Value::Elem(a), Value::Elem(b)) => Value::Elem(a.mul(b)?),
        (BinOp::Add, Value::Poly(a), Value::Poly(b)) => Value::Poly(a.add(b)?),
        (BinOp::Sub, Value::Poly(a), Value::Poly(b)) => Value::Poly(a.sub(b)?),
        (BinOp::Mul, Value::Poly(a), Value::Poly(b)) => Value::Poly(a.mul(b)?),
        (BinOp::Mul, Value::Poly(a), Value::Elem(b)) => Value::Poly(a.scale(b)?),
        _ => return Err(unsupported(op, &l, &r)),
    })
}

fn power(base: Value, exp: Value) -> Result<Value> {
    let e = match &exp {
        Value::Int(e) => e,
        _ => return Err(unsupported(BinOp::Pow, &base, &exp)),
    };
    match &base {
        Value::Int(b) => {
            if e.is_negative() {
                return Err(EvalError::Type("negative exponent for an Int".into()));
            }
            let trivial = b.is_zero() || b.abs().is_one();
            let small = e.to_u64().filter(|&k| k <= MAX_INT_EXPONENT);
            match small {
                Some(k) => Ok(Value::Int(num_traits::pow(b.clone(), k as usize))),
                None if trivial => {
                    let odd = e.bit(0);
                    let v = if b.is_negative() && !odd { BigInt::one() } else { b.clone() };
                    Ok(Value::Int(v))
                }
                None => Err(EvalError::Type("exponent too large".into())),
            }
        }
        Value::Elem(b) => Ok(Value::Elem(b.pow(e)?)),
        Value::Poly(p) => {
            if e.is_negative() {
                return Err(EvalError::Type("negative exponent for a Polynomial".into()));
            }
            let k = e
                .to_u64()
                .ok_or_else(|| EvalError::Type("exponent too large".into()))?;
            Ok(Value::Poly(p.pow(k)?))
        }
        _ => Err(unsupported(BinOp::Pow, &base, &exp)),
    }
}
