use std::fmt;

use num_bigint::BigInt;

use crate::env::EnvironmentReport;
use crate::kernel::{Field, FieldElement, IntMatrix, PolyRing, Polynomial};
use crate::mrdi::Object;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(BigInt),
    Str(String),
    Bool(bool),
    List(Vec<Value>),
    Tuple(Vec<Value>),
    Field(Field),
    Elem(FieldElement),
    Ring(PolyRing),
    Poly(Polynomial),
    Matrix(IntMatrix),
    Report(Box<EnvironmentReport>),
    Nothing,
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "Int",
            Value::Str(_) => "String",
            Value::Bool(_) => "Bool",
            Value::List(_) => "List",
            Value::Tuple(_) => "Tuple",
            Value::Field(_) => "Field",
            Value::Elem(_) => "FieldElem",
            Value::Ring(_) => "Ring",
            Value::Poly(_) => "Polynomial",
            Value::Matrix(_) => "Matrix",
            Value::Report(_) => "Report",
            Value::Nothing => "Nothing",
        }
    }

    /// The value's printed lines; `Nothing` prints none.
    pub fn lines(&self) -> Vec<String> {
        match self {
            Value::Nothing => Vec::new(),
            v => v.to_string().lines().map(str::to_string).collect(),
        }
    }

    pub fn to_object(&self) -> Option<Object> {
        Some(match self {
            Value::Int(v) => Object::Integer(v.clone()),
            Value::Field(f) => Object::Field(f.clone()),
            Value::Elem(e) => Object::FieldElement(e.clone()),
            Value::Ring(r) => Object::PolyRing(r.clone()),
            Value::Poly(p) => Object::Polynomial(p.clone()),
            Value::Matrix(m) => Object::Matrix(m.clone()),
            _ => return None,
        })
    }
}

impl From<Object> for Value {
    fn from(obj: Object) -> Self {
        match obj {
            Object::Integer(v) => Value::Int(v),
            Object::Field(f) => Value::Field(f),
            Object::FieldElement(e) => Value::Elem(e),
            Object::PolyRing(r) => Value::Ring(r),
            Object::Polynomial(p) => Value::Poly(p),
            Object::Matrix(m) => Value::Matrix(m),
        }
    }
}

fn write_seq(f: &mut fmt::Formatter<'_>, open: &str, items: &[Value], close: &str) -> fmt::Result {
    f.write_str(open)?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    if open == "(" && items.len() == 1 {
        f.write_str(",")?;
    }
    f.write_str(close)
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::List(items) => write_seq(f, "[", items, "]"),
            Value::Tuple(items) => write_seq(f, "(", items, ")"),
            Value::Field(x) => write!(f, "{x}"),
            Value::Elem(x) => write!(f, "{x}"),
            Value::Ring(x) => write!(f, "{x}"),
            Value::Poly(x) => write!(f, "{x}"),
            Value::Matrix(m) => write!(f, "{m}"),
            Value::Report(r) => write!(f, "{}", r.to_string().trim_end()),
            Value::Nothing => Ok(()),
        }
    }
}
