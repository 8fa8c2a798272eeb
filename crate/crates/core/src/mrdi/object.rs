use num_bigint::BigInt;

use crate::kernel::{Field, FieldElement, IntMatrix, PolyRing, Polynomial};

use super::registry::*;

/// Any kernel value that can be saved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Object {
    Integer(BigInt),
    Field(Field),
    FieldElement(FieldElement),
    PolyRing(PolyRing),
    Polynomial(Polynomial),
    Matrix(IntMatrix),
}

impl Object {
    pub fn type_name(&self) -> &'static str {
        match self {
            Object::Integer(_) => TYPE_INTEGER,
            Object::Field(f) if f.is_prime_field() => TYPE_PRIME_FIELD,
            Object::Field(_) => TYPE_FINITE_FIELD,
            Object::FieldElement(_) => TYPE_FIELD_ELEMENT,
            Object::PolyRing(_) => TYPE_POLY_RING,
            Object::Polynomial(_) => TYPE_POLYNOMIAL,
            Object::Matrix(_) => TYPE_INT_MATRIX,
        }
    }
}

impl From<BigInt> for Object {
    fn from(v: BigInt) -> Self {
        Object::Integer(v)
    }
}

impl From<Field> for Object {
    fn from(v: Field) -> Self {
        Object::Field(v)
    }
}

impl From<FieldElement> for Object {
    fn from(v: FieldElement) -> Self {
        Object::FieldElement(v)
    }
}

impl From<PolyRing> for Object {
    fn from(v: PolyRing) -> Self {
        Object::PolyRing(v)
    }
}

impl From<Polynomial> for Object {
    fn from(v: Polynomial) -> Self {
        Object::Polynomial(v)
    }
}

impl From<IntMatrix> for Object {
    fn from(v: IntMatrix) -> Self {
        Object::Matrix(v)
    }
}

/// A live parent held by a session.
#[derive(Debug, Clone)]
pub enum Parent {
    Field(Field),
    Ring(PolyRing),
}
