use std::collections::BTreeSet;

pub const TYPE_INTEGER: &str = "Integer";
pub const TYPE_PRIME_FIELD: &str = "PrimeField";
pub const TYPE_FINITE_FIELD: &str = "FiniteField";
pub const TYPE_FIELD_ELEMENT: &str = "FieldElement";
pub const TYPE_POLY_RING: &str = "PolynomialRing";
pub const TYPE_POLYNOMIAL: &str = "Polynomial";
pub const TYPE_INT_MATRIX: &str = "IntMatrix";

pub const ALL_TYPES: [&str; 7] = [
    TYPE_INTEGER,
    TYPE_PRIME_FIELD,
    TYPE_FINITE_FIELD,
    TYPE_FIELD_ELEMENT,
    TYPE_POLY_RING,
    TYPE_POLYNOMIAL,
    TYPE_INT_MATRIX,
];

/// Types that may appear as parents in a reference table.
pub const PARENT_TYPES: [&str; 3] = [TYPE_PRIME_FIELD, TYPE_FINITE_FIELD, TYPE_POLY_RING];

/// Type names a namespace knows how to save and load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeRegistry {
    namespace: String,
    types: BTreeSet<String>,
}

impl TypeRegistry {
    /// Every kernel type under the crate namespace.
    pub fn standard() -> TypeRegistry {
        TypeRegistry {
            namespace: super::NAMESPACE.to_string(),
            types: ALL_TYPES.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn namespace(&self) -> &str {
        &self.namespace
    }

    pub fn contains(&self, type_name: &str) -> bool {
        self.types.contains(type_name)
    }

    pub fn unregister(&mut self, type_name: &str) -> bool {
        self.types.remove(type_name)
    }

    /// Only the kernel types have codecs, so unknown names are ignored.
    pub fn register(&mut self, type_name: &str) -> bool {
        ALL_TYPES.contains(&type_name) && self.types.insert(type_name.to_string())
    }

    pub fn types(&self) -> impl Iterator<Item = &str> {
        self.types.iter().map(String::as_str)
    }
}

impl Default for TypeRegistry {
    fn default() -> Self {
        TypeRegistry::standard()
    }
}
