//! Exact arithmetic kernel: finite fields, multivariate polynomial rings,
//! integer matrices and Smith normal forms.
//!
//! Parents (fields and rings) are shared handles. Two parents are the *same*
//! only when they are the same instance; `PartialEq` on parents is structural
//! and never substitutes for the identity check done by arithmetic.

mod error;
mod field;
pub mod fp_poly;
mod matrix;
mod poly;
pub mod snf;

pub use error::{KernelError, Result};
pub use field::{Field, FieldElement};
pub use matrix::IntMatrix;
pub use poly::{polynomial_ring, Monomial, PolyRing, Polynomial};
pub use snf::{snf_euclidean, snf_integer};

/// Arbitrary precision integers.
pub type Integer = num_bigint::BigInt;

/// Checks an identifier against `[A-Za-z][A-Za-z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::is_identifier;

    #[test]
    fn identifiers() {
        assert!(is_identifier("x"));
        assert!(is_identifier("x_1"));
        assert!(is_identifier("Ab9"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier("_x"));
        assert!(!is_identifier("x-y"));
    }
}
