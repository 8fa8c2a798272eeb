//! Two independent Smith normal form implementations.
//!
//! [`snf_integer`] is specialised to integers and pivots on the entry of
//! least absolute value. [`snf_euclidean`] runs a generic algorithm over the
//! [`EuclideanDomain`] abstraction using only division with remainder. Both
//! return the diagonal form only; agreement between them is checked in tests.

mod euclidean;
mod integer;

pub use euclidean::{smith_normal_form, EuclideanDomain, Integers};
pub use integer::snf_integer;

use super::IntMatrix;

/// Smith normal form through the generic Euclidean-domain algorithm.
pub fn snf_euclidean(m: &IntMatrix) -> IntMatrix {
    let diag = smith_normal_form(&Integers, m.to_rows());
    IntMatrix::diagonal(m.rows(), m.cols(), &diag)
}
