//! Reproducible computer-algebra experiments at desk scale.
//!
//! - [`kernel`]: exact finite fields, polynomial rings, integer matrices and
//!   Smith normal forms.
//! - [`mrdi`]: self-describing `.mrdi` documents that keep parent identity
//!   across files and sessions, with versioned upgrades.
//! - [`env`]: environment reports, directory tree hashes and pinned
//!   project/manifest files.
//! - [`runner`]: a small interpreter and a doctest checker/fixer for
//!   documents with embedded sessions.

pub mod kernel;
pub mod mrdi;
pub mod env;
pub mod runner;
