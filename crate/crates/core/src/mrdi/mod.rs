//! The `.mrdi` document format.
//!
//! A document is canonical JSON with the top-level keys `_format`, `_ns`,
//! `_type`, `data` and `_refs`. Parents (fields and polynomial rings) are not
//! nested inside the objects that use them; they live in the flat `_refs`
//! table keyed by content-derived ids, so every file names its parents the
//! same way and a [`Session`] can hand back one live instance per id.
//!
//! All integers inside payloads are decimal strings.

mod canonical;
mod decode;
mod document;
mod encode;
mod error;
mod id;
mod object;
mod registry;
mod session;
mod upgrade;
mod validate;

use std::path::Path;

pub use canonical::{canonical_bytes, canonical_string};
pub use document::{Fragment, MrdiDocument, Namespace, TypeDescriptor, TypeParam};
pub use error::{MrdiError, Result};
pub use id::ObjectId;
pub use object::{Object, Parent};
pub use registry::TypeRegistry;
pub use session::Session;
pub use upgrade::{UpgradeRegistry, UpgradeScript};
pub use validate::{validate, Violation, ViolationKind};

/// Version written by [`save`]. Older documents need [`UpgradeRegistry::upgrade`].
pub const CURRENT_FORMAT_VERSION: u64 = 2;
pub const NAMESPACE: &str = "mathrepro";
pub const NAMESPACE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const FILE_EXTENSION: &str = "mrdi";

/// Serializes `obj` with the standard type registry.
pub fn save(obj: &Object) -> Result<MrdiDocument> {
    encode::encode(obj, &TypeRegistry::standard()).map(|(doc, _)| doc)
}

pub fn load(doc: &MrdiDocument, session: &mut Session) -> Result<Object> {
    session.load(doc)
}

/// Canonical bytes followed by a single newline.
pub fn file_bytes(doc: &MrdiDocument) -> Vec<u8> {
    let mut bytes = doc.canonical_bytes();
    bytes.push(b'\n');
    bytes
}

pub(crate) fn write_document(path: &Path, doc: &MrdiDocument) -> Result<()> {
    std::fs::write(path, file_bytes(doc)).map_err(|source| MrdiError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_file(path: impl AsRef<Path>, obj: &Object) -> Result<()> {
    write_document(path.as_ref(), &save(obj)?)
}

pub fn load_file(path: impl AsRef<Path>, session: &mut Session) -> Result<Object> {
    session.load_file(path)
}

/// Reads a document tree without checking it.
pub fn read_value(path: impl AsRef<Path>) -> Result<serde_json::Value> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| MrdiError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    document::parse_json(&bytes)
}
