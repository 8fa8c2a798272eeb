use std::collections::HashMap;
use std::path::Path;

use super::decode::Decoder;
use super::document::{parse_json, MrdiDocument};
use super::encode::encode;
use super::error::{MrdiError, Result};
use super::id::ObjectId;
use super::object::{Object, Parent};
use super::upgrade::{format_of, UpgradeRegistry};
use super::{TypeRegistry, CURRENT_FORMAT_VERSION, NAMESPACE_VERSION};

/// Deserialization context mapping object ids to live parents.
///
/// Documents loaded into the same session that name the same parent id get
/// the same parent instance, so their elements can be combined. A session is
/// meant for one logical computation and is not shared between threads.
#[derive(Debug, Default)]
pub struct Session {
    parents: HashMap<ObjectId, Parent>,
    log: Vec<ObjectId>,
    warnings: Vec<String>,
    types: TypeRegistry,
    upgrades: UpgradeRegistry,
}

impl Session {
    pub fn new() -> Session {
        Session::default()
    }

    pub fn with_registries(types: TypeRegistry, upgrades: UpgradeRegistry) -> Session {
        Session {
            types,
            upgrades,
            ..Session::default()
        }
    }

    pub fn types(&self) -> &TypeRegistry {
        &self.types
    }

    pub fn upgrades(&self) -> &UpgradeRegistry {
        &self.upgrades
    }

    pub fn parent(&self, id: &ObjectId) -> Option<&Parent> {
        self.parents.get(id)
    }

    /// Registers `parent` under `id` unless the id is taken, and returns the
    /// instance the session holds for it.
    pub fn register(&mut self, id: ObjectId, parent: Parent) -> Parent {
        self.parents
            .entry(id)
            .or_insert_with(|| {
                self.log.push(id);
                parent
            })
            .clone()
    }

    /// Ids in the order their parents entered the session.
    pub fn load_log(&self) -> &[ObjectId] {
        &self.log
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Serializes `obj` and registers its parents, so loading the document
    /// back into this session yields elements of the very same parents.
    pub fn save(&mut self, obj: &Object) -> Result<MrdiDocument> {
        let (doc, table) = encode(obj, &self.types)?;
        for (id, parent) in table.parents {
            self.register(id, parent);
        }
        Ok(doc)
    }

    pub fn save_file(&mut self, path: impl AsRef<Path>, obj: &Object) -> Result<()> {
        let doc = self.save(obj)?;
        super::write_document(path.as_ref(), &doc)
    }

    /// Loads a document at the current format version. On error the session
    /// is left as it was.
    pub fn load(&mut self, doc: &MrdiDocument) -> Result<Object> {
        if doc.ns.name != self.types.namespace() {
            return Err(MrdiError::UnknownNamespace(doc.ns.name.clone()));
        }
        if doc.format > CURRENT_FORMAT_VERSION {
            return Err(MrdiError::VersionTooNew {
                found: doc.format,
                current: CURRENT_FORMAT_VERSION,
            });
        }
        if doc.format < CURRENT_FORMAT_VERSION {
            return Err(MrdiError::OutdatedFormat {
                found: doc.format,
                current: CURRENT_FORMAT_VERSION,
            });
        }
        let mark = self.log.len();
        let result = Decoder::new(self, &doc.refs).decode_document(doc);
        match result {
            Ok(obj) => {
                if doc.ns.version != NAMESPACE_VERSION {
                    self.warnings.push(format!(
                        "document written by {} {}, reading with {}",
                        doc.ns.name, doc.ns.version, NAMESPACE_VERSION
                    ));
                }
                Ok(obj)
            }
            Err(e) => {
                for id in self.log.drain(mark..) {
                    self.parents.remove(&id);
                }
                Err(e)
            }
        }
    }

    /// Parses raw bytes, runs registered upgrades up to the current format
    /// version when needed, then loads.
    pub fn load_bytes(&mut self, bytes: &[u8]) -> Result<Object> {
        let mut value = parse_json(bytes)?;
        let format = format_of(&value)?;
        if format < CURRENT_FORMAT_VERSION {
            value = self.upgrades.upgrade(&value, CURRENT_FORMAT_VERSION)?;
        }
        let doc = MrdiDocument::from_value(&value)?;
        self.load(&doc)
    }

    pub fn load_file(&mut self, path: impl AsRef<Path>) -> Result<Object> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|source| MrdiError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.load_bytes(&bytes)
    }
}
