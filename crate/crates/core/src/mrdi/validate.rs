use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::Value;

use super::document::{pointer, MrdiDocument};
use super::error::MrdiError;
use super::id::ObjectId;
use super::session::Session;
use super::upgrade::UpgradeRegistry;
use super::{TypeRegistry, CURRENT_FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Envelope shape: missing or unexpected top-level keys, bad `_refs` keys.
    Structure,
    /// `_format` is not the current version.
    Version,
    /// Unknown namespace or type name.
    Registry,
    /// A referenced id is missing from `_refs`.
    Closure,
    /// Parents refer to each other in a loop.
    Cycle,
    /// A payload does not match its type's schema.
    Schema,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = serde_json::to_value(self.kind).expect("unit enum");
        write!(f, "{} at '{}': {}", kind.as_str().unwrap_or("?"), self.path, self.message)
    }
}

fn violation(kind: ViolationKind, path: impl Into<String>, message: impl Into<String>) -> Violation {
    Violation {
        kind,
        path: path.into(),
        message: message.into(),
    }
}

/// Every string that parses as an object id, with its JSON pointer.
fn mentioned_ids(v: &Value, path: &str, out: &mut Vec<(ObjectId, String)>) {
    match v {
        Value::String(s) => {
            if let Some(id) = ObjectId::parse(s) {
                out.push((id, path.to_string()));
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                mentioned_ids(item, &pointer(path, i), out);
            }
        }
        Value::Object(m) => {
            for (k, item) in m {
                mentioned_ids(item, &pointer(path, k), out);
            }
        }
        _ => {}
    }
}

/// Checks a parsed document tree. An empty result means the document can be
/// loaded into a fresh session.
pub fn validate(doc: &Value, types: &TypeRegistry) -> Vec<Violation> {
    use ViolationKind::*;

    let parsed = match MrdiDocument::from_value(doc) {
        Ok(d) => d,
        Err(MrdiError::MalformedPayload { path, message }) => {
            return vec![violation(Structure, path, message)]
        }
        Err(e) => return vec![violation(Structure, "", e.to_string())],
    };
    let mut out = Vec::new();

    if parsed.format != CURRENT_FORMAT_VERSION {
        out.push(violation(
            Version,
            "/_format",
            format!(
                "format version {} differs from current version {}",
                parsed.format, CURRENT_FORMAT_VERSION
            ),
        ));
    }
    if parsed.ns.name != types.namespace() {
        out.push(violation(
            Registry,
            "/_ns/name",
            format!("unknown namespace '{}'", parsed.ns.name),
        ));
    }
    if !types.contains(&parsed.type_desc.name) {
        out.push(violation(
            Registry,
            "/_type",
            format!("type '{}' is not registered", parsed.type_desc.name),
        ));
    }
    for (id, frag) in &parsed.refs {
        if !types.contains(&frag.type_desc.name) {
            out.push(violation(
                Registry,
                pointer(&pointer("/_refs", id), "_type"),
                format!("type '{}' is not registered", frag.type_desc.name),
            ));
        }
    }

    // Closure over the top level and every fragment.
    let mut edges: BTreeMap<ObjectId, BTreeSet<ObjectId>> = BTreeMap::new();
    let mut top = Vec::new();
    mentioned_ids(&parsed.type_desc.to_value(), "/_type", &mut top);
    mentioned_ids(&parsed.data, "/data", &mut top);
    for (id, path) in &top {
        if !parsed.refs.contains_key(id) {
            out.push(violation(Closure, path.clone(), format!("{id} is not in _refs")));
        }
    }
    for (id, frag) in &parsed.refs {
        let base = pointer("/_refs", id);
        let mut found = Vec::new();
        mentioned_ids(&frag.type_desc.to_value(), &pointer(&base, "_type"), &mut found);
        mentioned_ids(&frag.data, &pointer(&base, "data"), &mut found);
        for (target, path) in found {
            if parsed.refs.contains_key(&target) {
                edges.entry(*id).or_default().insert(target);
            } else {
                out.push(violation(Closure, path, format!("{target} is not in _refs")));
            }
        }
    }

    // Parents must form a DAG; report each back edge once.
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit(
        id: ObjectId,
        edges: &BTreeMap<ObjectId, BTreeSet<ObjectId>>,
        marks: &mut BTreeMap<ObjectId, Mark>,
        out: &mut Vec<Violation>,
    ) {
        marks.insert(id, Mark::Open);
        for &next in edges.get(&id).into_iter().flatten() {
            match marks.get(&next) {
                Some(Mark::Open) => out.push(violation(
                    ViolationKind::Cycle,
                    pointer("/_refs", id),
                    format!("{id} refers back to {next}"),
                )),
                Some(Mark::Done) => {}
                None => visit(next, edges, marks, out),
            }
        }
        marks.insert(id, Mark::Done);
    }
    let mut marks = BTreeMap::new();
    for &id in parsed.refs.keys() {
        if !marks.contains_key(&id) {
            visit(id, &edges, &mut marks, &mut out);
        }
    }

    if out.is_empty() {
        let mut scratch = Session::with_registries(types.clone(), UpgradeRegistry::empty());
        match scratch.load(&parsed) {
            Ok(_) => {}
            Err(MrdiError::MalformedPayload { path, message }) => {
                out.push(violation(Schema, path, message))
            }
            Err(MrdiError::UnknownType(t)) => {
                out.push(violation(Registry, "/_type", format!("unknown type {t}")))
            }
            Err(e) => out.push(violation(Schema, "", e.to_string())),
        }
    }
    out
}
