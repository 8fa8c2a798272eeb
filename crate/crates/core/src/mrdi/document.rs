use std::collections::BTreeMap;

use serde_json::{Map, Value};

use super::canonical::canonical_bytes;
use super::error::{MrdiError, Result};
use super::id::ObjectId;

pub const KEY_FORMAT: &str = "_format";
pub const KEY_NS: &str = "_ns";
pub const KEY_TYPE: &str = "_type";
pub const KEY_DATA: &str = "data";
pub const KEY_REFS: &str = "_refs";

/// JSON pointer segment escaping.
pub(crate) fn pointer(base: &str, segment: impl std::fmt::Display) -> String {
    let seg = segment.to_string().replace('~', "~0").replace('/', "~1");
    format!("{base}/{seg}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Namespace {
    pub name: String,
    pub version: String,
}

impl Namespace {
    pub fn current() -> Namespace {
        Namespace {
            name: super::NAMESPACE.to_string(),
            version: super::NAMESPACE_VERSION.to_string(),
        }
    }

    fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        m.insert("version".into(), Value::String(self.version.clone()));
        Value::Object(m)
    }

    fn from_value(v: &Value, path: &str) -> Result<Namespace> {
        let m = strict_object(v, path, &["name", "version"], &["name", "version"])?;
        Ok(Namespace {
            name: string_at(&m["name"], &pointer(path, "name"))?.to_string(),
            version: string_at(&m["version"], &pointer(path, "version"))?.to_string(),
        })
    }
}

/// Parameter of a parametrized type: a parent reference or a nested type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeParam {
    Ref(ObjectId),
    Nested(Box<TypeDescriptor>),
}

/// `"Integer"` or `{"name": "Polynomial", "params": "<uuid>"}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDescriptor {
    pub name: String,
    pub params: Option<TypeParam>,
}

impl TypeDescriptor {
    pub fn simple(name: &str) -> TypeDescriptor {
        TypeDescriptor {
            name: name.to_string(),
            params: None,
        }
    }

    pub fn with_ref(name: &str, id: ObjectId) -> TypeDescriptor {
        TypeDescriptor {
            name: name.to_string(),
            params: Some(TypeParam::Ref(id)),
        }
    }

    pub fn to_value(&self) -> Value {
        match &self.params {
            None => Value::String(self.name.clone()),
            Some(param) => {
                let mut m = Map::new();
                m.insert("name".into(), Value::String(self.name.clone()));
                let p = match param {
                    TypeParam::Ref(id) => Value::String(id.to_string()),
                    TypeParam::Nested(t) => t.to_value(),
                };
                m.insert("params".into(), p);
                Value::Object(m)
            }
        }
    }

    pub fn from_value(v: &Value, path: &str) -> Result<TypeDescriptor> {
        match v {
            Value::String(s) => Ok(TypeDescriptor::simple(s)),
            Value::Object(_) => {
                let m = strict_object(v, path, &["name", "params"], &["name", "params"])?;
                let name = string_at(&m["name"], &pointer(path, "name"))?.to_string();
                let ppath = pointer(path, "params");
                let params = match &m["params"] {
                    Value::String(s) => TypeParam::Ref(
                        ObjectId::parse(s)
                            .ok_or_else(|| MrdiError::malformed(&ppath, "expected a UUID"))?,
                    ),
                    other => TypeParam::Nested(Box::new(TypeDescriptor::from_value(other, &ppath)?)),
                };
                Ok(TypeDescriptor {
                    name,
                    params: Some(params),
                })
            }
            _ => Err(MrdiError::malformed(path, "expected a type name or object")),
        }
    }

    /// Reference carried by the descriptor, if any.
    pub fn ref_param(&self) -> Option<ObjectId> {
        match &self.params {
            Some(TypeParam::Ref(id)) => Some(*id),
            _ => None,
        }
    }
}

/// A parent object stored in the reference table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub type_desc: TypeDescriptor,
    pub data: Value,
}

impl Fragment {
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert(KEY_TYPE.into(), self.type_desc.to_value());
        m.insert(KEY_DATA.into(), self.data.clone());
        Value::Object(m)
    }

    pub fn from_value(v: &Value, path: &str) -> Result<Fragment> {
        let m = strict_object(v, path, &[KEY_TYPE, KEY_DATA], &[KEY_TYPE, KEY_DATA])?;
        Ok(Fragment {
            type_desc: TypeDescriptor::from_value(&m[KEY_TYPE], &pointer(path, KEY_TYPE))?,
            data: m[KEY_DATA].clone(),
        })
    }

    /// Content-derived identifier of this fragment.
    pub fn id(&self) -> ObjectId {
        ObjectId::from_content(&canonical_bytes(&self.to_value()))
    }
}

/// A serialized object: namespace, type, payload and the transitively closed
/// table of the parents it refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrdiDocument {
    pub format: u64,
    pub ns: Namespace,
    pub type_desc: TypeDescriptor,
    pub data: Value,
    pub refs: BTreeMap<ObjectId, Fragment>,
}

impl MrdiDocument {
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert(KEY_FORMAT.into(), Value::from(self.format));
        m.insert(KEY_NS.into(), self.ns.to_value());
        m.insert(KEY_TYPE.into(), self.type_desc.to_value());
        m.insert(KEY_DATA.into(), self.data.clone());
        let refs: Map<String, Value> = self
            .refs
            .iter()
            .map(|(id, frag)| (id.to_string(), frag.to_value()))
            .collect();
        m.insert(KEY_REFS.into(), Value::Object(refs));
        Value::Object(m)
    }

    /// Parses the envelope. Payloads are checked when loading.
    pub fn from_value(v: &Value) -> Result<MrdiDocument> {
        let all = [KEY_FORMAT, KEY_NS, KEY_TYPE, KEY_DATA, KEY_REFS];
        let m = strict_object(v, "", &all, &all)?;
        let format = m[KEY_FORMAT]
            .as_u64()
            .filter(|&f| f >= 1)
            .ok_or_else(|| MrdiError::malformed("/_format", "expected a positive integer"))?;
        let ns = Namespace::from_value(&m[KEY_NS], "/_ns")?;
        let type_desc = TypeDescriptor::from_value(&m[KEY_TYPE], "/_type")?;
        let refs_obj = m[KEY_REFS]
            .as_object()
            .ok_or_else(|| MrdiError::malformed("/_refs", "expected an object"))?;
        let mut refs = BTreeMap::new();
        for (key, frag) in refs_obj {
            let path = pointer("/_refs", key);
            let id = ObjectId::parse(key)
                .ok_or_else(|| MrdiError::malformed(&path, "reference key is not a UUID"))?;
            refs.insert(id, Fragment::from_value(frag, &path)?);
        }
        Ok(MrdiDocument {
            format,
            ns,
            type_desc,
            data: m[KEY_DATA].clone(),
            refs,
        })
    }

    pub fn parse(bytes: &[u8]) -> Result<MrdiDocument> {
        MrdiDocument::from_value(&parse_json(bytes)?)
    }

    pub fn canonical_bytes(&self) -> Vec<u8> {
        canonical_bytes(&self.to_value())
    }
}

pub(crate) fn parse_json(bytes: &[u8]) -> Result<Value> {
    serde_json::from_slice(bytes).map_err(|e| MrdiError::malformed("", format!("invalid JSON: {e}")))
}

/// Object with exactly the `required` keys plus any of `allowed`.
pub(crate) fn strict_object<'a>(
    v: &'a Value,
    path: &str,
    allowed: &[&str],
    required: &[&str],
) -> Result<&'a Map<String, Value>> {
    let m = v
        .as_object()
        .ok_or_else(|| MrdiError::malformed(path, "expected an object"))?;
    for key in required {
        if !m.contains_key(*key) {
            return Err(MrdiError::malformed(path, format!("missing key '{key}'")));
        }
    }
    if let Some(extra) = m.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(MrdiError::malformed(
            pointer(path, extra),
            format!("unexpected key '{extra}'"),
        ));
    }
    Ok(m)
}

pub(crate) fn string_at<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| MrdiError::malformed(path, "expected a string"))
}
