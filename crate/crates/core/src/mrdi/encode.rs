use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::kernel::{Field, PolyRing};

use super::document::{Fragment, MrdiDocument, Namespace, TypeDescriptor};
use super::error::{MrdiError, Result};
use super::id::ObjectId;
use super::object::{Object, Parent};
use super::registry::*;
use super::{TypeRegistry, CURRENT_FORMAT_VERSION};

pub(crate) fn dec<T: ToString>(v: T) -> Value {
    Value::String(v.to_string())
}

/// Reference table under construction, plus the live parents it names.
#[derive(Default)]
pub(crate) struct RefTable {
    pub refs: BTreeMap<ObjectId, Fragment>,
    pub parents: Vec<(ObjectId, Parent)>,
}

impl RefTable {
    fn insert(&mut self, frag: Fragment, parent: Parent) -> ObjectId {
        let id = frag.id();
        if let std::collections::btree_map::Entry::Vacant(e) = self.refs.entry(id) {
            e.insert(frag);
            self.parents.push((id, parent));
        }
        id
    }

    pub fn field(&mut self, field: &Field) -> ObjectId {
        self.insert(field_fragment(field), Parent::Field(field.clone()))
    }

    pub fn ring(&mut self, ring: &PolyRing) -> ObjectId {
        let frag = ring_fragment(ring, self);
        self.insert(frag, Parent::Ring(ring.clone()))
    }
}

fn field_fragment(field: &Field) -> Fragment {
    match field.defining_poly() {
        None => Fragment {
            type_desc: TypeDescriptor::simple(TYPE_PRIME_FIELD),
            data: json!({ "characteristic": dec(field.characteristic()) }),
        },
        Some(poly) => Fragment {
            type_desc: TypeDescriptor::simple(TYPE_FINITE_FIELD),
            data: json!({
                "characteristic": dec(field.characteristic()),
                "defining_polynomial": poly.iter().map(dec).collect::<Vec<_>>(),
            }),
        },
    }
}

fn ring_fragment(ring: &PolyRing, table: &mut RefTable) -> Fragment {
    let field_id = table.field(ring.field());
    Fragment {
        type_desc: TypeDescriptor::simple(TYPE_POLY_RING),
        data: json!({
            "base_ring": field_id.to_string(),
            "symbols": ring.names(),
        }),
    }
}

/// Encodes `obj` against `registry`, returning the document and the parents
/// named in its reference table (including a top-level parent itself).
pub(crate) fn encode(obj: &Object, registry: &TypeRegistry) -> Result<(MrdiDocument, RefTable)> {
    let name = obj.type_name();
    if !registry.contains(name) {
        return Err(MrdiError::UnregisteredType(name.to_string()));
    }
    let mut table = RefTable::default();
    let (type_desc, data) = match obj {
        Object::Integer(v) => (TypeDescriptor::simple(name), dec(v)),
        Object::Field(f) => {
            let frag = field_fragment(f);
            table.parents.push((frag.id(), Parent::Field(f.clone())));
            (frag.type_desc, frag.data)
        }
        Object::PolyRing(r) => {
            let frag = ring_fragment(r, &mut table);
            table.parents.push((frag.id(), Parent::Ring(r.clone())));
            (frag.type_desc, frag.data)
        }
        Object::FieldElement(e) => {
            let id = table.field(e.parent());
            let coeffs: Vec<Value> = e.coeffs().iter().map(dec).collect();
            (TypeDescriptor::with_ref(name, id), Value::Array(coeffs))
        }
        Object::Polynomial(p) => {
            let id = table.ring(p.parent());
            let terms: Vec<Value> = p
                .terms()
                .map(|(exps, c)| {
                    json!([
                        exps.iter().map(dec).collect::<Vec<_>>(),
                        c.coeffs().iter().map(dec).collect::<Vec<_>>(),
                    ])
                })
                .collect();
            (TypeDescriptor::with_ref(name, id), json!({ "terms": terms }))
        }
        Object::Matrix(m) => (
            TypeDescriptor::simple(name),
            json!({
                "rows": dec(m.rows()),
                "cols": dec(m.cols()),
                "entries": m.entries().iter().map(dec).collect::<Vec<_>>(),
            }),
        ),
    };
    let doc = MrdiDocument {
        format: CURRENT_FORMAT_VERSION,
        ns: Namespace {
            name: registry.namespace().to_string(),
            version: super::NAMESPACE_VERSION.to_string(),
        },
        type_desc,
        data,
        refs: table.refs.clone(),
    };
    Ok((doc, table))
}
