use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::Value;

use crate::kernel::{Field, IntMatrix, PolyRing};

use super::document::{pointer, strict_object, string_at, Fragment, MrdiDocument, TypeDescriptor};
use super::error::{MrdiError, Result};
use super::id::ObjectId;
use super::object::{Object, Parent};
use super::registry::*;
use super::session::Session;

/// Strict decimal: optional minus, no leading zeros, no `-0`.
pub(crate) fn parse_decimal(v: &Value, path: &str) -> Result<BigInt> {
    let s = string_at(v, path)?;
    let digits = s.strip_prefix('-').unwrap_or(s);
    let canonical = !digits.is_empty()
        && digits.bytes().all(|b| b.is_ascii_digit())
        && (digits == "0" || !digits.starts_with('0'))
        && s != "-0";
    if !canonical {
        return Err(MrdiError::malformed(path, format!("'{s}' is not a decimal integer")));
    }
    Ok(s.parse().expect("validated decimal"))
}

fn parse_small<T: TryFrom<BigInt>>(v: &Value, path: &str, what: &str) -> Result<T> {
    let n = parse_decimal(v, path)?;
    T::try_from(n).map_err(|_| MrdiError::malformed(path, format!("{what} out of range")))
}

fn array_at<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| MrdiError::malformed(path, "expected an array"))
}

fn kernel_err(path: &str) -> impl Fn(crate::kernel::KernelError) -> MrdiError + '_ {
    move |e| MrdiError::malformed(path, e.to_string())
}

/// Loads documents into a session, reusing live parents by id.
pub(crate) struct Decoder<'a> {
    pub session: &'a mut Session,
    pub refs: &'a BTreeMap<ObjectId, Fragment>,
    stack: Vec<ObjectId>,
}

impl<'a> Decoder<'a> {
    pub fn new(session: &'a mut Session, refs: &'a BTreeMap<ObjectId, Fragment>) -> Self {
        Decoder {
            session,
            refs,
            stack: Vec::new(),
        }
    }

    fn check_registered(&self, name: &str, path: &str) -> Result<()> {
        if self.session.types().contains(name) {
            Ok(())
        } else if ALL_TYPES.contains(&name) {
            Err(MrdiError::UnregisteredType(name.to_string()))
        } else {
            Err(MrdiError::UnknownType(format!("{name} (at '{path}')")))
        }
    }

    fn resolve(&mut self, id: ObjectId, path: &str) -> Result<Parent> {
        if let Some(p) = self.session.parent(&id) {
            return Ok(p.clone());
        }
        if self.stack.contains(&id) {
            return Err(MrdiError::malformed(path, format!("cyclic reference to {id}")));
        }
        let frag = self.refs.get(&id).ok_or_else(|| {
            MrdiError::malformed(path, format!("reference {id} is missing from _refs"))
        })?;
        self.stack.push(id);
        let fpath = pointer("/_refs", id);
        let parent = self.decode_parent(frag, &fpath)?;
        self.stack.pop();
        Ok(self.session.register(id, parent))
    }

    fn resolve_field(&mut self, id: ObjectId, path: &str) -> Result<Field> {
        match self.resolve(id, path)? {
            Parent::Field(f) => Ok(f),
            Parent::Ring(_) => Err(MrdiError::malformed(path, format!("{id} is not a field"))),
        }
    }

    fn resolve_ring(&mut self, id: ObjectId, path: &str) -> Result<PolyRing> {
        match self.resolve(id, path)? {
            Parent::Ring(r) => Ok(r),
            Parent::Field(_) => Err(MrdiError::malformed(path, format!("{id} is not a ring"))),
        }
    }

    fn decode_parent(&mut self, frag: &Fragment, path: &str) -> Result<Parent> {
        let tpath = pointer(path, "_type");
        let dpath = pointer(path, "data");
        let name = frag.type_desc.name.as_str();
        if !PARENT_TYPES.contains(&name) {
            self.check_registered(name, &tpath)?;
            return Err(MrdiError::malformed(&tpath, format!("'{name}' cannot be a parent")));
        }
        self.check_registered(name, &tpath)?;
        if frag.type_desc.params.is_some() {
            return Err(MrdiError::malformed(&tpath, format!("'{name}' takes no parameters")));
        }
        match name {
            TYPE_PRIME_FIELD | TYPE_FINITE_FIELD => {
                decode_field(name, &frag.data, &dpath).map(Parent::Field)
            }
            _ => self.decode_ring(&frag.data, &dpath).map(Parent::Ring),
        }
    }

    fn decode_ring(&mut self, data: &Value, path: &str) -> Result<PolyRing> {
        let m = strict_object(data, path, &["base_ring", "symbols"], &["base_ring", "symbols"])?;
        let bpath = pointer(path, "base_ring");
        let base = ObjectId::parse(string_at(&m["base_ring"], &bpath)?)
            .ok_or_else(|| MrdiError::malformed(&bpath, "expected a UUID"))?;
        let spath = pointer(path, "symbols");
        let names = array_at(&m["symbols"], &spath)?
            .iter()
            .enumerate()
            .map(|(i, s)| string_at(s, &pointer(&spath, i)).map(str::to_string))
            .collect::<Result<Vec<_>>>()?;
        let field = self.resolve_field(base, &bpath)?;
        PolyRing::new(&field, names).map_err(kernel_err(&spath))
    }

    /// Decodes the top-level object of `doc`.
    pub fn decode_document(&mut self, doc: &MrdiDocument) -> Result<Object> {
        let name = doc.type_desc.name.as_str();
        self.check_registered(name, "/_type")?;
        let data = &doc.data;
        let parametrized = matches!(name, TYPE_FIELD_ELEMENT | TYPE_POLYNOMIAL);
        if parametrized != doc.type_desc.params.is_some() {
            return Err(MrdiError::malformed(
                "/_type",
                format!("'{name}' has the wrong parameter shape"),
            ));
        }
        let param = || {
            doc.type_desc
                .ref_param()
                .ok_or_else(|| MrdiError::malformed("/_type/params", "expected a reference"))
        };
        match name {
            TYPE_INTEGER => parse_decimal(data, "/data").map(Object::Integer),
            TYPE_PRIME_FIELD | TYPE_FINITE_FIELD => {
                let frag = Fragment {
                    type_desc: TypeDescriptor::simple(name),
                    data: data.clone(),
                };
                let id = frag.id();
                if let Some(Parent::Field(f)) = self.session.parent(&id) {
                    return Ok(Object::Field(f.clone()));
                }
                let field = decode_field(name, data, "/data")?;
                match self.session.register(id, Parent::Field(field)) {
                    Parent::Field(f) => Ok(Object::Field(f)),
                    Parent::Ring(_) => Err(MrdiError::malformed("/_type", "id names a ring")),
                }
            }
            TYPE_POLY_RING => {
                let frag = Fragment {
                    type_desc: TypeDescriptor::simple(name),
                    data: data.clone(),
                };
                let id = frag.id();
                if let Some(Parent::Ring(r)) = self.session.parent(&id) {
                    return Ok(Object::PolyRing(r.clone()));
                }
                let ring = self.decode_ring(data, "/data")?;
                match self.session.register(id, Parent::Ring(ring)) {
                    Parent::Ring(r) => Ok(Object::PolyRing(r)),
                    Parent::Field(_) => Err(MrdiError::malformed("/_type", "id names a field")),
                }
            }
            TYPE_FIELD_ELEMENT => {
                let field = self.resolve_field(param()?, "/_type/params")?;
                let coeffs = decode_coeffs(data, "/data", &field)?;
                Ok(Object::FieldElement(field.element(coeffs).map_err(kernel_err("/data"))?))
            }
            TYPE_POLYNOMIAL => {
                let ring = self.resolve_ring(param()?, "/_type/params")?;
                self.decode_polynomial(&ring, data).map(Object::Polynomial)
            }
            TYPE_INT_MATRIX => decode_matrix(data, "/data").map(Object::Matrix),
            other => Err(MrdiError::UnknownType(other.to_string())),
        }
    }

    fn decode_polynomial(&mut self, ring: &PolyRing, data: &Value) -> Result<crate::kernel::Polynomial> {
        let m = strict_object(data, "/data", &["terms"], &["terms"])?;
        let tpath = "/data/terms";
        let mut seen = std::collections::BTreeSet::new();
        let mut terms = Vec::new();
        for (i, term) in array_at(&m["terms"], tpath)?.iter().enumerate() {
            let path = pointer(tpath, i);
            let pair = array_at(term, &path)?;
            if pair.len() != 2 {
                return Err(MrdiError::malformed(&path, "expected [exponents, coefficient]"));
            }
            let epath = pointer(&path, 0);
            let exps = array_at(&pair[0], &epath)?
                .iter()
                .enumerate()
                .map(|(k, e)| parse_small::<u32>(e, &pointer(&epath, k), "exponent"))
                .collect::<Result<Vec<u32>>>()?;
            if exps.len() != ring.nvars() {
                return Err(MrdiError::malformed(
                    &epath,
                    format!("expected {} exponents, got {}", ring.nvars(), exps.len()),
                ));
            }
            if !seen.insert(exps.clone()) {
                return Err(MrdiError::malformed(&epath, "repeated monomial"));
            }
            let cpath = pointer(&path, 1);
            let coeffs = decode_coeffs(&pair[1], &cpath, ring.field())?;
            let c = ring.field().element(coeffs).map_err(kernel_err(&cpath))?;
            if c.is_zero() {
                return Err(MrdiError::malformed(&cpath, "zero coefficient"));
            }
            terms.push((exps, c));
        }
        ring.from_terms(terms).map_err(kernel_err("/data/terms"))
    }
}

fn decode_coeffs(v: &Value, path: &str, field: &Field) -> Result<Vec<u64>> {
    let arr = array_at(v, path)?;
    if arr.len() != field.degree() {
        return Err(MrdiError::malformed(
            path,
            format!("expected {} coefficients, got {}", field.degree(), arr.len()),
        ));
    }
    arr.iter()
        .enumerate()
        .map(|(i, c)| {
            let cpath = pointer(path, i);
            let n = parse_decimal(c, &cpath)?;
            n.to_u64()
                .filter(|&r| r < field.characteristic())
                .ok_or_else(|| MrdiError::malformed(&cpath, "coefficient is not reduced"))
        })
        .collect()
}

fn decode_field(name: &str, data: &Value, path: &str) -> Result<Field> {
    let cpath = pointer(path, "characteristic");
    if name == TYPE_PRIME_FIELD {
        let m = strict_object(data, path, &["characteristic"], &["characteristic"])?;
        let p = parse_decimal(&m["characteristic"], &cpath)?;
        return Field::prime(&p).map_err(kernel_err(&cpath));
    }
    let keys = ["characteristic", "defining_polynomial"];
    let m = strict_object(data, path, &keys, &keys)?;
    let p = parse_decimal(&m["characteristic"], &cpath)?;
    let ppath = pointer(path, "defining_polynomial");
    let modulus = array_at(&m["defining_polynomial"], &ppath)?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_small::<u64>(c, &pointer(&ppath, i), "coefficient"))
        .collect::<Result<Vec<_>>>()?;
    if modulus.len() < 3 {
        return Err(MrdiError::malformed(&ppath, "extension fields need degree at least 2"));
    }
    Field::with_modulus(&p, modulus).map_err(kernel_err(&ppath))
}

fn decode_matrix(data: &Value, path: &str) -> Result<IntMatrix> {
    let keys = ["cols", "entries", "rows"];
    let m = strict_object(data, path, &keys, &keys)?;
    let rows: usize = parse_small(&m["rows"], &pointer(path, "rows"), "row count")?;
    let cols: usize = parse_small(&m["cols"], &pointer(path, "cols"), "column count")?;
    let epath = pointer(path, "entries");
    let entries = array_at(&m["entries"], &epath)?
        .iter()
        .enumerate()
        .map(|(i, e)| parse_decimal(e, &pointer(&epath, i)))
        .collect::<Result<Vec<_>>>()?;
    IntMatrix::new(rows, cols, entries).map_err(kernel_err(path))
}
