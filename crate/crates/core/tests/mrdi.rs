use std::path::PathBuf;

use mathrepro::kernel::{polynomial_ring, Field, IntMatrix, KernelError, PolyRing, Polynomial};
use mathrepro::mrdi::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use serde_json::{json, Value};

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn gf49_ring() -> (PolyRing, Vec<Polynomial>) {
    let f = Field::finite(&int(7), 2).unwrap();
    polynomial_ring(&f, &["x", "y"]).unwrap()
}

fn as_poly(obj: Object) -> Polynomial {
    match obj {
        Object::Polynomial(p) => p,
        other => panic!("expected a polynomial, got {other:?}"),
    }
}

#[test]
fn polynomial_document_names_ring_and_field() {
    let f = Field::prime(&int(7)).unwrap();
    let (_, g) = polynomial_ring(&f, &["x", "y"]).unwrap();
    let p = g[0].pow(2).unwrap().add(&g[1]).unwrap();
    let doc = save(&p.into()).unwrap();
    assert_eq!(doc.refs.len(), 2);
    let kinds: Vec<&str> = doc.refs.values().map(|f| f.type_desc.name.as_str()).collect();
    assert!(kinds.contains(&"PrimeField") && kinds.contains(&"PolynomialRing"));
}

#[test]
fn integer_document_has_no_refs() {
    let doc = save(&Object::Integer(int(42))).unwrap();
    assert!(doc.refs.is_empty());
    assert_eq!(doc.data, json!("42"));
}

#[test]
fn same_ring_documents_share_refs_bytes() {
    let (_, g) = gf49_ring();
    let a = save(&g[0].clone().into()).unwrap();
    let b = save(&g[1].pow(3).unwrap().into()).unwrap();
    let refs = |d: &MrdiDocument| canonical_bytes(&d.to_value()["_refs"]);
    assert_eq!(refs(&a), refs(&b));
}

#[test]
fn canonical_bytes_are_stable() {
    let (_, g) = gf49_ring();
    let doc = save(&g[0].clone().into()).unwrap();
    assert_eq!(doc.canonical_bytes(), doc.canonical_bytes());
    assert!(!doc.canonical_bytes().contains(&b'\n'));

    // Same document with reversed `_refs` insertion order.
    let value = doc.to_value();
    let refs = value["_refs"].as_object().unwrap();
    let reversed: serde_json::Map<String, Value> =
        refs.iter().rev().map(|(k, v)| (k.clone(), v.clone())).collect();
    let mut other = value.clone();
    other["_refs"] = Value::Object(reversed);
    assert_eq!(canonical_bytes(&value), canonical_bytes(&other));
}

#[test]
fn golden_documents() {
    let f2 = Field::prime(&int(2)).unwrap();
    let (r, _) = polynomial_ring(&f2, &[]).unwrap();
    let minimal = file_bytes(&save(&r.zero().into()).unwrap());
    assert_eq!(minimal, std::fs::read(fixture("golden/minimal.mrdi")).unwrap());
    let answer = file_bytes(&save(&Object::Integer(int(42))).unwrap());
    assert_eq!(answer, std::fs::read(fixture("golden/integer_42.mrdi")).unwrap());
}

#[test]
fn same_session_restores_identity() {
    let dir = tempfile::tempdir().unwrap();
    let (_, g) = gf49_ring();
    let p = g[0].pow(2).unwrap();
    let q = g[1].add(&g[0]).unwrap();
    save_file(dir.path().join("p.mrdi"), &p.clone().into()).unwrap();
    save_file(dir.path().join("q.mrdi"), &q.clone().into()).unwrap();

    let mut session = Session::new();
    let lp = as_poly(load_file(dir.path().join("p.mrdi"), &mut session).unwrap());
    let lq = as_poly(load_file(dir.path().join("q.mrdi"), &mut session).unwrap());
    assert!(lp.parent().is_same(lq.parent()));
    assert_eq!(lp.add(&lq).unwrap(), p.add(&q).unwrap());
    assert_eq!(session.load_log().len(), 2);

    let mut a = Session::new();
    let mut b = Session::new();
    let lp = as_poly(load_file(dir.path().join("p.mrdi"), &mut a).unwrap());
    let lq = as_poly(load_file(dir.path().join("q.mrdi"), &mut b).unwrap());
    assert_eq!(lp.add(&lq).unwrap_err(), KernelError::ParentMismatch("rings"));
}

#[test]
fn session_save_registers_parents() {
    let (_, g) = gf49_ring();
    let mut session = Session::new();
    let doc = session.save(&g[0].clone().into()).unwrap();
    let back = as_poly(session.load(&doc).unwrap());
    assert!(back.parent().is_same(g[1].parent()));
    assert!(back.add(&g[1]).is_ok());
}

#[test]
fn matrix_roundtrip() {
    let m = IntMatrix::from_rows(vec![vec![int(1), int(-2)], vec![int(3), "123456789012345678901234567890".parse().unwrap()]]).unwrap();
    let doc = save(&m.clone().into()).unwrap();
    assert_eq!(Session::new().load(&doc).unwrap(), Object::Matrix(m));
}

#[test]
fn save_file_rewrite_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (_, g) = gf49_ring();
    let path = dir.path().join("p.mrdi");
    save_file(&path, &g[0].pow(5).unwrap().into()).unwrap();
    let first = std::fs::read(&path).unwrap();
    assert_eq!(first.iter().filter(|&&b| b == b'\n').count(), 1);
    assert_eq!(first.last(), Some(&b'\n'));
    let obj = load_file(&path, &mut Session::new()).unwrap();
    save_file(&path, &obj).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn truncated_file_is_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.mrdi");
    let (_, g) = gf49_ring();
    save_file(&path, &g[0].clone().into()).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    std::fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
    assert!(matches!(
        load_file(&path, &mut Session::new()),
        Err(MrdiError::MalformedPayload { .. })
    ));
    let missing = load_file(dir.path().join("nope.mrdi"), &mut Session::new()).unwrap_err();
    assert!(matches!(missing, MrdiError::Io { .. }));
    assert!(missing.to_string().contains("nope.mrdi"));
}

#[test]
fn foreign_defining_polynomial_loads() {
    // GF(49) presented by x^2 + x + 3 instead of x^2 + 1.
    let mut doc = save(&Field::finite(&int(7), 2).unwrap().into()).unwrap();
    doc.data = json!({"characteristic": "7", "defining_polynomial": ["3", "1", "1"]});
    match Session::new().load(&doc).unwrap() {
        Object::Field(f) => assert_eq!(f.defining_poly(), Some(&[3, 1, 1][..])),
        other => panic!("{other:?}"),
    }
    doc.data = json!({"characteristic": "7", "defining_polynomial": ["3", "0", "1"]});
    assert!(matches!(
        Session::new().load(&doc),
        Err(MrdiError::MalformedPayload { .. })
    ));
}

#[test]
fn load_errors() {
    let (_, g) = gf49_ring();
    let doc = save(&g[0].clone().into()).unwrap();

    let mut bad = doc.clone();
    bad.ns.name = "Oscar".into();
    assert!(matches!(Session::new().load(&bad), Err(MrdiError::UnknownNamespace(n)) if n == "Oscar"));

    let mut bad = doc.clone();
    bad.type_desc.name = "Matroid".into();
    assert!(matches!(Session::new().load(&bad), Err(MrdiError::UnknownType(_))));

    let mut bad = doc.clone();
    bad.format = 9;
    assert!(matches!(
        Session::new().load(&bad),
        Err(MrdiError::VersionTooNew { found: 9, current: 2 })
    ));

    let mut bad = doc.clone();
    bad.format = 1;
    assert!(matches!(Session::new().load(&bad), Err(MrdiError::OutdatedFormat { .. })));

    let mut bad = doc.clone();
    bad.data = json!({"terms": [[["1", "0"], ["1", "7"]]]});
    match Session::new().load(&bad) {
        Err(MrdiError::MalformedPayload { path, .. }) => assert_eq!(path, "/data/terms/0/1/1"),
        other => panic!("{other:?}"),
    }

    let mut bad = doc.clone();
    bad.data = json!({"terms": [], "extra": "1"});
    match Session::new().load(&bad) {
        Err(MrdiError::MalformedPayload { path, .. }) => assert_eq!(path, "/data/extra"),
        other => panic!("{other:?}"),
    }

    let mut bad = doc.clone();
    bad.data = json!({"terms": [[["01", "0"], ["1", "0"]]]});
    assert!(matches!(Session::new().load(&bad), Err(MrdiError::MalformedPayload { .. })));
}

#[test]
fn failed_load_leaves_session_untouched() {
    let (_, g) = gf49_ring();
    let mut doc = save(&g[0].clone().into()).unwrap();
    doc.data = json!({"terms": [[["1"], ["1", "0"]]]});
    let mut session = Session::new();
    assert!(session.load(&doc).is_err());
    assert!(session.load_log().is_empty());
}

#[test]
fn namespace_version_drift_is_a_warning() {
    let doc = save(&Object::Integer(int(1))).unwrap();
    let mut old = doc.clone();
    old.ns.version = "0.0.1".into();
    let mut session = Session::new();
    session.load(&old).unwrap();
    assert_eq!(session.warnings().len(), 1);
    session.load(&doc).unwrap();
    assert_eq!(session.warnings().len(), 1);
}

#[test]
fn unregistered_type_refused() {
    let mut types = TypeRegistry::standard();
    assert!(types.unregister("IntMatrix"));
    let mut session = Session::with_registries(types, UpgradeRegistry::standard());
    let m = IntMatrix::identity(2);
    assert!(matches!(
        session.save(&m.clone().into()),
        Err(MrdiError::UnregisteredType(t)) if t == "IntMatrix"
    ));
    let doc = save(&m.into()).unwrap();
    assert!(matches!(session.load(&doc), Err(MrdiError::UnregisteredType(_))));
}

#[test]
fn validate_reports_violations_with_paths() {
    let (_, g) = gf49_ring();
    let doc = save(&g[0].clone().into()).unwrap().to_value();
    assert_eq!(validate(&doc, &TypeRegistry::standard()), vec![]);

    // Referenced ring missing from the table.
    let ring_id = doc["_type"]["params"].as_str().unwrap().to_string();
    let mut missing = doc.clone();
    missing["_refs"].as_object_mut().unwrap().remove(&ring_id);
    let v = validate(&missing, &TypeRegistry::standard());
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind, ViolationKind::Closure);
    assert_eq!(v[0].path, "/_type/params");

    // Field fragment that names its own id.
    let field_id = doc["_refs"][&ring_id]["data"]["base_ring"].as_str().unwrap().to_string();
    let mut cyclic = doc.clone();
    cyclic["_refs"][&field_id]["data"]["characteristic"] = json!(field_id);
    let v = validate(&cyclic, &TypeRegistry::standard());
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].kind, ViolationKind::Cycle);

    let mut extra = doc.clone();
    extra["data"]["note"] = json!("x");
    let v = validate(&extra, &TypeRegistry::standard());
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind, ViolationKind::Schema);
    assert_eq!(v[0].path, "/data/note");

    let mut unknown = doc.clone();
    unknown["_type"]["name"] = json!("Matroid");
    let v = validate(&unknown, &TypeRegistry::standard());
    assert_eq!(v[0].kind, ViolationKind::Registry);

    let mut envelope = doc.clone();
    envelope.as_object_mut().unwrap().remove("_refs");
    let v = validate(&envelope, &TypeRegistry::standard());
    assert_eq!(v[0].kind, ViolationKind::Structure);

    let v1 = read_value(fixture("fixtures/v1/polynomial_gf49.mrdi")).unwrap();
    let v = validate(&v1, &TypeRegistry::standard());
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].kind, ViolationKind::Version);
}

const FIXTURES: [&str; 8] = [
    "field",
    "field_element",
    "integer",
    "matrix",
    "polynomial_gf49",
    "polynomial_gf7",
    "ring",
    "zero_polynomial",
];

#[test]
fn v1_fixtures_upgrade_to_v2_fixtures() {
    let upgrades = UpgradeRegistry::standard();
    for name in FIXTURES {
        let v1 = read_value(fixture(&format!("fixtures/v1/{name}.mrdi"))).unwrap();
        let v2_bytes = std::fs::read(fixture(&format!("fixtures/v2/{name}.mrdi"))).unwrap();
        let up = upgrades.upgrade(&v1, CURRENT_FORMAT_VERSION).unwrap();
        let mut bytes = canonical_bytes(&up);
        bytes.push(b'\n');
        assert_eq!(bytes, v2_bytes, "{name}");
        let doc = MrdiDocument::from_value(&up).unwrap();
        Session::new().load(&doc).unwrap();
        // Loading through the file path upgrades implicitly.
        load_file(fixture(&format!("fixtures/v1/{name}.mrdi")), &mut Session::new()).unwrap();
    }
}

#[test]
fn upgrading_current_document_is_noop() {
    let upgrades = UpgradeRegistry::standard();
    for name in FIXTURES {
        let bytes = std::fs::read(fixture(&format!("fixtures/v2/{name}.mrdi"))).unwrap();
        let v = read_value(fixture(&format!("fixtures/v2/{name}.mrdi"))).unwrap();
        let up = upgrades.upgrade(&v, CURRENT_FORMAT_VERSION).unwrap();
        let mut out = canonical_bytes(&up);
        out.push(b'\n');
        assert_eq!(out, bytes);
    }
}

#[test]
fn upgrade_without_path_fails() {
    let mut reg = UpgradeRegistry::empty();
    reg.register(UpgradeScript::new(3, "noop", |v| Ok(v.clone())));
    let v1 = read_value(fixture("fixtures/v1/integer.mrdi")).unwrap();
    assert!(matches!(
        reg.upgrade(&v1, 4),
        Err(MrdiError::MissingUpgradePath { from: 1, to: 4, missing: 1 })
    ));
}

// Property tests over generated kernel values.

fn field_strategy() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2i64, 1i64), (3, 1), (7, 1), (2, 3), (3, 2), (5, 2), (7, 2)])
        .prop_map(|(p, n)| Field::finite(&int(p), n).unwrap())
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    (field_strategy(), 0usize..4).prop_flat_map(|(field, nvars)| {
        let names: Vec<&str> = ["x", "y", "z"][..nvars].to_vec();
        let (ring, _) = polynomial_ring(&field, &names).unwrap();
        let degree = field.degree();
        let p = field.characteristic();
        let term = (
            prop::collection::vec(0u32..5, nvars),
            prop::collection::vec(0..p, degree),
        );
        prop::collection::vec(term, 0..7).prop_map(move |terms| {
            ring.from_terms(
                terms
                    .into_iter()
                    .map(|(e, c)| (e, ring.field().element(c).unwrap())),
            )
            .unwrap()
        })
    })
}

fn object_strategy() -> impl Strategy<Value = Object> {
    prop_oneof![
        any::<i128>().prop_map(|v| Object::Integer(BigInt::from(v))),
        field_strategy().prop_map(Object::Field),
        field_strategy().prop_flat_map(|f| {
            prop::collection::vec(0..f.characteristic(), f.degree())
                .prop_map(move |c| Object::FieldElement(f.element(c).unwrap()))
        }),
        poly_strategy().prop_map(|p| Object::PolyRing(p.parent().clone())),
        poly_strategy().prop_map(Object::Polynomial),
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(any::<i64>(), r * c).prop_map(move |v| {
                Object::Matrix(IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
            })
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn roundtrip_and_closure(obj in object_strategy()) {
        let doc = save(&obj).unwrap();
        prop_assert_eq!(validate(&doc.to_value(), &TypeRegistry::standard()), vec![]);
        let bytes = doc.canonical_bytes();
        let reparsed = MrdiDocument::parse(&bytes).unwrap();
        prop_assert_eq!(&reparsed, &doc);
        let loaded = Session::new().load(&reparsed).unwrap();
        prop_assert_eq!(&loaded, &obj);
        prop_assert_eq!(save(&loaded).unwrap().canonical_bytes(), bytes);
    }

    #[test]
    fn identity_restoration(p in poly_strategy(), k in 0u64..3) {
        let q = p.pow(k).unwrap();
        let dp = save(&p.clone().into()).unwrap();
        let dq = save(&q.clone().into()).unwrap();
        let mut one = Session::new();
        let lp = as_poly(one.load(&dp).unwrap());
        let lq = as_poly(one.load(&dq).unwrap());
        prop_assert_eq!(lp.add(&lq).unwrap(), p.add(&q).unwrap());

        let lq2 = as_poly(Session::new().load(&dq).unwrap());
        prop_assert_eq!(lp.add(&lq2).unwrap_err(), KernelError::ParentMismatch("rings"));
    }
}
