use mathrepro::kernel::{polynomial_ring, Field, FieldElement, KernelError, PolyRing, Polynomial};
use num_bigint::BigInt;
use proptest::prelude::*;

fn ring(p: i64, n: i64) -> PolyRing {
    let f = Field::finite(&BigInt::from(p), n).unwrap();
    polynomial_ring(&f, &["x", "y", "z"]).unwrap().0
}

fn element(field: &Field, coeffs: Vec<u64>) -> FieldElement {
    field.element(coeffs).unwrap()
}

/// Up to six terms of total degree at most four.
fn poly_in(ring: PolyRing) -> impl Strategy<Value = Polynomial> {
    let field = ring.field().clone();
    let p = field.characteristic();
    let n = field.degree();
    let exps = prop::collection::vec(0u32..5, 3).prop_filter("degree", |e| e.iter().sum::<u32>() <= 4);
    let term = (exps, prop::collection::vec(0..p, n));
    prop::collection::vec(term, 0..7).prop_map(move |terms| {
        ring.from_terms(terms.into_iter().map(|(e, c)| (e, element(&field, c))))
            .unwrap()
    })
}

fn triple() -> impl Strategy<Value = (Polynomial, Polynomial, Polynomial)> {
    prop::sample::select(vec![(2i64, 1i64), (7, 1), (3, 2), (7, 2)]).prop_flat_map(|(p, n)| {
        let r = ring(p, n);
        (poly_in(r.clone()), poly_in(r.clone()), poly_in(r))
    })
}

fn point(field: &Field, raw: &[u64]) -> Vec<FieldElement> {
    let p = field.characteristic();
    let n = field.degree();
    (0..3)
        .map(|i| element(field, raw[i * n..(i + 1) * n].iter().map(|c| c % p).collect()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ring_laws((a, b, c) in triple()) {
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.add(&a.parent().zero()).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&a.parent().one()).unwrap(), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism((a, b, _) in triple(), raw in prop::collection::vec(any::<u64>(), 6)) {
        let pt = point(a.parent().field(), &raw);
        let ea = a.eval(&pt).unwrap();
        let eb = b.eval(&pt).unwrap();
        prop_assert_eq!(a.add(&b).unwrap().eval(&pt).unwrap(), ea.add(&eb).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().eval(&pt).unwrap(), ea.mul(&eb).unwrap());
        prop_assert_eq!(a.pow(3).unwrap().eval(&pt).unwrap(), ea.pow(&BigInt::from(3)).unwrap());
    }

    #[test]
    fn degree_is_additive((a, b, _) in triple()) {
        // Polynomial rings over fields are integral domains.
        match (a.total_degree(), b.total_degree()) {
            (Some(da), Some(db)) => prop_assert_eq!(a.mul(&b).unwrap().total_degree(), Some(da + db)),
            _ => prop_assert!(a.mul(&b).unwrap().is_zero()),
        }
    }
}

#[test]
fn equal_rings_built_twice_do_not_mix() {
    let a = ring(7, 1);
    let b = ring(7, 1);
    assert_eq!(a, b);
    assert!(!a.is_same(&b));
    assert_eq!(
        a.generator(0).add(&b.generator(0)).unwrap_err(),
        KernelError::ParentMismatch("rings")
    );
}

#[test]
fn printing_over_extension_field() {
    let r = ring(7, 2);
    let o = r.field().generator();
    let c = o.mul(&r.field().from_integer(&BigInt::from(3))).unwrap().add(&r.field().from_integer(&BigInt::from(2))).unwrap();
    let x = r.generator(0);
    let y = r.generator(1);
    let p = x
        .pow(2)
        .unwrap()
        .mul(&y)
        .unwrap()
        .scale(&c)
        .unwrap()
        .add(&y.scale(&o).unwrap())
        .unwrap()
        .add(&r.from_integer(&BigInt::from(5)))
        .unwrap();
    assert_eq!(p.to_string(), "(3*o + 2)*x^2*y + o*y + 5");
    assert_eq!(r.zero().to_string(), "0");
}
