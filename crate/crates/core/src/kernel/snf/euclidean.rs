use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A Euclidean domain presented through its operations. The generic Smith
/// normal form below touches elements only through this trait.
pub trait EuclideanDomain {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `(q, r)` with `a = q*b + r` and `r` zero or smaller than `b` in the
    /// Euclidean norm. `b` is nonzero.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);
    /// Canonical representative of the associate class of `a`.
    fn normalize(&self, a: &Self::Elem) -> Self::Elem;
}

/// The ring of integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl EuclideanDomain for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        Integer::div_rem(a, b)
    }
    fn normalize(&self, a: &BigInt) -> BigInt {
        a.abs()
    }
}

/// `(g, s, t)` with `s*a + t*b = g`, a greatest common divisor of `a`, `b`.
fn gcdx<R: EuclideanDomain>(ring: &R, a: &R::Elem, b: &R::Elem) -> (R::Elem, R::Elem, R::Elem) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (ring.one(), ring.zero());
    let (mut t0, mut t1) = (ring.zero(), ring.one());
    while !ring.is_zero(&r1) {
        let (q, r) = ring.div_rem(&r0, &r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = ring.sub(&s0, &ring.mul(&q, &s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = ring.sub(&t0, &ring.mul(&q, &t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

fn exact_div<R: EuclideanDomain>(ring: &R, a: &R::Elem, b: &R::Elem) -> R::Elem {
    let (q, r) = ring.div_rem(a, b);
    debug_assert!(ring.is_zero(&r));
    q
}

fn divides<R: EuclideanDomain>(ring: &R, d: &R::Elem, a: &R::Elem) -> bool {
    if ring.is_zero(d) {
        return ring.is_zero(a);
    }
    ring.is_zero(&ring.div_rem(a, d).1)
}

/// Clears `(i, k)` using row `k`. When the pivot does not divide the entry,
/// a unimodular Bezout combination puts `gcd(a[k][k], a[i][k])` at `(k, k)`.
fn combine_rows<R: EuclideanDomain>(ring: &R, a: &mut [Vec<R::Elem>], k: usize, i: usize) {
    if divides(ring, &a[k][k], &a[i][k]) {
        let q = exact_div(ring, &a[i][k], &a[k][k]);
        for j in 0..a[k].len() {
            a[i][j] = ring.sub(&a[i][j], &ring.mul(&q, &a[k][j]));
        }
        return;
    }
    let (g, s, t) = gcdx(ring, &a[k][k], &a[i][k]);
    let x = exact_div(ring, &a[k][k], &g);
    let y = exact_div(ring, &a[i][k], &g);
    for j in 0..a[k].len() {
        let top = ring.add(&ring.mul(&s, &a[k][j]), &ring.mul(&t, &a[i][j]));
        let bottom = ring.sub(&ring.mul(&x, &a[i][j]), &ring.mul(&y, &a[k][j]));
        a[k][j] = top;
        a[i][j] = bottom;
    }
}

/// Column counterpart of [`combine_rows`].
fn combine_cols<R: EuclideanDomain>(ring: &R, a: &mut [Vec<R::Elem>], k: usize, j: usize) {
    if divides(ring, &a[k][k], &a[k][j]) {
        let q = exact_div(ring, &a[k][j], &a[k][k]);
        for row in a.iter_mut() {
            row[j] = ring.sub(&row[j], &ring.mul(&q, &row[k]));
        }
        return;
    }
    let (g, s, t) = gcdx(ring, &a[k][k], &a[k][j]);
    let x = exact_div(ring, &a[k][k], &g);
    let y = exact_div(ring, &a[k][j], &g);
    for row in a.iter_mut() {
        let left = ring.add(&ring.mul(&s, &row[k]), &ring.mul(&t, &row[j]));
        let right = ring.sub(&ring.mul(&x, &row[j]), &ring.mul(&y, &row[k]));
        row[k] = left;
        row[j] = right;
    }
}

/// Diagonal of the Smith normal form of a rectangular matrix given as rows.
///
/// Textbook scheme: for each pivot position, alternate Bezout row and column
/// eliminations until both the pivot row and column are clear, then restore
/// divisibility of the remaining block by folding an offending row into the
/// pivot row. Diagonal entries come back normalized.
pub fn smith_normal_form<R: EuclideanDomain>(ring: &R, mut a: Vec<Vec<R::Elem>>) -> Vec<R::Elem> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let n = rows.min(cols);

    for k in 0..n {
        let Some((pi, pj)) = (k..cols)
            .flat_map(|j| (k..rows).map(move |i| (i, j)))
            .find(|&(i, j)| !ring.is_zero(&a[i][j]))
        else {
            break;
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }

        loop {
            for i in k + 1..rows {
                if !ring.is_zero(&a[i][k]) {
                    combine_rows(ring, &mut a, k, i);
                }
            }
            for j in k + 1..cols {
                if !ring.is_zero(&a[k][j]) {
                    combine_cols(ring, &mut a, k, j);
                }
            }
            if (k + 1..rows).any(|i| !ring.is_zero(&a[i][k])) {
                continue;
            }
            let pivot = a[k][k].clone();
            let offending = (k + 1..rows)
                .find(|&i| (k + 1..cols).any(|j| !divides(ring, &pivot, &a[i][j])));
            match offending {
                Some(i) => {
                    for j in 0..cols {
                        a[k][j] = ring.add(&a[k][j], &a[i][j]);
                    }
                }
                None => break,
            }
        }
        a[k][k] = ring.normalize(&a[k][k]);
    }

    (0..n).map(|i| a[i][i].clone()).collect()
}
