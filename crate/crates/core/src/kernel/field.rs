use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

use super::error::{KernelError, Result};
use super::fp_poly::{self, add_mod, sub_mod};

/// Largest accepted characteristic (exclusive). Primality is checked by trial
/// division, which stays cheap below this bound.
const MAX_CHARACTERISTIC: u64 = 1 << 32;

#[derive(Debug, PartialEq, Eq)]
struct FieldData {
    p: u64,
    /// Monic defining polynomial, low degree first. `[0, 1]` for prime fields.
    modulus: Vec<u64>,
}

/// A finite field `GF(p^n)`, shared by reference.
///
/// Equality is structural. Use [`Field::is_same`] for parent identity.
#[derive(Clone, PartialEq, Eq)]
pub struct Field(Arc<FieldData>);

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_prime(p: &BigInt) -> Result<u64> {
    if p < &BigInt::from(2) {
        return Err(KernelError::InvalidInput(format!(
            "characteristic must be at least 2, got {p}"
        )));
    }
    let small = p
        .to_u64()
        .filter(|&v| v < MAX_CHARACTERISTIC)
        .ok_or_else(|| KernelError::InvalidInput(format!("characteristic {p} is too large")))?;
    if !is_prime(small) {
        return Err(KernelError::NotPrime(p.clone()));
    }
    Ok(small)
}

impl Field {
    /// `GF(p)`.
    pub fn prime(p: &BigInt) -> Result<Field> {
        let p = checked_prime(p)?;
        Ok(Field(Arc::new(FieldData {
            p,
            modulus: vec![0, 1],
        })))
    }

    /// `GF(p^n)` with the lexicographically least monic irreducible defining
    /// polynomial. Degree one gives the prime field.
    pub fn finite(p: &BigInt, n: i64) -> Result<Field> {
        if n < 1 {
            return Err(KernelError::InvalidInput(format!(
                "degree must be positive, got {n}"
            )));
        }
        let p = checked_prime(p)?;
        if n == 1 {
            return Ok(Field(Arc::new(FieldData {
                p,
                modulus: vec![0, 1],
            })));
        }
        let n = n as usize;
        if (p as f64).powi(n as i32) > 1e7 {
            return Err(KernelError::InvalidInput(format!(
                "field of order {p}^{n} is too large"
            )));
        }
        Ok(Field(Arc::new(FieldData {
            p,
            modulus: fp_poly::least_irreducible(p, n),
        })))
    }

    /// Field with an explicit monic defining polynomial (low degree first).
    /// This is how fields using a non-canonical polynomial are rebuilt.
    pub fn with_modulus(p: &BigInt, modulus: Vec<u64>) -> Result<Field> {
        let p = checked_prime(p)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(KernelError::InvalidInput(
                "defining polynomial coefficients must be reduced".into(),
            ));
        }
        match modulus.last() {
            Some(1) if modulus.len() >= 2 => {}
            _ => {
                return Err(KernelError::InvalidInput(
                    "defining polynomial must be monic of positive degree".into(),
                ))
            }
        }
        if modulus.len() == 2 {
            if modulus != [0, 1] {
                return Err(KernelError::InvalidInput(
                    "prime fields use the defining polynomial x".into(),
                ));
            }
        } else if !fp_poly::is_irreducible(&modulus, p) {
            return Err(KernelError::InvalidInput(
                "defining polynomial is reducible".into(),
            ));
        }
        Ok(Field(Arc::new(FieldData { p, modulus })))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree() == 1
    }

    pub fn order(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.0.p), self.degree())
    }

    /// Monic defining polynomial, low degree first. `None` for prime fields.
    pub fn defining_poly(&self) -> Option<&[u64]> {
        (!self.is_prime_field()).then_some(&self.0.modulus[..])
    }

    /// Identity comparison: true only for the same instance.
    pub fn is_same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            parent: self.clone(),
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = 1;
        e
    }

    /// The class of `x` in `GF(p)[x]/(f)`. Prime fields return one.
    pub fn generator(&self) -> FieldElement {
        if self.is_prime_field() {
            return self.one();
        }
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    /// Image of an integer.
    pub fn from_integer(&self, value: &BigInt) -> FieldElement {
        let r = value.mod_floor(&BigInt::from(self.0.p));
        let mut e = self.zero();
        e.coeffs[0] = r.to_u64().expect("residue below characteristic");
        e
    }

    /// Element from its coefficient vector in powers of the generator.
    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElement> {
        if coeffs.len() != self.degree() {
            return Err(KernelError::InvalidInput(format!(
                "expected {} coefficients, got {}",
                self.degree(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(KernelError::InvalidInput(format!(
                "coefficients must lie in [0, {})",
                self.0.p
            )));
        }
        Ok(FieldElement {
            parent: self.clone(),
            coeffs,
        })
    }

    /// All elements, in order of their coefficient vectors read as base-p
    /// numbers (constant coefficient least significant).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let p = self.0.p;
        let n = self.degree();
        let total = self.order().to_u64().expect("enumerated fields are small");
        (0..total).map(move |mut code| {
            let coeffs = (0..n)
                .map(|_| {
                    let c = code % p;
                    code /= p;
                    c
                })
                .collect();
            FieldElement {
                parent: self.clone(),
                coeffs,
            }
        })
    }

    fn reduce(&self, prod: Vec<u64>) -> Vec<u64> {
        let n = self.degree();
        let mut r = fp_poly::rem(&prod, &self.0.modulus, self.0.p);
        r.resize(n, 0);
        r
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if let Some(m) = self.defining_poly() {
            write!(f, " mod {m:?}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_prime_field() {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.degree())
        }
    }
}

/// Element of a [`Field`], stored as residues of its polynomial in the
/// generator `o`. Prime-field elements have a single coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    parent: Field,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn parent(&self) -> &Field {
        &self.parent
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check_parent(&self, other: &FieldElement) -> Result<()> {
        if self.parent.is_same(&other.parent) {
            Ok(())
        } else {
            Err(KernelError::ParentMismatch("fields"))
        }
    }

    fn zip_with(&self, other: &FieldElement, op: fn(u64, u64, u64) -> u64) -> Result<FieldElement> {
        self.check_parent(other)?;
        let p = self.parent.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| op(a, b, p))
            .collect();
        Ok(FieldElement {
            parent: self.parent.clone(),
            coeffs,
        })
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.zip_with(other, add_mod)
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.zip_with(other, sub_mod)
    }

    pub fn neg(&self) -> FieldElement {
        let p = self.parent.characteristic();
        FieldElement {
            parent: self.parent.clone(),
            coeffs: self.coeffs.iter().map(|&c| sub_mod(0, c, p)).collect(),
        }
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_parent(other)?;
        let p = self.parent.characteristic();
        let prod = fp_poly::mul(&self.coeffs, &other.coeffs, p);
        Ok(FieldElement {
            parent: self.parent.clone(),
            coeffs: self.parent.reduce(prod),
        })
    }

    /// `self^exp`; negative exponents invert first.
    pub fn pow(&self, exp: &BigInt) -> Result<FieldElement> {
        if exp.is_negative() {
            return self.inv()?.pow(&-exp);
        }
        let mut result = self.parent.one();
        let mut base = self.clone();
        let mut e = exp.clone();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                result = result.mul(&base)?;
            }
            base = base.mul(&base)?;
            e /= &two;
        }
        Ok(result)
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(KernelError::DivisionByZero);
        }
        // The multiplicative group has order q - 1.
        self.pow(&(self.parent.order() - BigInt::from(2)))
    }

    /// Number of nonzero coefficients in the generator representation.
    pub(crate) fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints as a polynomial in the generator `o`, highest power first.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("o")?,
                (1, c) => write!(f, "{c}*o")?,
                (k, 1) => write!(f, "o^{k}")?,
                (k, c) => write!(f, "{c}*o^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn prime_field_construction() {
        let f = Field::prime(&int(7)).unwrap();
        assert_eq!(f.order(), int(7));
        assert!(f.is_prime_field());
        assert_eq!(Field::prime(&int(2)).unwrap().order(), int(2));
        assert_eq!(Field::prime(&int(4)), Err(KernelError::NotPrime(int(4))));
        assert!(matches!(Field::prime(&int(1)), Err(KernelError::InvalidInput(_))));
        assert!(matches!(Field::prime(&int(-7)), Err(KernelError::InvalidInput(_))));
    }

    #[test]
    fn finite_field_construction() {
        let f = Field::finite(&int(7), 2).unwrap();
        assert_eq!(f.order(), int(49));
        assert_eq!(f.defining_poly(), Some(&[1, 0, 1][..]));
        let g = Field::finite(&int(3), 2).unwrap();
        assert_eq!(g.defining_poly(), Some(&[1, 0, 1][..]));
        let h = Field::finite(&int(2), 1).unwrap();
        assert!(h.is_prime_field());
        assert_eq!(h, Field::prime(&int(2)).unwrap());
        assert!(matches!(Field::finite(&int(7), 0), Err(KernelError::InvalidInput(_))));
        assert_eq!(Field::finite(&int(9), 2), Err(KernelError::NotPrime(int(9))));
    }

    #[test]
    fn explicit_modulus_checks_irreducibility() {
        // x^2 + 3 is irreducible over GF(7): -3 = 4 = 2^2 is a square, so no.
        assert!(Field::with_modulus(&int(7), vec![3, 0, 1]).is_err());
        // x^2 + x + 3: discriminant 1 - 12 = -11 = 3 mod 7, a non-residue.
        let f = Field::with_modulus(&int(7), vec![3, 1, 1]).unwrap();
        assert_eq!(f.order(), int(49));
        assert_ne!(f, Field::finite(&int(7), 2).unwrap());
        assert!(Field::with_modulus(&int(7), vec![1, 0, 2]).is_err());
    }

    #[test]
    fn identity_versus_structure() {
        let a = Field::prime(&int(7)).unwrap();
        let b = Field::prime(&int(7)).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_same(&b));
        assert!(a.is_same(&a.clone()));
        assert_eq!(
            a.one().add(&b.one()),
            Err(KernelError::ParentMismatch("fields"))
        );
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, n) in [(2, 1), (2, 2), (3, 2), (2, 3), (5, 2), (7, 2)] {
            let f = Field::finite(&int(p), n).unwrap();
            let elems: Vec<_> = f.elements().collect();
            assert_eq!(BigInt::from(elems.len()), f.order());
            let q = f.order();
            for a in &elems {
                assert_eq!(&a.pow(&q).unwrap(), a, "Frobenius fixed point");
                if !a.is_zero() {
                    assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
                }
                assert!(a.add(&a.neg()).unwrap().is_zero());
            }
            for a in &elems {
                for b in &elems {
                    assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                    for c in &elems {
                        let ab_c = a.mul(b).unwrap().mul(c).unwrap();
                        let a_bc = a.mul(&b.mul(c).unwrap()).unwrap();
                        assert_eq!(ab_c, a_bc);
                        let lhs = a.add(b).unwrap().mul(c).unwrap();
                        let rhs = a.mul(c).unwrap().add(&b.mul(c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn generator_squares_to_minus_one_in_gf49() {
        let f = Field::finite(&int(7), 2).unwrap();
        let o = f.generator();
        assert_eq!(o.mul(&o).unwrap(), f.from_integer(&int(-1)));
        assert_eq!(o.to_string(), "o");
    }

    #[test]
    fn printing() {
        let f = Field::finite(&int(7), 2).unwrap();
        assert_eq!(f.element(vec![2, 3]).unwrap().to_string(), "3*o + 2");
        assert_eq!(f.element(vec![0, 1]).unwrap().to_string(), "o");
        assert_eq!(f.element(vec![5, 0]).unwrap().to_string(), "5");
        assert_eq!(f.zero().to_string(), "0");
        let g = Field::finite(&int(2), 3).unwrap();
        assert_eq!(g.element(vec![1, 0, 1]).unwrap().to_string(), "o^2 + 1");
        assert_eq!(f.to_string(), "GF(7^2)");
        assert_eq!(Field::prime(&int(7)).unwrap().to_string(), "GF(7)");
    }

    #[test]
    fn integer_images_reduce() {
        let f = Field::prime(&int(7)).unwrap();
        assert_eq!(f.from_integer(&int(-1)).coeffs(), &[6]);
        assert_eq!(f.from_integer(&int(15)).coeffs(), &[1]);
        assert_eq!(f.zero().inv(), Err(KernelError::DivisionByZero));
    }
}
